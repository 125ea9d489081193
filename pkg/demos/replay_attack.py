"""
A replay adversary on a five-node chain
=======================================

An attacker copies frames arriving at the first relay and re-injects them
one tick later. With link-layer replay protection each copy dies at that
relay; without it the copies are resealed and carried to the sink.
"""

from linksec.simnet import Adversary, Scenario, run_scenario

adv = Adversary("capture_replay", delay=1, count=200, hop=1)
chain = [1, 2, 3, 4, 5]

for mode, scheme in ((4, "counter"), (8, "counter"), (8, "digest"), (8, "bloom")):
    s = Scenario(chain, ticks=800, send_period=2, adversary=adv, mode=mode, replay_scheme=scheme,
                 drop_rate=0.02, seed=5)
    r = run_scenario(s)
    print(f"mode {mode} / {scheme}")
    print("  " + r.summary().replace("\n", "\n  "))
    print(f"  state bytes per node: {r.state_bytes.get('analytic_per_node', 0)}")
