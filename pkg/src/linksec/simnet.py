"""Deterministic discrete-event simulator of a multi-hop unicast path.

A source emits one frame every ``send_period`` ticks toward the sink. Every
link takes one tick. Each receiving node opens the frame (MAC first, then the
replay check) and, on accept, reseals it with its own counter toward the next
hop under the shared network key.

The capture-replay adversary listens on one link, records honest frames as
they reach the receiver and re-injects verbatim copies ``delay`` ticks later,
directly at that receiver (injections bypass channel loss). A node forwards
whatever it accepts, so a replay that gets past one hop is resealed and
carried on toward the sink.

Three independent random streams are spawned from the seed (channel, payload,
key), so changing the cipher or mode never perturbs channel behaviour.
"""
from __future__ import annotations

import hashlib
import heapq
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .ciphers import cipher_spec, make_cipher
from .config import parse_hex_key, parse_topology
from .hashes import HashFamily
from .modes import CallLedger
from .packet import ACCEPT, FORGED, REPLAY, SenderState, open_frame, seal_frame
from .policy import FlexiMode, select_cipher, select_mode
from .replay import fp_rate, fp_steady_state, make_replay_state, replay_state_bytes

ADVERSARY_KINDS = ("off", "capture_replay")


@dataclass(frozen=True)
class Adversary:
    kind: str = "off"
    delay: int = 1
    count: int = 0
    hop: int = 0  # index of the captured link along the path

    def __post_init__(self):
        if self.kind not in ADVERSARY_KINDS:
            raise ValueError(f"unknown adversary {self.kind!r}")
        if self.kind != "off" and (self.delay < 1 or self.count < 0 or self.hop < 0):
            raise ValueError("adversary needs delay >= 1, count >= 0, hop >= 0")


@dataclass(frozen=True)
class Scenario:
    topology: tuple | dict
    ticks: int
    send_period: int = 1
    adversary: Adversary = Adversary()
    seed: int = 0
    drop_rate: float = 0.0
    reorder_rate: float = 0.0
    mode: int | str = 8
    tier: str = "low"
    cipher: str | None = None
    replay_scheme: str = "counter"
    window: int = 8
    m: int = 512
    capacity: int | None = 32
    payload_len: int = 16
    source: int | None = None
    sink: int | None = None
    key: bytes | None = None

    def __post_init__(self):
        if isinstance(self.topology, list):
            object.__setattr__(self, "topology", tuple(self.topology))
        if self.send_period < 1:
            raise ValueError("send_period must be >= 1")
        for name in ("drop_rate", "reorder_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be a probability")

    @classmethod
    def from_config(cls, cfg: dict, seed: int | None = None) -> "Scenario":
        """Build from a parsed key-value config; ``seed`` overrides the file."""
        cfg = dict(cfg)
        kw = {}
        if "topology" not in cfg or "ticks" not in cfg:
            raise ValueError("scenario needs topology and ticks")
        kw["topology"] = parse_topology(cfg.pop("topology"))
        for k in ("ticks", "send_period", "window", "m", "payload_len", "source", "sink"):
            if k in cfg:
                kw[k] = int(cfg.pop(k), 0)
        if "capacity" in cfg:
            v = cfg.pop("capacity")
            kw["capacity"] = None if v.lower() == "none" else int(v, 0)
        for k in ("drop_rate", "reorder_rate"):
            if k in cfg:
                kw[k] = float(cfg.pop(k))
        for k in ("mode", "tier", "cipher", "replay_scheme"):
            if k in cfg:
                kw[k] = cfg.pop(k)
        if "key" in cfg:
            kw["key"] = parse_hex_key(cfg.pop("key"))
        if "seed" in cfg:
            kw["seed"] = int(cfg.pop("seed"), 0)
        adv = {}
        if "adversary" in cfg:
            adv["kind"] = cfg.pop("adversary")
        for k in ("delay", "count", "hop"):
            if k in cfg:
                adv[k] = int(cfg.pop(k), 0)
        kw["adversary"] = Adversary(**adv)
        if cfg:
            raise ValueError(f"unknown scenario keys: {', '.join(sorted(cfg))}")
        if seed is not None:
            kw["seed"] = seed
        return cls(**kw)


@dataclass
class SimNode:
    id: int
    role: str  # source | relay | sink
    cipher: object
    mode: FlexiMode
    replay_state: object = None
    next_hop: int | None = None
    sender: SenderState = field(default_factory=SenderState)
    ledger: CallLedger = field(default_factory=CallLedger)

    @property
    def send_ctr(self) -> int:
        return self.sender.last.get(self.next_hop, 0)

    def state_bytes(self) -> int:
        return self.replay_state.state_bytes() if self.replay_state is not None else 0


@dataclass
class SimReport:
    frames_sent: int = 0
    frames_accepted: int = 0
    frames_forged: int = 0
    frames_replay_flagged: int = 0
    frames_dropped: int = 0
    false_positives: int = 0
    false_negatives: int = 0
    honest_originated: int = 0
    delivered: int = 0
    replays_injected: int = 0
    replays_flagged: int = 0
    replays_forwarded: int = 0
    replays_delivered: int = 0
    ledger_totals: CallLedger = field(default_factory=CallLedger)
    state_bytes: dict = field(default_factory=dict)
    path: tuple = ()
    trace_digest: str = ""
    params: dict = field(default_factory=dict)

    def conserved(self) -> bool:
        return self.frames_sent == (self.frames_accepted + self.frames_forged
                                    + self.frames_replay_flagged + self.frames_dropped)

    COUNTERS = ("frames_sent", "frames_accepted", "frames_forged", "frames_replay_flagged",
                "frames_dropped", "false_positives", "false_negatives", "honest_originated",
                "delivered", "replays_injected", "replays_flagged", "replays_forwarded",
                "replays_delivered")

    def metrics(self) -> list[tuple[str, str, float]]:
        """(subject, metric, value) rows in a fixed order."""
        rows = [("sim", name, getattr(self, name)) for name in self.COUNTERS]
        led = self.ledger_totals
        rows += [("sim", "cipher_calls", led.cipher_calls),
                 ("sim", "encrypt_calls", led.encrypt_calls),
                 ("sim", "decrypt_calls", led.decrypt_calls)]
        for key in sorted(self.state_bytes, key=str):
            rows.append((f"node:{key}" if isinstance(key, int) else str(key), "state_bytes",
                         self.state_bytes[key]))
        return rows

    def summary(self) -> str:
        p = self.params
        lines = [
            f"path {' -> '.join(map(str, self.path))}  mode {p.get('mode')}  cipher {p.get('cipher')}"
            f"  replay {p.get('replay_scheme')}  seed {p.get('seed')}",
            f"sent {self.frames_sent}: accepted {self.frames_accepted}, forged {self.frames_forged},"
            f" replay-flagged {self.frames_replay_flagged}, dropped {self.frames_dropped}",
            f"honest frames {self.honest_originated}, delivered to sink {self.delivered}",
            f"replays injected {self.replays_injected}, flagged {self.replays_flagged},"
            f" forwarded {self.replays_forwarded}, reached sink {self.replays_delivered}",
            f"false positives {self.false_positives}, false negatives {self.false_negatives}",
            f"cipher calls {self.ledger_totals.cipher_calls}",
            f"trace {self.trace_digest[:16]}",
        ]
        return "\n".join(lines)


def resolve_path(topology, source=None, sink=None) -> list[int]:
    """Chain as given, or the BFS shortest path through an adjacency list."""
    if not isinstance(topology, dict):
        path = [int(n) for n in topology]
        if len(path) < 2:
            raise ValueError("a chain needs at least two nodes")
        if len(set(path)) != len(path):
            raise ValueError("chain repeats a node")
        if source is not None and source != path[0] or sink is not None and sink != path[-1]:
            raise ValueError("source/sink disagree with the chain ends")
    else:
        nodes = list(topology)
        if len(nodes) < 2:
            raise ValueError("topology needs at least two nodes")
        source = nodes[0] if source is None else source
        sink = nodes[-1] if sink is None else sink
        if source not in topology or sink not in topology or source == sink:
            raise ValueError("source and sink must be distinct nodes of the topology")
        parent = {source: None}
        q = deque([source])
        while q:
            u = q.popleft()
            for v in sorted(topology[u]):
                if v not in parent:
                    parent[v] = u
                    q.append(v)
        if sink not in parent:
            raise ValueError(f"topology is disconnected: no route {source} -> {sink}")
        path, u = [], sink
        while u is not None:
            path.append(u)
            u = parent[u]
        path.reverse()
    for n in path:
        if not 0 <= n <= 0xFFFF:
            raise ValueError(f"node id {n} is not 16-bit")
    return path


def hop_forward(node: SimNode, frame_bytes: bytes):
    """Open at ``node``; on accept reseal toward its next hop.

    Returns ``(verdict, outgoing)``: ``outgoing`` is the resealed frame, or
    the plaintext payload at the sink, or None when the frame is dropped.
    """
    try:
        header, payload, verdict = open_frame(node.mode, node.cipher, node.replay_state,
                                              frame_bytes, node.ledger)
    except ValueError:
        return FORGED, None
    if verdict != ACCEPT:
        return verdict, None
    if node.next_hop is None:
        return verdict, payload
    out_header = node.sender.header(node.next_hop, node.id, am=header.am)
    frame = seal_frame(node.mode, node.cipher, out_header, payload, node.sender, node.ledger)
    return verdict, frame.encode()


def build_nodes(s: Scenario, path: list[int], key: bytes) -> dict[int, SimNode]:
    mode = select_mode(s.mode)
    cipher_name = s.cipher or (select_cipher(mode, s.tier) if mode.algorithm != "none" else None)
    family = HashFamily()
    nodes = {}
    for i, nid in enumerate(path):
        role = "source" if i == 0 else "sink" if i == len(path) - 1 else "relay"
        state = None
        if mode.replay and i > 0:
            state = make_replay_state(s.replay_scheme, s.window, s.m, s.capacity, family=family)
        c = make_cipher(cipher_name, key) if cipher_name else None
        nodes[nid] = SimNode(nid, role, c, mode, state,
                             path[i + 1] if i + 1 < len(path) else None,
                             ledger=CallLedger(mode.algorithm))
    return nodes


def run_scenario(s: Scenario) -> SimReport:
    if s.ticks <= 0:
        raise ValueError("ticks must be positive")
    path = resolve_path(s.topology, s.source, s.sink)
    mode = select_mode(s.mode)
    if not 0 <= s.payload_len <= 29:
        raise ValueError("payload_len must be 0..29")
    channel_ss, payload_ss, key_ss = np.random.SeedSequence(s.seed).spawn(3)
    channel = np.random.default_rng(channel_ss)
    payload_rng = np.random.default_rng(payload_ss)
    cipher_name = s.cipher or (select_cipher(mode, s.tier) if mode.algorithm != "none" else None)
    key = s.key
    if key is None and cipher_name:
        key = np.random.default_rng(key_ss).bytes(cipher_spec(cipher_name).key_bytes)
    nodes = build_nodes(s, path, key)
    adv = s.adversary
    if adv.kind != "off" and adv.hop >= len(path) - 1:
        raise ValueError(f"adversary hop {adv.hop} is beyond the {len(path) - 1}-link path")

    r = SimReport(path=tuple(path))
    trace = hashlib.sha256()
    heap: list = []
    seq = 0

    def push(t, kind, *data):
        nonlocal seq
        heapq.heappush(heap, (t, seq, kind, data))
        seq += 1

    # origin of a frame in flight: "honest", "replay" (verbatim injection) or
    # "derived" (a relay's reseal of an accepted replay)
    def transmit(t, link, frame, origin):
        r.frames_sent += 1
        if origin == "derived":
            r.replays_forwarded += 1
        drop, reorder = channel.random(2)
        if drop < s.drop_rate:
            r.frames_dropped += 1
            trace.update(f"{t} drop {link} {frame.hex()}\n".encode())
            return
        lag = 1
        if reorder < s.reorder_rate:
            lag += int(channel.integers(1, s.send_period + 1))
        push(t + lag, "deliver", link, frame, origin)

    for t in range(0, s.ticks, s.send_period):
        push(t, "emit")

    captured = 0
    while heap:
        t, _, kind, data = heapq.heappop(heap)
        if kind == "emit":
            src = nodes[path[0]]
            payload = payload_rng.bytes(s.payload_len)
            header = src.sender.header(src.next_hop, src.id)
            frame = seal_frame(mode, src.cipher, header, payload, src.sender, src.ledger).encode()
            r.honest_originated += 1
            transmit(t, 0, frame, "honest")
            continue
        link, frame, origin = data
        honest = origin == "honest"
        if kind == "inject":
            r.frames_sent += 1
            r.replays_injected += 1
        node = nodes[path[link + 1]]
        verdict, out = hop_forward(node, frame)
        trace.update(f"{t} {kind} {link} {origin} {verdict} {frame.hex()}\n".encode())
        if verdict == ACCEPT:
            r.frames_accepted += 1
            if origin == "replay":
                r.false_negatives += 1
        elif verdict == FORGED:
            r.frames_forged += 1
        elif verdict == REPLAY:
            r.frames_replay_flagged += 1
            if honest:
                r.false_positives += 1
            else:
                r.replays_flagged += 1
        if honest and adv.kind == "capture_replay" and link == adv.hop and captured < adv.count:
            captured += 1
            push(t + adv.delay, "inject", link, frame, "replay")
        if verdict == ACCEPT:
            if node.next_hop is None:
                if honest:
                    r.delivered += 1
                else:
                    r.replays_delivered += 1
            else:
                transmit(t, link + 1, out, "honest" if honest else "derived")

    total = CallLedger(mode.algorithm)
    for nid in path:
        total = total + nodes[nid].ledger
    r.ledger_totals = total
    r.state_bytes = {nid: nodes[nid].state_bytes() for nid in path[1:]}
    if mode.replay:
        r.state_bytes["analytic_per_node"] = replay_state_bytes(s.replay_scheme, len(path), s.window, s.m)
    r.trace_digest = trace.hexdigest()
    r.params = {"mode": mode.name, "cipher": cipher_name, "replay_scheme": s.replay_scheme if mode.replay else "none",
                "seed": s.seed, "ticks": s.ticks, "send_period": s.send_period, "window": s.window,
                "m": s.m, "capacity": s.capacity, "drop_rate": s.drop_rate, "reorder_rate": s.reorder_rate,
                "adversary": adv.kind, "delay": adv.delay, "count": adv.count, "hop": adv.hop}
    return r


def bloom_fp_prediction(m: int, k: int, capacity: int | None, n: int | None = None) -> float:
    """Predicted honest false-positive rate: the steady-state average when the
    filter clears every ``capacity`` insertions, else the rate at fill ``n``."""
    if capacity is not None:
        return fp_steady_state(m, k, capacity)
    return fp_rate(m, k, n or 0)
