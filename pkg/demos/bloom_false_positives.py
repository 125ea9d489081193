"""
Bloom filter false positives
============================

The analytic false-positive curves for an m=512, k=8 vector, a Monte-Carlo
check at one fill level, and what happens to a live tag stream for two
choices of reset capacity.
"""

import struct

import numpy as np

from linksec.replay import REPLAYED, BloomState, fp_rate, fp_rate_approx, fp_rate_exp, fp_steady_state, measure_fp

m, k = 512, 8

# exact and exponential forms agree closely; 1/2^k is the half-full point
for n in (8, 16, 32, 64, 128, 256):
    print(f"n={n:>3}  exact {fp_rate(m, k, n):.3e}  exp {fp_rate_exp(m, k, n):.3e}")
print(f"1/2^k = {fp_rate_approx(k):.5f}, reached near n = {m * np.log(2) / k:.1f}")

# random 4-byte tags into fresh vectors
hits, trials = measure_fp(m, 32, 100_000, seed=1)
p = fp_rate(m, k, 32)
print(f"\nmeasured {hits}/{trials} = {hits / trials:.2e}, predicted {p:.2e}, "
      f"sigma {np.sqrt(p * (1 - p) / trials):.1e}")


# a stream of fresh SRC||CTR tags through a filter that clears every `cap` insertions
def stream_rate(cap, frames=30_000):
    b = BloomState(m, capacity=cap)
    fp = sum(b.check(struct.pack(">HH", 1 + i % 3, 1 + i // 3)) == REPLAYED for i in range(frames))
    return fp / frames, b.epoch


for cap in (32, 256):
    rate, epoch = stream_rate(cap)
    print(f"capacity {cap:>3}: stream rate {rate:.4f}, steady-state model {fp_steady_state(m, k, cap):.4f}, "
          f"epochs {epoch}")
# SRC||CTR tags are structured, so at 32 the stream runs a little above the
# ideal-hash model while staying under the full-epoch rate fp(512, 8, 32).
# At 256 the vector fills before the clear; flagged tags are not inserted,
# so the count stalls and nearly every fresh frame is rejected
