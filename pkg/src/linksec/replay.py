"""Anti-replay state: per-neighbour counters, SHA-1 digest rings, Bloom filter.

All three expose ``check(...) -> "fresh" | "replayed"``; a fresh item is
recorded as a side effect. ``fp_rate`` and ``replay_state_bytes`` give the
analytic false-positive probability and state-size accounting.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .hashes import HashFamily, sha1

FRESH, REPLAYED = "fresh", "replayed"
SCHEMES = ("counter", "digest", "bloom")

COUNTER_BYTES = 2
DIGEST_BYTES = 20


class ReplayTableFull(RuntimeError):
    """Raised when a new neighbour would exceed ``max_neighbors``."""


@dataclass
class NeighborWindowTable:
    """Last accepted 16-bit counter per neighbour plus a bitmap of the
    ``window_size`` counters just below it. With ``window_size=0`` this is
    the plain strictly-increasing counter rule."""

    window_size: int = 8
    max_neighbors: int = 150
    entries: dict[int, list[int]] = field(default_factory=dict)

    def check(self, node: int, counter: int) -> str:
        entry = self.entries.get(node)
        if entry is None:
            if len(self.entries) >= self.max_neighbors:
                raise ReplayTableFull(f"counter table holds {self.max_neighbors} neighbours")
            entry = self.entries[node] = [0, 0]
        last, bitmap = entry
        if counter > last:
            shift = counter - last
            # bit i marks counter last-1-i as seen; the old last becomes seen
            bitmap = ((bitmap << shift) | (1 << (shift - 1))) & ((1 << self.window_size) - 1)
            entry[0], entry[1] = counter, bitmap
            return FRESH
        age = last - counter
        if age == 0 or age > self.window_size:
            return REPLAYED
        bit = 1 << (age - 1)
        if bitmap & bit:
            return REPLAYED
        entry[1] = bitmap | bit
        return FRESH

    def state_bytes(self) -> int:
        return len(self.entries) * COUNTER_BYTES


def counter_check(t: NeighborWindowTable, node: int, counter: int) -> str:
    return t.check(node, counter)


@dataclass
class DigestSet:
    """Ring of the ``window_size`` most recent frame digests per neighbour."""

    window_size: int = 8
    max_neighbors: int = 7
    rings: dict[int, deque] = field(default_factory=dict)

    def check(self, node: int, frame_bytes: bytes) -> str:
        ring = self.rings.get(node)
        if ring is None:
            if len(self.rings) >= self.max_neighbors:
                raise ReplayTableFull(f"digest table holds {self.max_neighbors} neighbours")
            ring = self.rings[node] = deque(maxlen=self.window_size)
        d = sha1(frame_bytes)
        if d in ring:
            return REPLAYED
        ring.append(d)
        return FRESH

    def state_bytes(self) -> int:
        return len(self.rings) * self.window_size * DIGEST_BYTES


def digest_check(d: DigestSet, node: int, frame_bytes: bytes) -> str:
    return d.check(node, frame_bytes)


@dataclass
class BloomState:
    """m-bit Bloom vector addressed by ``family`` (hash value mod m).

    When ``capacity`` fresh tags have been inserted, the next fresh insertion
    first clears the vector and bumps ``epoch``. ``capacity=None`` never
    clears. Replays that straddle a clear are not detected.
    """

    m: int = 512
    family: HashFamily = field(default_factory=HashFamily)
    capacity: int | None = 32
    inserted: int = 0
    epoch: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        self.vector = bytearray((self.m + 7) // 8)

    @property
    def k(self) -> int:
        return self.family.k

    def addresses(self, tag: bytes) -> list[int]:
        return [v % self.m for v in self.family.values(tag)]

    def _get(self, a):
        return (self.vector[a >> 3] >> (a & 7)) & 1

    def query(self, tag: bytes) -> bool:
        return all(self._get(a) for a in self.addresses(tag))

    def check(self, tag: bytes) -> str:
        addrs = self.addresses(tag)
        if all(self._get(a) for a in addrs):
            return REPLAYED
        if self.capacity is not None and self.inserted >= self.capacity:
            self.clear()
            self.epoch += 1
        for a in addrs:
            self.vector[a >> 3] |= 1 << (a & 7)
        self.inserted += 1
        return FRESH

    def clear(self):
        self.vector = bytearray(len(self.vector))
        self.inserted = 0

    def bits_set(self) -> int:
        return sum(bin(b).count("1") for b in self.vector)

    def state_bytes(self) -> int:
        return len(self.vector)


def bloom_check_insert(b: BloomState, tag: bytes) -> str:
    return b.check(tag)


# -- analytics -------------------------------------------------------------------

def fp_rate(m: int, k: int, n: int) -> float:
    """Exact false-positive probability (1 - (1 - 1/m)^(kn))^k."""
    if m < 1 or k < 1 or n < 0:
        raise ValueError("need m >= 1, k >= 1, n >= 0")
    # expm1/log1p keep precision when m is large
    return (-math.expm1(k * n * math.log1p(-1 / m)) if m > 1 else float(n > 0)) ** k


def fp_rate_exp(m: int, k: int, n: int) -> float:
    """Exponential approximation (1 - e^(-kn/m))^k."""
    return (-math.expm1(-k * n / m)) ** k


def fp_rate_approx(k: int) -> float:
    """1/2^k: the rate when half the vector is set."""
    return 2.0 ** -k


def fp_steady_state(m: int, k: int, capacity: int) -> float:
    """Mean false-positive rate seen by a stream of fresh tags through a
    filter that clears every ``capacity`` insertions (queries see 1..capacity
    resident tags, uniformly)."""
    return sum(fp_rate(m, k, j) for j in range(1, capacity + 1)) / capacity


def replay_state_bytes(scheme: str, nodes: int, window: int = 8, m: int = 512,
                       scope: str = "node") -> int:
    """Replay-state bytes for one node (``scope="node"``) or the whole network.

    counter: 2 bytes per neighbour, so n(n-1)*2 network-wide
    digest:  window 20-byte digests per neighbour
    bloom:   m/8 bytes per node, independent of neighbour count
    """
    if nodes < 2:
        raise ValueError("nodes must be >= 2")
    if scope not in ("node", "network"):
        raise ValueError("scope must be 'node' or 'network'")
    if scheme == "counter":
        per_node = (nodes - 1) * COUNTER_BYTES
    elif scheme == "digest":
        per_node = (nodes - 1) * window * DIGEST_BYTES
    elif scheme == "bloom":
        per_node = (m + 7) // 8
    else:
        raise ValueError(f"unknown replay scheme {scheme!r}")
    return per_node * (nodes if scope == "network" else 1)


def make_replay_state(scheme: str, window: int = 8, m: int = 512, capacity: int | None = 32,
                      max_neighbors: int | None = None, family: HashFamily | None = None):
    if scheme == "counter":
        return NeighborWindowTable(window, max_neighbors or 150)
    if scheme == "digest":
        return DigestSet(window, max_neighbors or 7)
    if scheme == "bloom":
        return BloomState(m, family or HashFamily(), capacity)
    raise ValueError(f"unknown replay scheme {scheme!r}")


def measure_fp(m: int = 512, n: int = 32, trials: int = 100_000, seed: int = 0,
               tag_bytes: int = 4, family: HashFamily | None = None, chunk: int = 20_000):
    """Monte-Carlo false-positive rate at fill level ``n``.

    Each trial fills an empty m-bit vector with ``n`` random tags and probes
    one further tag not among them. Addresses are computed in batch with the
    same hash-mod-m map as :class:`BloomState`. Returns ``(hits, trials)``.
    """
    family = family or HashFamily()
    k = family.k
    rng = np.random.default_rng(seed)
    hits = done = 0
    while done < trials:
        t = min(chunk, trials - done)
        tags = rng.integers(0, 256, (t, n + 1, tag_bytes), dtype=np.uint8)
        probe = tags[:, n]
        dup = (tags[:, :n] == probe[:, None]).all(axis=2).any(axis=1)
        addr = (family.values_many(tags.reshape(-1, tag_bytes)) % np.uint32(m)).reshape(t, n + 1, k)
        bits = np.zeros((t, m), dtype=bool)
        bits[np.repeat(np.arange(t), n * k), addr[:, :n].reshape(t, -1).ravel()] = True
        hit = bits[np.arange(t)[:, None], addr[:, n]].all(axis=1)
        hits += int(hit[~dup].sum())
        done += int((~dup).sum())
    return hits, done
