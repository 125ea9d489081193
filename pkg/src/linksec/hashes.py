"""SHA-1 and the general-purpose string hashes used as Bloom addressers.

Each string hash maps bytes to a 32-bit word; input bytes are taken as
unsigned. Every function also has a numpy form that hashes a batch of
equal-length tags at once, used by the Monte-Carlo measurements.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

M32 = 0xFFFFFFFF


def sha1(data: bytes) -> bytes:
    return hashlib.sha1(bytes(data)).digest()


def rs_hash(data: bytes) -> int:
    b, a, h = 378551, 63689, 0
    for c in data:
        h = (h * a + c) & M32
        a = (a * b) & M32
    return h


def js_hash(data: bytes) -> int:
    h = 1315423911
    for c in data:
        h ^= ((h << 5) + c + (h >> 2)) & M32
    return h


def pjw_hash(data: bytes) -> int:
    high = 0xF0000000
    h = 0
    for c in data:
        h = ((h << 4) + c) & M32
        test = h & high
        if test:
            h = (h ^ (test >> 24)) & ~high & M32
    return h


def elf_hash(data: bytes) -> int:
    h = 0
    for c in data:
        h = ((h << 4) + c) & M32
        x = h & 0xF0000000
        if x:
            h ^= x >> 24
        h &= ~x & M32
    return h


def bkdr_hash(data: bytes) -> int:
    h = 0
    for c in data:
        h = (h * 131 + c) & M32
    return h


def sdbm_hash(data: bytes) -> int:
    h = 0
    for c in data:
        h = (c + (h << 6) + (h << 16) - h) & M32
    return h


def djb_hash(data: bytes) -> int:
    h = 5381
    for c in data:
        h = ((h << 5) + h + c) & M32
    return h


def dek_hash(data: bytes) -> int:
    h = len(data) & M32
    for c in data:
        h = (((h << 5) & M32) ^ (h >> 27)) ^ c
    return h


def ap_hash(data: bytes) -> int:
    h = 0xAAAAAAAA
    for i, c in enumerate(data):
        if i & 1 == 0:
            h ^= ((h << 7) ^ (c * (h >> 3))) & M32
        else:
            h ^= ~((h << 11) + (c ^ (h >> 5))) & M32
    return h


# -- batch forms: ``tags`` is an (N, L) uint8 array, result is (N,) uint32 ----

def _cols(tags):
    return [tags[:, i].astype(np.uint32) for i in range(tags.shape[1])]


def _rs_many(tags):
    h = np.zeros(len(tags), np.uint32)
    a = 63689
    for c in _cols(tags):
        h = h * np.uint32(a) + c
        a = (a * 378551) & M32
    return h


def _js_many(tags):
    h = np.full(len(tags), 1315423911, np.uint32)
    for c in _cols(tags):
        h ^= (h << np.uint32(5)) + c + (h >> np.uint32(2))
    return h


def _pjw_many(tags):
    high = np.uint32(0xF0000000)
    h = np.zeros(len(tags), np.uint32)
    for c in _cols(tags):
        h = (h << np.uint32(4)) + c
        test = h & high
        h = np.where(test != 0, (h ^ (test >> np.uint32(24))) & ~high, h)
    return h


def _elf_many(tags):
    h = np.zeros(len(tags), np.uint32)
    for c in _cols(tags):
        h = (h << np.uint32(4)) + c
        x = h & np.uint32(0xF0000000)
        h ^= x >> np.uint32(24)
        h &= ~x
    return h


def _bkdr_many(tags):
    h = np.zeros(len(tags), np.uint32)
    for c in _cols(tags):
        h = h * np.uint32(131) + c
    return h


def _sdbm_many(tags):
    h = np.zeros(len(tags), np.uint32)
    for c in _cols(tags):
        h = c + (h << np.uint32(6)) + (h << np.uint32(16)) - h
    return h


def _djb_many(tags):
    h = np.full(len(tags), 5381, np.uint32)
    for c in _cols(tags):
        h = (h << np.uint32(5)) + h + c
    return h


def _dek_many(tags):
    h = np.full(len(tags), tags.shape[1], np.uint32)
    for c in _cols(tags):
        h = ((h << np.uint32(5)) ^ (h >> np.uint32(27))) ^ c
    return h


def _ap_many(tags):
    h = np.full(len(tags), 0xAAAAAAAA, np.uint32)
    for i, c in enumerate(_cols(tags)):
        if i & 1 == 0:
            h ^= (h << np.uint32(7)) ^ (c * (h >> np.uint32(3)))
        else:
            h ^= ~((h << np.uint32(11)) + (c ^ (h >> np.uint32(5))))
    return h


HASHES: dict[str, tuple[Callable[[bytes], int], Callable]] = {
    "rs": (rs_hash, _rs_many),
    "js": (js_hash, _js_many),
    "pjw": (pjw_hash, _pjw_many),
    "elf": (elf_hash, _elf_many),
    "bkdr": (bkdr_hash, _bkdr_many),
    "sdbm": (sdbm_hash, _sdbm_many),
    "djb": (djb_hash, _djb_many),
    "dek": (dek_hash, _dek_many),
    "ap": (ap_hash, _ap_many),
}

DEFAULT_MEMBERS = ("rs", "js", "pjw", "bkdr", "sdbm", "djb", "dek", "ap")


@dataclass(frozen=True)
class HashFamily:
    """Ordered family of 32-bit string hashes."""

    members: tuple[str, ...] = DEFAULT_MEMBERS

    def __post_init__(self):
        unknown = [m for m in self.members if m not in HASHES]
        if unknown:
            raise ValueError(f"unknown hash function(s): {unknown}")

    @classmethod
    def first(cls, k: int) -> "HashFamily":
        """The first ``k`` default members (ELF, a duplicate of PJW on 32-bit
        words, only comes in at k = 9)."""
        names = DEFAULT_MEMBERS + ("elf",)
        if not 1 <= k <= len(names):
            raise ValueError(f"k must be in 1..{len(names)}")
        return cls(names[:k])

    @property
    def k(self) -> int:
        return len(self.members)

    def __call__(self, index: int, tag: bytes) -> int:
        return universal_hash(self, index, tag)

    def values(self, tag: bytes) -> list[int]:
        return [HASHES[m][0](tag) for m in self.members]

    def values_many(self, tags: np.ndarray) -> np.ndarray:
        """(N, L) uint8 tags -> (N, k) uint32 hash values."""
        tags = np.asarray(tags, dtype=np.uint8)
        if tags.ndim != 2:
            raise ValueError("tags must be a 2-D uint8 array")
        return np.stack([HASHES[m][1](tags) for m in self.members], axis=1)


def universal_hash(family: HashFamily, index: int, tag: bytes) -> int:
    if not 0 <= index < family.k:
        raise IndexError(f"hash index {index} out of range for k={family.k}")
    return HASHES[family.members[index]][0](bytes(tag))


def tags_array(tags: Sequence[bytes]) -> np.ndarray:
    return np.frombuffer(b"".join(tags), dtype=np.uint8).reshape(len(tags), -1)
