"""TEA, XTEA and XXTEA (Corrected Block TEA) on 64-bit blocks.

Words are read big-endian. XXTEA runs on a fixed two-word block, so it
always performs 6 + 52 // 2 = 32 cycles.
"""
import struct
from array import array
from math import isqrt

from .base import CipherSpec, KeyedCipher, table_bytes

M32 = 0xFFFFFFFF


def tea_delta() -> int:
    """floor((sqrt(5) - 1) * 2**31), computed exactly with integer sqrt."""
    return isqrt(5 << 62) - (1 << 31)


DELTA = tea_delta()
_DELTA_CONST = array("I", [DELTA])


def _words(b):
    return struct.unpack(">2I", b)


def _pack(v0, v1):
    return struct.pack(">2I", v0, v1)


def _key_words(key):
    return struct.unpack(">4I", key)


class Tea(KeyedCipher):
    spec = CipherSpec("tea", 64, 128, 64, table_bytes(_DELTA_CONST))

    def _expand(self, key):
        return _key_words(key)

    def _encrypt(self, block):
        k0, k1, k2, k3 = self.round_keys
        v0, v1 = _words(block)
        s = 0
        for _ in range(32):
            s = (s + DELTA) & M32
            v0 = (v0 + ((((v1 << 4) + k0) ^ (v1 + s) ^ ((v1 >> 5) + k1)) & M32)) & M32
            v1 = (v1 + ((((v0 << 4) + k2) ^ (v0 + s) ^ ((v0 >> 5) + k3)) & M32)) & M32
        return _pack(v0, v1)

    def _decrypt(self, block):
        k0, k1, k2, k3 = self.round_keys
        v0, v1 = _words(block)
        s = (DELTA * 32) & M32
        for _ in range(32):
            v1 = (v1 - ((((v0 << 4) + k2) ^ (v0 + s) ^ ((v0 >> 5) + k3)) & M32)) & M32
            v0 = (v0 - ((((v1 << 4) + k0) ^ (v1 + s) ^ ((v1 >> 5) + k1)) & M32)) & M32
            s = (s - DELTA) & M32
        return _pack(v0, v1)


class Xtea(KeyedCipher):
    spec = CipherSpec("xtea", 64, 128, 64, table_bytes(_DELTA_CONST))

    def _expand(self, key):
        return _key_words(key)

    def _encrypt(self, block):
        k = self.round_keys
        v0, v1 = _words(block)
        s = 0
        for _ in range(32):
            v0 = (v0 + (((((v1 << 4) ^ (v1 >> 5)) + v1) ^ (s + k[s & 3])) & M32)) & M32
            s = (s + DELTA) & M32
            v1 = (v1 + (((((v0 << 4) ^ (v0 >> 5)) + v0) ^ (s + k[(s >> 11) & 3])) & M32)) & M32
        return _pack(v0, v1)

    def _decrypt(self, block):
        k = self.round_keys
        v0, v1 = _words(block)
        s = (DELTA * 32) & M32
        for _ in range(32):
            v1 = (v1 - (((((v0 << 4) ^ (v0 >> 5)) + v0) ^ (s + k[(s >> 11) & 3])) & M32)) & M32
            s = (s - DELTA) & M32
            v0 = (v0 - (((((v1 << 4) ^ (v1 >> 5)) + v1) ^ (s + k[s & 3])) & M32)) & M32
        return _pack(v0, v1)


XXTEA_WORDS = 2
XXTEA_CYCLES = 6 + 52 // XXTEA_WORDS


def _mx(s, y, z, p, e, k):
    return ((((z >> 5) ^ (y << 2)) + ((y >> 3) ^ (z << 4))) ^ ((s ^ y) + (k[(p & 3) ^ e] ^ z))) & M32


class Xxtea(KeyedCipher):
    """Straight form of the btea routine for n = 2."""

    spec = CipherSpec("xxtea", 64, 128, XXTEA_CYCLES, table_bytes(_DELTA_CONST))

    def _expand(self, key):
        return _key_words(key)

    def _encrypt(self, block):
        k = self.round_keys
        v = list(_words(block))
        n = XXTEA_WORDS
        s = 0
        z = v[n - 1]
        for _ in range(XXTEA_CYCLES):
            s = (s + DELTA) & M32
            e = (s >> 2) & 3
            for p in range(n - 1):
                y = v[p + 1]
                v[p] = (v[p] + _mx(s, y, z, p, e, k)) & M32
                z = v[p]
            y = v[0]
            v[n - 1] = (v[n - 1] + _mx(s, y, z, n - 1, e, k)) & M32
            z = v[n - 1]
        return _pack(*v)

    def _decrypt(self, block):
        k = self.round_keys
        v = list(_words(block))
        n = XXTEA_WORDS
        s = (XXTEA_CYCLES * DELTA) & M32
        y = v[0]
        for _ in range(XXTEA_CYCLES):
            e = (s >> 2) & 3
            for p in range(n - 1, 0, -1):
                z = v[p - 1]
                v[p] = (v[p] - _mx(s, y, z, p, e, k)) & M32
                y = v[p]
            z = v[n - 1]
            v[0] = (v[0] - _mx(s, y, z, 0, e, k)) & M32
            y = v[0]
            s = (s - DELTA) & M32
        return _pack(*v)


# per-cycle running sums, precomputed once
XXTEA_SUMS = array("I", [((i + 1) * DELTA) & M32 for i in range(XXTEA_CYCLES)])


class XxteaOpt(KeyedCipher):
    """XXTEA with the DELTA sums tabulated and per-cycle key words resolved
    at key setup. The two-word loop is unrolled."""

    spec = CipherSpec("xxtea_opt", 64, 128, XXTEA_CYCLES, table_bytes(XXTEA_SUMS))

    def _expand(self, key):
        k = _key_words(key)
        sched = []
        for s in XXTEA_SUMS:
            e = (s >> 2) & 3
            sched.append((s, k[e], k[1 ^ e]))
        return tuple(sched)

    def _encrypt(self, block):
        v0, v1 = _words(block)
        z = v1
        for s, ka, kb in self.round_keys:
            y = v1
            v0 = (v0 + (((((z >> 5) ^ (y << 2)) + ((y >> 3) ^ (z << 4))) ^ ((s ^ y) + (ka ^ z))) & M32)) & M32
            z = v0
            y = v0
            v1 = (v1 + (((((z >> 5) ^ (y << 2)) + ((y >> 3) ^ (z << 4))) ^ ((s ^ y) + (kb ^ z))) & M32)) & M32
            z = v1
        return _pack(v0, v1)

    def _decrypt(self, block):
        v0, v1 = _words(block)
        y = v0
        for s, ka, kb in reversed(self.round_keys):
            z = v0
            v1 = (v1 - (((((z >> 5) ^ (y << 2)) + ((y >> 3) ^ (z << 4))) ^ ((s ^ y) + (kb ^ z))) & M32)) & M32
            y = v1
            z = v1
            v0 = (v0 - (((((z >> 5) ^ (y << 2)) + ((y >> 3) ^ (z << 4))) ^ ((s ^ y) + (ka ^ z))) & M32)) & M32
            y = v0
        return _pack(v0, v1)
