"""RC6-32/20/16: 128-bit block, 128-bit key, 20 rounds, little-endian words."""
import struct
from array import array

from .base import CipherSpec, KeyedCipher, table_bytes

M32 = 0xFFFFFFFF
ROUNDS = 20
P32, Q32 = 0xB7E15163, 0x9E3779B9
_MAGIC = array("I", [P32, Q32])


def _rotl(x, s):
    s &= 31
    return ((x << s) | (x >> (32 - s))) & M32


def _rotr(x, s):
    s &= 31
    return ((x >> s) | (x << (32 - s))) & M32


class Rc6(KeyedCipher):
    spec = CipherSpec("rc6", 128, 128, ROUNDS, table_bytes(_MAGIC))

    def _expand(self, key):
        L = list(struct.unpack("<4I", key))
        t = 2 * ROUNDS + 4
        S = [(P32 + i * Q32) & M32 for i in range(t)]
        A = B = i = j = 0
        for _ in range(3 * t):
            A = S[i] = _rotl((S[i] + A + B) & M32, 3)
            B = L[j] = _rotl((L[j] + A + B) & M32, A + B)
            i = (i + 1) % t
            j = (j + 1) % 4
        return tuple(S)

    def _encrypt(self, block):
        S = self.round_keys
        a, b, c, d = struct.unpack("<4I", block)
        b = (b + S[0]) & M32
        d = (d + S[1]) & M32
        for i in range(1, ROUNDS + 1):
            t = _rotl((b * (2 * b + 1)) & M32, 5)
            u = _rotl((d * (2 * d + 1)) & M32, 5)
            a = (_rotl(a ^ t, u) + S[2 * i]) & M32
            c = (_rotl(c ^ u, t) + S[2 * i + 1]) & M32
            a, b, c, d = b, c, d, a
        a = (a + S[2 * ROUNDS + 2]) & M32
        c = (c + S[2 * ROUNDS + 3]) & M32
        return struct.pack("<4I", a, b, c, d)

    def _decrypt(self, block):
        S = self.round_keys
        a, b, c, d = struct.unpack("<4I", block)
        c = (c - S[2 * ROUNDS + 3]) & M32
        a = (a - S[2 * ROUNDS + 2]) & M32
        for i in range(ROUNDS, 0, -1):
            a, b, c, d = d, a, b, c
            u = _rotl((d * (2 * d + 1)) & M32, 5)
            t = _rotl((b * (2 * b + 1)) & M32, 5)
            c = _rotr((c - S[2 * i + 1]) & M32, t) ^ u
            a = _rotr((a - S[2 * i]) & M32, u) ^ t
        d = (d - S[1]) & M32
        b = (b - S[0]) & M32
        return struct.pack("<4I", a, b, c, d)
