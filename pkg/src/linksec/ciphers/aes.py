"""AES-128 in two storage layouts.

``AesSpeed`` keeps one forward and one reverse 32-bit x 256 round table plus
the 256-byte inverse S-box (2304 bytes). ``AesSize`` keeps only the forward
and inverse S-boxes (512 bytes) and computes MixColumns inline. Both produce
identical ciphertexts.
"""
from array import array

from .base import CipherSpec, KeyedCipher, table_bytes

M32 = 0xFFFFFFFF


def _xtime(a):
    a <<= 1
    return (a ^ 0x11B) if a & 0x100 else a


def _gmul(a, b):
    r = 0
    while b:
        if b & 1:
            r ^= a
        a = _xtime(a)
        b >>= 1
    return r


def _build_sboxes():
    # multiplicative inverse via log/antilog over generator 3, then the affine map
    exp, log = [0] * 255, [0] * 256
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x ^= _xtime(x)
    sbox = bytearray(256)
    for a in range(256):
        inv = exp[(255 - log[a]) % 255] if a else 0
        s = inv
        for shift in range(1, 5):
            s ^= ((inv << shift) | (inv >> (8 - shift))) & 0xFF
        sbox[a] = s ^ 0x63
    inv_sbox = bytearray(256)
    for a, s in enumerate(sbox):
        inv_sbox[s] = a
    return bytes(sbox), bytes(inv_sbox)


_SBOX, _INV_SBOX = _build_sboxes()

# speed layout: Te0 = (2s, s, s, 3s), Td0 = (14si, 9si, 13si, 11si)
TE0 = array("I", [
    (_gmul(s, 2) << 24) | (s << 16) | (s << 8) | _gmul(s, 3) for s in _SBOX
])
TD0 = array("I", [
    (_gmul(s, 14) << 24) | (_gmul(s, 9) << 16) | (_gmul(s, 13) << 8) | _gmul(s, 11)
    for s in _INV_SBOX
])
INV_SBOX = array("B", _INV_SBOX)

# size layout
SBOX = array("B", _SBOX)
INV_SBOX_SMALL = array("B", _INV_SBOX)

_RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


def _expand_words(key, sub):
    """AES-128 key schedule; ``sub(b)`` is the forward S-box lookup."""
    w = [int.from_bytes(key[i:i + 4], "big") for i in range(0, 16, 4)]
    for i in range(4, 44):
        t = w[i - 1]
        if i % 4 == 0:
            t = ((t << 8) | (t >> 24)) & M32
            t = (sub(t >> 24) << 24) | (sub((t >> 16) & 255) << 16) | (sub((t >> 8) & 255) << 8) | sub(t & 255)
            t ^= _RCON[i // 4 - 1] << 24
        w.append(w[i - 4] ^ t)
    return w


class AesSpeed(KeyedCipher):
    spec = CipherSpec("aes_speed", 128, 128, 10, table_bytes(TE0, TD0, INV_SBOX))

    @staticmethod
    def _sbox(b):
        return (TE0[b] >> 8) & 0xFF

    def _expand(self, key):
        ek = _expand_words(key, self._sbox)
        # equivalent inverse cipher: reverse round order, InvMixColumns on inner keys
        dk = []
        for r in range(10, -1, -1):
            words = ek[4 * r:4 * r + 4]
            if 0 < r < 10:
                words = [self._inv_mix(w) for w in words]
            dk.extend(words)
        return ek, dk

    def _inv_mix(self, w):
        s = self._sbox
        a = TD0[s(w >> 24)]
        b = TD0[s((w >> 16) & 255)]
        c = TD0[s((w >> 8) & 255)]
        d = TD0[s(w & 255)]
        return a ^ ((b >> 8) | (b << 24)) & M32 ^ ((c >> 16) | (c << 16)) & M32 ^ ((d >> 24) | (d << 8)) & M32

    def _encrypt(self, block):
        rk = self.round_keys[0]
        T = TE0
        s0 = int.from_bytes(block[0:4], "big") ^ rk[0]
        s1 = int.from_bytes(block[4:8], "big") ^ rk[1]
        s2 = int.from_bytes(block[8:12], "big") ^ rk[2]
        s3 = int.from_bytes(block[12:16], "big") ^ rk[3]
        for r in range(1, 10):
            k = 4 * r
            cols = []
            for a, b, c, d in ((s0, s1, s2, s3), (s1, s2, s3, s0), (s2, s3, s0, s1), (s3, s0, s1, s2)):
                x = T[a >> 24]
                y = T[(b >> 16) & 255]
                z = T[(c >> 8) & 255]
                v = T[d & 255]
                cols.append(x ^ (((y >> 8) | (y << 24)) & M32) ^ (((z >> 16) | (z << 16)) & M32)
                            ^ (((v >> 24) | (v << 8)) & M32))
            s0, s1, s2, s3 = (cols[0] ^ rk[k], cols[1] ^ rk[k + 1], cols[2] ^ rk[k + 2], cols[3] ^ rk[k + 3])
        out = bytearray()
        s = self._sbox
        for i, (a, b, c, d) in enumerate(((s0, s1, s2, s3), (s1, s2, s3, s0), (s2, s3, s0, s1), (s3, s0, s1, s2))):
            w = (s(a >> 24) << 24) | (s((b >> 16) & 255) << 16) | (s((c >> 8) & 255) << 8) | s(d & 255)
            out += (w ^ rk[40 + i]).to_bytes(4, "big")
        return bytes(out)

    def _decrypt(self, block):
        rk = self.round_keys[1]
        T = TD0
        s0 = int.from_bytes(block[0:4], "big") ^ rk[0]
        s1 = int.from_bytes(block[4:8], "big") ^ rk[1]
        s2 = int.from_bytes(block[8:12], "big") ^ rk[2]
        s3 = int.from_bytes(block[12:16], "big") ^ rk[3]
        for r in range(1, 10):
            k = 4 * r
            cols = []
            for a, b, c, d in ((s0, s3, s2, s1), (s1, s0, s3, s2), (s2, s1, s0, s3), (s3, s2, s1, s0)):
                x = T[a >> 24]
                y = T[(b >> 16) & 255]
                z = T[(c >> 8) & 255]
                v = T[d & 255]
                cols.append(x ^ (((y >> 8) | (y << 24)) & M32) ^ (((z >> 16) | (z << 16)) & M32)
                            ^ (((v >> 24) | (v << 8)) & M32))
            s0, s1, s2, s3 = (cols[0] ^ rk[k], cols[1] ^ rk[k + 1], cols[2] ^ rk[k + 2], cols[3] ^ rk[k + 3])
        out = bytearray()
        si = INV_SBOX
        for i, (a, b, c, d) in enumerate(((s0, s3, s2, s1), (s1, s0, s3, s2), (s2, s1, s0, s3), (s3, s2, s1, s0))):
            w = (si[a >> 24] << 24) | (si[(b >> 16) & 255] << 16) | (si[(c >> 8) & 255] << 8) | si[d & 255]
            out += (w ^ rk[40 + i]).to_bytes(4, "big")
        return bytes(out)


def _x(a):
    return ((a << 1) ^ 0x1B) & 0xFF if a & 0x80 else a << 1


class AesSize(KeyedCipher):
    spec = CipherSpec("aes_size", 128, 128, 10, table_bytes(SBOX, INV_SBOX_SMALL))

    def _expand(self, key):
        w = _expand_words(key, SBOX.__getitem__)
        return [b"".join(x.to_bytes(4, "big") for x in w[4 * r:4 * r + 4]) for r in range(11)]

    def _encrypt(self, block):
        rk = self.round_keys
        st = [b ^ k for b, k in zip(block, rk[0])]
        for r in range(1, 11):
            st = [SBOX[b] for b in st]
            # ShiftRows: state is column-major, st[4c + row]
            st = [st[(4 * (c + row) + row) % 16] for c in range(4) for row in range(4)]
            if r != 10:
                mixed = []
                for c in range(4):
                    a0, a1, a2, a3 = st[4 * c:4 * c + 4]
                    t = a0 ^ a1 ^ a2 ^ a3
                    mixed += (a0 ^ t ^ _x(a0 ^ a1), a1 ^ t ^ _x(a1 ^ a2),
                              a2 ^ t ^ _x(a2 ^ a3), a3 ^ t ^ _x(a3 ^ a0))
                st = mixed
            st = [b ^ k for b, k in zip(st, rk[r])]
        return bytes(st)

    def _decrypt(self, block):
        rk = self.round_keys
        st = [b ^ k for b, k in zip(block, rk[10])]
        for r in range(9, -1, -1):
            st = [st[(4 * (c - row) + row) % 16] for c in range(4) for row in range(4)]
            st = [INV_SBOX_SMALL[b] for b in st]
            st = [b ^ k for b, k in zip(st, rk[r])]
            if r != 0:
                mixed = []
                for c in range(4):
                    a0, a1, a2, a3 = st[4 * c:4 * c + 4]
                    # InvMixColumns = MixColumns after this pre-conditioning step
                    u = _x(_x(a0 ^ a2))
                    v = _x(_x(a1 ^ a3))
                    a0, a1, a2, a3 = a0 ^ u, a1 ^ v, a2 ^ u, a3 ^ v
                    t = a0 ^ a1 ^ a2 ^ a3
                    mixed += (a0 ^ t ^ _x(a0 ^ a1), a1 ^ t ^ _x(a1 ^ a2),
                              a2 ^ t ^ _x(a2 ^ a3), a3 ^ t ^ _x(a3 ^ a0))
                st = mixed
        return bytes(st)
