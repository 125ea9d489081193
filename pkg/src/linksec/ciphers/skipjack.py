"""SKIPJACK: 64-bit block, 80-bit key, 32 rounds of rules A and B."""
from .base import CipherSpec, KeyedCipher, table_bytes

FTABLE = bytes.fromhex(
    "a3d70983f848f6f4b321157899b1aff9e72d4d8ace4cca2e5295d91e4e384428"
    "0adf02a017f1606812b77ac3e9fa3d5396846bbaf2639a197caee5f5f7166aa2"
    "39b67b0fc193811beeb41aead0912fb855b9da853f41bfe05a58805f660bd890"
    "35d5c0a733066569450094566d989b7697fcb2c2b0fedb20e1ebd6e4dd474a1d"
    "42ed9e6e493ccd4327d207d4dec7671889cb301f8dc68faac874dcc95d5c31a4"
    "7088612c9f0d2b8750825464267d0340344b1c73d1c4fd3bccfb7fabe63e5ba5"
    "ad04239c145122f02979717eff8c0ee20cefbc72756f37a1ecd38e628b8610e8"
    "087711be924f24c532369dcff3a6bbac5e6ca9135725b5e3bda83a0105592a46"
)


def _g(w, cv, k):
    f = FTABLE
    g1, g2 = w >> 8, w & 0xFF
    g3 = f[g2 ^ cv[(4 * k) % 10]] ^ g1
    g4 = f[g3 ^ cv[(4 * k + 1) % 10]] ^ g2
    g5 = f[g4 ^ cv[(4 * k + 2) % 10]] ^ g3
    g6 = f[g5 ^ cv[(4 * k + 3) % 10]] ^ g4
    return (g5 << 8) | g6


def _g_inv(w, cv, k):
    f = FTABLE
    g5, g6 = w >> 8, w & 0xFF
    g4 = f[g5 ^ cv[(4 * k + 3) % 10]] ^ g6
    g3 = f[g4 ^ cv[(4 * k + 2) % 10]] ^ g5
    g2 = f[g3 ^ cv[(4 * k + 1) % 10]] ^ g4
    g1 = f[g2 ^ cv[(4 * k) % 10]] ^ g3
    return (g1 << 8) | g2


def _rule_a(k):
    return (k // 8) % 2 == 0


class Skipjack(KeyedCipher):
    spec = CipherSpec("skipjack", 64, 80, 32, table_bytes(FTABLE))

    def _expand(self, key):
        return key

    def _encrypt(self, block):
        cv = self.round_keys
        w1, w2, w3, w4 = (int.from_bytes(block[i:i + 2], "big") for i in range(0, 8, 2))
        for k in range(32):
            counter = k + 1
            if _rule_a(k):
                t = _g(w1, cv, k)
                w1, w2, w3, w4 = t ^ w4 ^ counter, t, w2, w3
            else:
                w1, w2, w3, w4 = w4, _g(w1, cv, k), w1 ^ w2 ^ counter, w3
        return b"".join(w.to_bytes(2, "big") for w in (w1, w2, w3, w4))

    def _decrypt(self, block):
        cv = self.round_keys
        w1, w2, w3, w4 = (int.from_bytes(block[i:i + 2], "big") for i in range(0, 8, 2))
        for k in range(31, -1, -1):
            counter = k + 1
            if _rule_a(k):
                # forward: w1' = G(w1)^w4^c, w2' = G(w1), w3' = w2, w4' = w3
                t = _g_inv(w2, cv, k)
                w1, w2, w3, w4 = t, w3, w4, w1 ^ w2 ^ counter
            else:
                # forward: w1' = w4, w2' = G(w1), w3' = w1^w2^c, w4' = w3
                t = _g_inv(w2, cv, k)
                w1, w2, w3, w4 = t, t ^ w3 ^ counter, w4, w1
        return b"".join(w.to_bytes(2, "big") for w in (w1, w2, w3, w4))
