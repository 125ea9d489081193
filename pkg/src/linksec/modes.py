"""Block-cipher modes of operation with block-cipher call accounting.

Every public mode function takes an optional ``ledger``; each call to the
underlying cipher is recorded there, so the call-count laws can be checked
by instrumentation rather than by formula:

    CBC encrypt  N        CBC-MAC  N + 1 (length block)
    OCB          N + 2    CCM      2N + 2
    GCM          N + 2 (no inverse cipher calls)
"""
from __future__ import annotations

import hmac
from dataclasses import dataclass, field

from .ciphers import KeyedCipher

TAG_LENGTHS = (4, 8)
VALID, FORGED = "valid", "forged"

_POLY = {8: 0x1B, 16: 0x87}  # x^64 + x^4 + x^3 + x + 1, x^128 + x^7 + x^2 + x + 1


@dataclass
class CallLedger:
    mode: str = ""
    encrypt_calls: int = 0
    decrypt_calls: int = 0
    blocks_processed: int = 0
    state_bytes: int = 0

    @property
    def cipher_calls(self) -> int:
        return self.encrypt_calls + self.decrypt_calls

    def __add__(self, other: "CallLedger") -> "CallLedger":
        mode = self.mode if self.mode == other.mode else "+".join(m for m in (self.mode, other.mode) if m)
        return CallLedger(
            mode,
            self.encrypt_calls + other.encrypt_calls,
            self.decrypt_calls + other.decrypt_calls,
            self.blocks_processed + other.blocks_processed,
            self.state_bytes + other.state_bytes,
        )


@dataclass(frozen=True)
class AeadOutput:
    ciphertext: bytes
    tag: bytes = field(repr=False)


class _Counted:
    """Cipher view that books every block call into a ledger."""

    def __init__(self, c: KeyedCipher, ledger: CallLedger | None, mode: str):
        self.c = c
        self.b = c.spec.block_bytes
        self.ledger = ledger if ledger is not None else CallLedger()
        if not self.ledger.mode:
            self.ledger.mode = mode

    def E(self, block):
        self.ledger.encrypt_calls += 1
        return self.c.encrypt_block(block)

    def D(self, block):
        self.ledger.decrypt_calls += 1
        return self.c.decrypt_block(block)


def xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def _blocks(data: bytes, b: int) -> list[bytes]:
    return [data[i:i + b] for i in range(0, len(data), b)]


def _pad(block: bytes, b: int) -> bytes:
    return block + bytes(b - len(block))


def _check_tag_len(tag_len):
    if tag_len not in TAG_LENGTHS:
        raise ValueError(f"tag_len must be one of {TAG_LENGTHS}, got {tag_len}")


def gf_double(block: bytes) -> bytes:
    """Multiply ``block`` by x in GF(2^64) or GF(2^128), big-endian bit order."""
    b = len(block)
    v = int.from_bytes(block, "big") << 1
    if v >> (8 * b):
        v ^= (1 << (8 * b)) | _POLY[b]
    return v.to_bytes(b, "big")


# -- CBC / CBC-MAC ------------------------------------------------------------

def cbc_encrypt(c: KeyedCipher, iv: bytes, plaintext: bytes, ledger: CallLedger | None = None) -> bytes:
    """CBC with zero padding of the final partial block."""
    k = _Counted(c, ledger, "cbc")
    if len(iv) != k.b:
        raise ValueError(f"iv must be {k.b} bytes")
    if not plaintext:
        raise ValueError("plaintext must be non-empty")
    prev, out = iv, bytearray()
    for blk in _blocks(plaintext, k.b):
        prev = k.E(xor(_pad(blk, k.b), prev))
        out += prev
        k.ledger.blocks_processed += 1
    return bytes(out)


def cbc_decrypt(c: KeyedCipher, iv: bytes, ciphertext: bytes, ledger: CallLedger | None = None,
                length: int | None = None) -> bytes:
    """Inverse of :func:`cbc_encrypt`; ``length`` strips the zero padding."""
    k = _Counted(c, ledger, "cbc")
    if len(iv) != k.b:
        raise ValueError(f"iv must be {k.b} bytes")
    if not ciphertext or len(ciphertext) % k.b:
        raise ValueError("ciphertext must be a non-empty multiple of the block size")
    prev, out = iv, bytearray()
    for blk in _blocks(ciphertext, k.b):
        out += xor(k.D(blk), prev)
        prev = blk
        k.ledger.blocks_processed += 1
    return bytes(out if length is None else out[:length])


def cbc_mac(c: KeyedCipher, message: bytes, tag_len: int, ledger: CallLedger | None = None) -> bytes:
    """CBC-MAC with zero IV over a length block followed by the zero-padded message."""
    _check_tag_len(tag_len)
    k = _Counted(c, ledger, "cbc_mac")
    if not message:
        raise ValueError("message must be non-empty")
    state = k.E(len(message).to_bytes(k.b, "big"))
    for blk in _blocks(message, k.b):
        state = k.E(xor(state, _pad(blk, k.b)))
        k.ledger.blocks_processed += 1
    return state[:tag_len]


def cbc_mac_verify(c: KeyedCipher, message: bytes, tag: bytes, ledger: CallLedger | None = None) -> bool:
    if len(tag) not in TAG_LENGTHS:
        return False
    return hmac.compare_digest(cbc_mac(c, message, len(tag), ledger), tag)


# -- OCB ----------------------------------------------------------------------
#
# Offsets are O_i = O * x^i with O = E(0^b). Full blocks are whitened with
# O_i ^ N on both sides of the cipher. A partial final block is XORed with
# E(bitlen ^ O_n ^ N). The tag enciphers the plaintext checksum whitened with
# O_{n+1} ^ N.

def _ocb_nonce(nonce: bytes, b: int) -> bytes:
    if len(nonce) > b:
        raise ValueError(f"nonce must be at most {b} bytes")
    return bytes(b - len(nonce)) + bytes(nonce)


def _ocb(k: _Counted, nonce: bytes, data: bytes, encrypt: bool):
    b = k.b
    n_blk = _ocb_nonce(nonce, b)
    offset = k.E(bytes(b))
    out, checksum = bytearray(), bytes(b)
    for blk in _blocks(data, b):
        offset = gf_double(offset)
        white = xor(offset, n_blk)
        if len(blk) == b:
            res = xor(k.E(xor(blk, white)), white) if encrypt else xor(k.D(xor(blk, white)), white)
        else:
            pad = k.E(xor((8 * len(blk)).to_bytes(b, "big"), white))
            res = xor(blk, pad)
        plain = blk if encrypt else res
        checksum = xor(checksum, _pad(plain, b))
        out += res
        k.ledger.blocks_processed += 1
    offset = gf_double(offset)
    full_tag = k.E(xor(checksum, xor(offset, n_blk)))
    return bytes(out), full_tag


def ocb_seal(c: KeyedCipher, nonce: bytes, plaintext: bytes, tag_len: int,
             ledger: CallLedger | None = None) -> AeadOutput:
    _check_tag_len(tag_len)
    if not plaintext:
        raise ValueError("plaintext must be non-empty")
    ct, tag = _ocb(_Counted(c, ledger, "ocb"), nonce, plaintext, encrypt=True)
    return AeadOutput(ct, tag[:tag_len])


def ocb_open(c: KeyedCipher, nonce: bytes, ciphertext: bytes, tag: bytes,
             ledger: CallLedger | None = None):
    """Returns ``(plaintext, "valid")`` or ``(None, "forged")``."""
    if len(tag) not in TAG_LENGTHS or not ciphertext:
        return None, FORGED
    pt, full = _ocb(_Counted(c, ledger, "ocb"), nonce, ciphertext, encrypt=False)
    if hmac.compare_digest(full[:len(tag)], tag):
        return pt, VALID
    return None, FORGED


# -- CTR core (internal to CCM and GCM) -----------------------------------------

def _require_128(c: KeyedCipher, mode: str):
    if c.spec.block_bits != 128:
        raise ValueError(f"{mode} needs a 128-bit block cipher; {c.spec.name} has {c.spec.block_bits}-bit blocks")


def _ctr(k: _Counted, first_counter: bytes, data: bytes, increment) -> bytes:
    ctr, out = first_counter, bytearray()
    for blk in _blocks(data, 16):
        out += xor(blk, k.E(ctr))
        ctr = increment(ctr)
        k.ledger.blocks_processed += 1
    return bytes(out)


# -- CCM (RFC 3610 formatting) --------------------------------------------------

def _ccm_inc(L):
    def inc(ctr):
        return ctr[:16 - L] + ((int.from_bytes(ctr[16 - L:], "big") + 1) % (1 << 8 * L)).to_bytes(L, "big")
    return inc


def _ccm_parts(k: _Counted, nonce: bytes, payload: bytes, aad: bytes, tag_len: int):
    if not 7 <= len(nonce) <= 13:
        raise ValueError("CCM nonce must be 7..13 bytes")
    L = 15 - len(nonce)
    if len(payload) >= 1 << (8 * L):
        raise ValueError("payload too long for nonce size")
    flags = (0x40 if aad else 0) | (((tag_len - 2) // 2) << 3) | (L - 1)
    mac_in = bytes([flags]) + nonce + len(payload).to_bytes(L, "big")
    if aad:
        if len(aad) >= 0xFF00:
            raise ValueError("associated data too long")
        head = len(aad).to_bytes(2, "big") + aad
        mac_in += _pad(head, -(-len(head) // 16) * 16)
    if payload:
        mac_in += _pad(payload, -(-len(payload) // 16) * 16)
    x = bytes(16)
    for blk in _blocks(mac_in, 16):
        x = k.E(xor(x, blk))
    return x[:tag_len], bytes([L - 1]) + nonce + bytes(L), _ccm_inc(L)


def ccm_seal(c: KeyedCipher, nonce: bytes, plaintext: bytes, tag_len: int, aad: bytes = b"",
             ledger: CallLedger | None = None) -> AeadOutput:
    _require_128(c, "CCM")
    _check_tag_len(tag_len)
    k = _Counted(c, ledger, "ccm")
    t, a0, inc = _ccm_parts(k, bytes(nonce), plaintext, aad, tag_len)
    s0 = k.E(a0)
    return AeadOutput(_ctr(k, inc(a0), plaintext, inc), xor(t, s0))


def ccm_open(c: KeyedCipher, nonce: bytes, ciphertext: bytes, tag: bytes, aad: bytes = b"",
             ledger: CallLedger | None = None):
    _require_128(c, "CCM")
    if len(tag) not in TAG_LENGTHS:
        return None, FORGED
    k = _Counted(c, ledger, "ccm")
    nonce = bytes(nonce)
    L = 15 - len(nonce)
    a0 = bytes([L - 1]) + nonce + bytes(L)
    s0 = k.E(a0)
    inc = _ccm_inc(L)
    pt = _ctr(k, inc(a0), ciphertext, inc)
    t, _, _ = _ccm_parts(k, nonce, pt, aad, len(tag))
    if hmac.compare_digest(xor(t, s0), tag):
        return pt, VALID
    return None, FORGED


# -- GCM ----------------------------------------------------------------------

_R = 0xE1 << 120


def gf128_mul(x: int, y: int) -> int:
    """Product in GF(2^128) with GCM's reflected bit order."""
    z, v = 0, x
    for i in range(127, -1, -1):
        if (y >> i) & 1:
            z ^= v
        v = (v >> 1) ^ _R if v & 1 else v >> 1
    return z


def ghash(h: bytes, aad: bytes, ciphertext: bytes) -> bytes:
    H = int.from_bytes(h, "big")
    data = _pad(aad, -(-len(aad) // 16) * 16) + _pad(ciphertext, -(-len(ciphertext) // 16) * 16)
    data += (8 * len(aad)).to_bytes(8, "big") + (8 * len(ciphertext)).to_bytes(8, "big")
    y = 0
    for blk in _blocks(data, 16):
        y = gf128_mul(y ^ int.from_bytes(blk, "big"), H)
    return y.to_bytes(16, "big")


def _inc32(ctr: bytes) -> bytes:
    return ctr[:12] + ((int.from_bytes(ctr[12:], "big") + 1) & 0xFFFFFFFF).to_bytes(4, "big")


def _gcm_j0(h: bytes, iv: bytes) -> bytes:
    if not iv:
        raise ValueError("GCM iv must be non-empty")
    if len(iv) == 12:
        return bytes(iv) + b"\x00\x00\x00\x01"
    return ghash(h, b"", bytes(iv))


def gcm_seal(c: KeyedCipher, iv: bytes, plaintext: bytes, aad: bytes = b"", tag_len: int = 8,
             ledger: CallLedger | None = None) -> AeadOutput:
    _require_128(c, "GCM")
    _check_tag_len(tag_len)
    k = _Counted(c, ledger, "gcm")
    h = k.E(bytes(16))
    j0 = _gcm_j0(h, iv)
    ct = _ctr(k, _inc32(j0), plaintext, _inc32)
    tag = xor(k.E(j0), ghash(h, aad, ct))
    return AeadOutput(ct, tag[:tag_len])


def gcm_open(c: KeyedCipher, iv: bytes, ciphertext: bytes, tag: bytes, aad: bytes = b"",
             ledger: CallLedger | None = None):
    _require_128(c, "GCM")
    if len(tag) not in TAG_LENGTHS:
        return None, FORGED
    k = _Counted(c, ledger, "gcm")
    h = k.E(bytes(16))
    j0 = _gcm_j0(h, iv)
    expected = xor(k.E(j0), ghash(h, aad, ciphertext))[:len(tag)]
    if not hmac.compare_digest(expected, tag):
        return None, FORGED
    return _ctr(k, _inc32(j0), ciphertext, _inc32), VALID


MODES = ("cbc", "cbc_mac", "ocb", "ccm", "gcm")
