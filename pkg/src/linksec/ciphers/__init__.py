"""Block ciphers behind one keyed-cipher interface.

>>> c = make_cipher("aes_speed", bytes(range(16)))
>>> c.encrypt_block(bytes.fromhex("00112233445566778899aabbccddeeff")).hex()
'69c4e0d86a7b0430d8cdb78070b4c55a'
"""
from fractions import Fraction
from math import floor

from .aes import AesSize, AesSpeed
from .base import CipherSpec, KeyedCipher
from .rc6 import Rc6
from .skipjack import Skipjack
from .tea import Tea, Xtea, Xxtea, XxteaOpt, tea_delta

REGISTRY = {
    cls.spec.name: cls
    for cls in (Skipjack, Tea, Xtea, Xxtea, XxteaOpt, Rc6, AesSpeed, AesSize)
}


def cipher_spec(name: str) -> CipherSpec:
    try:
        return REGISTRY[name].spec
    except KeyError:
        raise ValueError(f"unknown cipher {name!r}; known: {', '.join(REGISTRY)}") from None


def make_cipher(name: str, key: bytes) -> KeyedCipher:
    """Instantiate registry cipher ``name`` under raw ``key`` bytes."""
    cipher_spec(name)
    return REGISTRY[name](key)


def encrypt_block(c: KeyedCipher, block: bytes) -> bytes:
    return c.encrypt_block(block)


def decrypt_block(c: KeyedCipher, block: bytes) -> bytes:
    return c.decrypt_block(block)


def key_horizon(key_bits: int) -> int:
    """Year until which a key of ``key_bits`` stays as safe as DES was in
    1982 (Lenstra's margin, 30/23 years per extra key bit), rounded to the
    nearest year."""
    if key_bits < 56:
        raise ValueError("key_bits must be at least 56")
    y = 1982 + Fraction(key_bits - 56) * Fraction(30, 23)
    return floor(y + Fraction(1, 2))


__all__ = [
    "CipherSpec", "KeyedCipher", "REGISTRY", "cipher_spec", "make_cipher",
    "encrypt_block", "decrypt_block", "tea_delta", "key_horizon",
]
