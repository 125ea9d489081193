from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CipherSpec:
    """Static description of a block cipher in the registry.

    ``table_bytes`` is the storage held in precomputed, key-independent
    tables (S-boxes, T-tables, round-constant tables).
    """

    name: str
    block_bits: int
    key_bits: int
    rounds: int
    table_bytes: int

    def __post_init__(self):
        if self.block_bits not in (64, 128):
            raise ValueError(f"block_bits must be 64 or 128, got {self.block_bits}")
        if self.key_bits not in (80, 128):
            raise ValueError(f"key_bits must be 80 or 128, got {self.key_bits}")

    @property
    def block_bytes(self) -> int:
        return self.block_bits // 8

    @property
    def key_bytes(self) -> int:
        return self.key_bits // 8


def table_bytes(*tables) -> int:
    """Total bytes of a set of ``array.array`` / ``bytes`` tables."""
    return sum(len(t) * getattr(t, "itemsize", 1) for t in tables)


class KeyedCipher:
    """A block cipher bound to one key.

    Subclasses set ``spec`` and implement ``_expand``, ``_encrypt`` and
    ``_decrypt``. Instances are immutable after construction.
    """

    spec: CipherSpec

    def __init__(self, key: bytes):
        key = bytes(key)
        if len(key) != self.spec.key_bytes:
            raise ValueError(
                f"{self.spec.name} needs a {self.spec.key_bytes}-byte key, got {len(key)} bytes"
            )
        self.round_keys = self._expand(key)

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec.name}>"

    def _check(self, block) -> bytes:
        block = bytes(block)
        if len(block) != self.spec.block_bytes:
            raise ValueError(
                f"{self.spec.name} block must be {self.spec.block_bytes} bytes, got {len(block)}"
            )
        return block

    def encrypt_block(self, block: bytes) -> bytes:
        return self._encrypt(self._check(block))

    def decrypt_block(self, block: bytes) -> bytes:
        return self._decrypt(self._check(block))

    def _expand(self, key: bytes):
        raise NotImplementedError

    def _encrypt(self, block: bytes) -> bytes:
        raise NotImplementedError

    def _decrypt(self, block: bytes) -> bytes:
        raise NotImplementedError
