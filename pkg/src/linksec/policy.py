"""Security policy: the nine link-layer modes, cipher tier selection, and the
throughput and MAC-forgery calculators."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

CONFIDENTIALITY = "confidentiality"
AUTHENTICATION = "authentication"
REPLAY_PROTECTION = "replay_protection"
UNKEYED_HASH = "unkeyed_hash"

DEFAULT_CLOCK_HZ = 8_000_000
SECONDS_PER_DAY = 3600 * 24


@dataclass(frozen=True)
class FlexiMode:
    id: int
    name: str
    attributes: frozenset
    algorithm: str  # none | sha1 | cbc_mac | ocb
    tag_len: int  # trailer bytes: MAC, or the SHA-1 digest for the hash mode
    replay: bool

    @property
    def mac_len(self) -> int:
        return self.tag_len if self.algorithm in ("cbc_mac", "ocb") else 0

    @property
    def digest_len(self) -> int:
        return self.tag_len if self.algorithm == "sha1" else 0

    @property
    def keyed(self) -> bool:
        return self.algorithm in ("cbc_mac", "ocb")


def _mode(id, name, attrs, algorithm, tag_len, replay=False):
    return FlexiMode(id, name, frozenset(attrs), algorithm, tag_len, replay)


MODE_TABLE = (
    _mode(1, "Null", (), "none", 0),
    _mode(2, "FlexiSecHASH", (UNKEYED_HASH,), "sha1", 20),
    _mode(3, "FlexiSecAUTH64", (AUTHENTICATION,), "cbc_mac", 8),
    _mode(4, "FlexiSecAUTH32", (AUTHENTICATION,), "cbc_mac", 4),
    _mode(5, "FlexiSecAUTH_ENC64", (CONFIDENTIALITY, AUTHENTICATION), "ocb", 8),
    _mode(6, "FlexiSecAUTH_ENC32", (CONFIDENTIALITY, AUTHENTICATION), "ocb", 4),
    _mode(7, "FlexiSecAUTH_REPP64", (AUTHENTICATION, REPLAY_PROTECTION), "cbc_mac", 8, True),
    _mode(8, "FlexiSecAUTH_REPP32", (AUTHENTICATION, REPLAY_PROTECTION), "cbc_mac", 4, True),
    _mode(9, "FlexiSec_AUTH_ENC_REPP64", (CONFIDENTIALITY, AUTHENTICATION, REPLAY_PROTECTION), "ocb", 8, True),
)

_BY_NAME = {m.name: m for m in MODE_TABLE}
_BY_NAME["FlexiSecAUTH_ENC_REPP64"] = MODE_TABLE[8]


def select_mode(id_or_name) -> FlexiMode:
    """Look a mode up by id (1..9, int or digit string) or exact name."""
    if isinstance(id_or_name, FlexiMode):
        return id_or_name
    if isinstance(id_or_name, str) and id_or_name.strip().isdigit():
        id_or_name = int(id_or_name)
    if isinstance(id_or_name, int):
        if 1 <= id_or_name <= len(MODE_TABLE):
            return MODE_TABLE[id_or_name - 1]
    elif id_or_name in _BY_NAME:
        return _BY_NAME[id_or_name]
    raise ValueError(f"unknown mode {id_or_name!r}")


class ResourceTier(Enum):
    LOW = "low_storage_energy"
    HIGH = "high_storage_energy"

    @classmethod
    def parse(cls, value) -> "ResourceTier":
        if isinstance(value, cls):
            return value
        aliases = {"low": cls.LOW, "high": cls.HIGH}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise ValueError(f"unknown resource tier {value!r}") from None


TIER_CIPHER = {ResourceTier.LOW: "xxtea_opt", ResourceTier.HIGH: "aes_speed"}


def select_cipher(mode, tier) -> str:
    mode = select_mode(mode)
    if mode.algorithm == "none":
        raise ValueError("Null mode uses no software cipher")
    return TIER_CIPHER[ResourceTier.parse(tier)]


def throughput_bps(message_bits: int, clock_hz: int = DEFAULT_CLOCK_HZ, cycles: int = 1) -> float:
    """message_bits * clock_hz / cycles."""
    if cycles <= 0:
        raise ValueError("cycles must be positive")
    return message_bits * clock_hz / cycles


def forgery_days(mac_bits: int, packet_bytes: int, bandwidth_bps: float) -> float:
    """Days of continuous transmission to try 2^(k-1) forgeries of P-byte
    packets over a W bit/s radio: 2^(k-1) * P * 8 / (W * 86400)."""
    if mac_bits < 1:
        raise ValueError("mac_bits must be >= 1")
    if bandwidth_bps <= 0:
        raise ValueError("bandwidth must be positive")
    return float(Fraction(2 ** (mac_bits - 1) * packet_bytes * 8) / (Fraction(bandwidth_bps) * SECONDS_PER_DAY))


def forgery_attempts_per_second(packet_bytes: int, bandwidth_bps: float) -> float:
    return bandwidth_bps / (8 * packet_bytes)


def forgery_days_rounded(mac_bits: int, packet_bytes: int, bandwidth_bps: float, step: int = 40) -> float:
    """Forgery time with the attempt rate rounded up to a multiple of ``step``
    attempts per second (19.2 kbit/s and 68-byte packets give 35.3/s -> 40/s)."""
    rate = forgery_attempts_per_second(packet_bytes, bandwidth_bps)
    rounded = math.ceil(rate / step) * step
    return 2 ** (mac_bits - 1) / (rounded * SECONDS_PER_DAY)
