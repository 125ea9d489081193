"""Secured link-layer frame codec.

Wire layout, big-endian, trailer last::

    DEST(2) AM(1) LEN(1) SRC(2) CTR(2) | DATA(0..29) | MAC(0/4/8) | DIGEST(0/20)

The MAC covers header and processed payload. In OCB modes the header is bound
through the nonce (the IV built from it) instead.
"""
from __future__ import annotations

import hmac
import struct
from dataclasses import dataclass, replace

from . import modes
from .ciphers import KeyedCipher
from .hashes import sha1
from .policy import FlexiMode, select_mode
from .replay import BloomState, DigestSet, NeighborWindowTable, REPLAYED

HEADER = struct.Struct(">HBBHH")
HEADER_BYTES = HEADER.size
MAX_PAYLOAD = 29
MAX_CTR = 0xFFFF

ACCEPT, FORGED, REPLAY = "accept", "forged", "replayed"


class CounterExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class FrameHeader:
    dest: int
    am: int
    len: int
    src: int
    ctr: int

    def __post_init__(self):
        for name, bits in (("dest", 16), ("am", 8), ("len", 8), ("src", 16), ("ctr", 16)):
            v = getattr(self, name)
            if not 0 <= v < 1 << bits:
                raise ValueError(f"{name}={v} does not fit in {bits} bits")
        if self.len > MAX_PAYLOAD:
            raise ValueError(f"len={self.len} exceeds {MAX_PAYLOAD}")

    def pack(self) -> bytes:
        return HEADER.pack(self.dest, self.am, self.len, self.src, self.ctr)

    @classmethod
    def unpack(cls, data: bytes) -> "FrameHeader":
        return cls(*HEADER.unpack(data[:HEADER_BYTES]))

    @property
    def replay_tag(self) -> bytes:
        return struct.pack(">HH", self.src, self.ctr)


@dataclass(frozen=True)
class SecuredFrame:
    header: FrameHeader
    payload: bytes
    mac: bytes = b""
    digest: bytes | None = None

    def encode(self) -> bytes:
        return self.header.pack() + self.payload + self.mac + (self.digest or b"")

    def __len__(self):
        return HEADER_BYTES + len(self.payload) + len(self.mac) + len(self.digest or b"")


def decode_frame(data: bytes, mode) -> SecuredFrame:
    """Split wire bytes into a frame; raises ValueError when the length is
    inconsistent with the LEN field and the mode's trailer."""
    mode = select_mode(mode)
    data = bytes(data)
    trailer = mode.mac_len + mode.digest_len
    if len(data) < HEADER_BYTES + trailer:
        raise ValueError("truncated frame")
    header = FrameHeader.unpack(data)
    if len(data) != HEADER_BYTES + header.len + trailer:
        raise ValueError(f"frame is {len(data)} bytes, header implies {HEADER_BYTES + header.len + trailer}")
    body = data[HEADER_BYTES:HEADER_BYTES + header.len]
    rest = data[HEADER_BYTES + header.len:]
    return SecuredFrame(header, body, rest[:mode.mac_len], rest[mode.mac_len:] if mode.digest_len else None)


def build_iv(header: FrameHeader, block_bits: int) -> bytes:
    """Serialized header as IV: verbatim for 64-bit blocks, zero-extended in
    the high-order bytes for 128-bit blocks."""
    raw = header.pack()
    return bytes(block_bits // 8 - len(raw)) + raw


class SenderState:
    """Last CTR used by one sender toward each destination."""

    def __init__(self):
        self.last: dict[int, int] = {}

    def next_ctr(self, dest: int) -> int:
        ctr = self.last.get(dest, 0) + 1
        if ctr > MAX_CTR:
            raise CounterExhausted(f"16-bit CTR toward {dest} exhausted")
        return ctr

    def commit(self, dest: int, ctr: int):
        if ctr <= self.last.get(dest, 0):
            raise ValueError(f"ctr {ctr} not above last used {self.last.get(dest, 0)} toward {dest}")
        self.last[dest] = ctr

    def header(self, dest: int, src: int, am: int = 0, length: int = 0) -> FrameHeader:
        return FrameHeader(dest, am, length, src, self.next_ctr(dest))


def _ocb_frame(c, header, data, tag_len, ledger, encrypt):
    k = modes._Counted(c, ledger, "ocb")
    return modes._ocb(k, build_iv(header, c.spec.block_bits), data, encrypt)


def seal_frame(mode, c: KeyedCipher | None, header: FrameHeader, payload: bytes,
               sender: SenderState | None = None, ledger=None) -> SecuredFrame:
    """Apply ``mode``'s protection to ``payload``. LEN is set from the payload;
    when ``sender`` is given the CTR must exceed its last use toward DEST."""
    mode = select_mode(mode)
    payload = bytes(payload)
    if len(payload) > MAX_PAYLOAD:
        raise ValueError(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    header = replace(header, len=len(payload))
    if sender is not None:
        sender.commit(header.dest, header.ctr)
    if mode.keyed and c is None:
        raise ValueError(f"{mode.name} needs a cipher")
    if mode.algorithm == "none":
        return SecuredFrame(header, payload)
    if mode.algorithm == "sha1":
        return SecuredFrame(header, payload, digest=sha1(header.pack() + payload))
    if mode.algorithm == "cbc_mac":
        mac = modes.cbc_mac(c, header.pack() + payload, mode.tag_len, ledger)
        return SecuredFrame(header, payload, mac)
    ct, tag = _ocb_frame(c, header, payload, mode.tag_len, ledger, encrypt=True)
    return SecuredFrame(header, ct, tag[:mode.tag_len])


def check_replay(replay_state, frame: SecuredFrame, frame_bytes: bytes) -> bool:
    """True if the replay state flags the frame."""
    h = frame.header
    if isinstance(replay_state, NeighborWindowTable):
        verdict = replay_state.check(h.src, h.ctr)
    elif isinstance(replay_state, DigestSet):
        verdict = replay_state.check(h.src, frame_bytes)
    elif isinstance(replay_state, BloomState):
        verdict = replay_state.check(h.replay_tag)
    else:
        raise TypeError(f"unsupported replay state {type(replay_state).__name__}")
    return verdict == REPLAYED


def open_frame(mode, c: KeyedCipher | None, replay_state, frame_bytes: bytes, ledger=None):
    """Verify, then (in replay-protected modes) check freshness.

    Returns ``(header, payload, verdict)``; payload is None unless the
    verdict is "accept". Raises ValueError only for frames shorter than
    header plus trailer.
    """
    mode = select_mode(mode)
    frame_bytes = bytes(frame_bytes)
    if len(frame_bytes) < HEADER_BYTES + mode.mac_len + mode.digest_len:
        raise ValueError("truncated frame")
    try:
        frame = decode_frame(frame_bytes, mode)
    except ValueError:
        # a corrupted LEN field or an impossible header is a failed integrity check
        try:
            header = FrameHeader.unpack(frame_bytes)
        except ValueError:
            header = None
        return header, None, FORGED
    h = frame.header
    if mode.algorithm == "sha1":
        ok = hmac.compare_digest(sha1(h.pack() + frame.payload), frame.digest)
        plain = frame.payload
    elif mode.algorithm == "cbc_mac":
        ok = modes.cbc_mac_verify(c, h.pack() + frame.payload, frame.mac, ledger)
        plain = frame.payload
    elif mode.algorithm == "ocb":
        plain, full = _ocb_frame(c, h, frame.payload, mode.tag_len, ledger, encrypt=False)
        ok = hmac.compare_digest(full[:mode.tag_len], frame.mac)
    else:
        ok, plain = True, frame.payload
    if not ok:
        return h, None, FORGED
    if mode.replay and replay_state is not None and check_replay(replay_state, frame, frame_bytes):
        return h, None, REPLAY
    return h, plain, ACCEPT
