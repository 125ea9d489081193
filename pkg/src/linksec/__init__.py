"""Flexible link-layer security for sensor networks: lightweight block
ciphers, authenticated modes with call accounting, replay detection, a frame
codec, mode policy and a small deterministic network simulator."""

__version__ = "0.1.0"
