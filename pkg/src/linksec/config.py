"""Key-value text config shared by the policy, simulator and CLI.

One ``key = value`` per line; ``#`` starts a comment. The MAC length is fixed
by the mode, so ``mac``/``tag_len`` keys are rejected.
"""
from __future__ import annotations

FORBIDDEN = {"mac", "mac_len", "tag_len", "mac_bits"}


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in FORBIDDEN:
            raise ConfigError(f"line {lineno}: {key} is set by the mode and cannot be overridden")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def parse_topology(value: str):
    """``"1,2,3"`` is a chain; ``"1:2 3; 2:4; 3:4"`` is an adjacency list
    (undirected, ``node: neighbours``)."""
    value = value.strip()
    if ":" not in value:
        return [int(v, 0) for v in value.replace(" ", "").split(",") if v]
    adj: dict[int, list[int]] = {}
    for part in value.split(";"):
        if not part.strip():
            continue
        node, _, nbrs = part.partition(":")
        n = int(node.strip(), 0)
        adj.setdefault(n, [])
        for v in nbrs.replace(",", " ").split():
            m = int(v, 0)
            adj[n].append(m)
            adj.setdefault(m, []).append(n)
    return {k: sorted(set(v)) for k, v in adj.items()}


def parse_hex_key(value: str) -> bytes:
    v = value.strip().lower().removeprefix("0x")
    try:
        return bytes.fromhex(v)
    except ValueError:
        raise ConfigError(f"key is not hex: {value!r}") from None
