"""Benchmarks and the ``linksec`` command line.

Every subcommand emits long-format CSV rows ``subject,metric,value,params``
where ``params`` is a sorted ``key=value;...`` string. Analytic rows are exact;
wall-clock rows are opt-in (``--timing``) because they are not reproducible.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass, field

from . import modes
from .ciphers import REGISTRY, cipher_spec, key_horizon, make_cipher
from .config import load_config
from .hashes import HashFamily
from .policy import forgery_days, forgery_days_rounded
from .replay import (SCHEMES, fp_rate, fp_rate_approx, fp_rate_exp, fp_steady_state, measure_fp,
                     replay_state_bytes)
from .simnet import Scenario, run_scenario

METRICS = ("cipher_calls", "table_bytes", "state_bytes", "fp_theoretical", "fp_measured",
           "wall_ns_per_block", "forgery_days", "key_horizon", "count")


@dataclass(frozen=True)
class BenchRow:
    subject: str
    metric: str
    value: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")

    def params_str(self) -> str:
        return ";".join(f"{k}={self.params[k]}" for k in sorted(self.params))

    def csv_fields(self):
        v = self.value
        if isinstance(v, float) and not v.is_integer():
            v = repr(v)
        elif isinstance(v, float):
            v = int(v)
        return [self.subject, self.metric, v, self.params_str()]


def write_csv(rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["subject", "metric", "value", "params"])
    for r in rows:
        w.writerow(r.csv_fields())


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


# -- ciphers -----------------------------------------------------------------------

def _time_block(c, reps=200):
    block = bytes(c.spec.block_bytes)
    t0 = time.perf_counter_ns()
    for _ in range(reps):
        block = c.encrypt_block(block)
    return (time.perf_counter_ns() - t0) / reps


def bench_ciphers(names=None, timing=False) -> list[BenchRow]:
    rows = []
    for name in names or REGISTRY:
        spec = cipher_spec(name)
        p = {"block_bits": spec.block_bits, "key_bits": spec.key_bits, "rounds": spec.rounds}
        rows.append(BenchRow(name, "table_bytes", spec.table_bytes, p))
        rows.append(BenchRow(name, "key_horizon", key_horizon(spec.key_bits), p))
        if timing:
            c = make_cipher(name, bytes(spec.key_bytes))
            rows.append(BenchRow(name, "wall_ns_per_block", _time_block(c), p))
    return rows


# -- modes -------------------------------------------------------------------------

def _mode_runs(c, n):
    """(mode name, callable(ledger)) for a message of ``n`` full blocks."""
    b = c.spec.block_bytes
    msg = bytes(range(256))[: n * b] if n * b <= 256 else bytes(n * b)
    iv = bytes(b)
    runs = [
        ("cbc", lambda L: modes.cbc_encrypt(c, iv, msg, L)),
        ("cbc_mac", lambda L: modes.cbc_mac(c, msg, 8 if b >= 8 else 4, L)),
        ("cbc+cbc_mac", lambda L: modes.cbc_mac(c, modes.cbc_encrypt(c, iv, msg, L), 8, L)),
        ("ocb", lambda L: modes.ocb_seal(c, bytes(b), msg, 8, L)),
    ]
    if c.spec.block_bits == 128:
        runs += [
            ("ccm", lambda L: modes.ccm_seal(c, bytes(13), msg, 8, ledger=L)),
            ("gcm", lambda L: modes.gcm_seal(c, bytes(12), msg, tag_len=8, ledger=L)),
        ]
    return runs


def bench_modes(cipher: str = "aes_speed", blocks=(1, 2, 4, 8), timing=False, key=None) -> list[BenchRow]:
    spec = cipher_spec(cipher)
    c = make_cipher(cipher, key or bytes(range(spec.key_bytes)))
    rows = []
    for n in blocks:
        if n < 1:
            raise ValueError("block counts must be >= 1")
        for name, run in _mode_runs(c, n):
            ledger = modes.CallLedger(name)
            run(ledger)
            p = {"cipher": cipher, "blocks": n}
            rows.append(BenchRow(name, "cipher_calls", ledger.cipher_calls, p))
            if timing:
                reps = 20
                t0 = time.perf_counter_ns()
                for _ in range(reps):
                    run(None)
                rows.append(BenchRow(name, "wall_ns_per_block", (time.perf_counter_ns() - t0) / (reps * n), p))
    return rows


# -- replay ------------------------------------------------------------------------

def bench_replay(schemes=SCHEMES, nodes=10, window=8, m=512, k=8, trials=100_000, n=32,
                 capacity=32, seed=0) -> list[BenchRow]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for scheme in schemes:
        base = {"scheme": scheme, "nodes": nodes, "window": window, "m": m}
        for scope in ("node", "network"):
            rows.append(BenchRow(scheme, "state_bytes",
                                 replay_state_bytes(scheme, nodes, window, m, scope), {**base, "scope": scope}))
        if scheme != "bloom":
            rows.append(BenchRow(scheme, "fp_theoretical", 0, base))
            continue
        bp = {**base, "k": k, "n": n}
        rows.append(BenchRow(scheme, "fp_theoretical", fp_rate(m, k, n), {**bp, "form": "exact"}))
        rows.append(BenchRow(scheme, "fp_theoretical", fp_rate_exp(m, k, n), {**bp, "form": "exp"}))
        rows.append(BenchRow(scheme, "fp_theoretical", fp_rate_approx(k), {**bp, "form": "half_full"}))
        if capacity:
            rows.append(BenchRow(scheme, "fp_theoretical", fp_steady_state(m, k, capacity),
                                 {**base, "k": k, "capacity": capacity, "form": "steady_state"}))
        hits, done = measure_fp(m, n, trials, seed, family=HashFamily().first(k))
        rows.append(BenchRow(scheme, "fp_measured", hits / done, {**bp, "trials": done, "hits": hits, "seed": seed}))
    return rows


# -- policy ------------------------------------------------------------------------

def bench_policy(mac_bits=(16, 24, 32, 40, 48, 56, 64), packet_bytes=68,
                 bandwidths=(19200, 250000), step=40) -> list[BenchRow]:
    rows = []
    for w in bandwidths:
        for k in mac_bits:
            p = {"mac_bits": k, "packet_bytes": packet_bytes, "bandwidth_bps": w}
            rows.append(BenchRow("forgery", "forgery_days", forgery_days(k, packet_bytes, w),
                                 {**p, "method": "exact"}))
            rows.append(BenchRow("forgery", "forgery_days", forgery_days_rounded(k, packet_bytes, w, step),
                                 {**p, "method": f"rate_rounded_{step}"}))
    return rows


# -- sim ---------------------------------------------------------------------------

def bench_sim(scenario: Scenario) -> tuple[list[BenchRow], str]:
    """Run one scenario; counters come out as ``count`` rows, call totals as
    ``cipher_calls`` and per-node replay state as ``state_bytes``."""
    report = run_scenario(scenario)
    rows = []
    for subject, metric, value in report.metrics():
        if metric in report.COUNTERS:
            rows.append(BenchRow(metric, "count", value, report.params))
        elif metric.endswith("_calls"):
            rows.append(BenchRow(metric.removesuffix("_calls") if metric != "cipher_calls" else "total",
                                 "cipher_calls", value, report.params))
        else:
            rows.append(BenchRow(subject, metric, value, report.params))
    return rows, report.summary()


# -- cli ---------------------------------------------------------------------------

def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", metavar="PATH", help="write CSV here instead of standard output")
    common.add_argument("--seed", type=int, default=None, help="u64 seed (default 0)")
    common.add_argument("--config", metavar="PATH", help="key = value config file")

    ap = argparse.ArgumentParser(prog="linksec", description="Link-layer security benchmarks and simulator.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("ciphers", parents=[common], help="table sizes and key horizons")
    p.add_argument("--names", type=lambda s: s.split(","), default=None)
    p.add_argument("--timing", action="store_true", help="add wall-clock rows (not reproducible)")

    p = sub.add_parser("modes", parents=[common], help="block-cipher call counts per mode")
    p.add_argument("--cipher", default=None)
    p.add_argument("--blocks", type=_ints, default=[1, 2, 4, 8])
    p.add_argument("--timing", action="store_true", help="add wall-clock rows (not reproducible)")

    p = sub.add_parser("replay", parents=[common], help="replay-state sizes and Bloom false positives")
    p.add_argument("--scheme", choices=SCHEMES + ("all",), default=None)
    p.add_argument("--nodes", type=int, default=10)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--n", type=int, default=32, help="Bloom fill level for the false-positive rows")
    p.add_argument("--capacity", type=int, default=None)
    p.add_argument("--trials", type=int, default=100_000)

    p = sub.add_parser("policy", parents=[common], help="MAC forgery time grid")
    p.add_argument("--mac-bits", type=_ints, default=[16, 24, 32, 40, 48, 56, 64])
    p.add_argument("--packet-bytes", type=int, default=68)
    p.add_argument("--bandwidths", type=_ints, default=[19200, 250000])

    p = sub.add_parser("sim", parents=[common], help="run a scenario file")
    p.add_argument("--summary", action="store_true", help="print the text summary to standard error")
    return ap


def _run(args) -> list[BenchRow]:
    cfg = load_config(args.config) if args.config else {}
    seed = args.seed if args.seed is not None else int(cfg.get("seed", "0"), 0)
    if args.cmd == "ciphers":
        return bench_ciphers(args.names, args.timing)
    if args.cmd == "modes":
        return bench_modes(args.cipher or cfg.get("cipher", "aes_speed"), args.blocks, args.timing)
    if args.cmd == "replay":
        scheme = args.scheme or cfg.get("replay_scheme", "all")
        return bench_replay(SCHEMES if scheme == "all" else (scheme,), args.nodes,
                            args.window or int(cfg.get("window", 8)), args.m or int(cfg.get("m", 512)),
                            args.k, args.trials, args.n, args.capacity or int(cfg.get("capacity", 32)), seed)
    if args.cmd == "policy":
        return bench_policy(args.mac_bits, args.packet_bytes, args.bandwidths)
    if not args.config:
        raise ValueError("sim needs --config <scenario file>")
    rows, summary = bench_sim(Scenario.from_config(cfg, seed=seed))
    if args.summary:
        print(summary, file=sys.stderr)
    return rows


def run_cli(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        rows = _run(args)
        if args.csv:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                write_csv(rows, fh)
        else:
            write_csv(rows, sys.stdout)
    except (ValueError, OSError, KeyError) as e:
        print(f"linksec {args.cmd}: error: {e}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run_cli())
