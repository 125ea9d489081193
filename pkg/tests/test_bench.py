import csv
import io
import subprocess
import sys

import pytest

from linksec.bench import (BenchRow, bench_ciphers, bench_modes, bench_policy, bench_replay, rows_to_csv, run_cli)

SCENARIO = """
topology = 1,2,3
ticks = 60
send_period = 2
mode = 8
replay_scheme = bloom
adversary = capture_replay
delay = 1
count = 10
drop_rate = 0.1
reorder_rate = 0.1
"""


def _value(rows, subject, metric, **params):
    hits = [r.value for r in rows if r.subject == subject and r.metric == metric
            and all(r.params.get(k) == v for k, v in params.items())]
    assert len(hits) == 1, (subject, metric, params, hits)
    return hits[0]


def test_bench_modes_counts():
    rows = bench_modes("aes_speed", [1, 2, 4, 8])
    assert _value(rows, "ocb", "cipher_calls", blocks=4) == 6
    assert _value(rows, "cbc+cbc_mac", "cipher_calls", blocks=4) == 9
    for n in (1, 2, 4, 8):
        assert _value(rows, "ccm", "cipher_calls", blocks=n) > _value(rows, "ocb", "cipher_calls", blocks=n)
    assert not any(r.metric == "wall_ns_per_block" for r in rows)
    timed = bench_modes("xxtea_opt", [1], timing=True)
    assert any(r.metric == "wall_ns_per_block" and r.value > 0 for r in timed)
    assert not any(r.subject in ("ccm", "gcm") for r in timed)
    with pytest.raises(ValueError):
        bench_modes("des", [1])


def test_bench_replay_rows():
    rows = bench_replay(nodes=10, trials=20_000)
    assert _value(rows, "counter", "state_bytes", scope="network") == 180
    assert _value(rows, "bloom", "state_bytes", scope="node") == 64
    assert _value(rows, "digest", "state_bytes", scope="node") > _value(rows, "counter", "state_bytes", scope="network")
    assert _value(rows, "bloom", "fp_theoretical", form="half_full") == 1 / 256
    assert _value(rows, "bloom", "fp_measured") < 0.002
    with pytest.raises(ValueError):
        bench_replay(trials=0)


def test_bench_policy_rows():
    rows = bench_policy([32], 68, [19200, 250000])
    assert _value(rows, "forgery", "forgery_days", bandwidth_bps=19200, method="exact") == pytest.approx(704.23, abs=0.01)
    assert _value(rows, "forgery", "forgery_days", bandwidth_bps=250000, method="rate_rounded_40") == \
        pytest.approx(51.78, abs=0.01)


def test_bench_ciphers_rows():
    rows = bench_ciphers()
    assert _value(rows, "aes_speed", "table_bytes") == 2304
    assert _value(rows, "skipjack", "key_horizon") == 2013
    assert _value(rows, "rc6", "key_horizon") == 2076


def test_row_validation_and_csv_format():
    with pytest.raises(ValueError):
        BenchRow("x", "joules", 1)
    text = rows_to_csv([BenchRow("a", "count", 3, {"z": 1, "b": "q"}), BenchRow("a", "fp_measured", 0.25)])
    assert text == "subject,metric,value,params\na,count,3,b=q;z=1\na,fp_measured,0.25,\n"


def test_cli_modes_csv(tmp_path):
    out = tmp_path / "out.csv"
    assert run_cli(["modes", "--cipher", "aes_speed", "--blocks", "1,2,4,8", "--csv", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 4 * 6 and set(rows[0]) == {"subject", "metric", "value", "params"}


def test_cli_errors(tmp_path, capsys):
    assert run_cli(["bogus"]) != 0
    assert run_cli(["modes", "--cipher", "des"]) == 1
    assert "error" in capsys.readouterr().err
    assert run_cli(["sim"]) == 1
    assert run_cli(["sim", "--config", str(tmp_path / "missing.txt")]) == 1


def test_cli_sim_is_byte_identical(tmp_path):
    cfg = tmp_path / "s.txt"
    cfg.write_text(SCENARIO)
    a, b, c = (tmp_path / f"{x}.csv" for x in "abc")
    assert run_cli(["sim", "--config", str(cfg), "--seed", "7", "--csv", str(a)]) == 0
    assert run_cli(["sim", "--config", str(cfg), "--seed", "7", "--csv", str(b)]) == 0
    assert run_cli(["sim", "--config", str(cfg), "--seed", "8", "--csv", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()
    assert "replays_flagged,count,10," in a.read_text()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "linksec", "policy", "--mac-bits", "32"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("subject,metric,value,params\n")
    assert "method=rate_rounded_40" in proc.stdout
