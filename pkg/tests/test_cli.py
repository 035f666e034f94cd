import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from sinrbatch import cli
from sinrbatch.scenario_file import generate, parse_scenario, to_json


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if isinstance(doc, dict) else doc)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


ONE = {"alpha": 2, "beta": "2", "noise": "0.25", "dimension": 1,
       "transmitters": [{"pos": ["0"], "power": "1"}], "receivers": [["1"]]}


def test_run_1d_uniform_single(tmp_path, capsys):
    code, out, err = run(capsys, "run", "--engine", "1d-uniform", "--scenario", write(tmp_path, ONE))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(cli.FIELDS)
    assert len(rows) == 1
    assert rows[0]["verdict"] == "hear" and rows[0]["candidate"] == "0"
    assert Fraction(rows[0]["quantity"]) == 4


def test_run_ptas_metadata(tmp_path, capsys):
    doc = generate(20, 20, seed=3)
    code, out, err = run(capsys, "run", "--engine", "ptas", "--eps", "0.1", "--scenario", write(tmp_path, doc))
    assert code == 0
    assert "# k=12" in err
    assert "# gamma=1.0718" in err


def test_run_receiver_on_transmitter(tmp_path, capsys):
    doc = dict(ONE, receivers=[["1"], ["0"]])
    code, out, err = run(capsys, "run", "--engine", "oracle", "--scenario", write(tmp_path, doc))
    assert code == 2
    assert "receiver 1" in err


def test_run_malformed(tmp_path, capsys):
    code, _, err = run(capsys, "run", "--engine", "oracle", "--scenario", write(tmp_path, "{not json"))
    assert code == 2
    bad = dict(ONE, beta="1")
    code, _, _ = run(capsys, "run", "--engine", "oracle", "--scenario", write(tmp_path, bad))
    assert code == 2


def test_run_engine_mismatch(tmp_path, capsys):
    doc = generate(5, 5, seed=4)
    code, _, err = run(capsys, "run", "--engine", "grid-tx", "--scenario", write(tmp_path, doc))
    assert code == 3
    code, _, _ = run(capsys, "run", "--engine", "1d-uniform", "--scenario", write(tmp_path, doc))
    assert code == 3


@pytest.mark.parametrize("engine,kw", [
    ("oracle", dict(dim=2, power="random")),
    ("1d-uniform", dict(dim=1)),
    ("1d-weighted", dict(dim=1, power="random")),
    ("grid-tx", dict(layout="grid-tx")),
    ("grid-rx", dict(layout="grid-rx", power="random")),
    ("approx", dict()),
    ("ptas", dict()),
])
def test_check_oracle_passes_exact(tmp_path, capsys, engine, kw):
    m = 6 if engine == "grid-rx" else 30
    doc = generate(16, m, seed=5, **kw)
    code, out, err = run(capsys, "run", "--engine", engine, "--scenario", write(tmp_path, doc),
                         "--check-oracle")
    assert code == 0, err
    assert "oracle check passed" in err
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == len(parse_scenario(doc)[1])


def test_check_oracle_float(tmp_path, capsys):
    doc = generate(30, 30, seed=6)
    code, _, err = run(capsys, "run", "--engine", "ptas", "--backend", "f64",
                       "--scenario", write(tmp_path, doc), "--check-oracle")
    assert code == 0, err


def test_oracle_diff_detects_unsound():
    from sinrbatch.engine import EngineReport, Verdict

    rep = EngineReport("x", "exact", [0, 1, 0], [0, 0, 0],
                       [Verdict.hear(0), Verdict.silent(), Verdict.uncertain(0)], [(), (), ()])
    bad = cli.oracle_diff(rep, [Verdict.hear(1), Verdict.hear(1), Verdict.silent()])
    assert [b[0] for b in bad] == [0, 1]


def test_grid_rx_rejected_record(tmp_path, capsys):
    doc = {"alpha": 2, "beta": "1.5", "noise": "0.1", "dimension": 2,
           "transmitters": [{"pos": ["0", "0"], "power": "1"}],
           "receivers": {"grid": {"xs": ["0", "1"], "ys": ["0", "1"]}}}
    code, out, err = run(capsys, "run", "--engine", "grid-rx", "--scenario", write(tmp_path, doc),
                         "--out", "jsonl", "--check-oracle")
    assert code == 0, err
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 4
    assert recs[0]["verdict"] == "rejected" and recs[0]["flags"] == ["rejected"]
    assert [r["index"] for r in recs] == [0, 1, 2, 3]


def test_run_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, generate(40, 40, seed=7, power="random", beta="5"))
    outs = [run(capsys, "run", "--engine", "approx", "--scenario", path, "--out", "jsonl")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_threads_env(monkeypatch):
    monkeypatch.setenv("SINRBATCH_THREADS", "3")
    assert cli._threads(None) == 3
    assert cli._threads(2) == 2


# -- gen -------------------------------------------------------------------------------------


def test_gen_grid_tx_sizes(capsys):
    code, out, _ = run(capsys, "gen", "--n", "4", "--layout", "grid-tx", "--m", "3")
    doc = json.loads(out)
    assert code == 0
    xs = sorted({t["pos"][0] for t in doc["transmitters"]})
    ys = sorted({t["pos"][1] for t in doc["transmitters"]})
    assert len(xs) == 2 and len(ys) == 2 and len(doc["transmitters"]) == 4


def test_gen_deterministic(capsys):
    a = run(capsys, "gen", "--n", "30", "--m", "20", "--seed", "9", "--power", "random")[1]
    b = run(capsys, "gen", "--n", "30", "--m", "20", "--seed", "9", "--power", "random")[1]
    c = run(capsys, "gen", "--n", "30", "--m", "20", "--seed", "10", "--power", "random")[1]
    assert a == b and a != c


def test_gen_separation_1d(capsys):
    code, out, _ = run(capsys, "gen", "--n", "256", "--m", "256", "--dim", "1")
    assert code == 0
    sc, qs = parse_scenario(json.loads(out))
    s = np.array([float(t.position[0]) for t in sc.transmitters])
    q = np.array([float(p[0]) for p in qs.points])
    assert np.abs(q[:, None] - s[None, :]).min() >= 1e-3 * (1 - 1e-12)
    exact = min(abs(a - b) for a in (p[0] for p in qs.points) for b in (t.position[0] for t in sc.transmitters))
    assert exact >= Fraction(1, 1000)
    assert all(0 <= v <= 1 for v in np.concatenate([s, q]))


def test_gen_infeasible(capsys):
    code, _, err = run(capsys, "gen", "--n", "50", "--m", "50", "--dim", "1", "--min-sep", "0.1")
    assert code == 2


def test_gen_schema_round_trip():
    doc = generate(6, 4, dim=2, power="random", seed=2)
    assert set(doc) == {"alpha", "beta", "noise", "dimension", "transmitters", "receivers"}
    assert all(isinstance(c, str) for t in doc["transmitters"] for c in t["pos"])
    assert json.loads(to_json(doc)) == doc


# -- bench -----------------------------------------------------------------------------------


def test_parse_sizes():
    assert cli.parse_sizes("1024..8192") == [1024, 2048, 4096, 8192]
    assert cli.parse_sizes("5,7") == [5, 7]


def test_bench_single_size_empty_slope(capsys):
    code, out, _ = run(capsys, "bench", "--engine", "1d-uniform", "--sizes", "64", "--reps", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1
    assert list(rows[0]) == ["engine", "n", "m", "backend", "median_seconds", "slope"]
    assert rows[0]["slope"] == ""


def test_bench_oracle_slope(capsys):
    # the O(nm) baseline: a small sweep is enough to see the quadratic trend
    code, out, _ = run(capsys, "bench", "--engine", "oracle", "--sizes", "2048..16384", "--reps", "3",
                       "--backend", "f64")
    rows = list(csv.DictReader(io.StringIO(out)))
    slope = float(rows[0]["slope"])
    assert code == 0 and len(rows) == 4
    assert 1.5 <= slope <= 2.3


def test_loglog_slope():
    ns = [10, 20, 40, 80]
    assert cli.loglog_slope(ns, [n**2 for n in ns]) == pytest.approx(2.0)
    assert cli.loglog_slope([5], [1.0]) is None


def test_module_entry_point(tmp_path):
    path = write(tmp_path, ONE)
    proc = subprocess.run([sys.executable, "-m", "sinrbatch", "run", "--engine", "oracle",
                           "--scenario", path, "--out", "jsonl"], capture_output=True, text=True)
    assert proc.returncode == 0
    rec = json.loads(proc.stdout)
    assert rec["verdict"] == "hear" and rec["engine"] == "oracle"
