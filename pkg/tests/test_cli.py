import json

import pytest

from lrfhss.cli import main
from lrfhss.hopping import generate_sequence
from lrfhss.sweep import parse_csv


def test_analytic_writes_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["analytic", "--dr", "DR5", "--strategy", "macro",
                 "--load-min", "0.5", "--load-max", "4", "--points", "4",
                 "--out", str(out)])
    assert code == 0
    rows = parse_csv(out.read_text())
    assert len(rows) == 4
    assert all(r.dr == "DR5" and r.strategy == "macro" for r in rows)


def test_analytic_json_format(tmp_path):
    out = tmp_path / "sweep.json"
    code = main(["analytic", "--dr", "DR6", "--strategy", "nearest",
                 "--load-min", "0.5", "--load-max", "2", "--points", "3",
                 "--format", "json", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["rows"]) == 3


def test_invalid_config_exit_code():
    assert main(["analytic", "--points", "1"]) == 2
    assert main(["analytic", "--load-min", "5", "--load-max", "2"]) == 2


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "dr": "DR5", "strategy": "macro", "load_min_mbps": 0.5,
        "load_max_mbps": 4.0, "points": 3}))
    out = tmp_path / "o.csv"
    code = main(["analytic", "--config", str(cfg), "--points", "5",
                 "--out", str(out)])
    assert code == 0
    assert len(parse_csv(out.read_text())) == 5
    # the effective config is echoed in the header
    assert "points=5" in out.read_text()


def test_config_file_unknown_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["analytic", "--config", str(cfg)]) == 2


def test_validate_adds_mc_columns(tmp_path):
    out = tmp_path / "v.csv"
    code = main(["validate", "--dr", "DR5", "--strategy", "macro",
                 "--load-min", "1", "--load-max", "3", "--points", "2",
                 "--trials", "2000", "--seed", "3", "--out", str(out)])
    assert code == 0
    rows = parse_csv(out.read_text())
    assert all(r.mc_s_total is not None for r in rows)


def test_threshold_report(tmp_path, capsys):
    code = main(["threshold", "--dr", "DR5", "--strategy", "macro",
                 "--load-min", "0.5", "--load-max", "16", "--points", "2",
                 "--target", "0.8"])
    assert code == 0
    captured = capsys.readouterr().out
    assert captured.startswith("dr,strategy,target,load_mbps")
    value = float(captured.splitlines()[1].split(",")[3])
    assert 6.0 < value < 10.0


def test_hopseq_json(tmp_path):
    out = tmp_path / "seq.json"
    code = main(["hopseq", "--device-id", "7", "--hop-seed", "99",
                 "--grid", "3", "--length", "16", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["device_id"] == 7 and doc["grid"] == 3
    assert tuple(doc["hops"]) == generate_sequence(7, 99, 3, 16).hops
    assert len(doc["centers_hz"]) == 16


def test_hopseq_invalid_grid():
    assert main(["hopseq", "--device-id", "1", "--hop-seed", "1",
                 "--grid", "99", "--length", "4"]) == 2


def test_io_failure_exit_code(tmp_path):
    target = tmp_path / "file.csv"
    target.write_text("x")
    # using an existing file as a directory component fails with ENOTDIR
    code = main(["analytic", "--dr", "DR5", "--strategy", "macro",
                 "--load-min", "0.5", "--load-max", "2", "--points", "2",
                 "--out", str(target / "nested.csv")])
    assert code == 4
