import json

import pytest

from shardcalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_region_count(capsys):
    code, out = run(capsys, "arr", "regions", "--builtin", "I2:4", "--count")
    assert code == 0 and out.strip() == "8"


def test_rank2_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "rank2", "--m", "4")
    assert code == 0
    assert "observed=[1, 6, 10, 6, 1]" in out
    assert "observed=16" in out
    assert "suite rank2 (I2(4)): PASS" in out


def test_a3_interval_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "a3-interval")
    assert code == 0
    assert "observed=152" in out and "observed=588" in out
    assert "lattice: PASS observed=False" in out


def test_loops_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "loops",
                    "--builtin", "I2:4")
    assert code == 0 and "i2-classes: PASS observed=6" in out


def test_cox_verify_json_deterministic(capsys):
    args = ("cox", "verify", "--type", "I2:4", "--suite", "snap,inv", "--json")
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == 0
    doc1, doc2 = json.loads(out1), json.loads(out2)
    for doc in (doc1, doc2):
        for rep in doc["reports"]:
            for row in rep["checks"]:
                row["seconds"] = 0
    assert doc1 == doc2 and doc1["ok"]


def test_cox_snap_command(capsys):
    code, out = run(capsys, "cox", "snap", "--type", "I2:4", "--elem", "0,1")
    assert code == 0 and "[0, 1, 1]" in out


def test_monoid_interval_json(capsys):
    code, out = run(capsys, "monoid", "interval", "--builtin", "I2:4",
                    "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["elements"] == 24 and doc["lattice"] is True
    assert doc["rank_generating_function"] == [1, 6, 10, 6, 1]


def test_shards_and_salvetti_commands(capsys):
    code, out = run(capsys, "shards", "list", "--builtin", "I2:4")
    assert code == 0 and out.count("shard ") == 6
    code, out = run(capsys, "shards", "order", "--builtin", "I2:3", "--dot")
    assert code == 0 and out.startswith("digraph")
    code, out = run(capsys, "salvetti", "full-twist", "--builtin", "I2:3")
    assert code == 0 and "full twist" in out


def test_usage_errors(capsys):
    # missing arrangement source
    code = main(["verify", "--suite", "loops"])
    assert code == 2
    # unknown suite
    code = main(["verify", "--suite", "nosuch", "--builtin", "I2:4"])
    assert code == 2
    # argparse-level error
    with pytest.raises(SystemExit) as exc:
        main(["cox", "group"])
    assert exc.value.code == 2


def test_dot_output(capsys):
    code, out = run(capsys, "arr", "poset", "--builtin", "I2:3", "--dot")
    assert code == 0 and out.startswith("digraph")
