import json

import pytest

from app import build_parser, config_from_args, main


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_hilbert(capsys):
    code, rows = run_json(capsys, "hilbert", "--q", "2", "--r", "2", "--n", "3")
    assert code == 0
    assert [row["value"] for row in rows] == [1, 3, 5, 7]
    assert all(row["method"] == "formula" for row in rows)


def test_hilbert_verified(capsys):
    code, rows = run_json(capsys, "hilbert", "--q", "3", "--r", "2", "--n", "2", "--verify")
    assert code == 0
    assert [row["verified"] for row in rows] == [True, True, True]


@pytest.mark.parametrize("variety, m, expected", [("Q", 2, 5), ("P", 2, 5), ("B", 2, 5), ("Omega", 3, 6)])
def test_count_points_verified(capsys, variety, m, expected):
    code, rows = run_json(capsys, "count-points", "--variety", variety, "--q", "2", "--r", "2",
                          "--m", str(m), "--verify")
    assert code == 0
    formula = [row for row in rows if row["method"] == "formula" and "stratum_dim" not in row["params"]]
    assert formula[0]["value"] == expected
    assert all(row["verified"] is not False for row in rows)


def test_count_points_strata(capsys):
    code, rows = run_json(capsys, "count-points", "--q", "2", "--r", "3", "--m", "1")
    assert code == 0
    by_dim = {row["params"]["stratum_dim"]: row["value"] for row in rows if "stratum_dim" in row["params"]}
    assert by_dim == {1: 7, 2: 0, 3: 0}


def test_unknown_suite_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2


@pytest.mark.parametrize("command", ["hilbert", "count-points", "cohomology"])
def test_bad_field_size(capsys, command):
    assert main([command, "--q", "6"]) == 1
    assert "error:" in capsys.readouterr().err


def test_verify_relations(capsys):
    assert main(["verify", "relations", "--q", "2", "--r", "2"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_weights(capsys):
    code, rows = run_json(capsys, "weights", "--q", "2", "--r", "3")
    assert code == 0
    regular = {row["params"]["case"]: row["value"]["regular"] for row in rows}
    assert regular["a"] and not regular["b"]


def test_cohomology(capsys):
    code, rows = run_json(capsys, "cohomology", "--q", "2", "--r", "2", "--n", "2", "--verify")
    assert code == 0
    h1 = {row["params"]["n"]: row["value"] for row in rows
          if row["method"] == "formula" and row["params"]["i"] == 1}
    assert h1[-1] == 1 and h1[-2] == 3 and h1[2] == 0


def test_invariants(capsys):
    code, rows = run_json(capsys, "invariants", "--q", "2", "--r", "2", "--which", "U", "--n", "3")
    assert code == 0
    assert [row["value"] for row in rows] == [1, 2, 3, 4]


def test_output_file(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr("src.reports.OUTPUT_DIR", tmp_path)
    assert main(["hilbert", "--q", "2", "--r", "2", "--n", "1", "--format", "csv", "--output", "h.csv"]) == 0
    assert capsys.readouterr().out == ""
    assert (tmp_path / "h.csv").read_text().splitlines()[0] == "params,value,method,verified"


def test_caps_and_seed_from_args():
    args = build_parser().parse_args(["verify", "strata", "--cap-brute-force", "10", "--seed", "7"])
    cfg = config_from_args(args)
    assert cfg.caps["brute_force"] == 10
    assert cfg.seed == 7
    assert cfg.suite == "strata"


@pytest.mark.parametrize("argv, expected", [
    (["count-points", "--variety", "B", "--q", "2", "--r", "3", "--m", "1"], 21),
    (["count-points", "--variety", "Q", "--q", "2", "--r", "2", "--m", "1"], 3),
    (["count-points", "--variety", "Omega", "--q", "2", "--r", "2", "--m", "2"], 2),
])
def test_count_points_totals(capsys, argv, expected):
    code, rows = run_json(capsys, *argv)
    assert code == 0
    assert rows[-1]["value"] == expected


def test_hilbert_rank_one_is_constant(capsys):
    code, rows = run_json(capsys, "hilbert", "--q", "3", "--r", "1", "--n", "4")
    assert code == 0
    assert {row["value"] for row in rows} == {1}
