import json

import numpy as np
import pytest

from src.gfq import FqElem
from src.reports import Report, RunConfig, emit, output_path


def test_report_tracks_failures():
    report = Report("demo")
    report.add({"n": 0}, 1, "formula")
    report.add({"n": 1}, 3, "formula+rank", True)
    assert report.passed
    report.add({"n": 2}, 4, "formula+rank", False)
    assert not report.passed
    assert [rec["params"] for rec in report.failures] == [{"n": 2}]


def test_skipped_rows_do_not_fail():
    report = Report("demo")
    report.add({"n": 9}, "skipped: too big", "bruteforce", None)
    assert report.passed
    assert report.records[0]["verified"] is None


def test_cells_are_made_plain(F4):
    report = Report("demo")
    rec = report.add({"q": np.int64(4)}, (np.int64(2), FqElem(F4, 2)), "formula", np.bool_(True))
    assert rec == {"params": {"q": 4}, "value": [2, "g"], "method": "formula", "verified": True}
    assert type(rec["params"]["q"]) is int


def test_extend():
    a, b = Report("a"), Report("b")
    a.add({}, 1, "x")
    b.add({}, 2, "y", False)
    a.extend(b)
    assert len(a.records) == 2 and not a.passed


def test_render_json():
    report = Report("demo")
    report.add({"q": 2, "n": 1}, 3, "formula")
    assert json.loads(report.render("json")) == [
        {"params": {"n": 1, "q": 2}, "value": 3, "method": "formula", "verified": None}]


def test_render_csv():
    report = Report("demo")
    report.add({"q": 2}, [1, 2], "formula", True)
    lines = report.render("csv").splitlines()
    assert lines[0] == "params,value,method,verified"
    assert len(lines) == 2
    assert "formula" in lines[1]


def test_render_text():
    report = Report("demo")
    assert report.render() == "demo: no rows\n"
    report.add({"q": 2}, 3, "formula", True)
    assert report.render().splitlines()[-1] == "PASS"
    report.add({"q": 3}, 4, "formula", False)
    assert report.render().splitlines()[-1] == "FAIL (1 failing rows)"


def test_run_config_rejects_unknown_format():
    with pytest.raises(ValueError):
        RunConfig("hilbert", fmt="xml")
    assert RunConfig("hilbert").caps["brute_force"] > 0


def test_output_path(tmp_path, monkeypatch):
    monkeypatch.setattr("src.reports.OUTPUT_DIR", tmp_path)
    path = output_path("nested/h.csv")
    assert path == tmp_path / "nested" / "h.csv"
    assert path.parent.is_dir()
    absolute = tmp_path / "x.json"
    assert output_path(str(absolute)) == absolute


def test_emit(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr("src.reports.OUTPUT_DIR", tmp_path)
    report = Report("demo")
    report.add({"q": 2}, 3, "formula")
    text = emit(report, RunConfig("hilbert", fmt="json", output="out.json"))
    assert (tmp_path / "out.json").read_text() == text
    assert capsys.readouterr().out == ""
    emit(report, RunConfig("hilbert"))
    assert "demo" in capsys.readouterr().out
