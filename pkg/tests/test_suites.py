import pytest

from config import VERIFY_SUITES
from src.errors import InfeasibleError
from src.reports import RunConfig
from src.suites import VerificationRunner


def runner(**kwargs):
    return VerificationRunner(RunConfig("verify", **kwargs))


def test_relations_single_grid_point():
    report = runner(q=2, r=2).run("relations")
    assert len(report.records) == 1
    assert report.records[0]["params"] == {"q": 2, "r": 2}
    assert report.passed


def test_cohomology_identity_suite():
    report = runner(q=3, r=3, n=10).run("cohomology-identity")
    assert report.passed
    assert report.records[0]["value"] == {"n_max": 10, "witness": []}


def test_unknown_suite():
    with pytest.raises(ValueError):
        runner().run("nope")


def test_crashing_check_becomes_failed_row(monkeypatch):
    def boom(r, q, n):
        raise RuntimeError("boom")
    monkeypatch.setattr("src.suites.cohomology_identity", boom)
    report = runner(q=2, r=2).run("cohomology-identity")
    assert not report.passed
    assert report.records[0]["value"] == "RuntimeError: boom"


def test_infeasible_check_is_skipped(monkeypatch):
    def too_big(r, q, n):
        raise InfeasibleError("over the cap")
    monkeypatch.setattr("src.suites.cohomology_identity", too_big)
    report = runner(q=2, r=2).run("cohomology-identity")
    assert report.passed
    assert report.records[0]["verified"] is None
    assert report.records[0]["value"].startswith("skipped")


@pytest.mark.parametrize("suite", ["strata", "charts", "strange-maps", "boundary-orders"])
def test_small_geometric_suites(suite):
    report = runner(q=2, r=2, m=2).run(suite)
    assert report.records
    assert report.passed, report.failures


@pytest.mark.parametrize("suite", ["freeness", "invariants", "dickson", "dualizing"])
def test_small_algebraic_suites(suite):
    report = runner(q=2, r=2, n=3).run(suite)
    assert report.records
    assert report.passed, report.failures


def test_singular_locus_rank_two():
    report = runner(q=2, r=2, m=2).run("singular-locus")
    assert report.records and report.passed


@pytest.mark.slow
def test_run_all_default_grids():
    report = runner().run_all()
    assert {rec["method"] for rec in report.records}
    assert report.passed, report.failures[:3]


def test_suite_names_are_runnable():
    for suite in VERIFY_SUITES:
        assert hasattr(VerificationRunner, "suite_" + suite.replace("-", "_"))
