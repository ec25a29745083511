import json

import pytest

from confsphere import verify


@pytest.fixture(scope="module")
def quick_results():
    cfg = verify.RunConfig(quick=True)
    return verify.run_all(cfg)


def test_all_suites_pass_on_correct_build(quick_results):
    for res in quick_results:
        failing = [c for c in res.checks if not c.passed]
        assert not failing, f"{res.name}: {[(c.id, c.measured) for c in failing]}"


def test_every_check_names_its_identity(quick_results):
    for res in quick_results:
        for c in res.checks:
            assert c.identity and c.identity != c.id


def test_report_roundtrip_and_schema(quick_results):
    cfg = verify.RunConfig(quick=True)
    report = verify.build_report(cfg, quick_results)
    assert verify.validate_report(report) == []
    blob = json.loads(json.dumps(report))
    assert blob["all_passed"] is True
    assert [s["name"] for s in blob["suites"]] == list(verify.SUITE_NAMES)


def test_schema_validator_catches_problems(quick_results):
    cfg = verify.RunConfig(quick=True)
    report = verify.build_report(cfg, quick_results)
    bad = json.loads(json.dumps(report))
    del bad["all_passed"]
    bad["suites"][0]["checks"][0]["identity"] = ""
    problems = verify.validate_report(bad)
    assert any("all_passed" in p for p in problems)
    assert any("empty identity" in p for p in problems)


def test_fault_injection_breaks_only_residues():
    cfg = verify.RunConfig(quick=True, fault_inject=True)
    res = verify.run_suite("residues", cfg)
    assert not res.passed
    bad = [c.id for c in res.checks if not c.passed]
    assert bad == ["res-operator"]
    geo = verify.run_suite("geometry", cfg)
    assert geo.passed


def test_unknown_suite_rejected():
    with pytest.raises(ValueError, match="unknown suite"):
        verify.run_suite("nope", verify.RunConfig(quick=True))
