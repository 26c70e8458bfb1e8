import json

import pytest

from app.errors import UnknownSuite
from app.settings import Settings
from app.suite_orchestrator import (
    SUITES,
    SampleSizes,
    SuiteOrchestrator,
    basis_monomials,
    format_report,
    integration_suite,
    pseudodiff_suite,
    run_command,
    select_suites,
    verify_suites,
    vfields_suite,
)
from app.zalgebra import FuncMonomial


def test_basis_monomials():
    assert basis_monomials(1) == [FuncMonomial(0, 0, 0), FuncMonomial(0, 0, 1), FuncMonomial(0, 1, 0), FuncMonomial(1, 0, 0)]
    assert FuncMonomial(1, 1, 1) not in basis_monomials(3)


def test_select_suites():
    assert select_suites("all") == list(SUITES)
    assert select_suites("xi, wpatch") == ["xi", "wpatch"]
    with pytest.raises(UnknownSuite):
        select_suites("xi,nope")
    with pytest.raises(UnknownSuite):
        select_suites(",")


SMALL = SampleSizes(words=20, triples=3)


@pytest.mark.parametrize("suite", list(SUITES))
def test_every_suite_passes(suite):
    report = verify_suites(suite, seed=5, max_degree=2, sizes=SMALL)
    failures = [row for s in report["suites"] for row in s["rows"] if row["status"] == "fail"]
    assert not failures
    assert report["passed"] > 0


def test_reports_are_deterministic():
    first = verify_suites("zalgebra", seed=9, max_degree=2, sizes=SMALL)
    assert verify_suites("zalgebra", seed=9, max_degree=2, sizes=SMALL) == first


def test_format_report():
    report = {
        "suites": [
            {
                "suite": "xi",
                "passed": 1,
                "failed": 1,
                "skipped": 0,
                "rows": [
                    {"identity": "a", "anchor": "x", "status": "pass", "counterexample": None},
                    {"identity": "b", "anchor": "x", "status": "fail", "counterexample": "q"},
                ],
            }
        ],
        "passed": 1,
        "failed": 1,
        "skipped": 0,
    }
    text = format_report(report)
    assert "[FAIL] b" in text
    assert "counterexample: q" in text
    assert text.endswith("total: 1 passed, 1 failed, 0 skipped")


def test_run_command_arity_and_errors():
    code, output = run_command("mul", ["z"], {"format": "json"})
    assert code == 2
    assert "expects 2" in json.loads(output)["error"]["message"]
    code, output = run_command("act", ["z", "z"])
    assert code == 2
    assert output.startswith("error: DomainError")


def test_run_command_integrate_plane():
    code, output = run_command("integrate", ["rhoi^4"], {"domain": "plane"})
    assert code == 0
    assert output == "1/(q^4 + q^2 + 1)"


def test_orchestrator_records_metrics():
    orchestrator = SuiteOrchestrator(Settings(seed=3, max_degree=2))
    result = orchestrator.verify("wpatch")
    assert result["exit_code"] == 0
    assert result["result"]["seed"] == 3
    orchestrator.process_command("star", ["z"])
    stats = orchestrator.get_orchestrator_stats()
    assert stats["summary"]["total_runs"] == 2
    assert stats["suite_comparison"]["wpatch"]["count"] == 1


def test_sample_sizes_default():
    assert SampleSizes() == (500, 50)
    report = verify_suites("poisson", seed=2, max_degree=1, sizes=SMALL)
    assert (report["words"], report["triples"]) == (20, 3)


def test_dispatch_reads_sample_size_flags():
    code, output = run_command("verify", [], {"format": "json", "suite": "suq2", "words": 7, "max_degree": 1})
    assert code == 0
    assert json.loads(output)["result"]["words"] == 7


def test_vfields_suite_covers_every_action_value():
    identities = [row["identity"] for row in vfields_suite(1, 1, SMALL)]
    for action in ("Zp|>z", "Zp|>zb", "H|>z", "H|>zb", "Zm|>z", "Zm|>zb"):
        assert any(identity.startswith(action + " = ") for identity in identities), action


def test_pseudodiff_suite_checks_inverses_to_degree_eight():
    rows = pseudodiff_suite(0, 5, SMALL)
    inverses = [row for row in rows if row["anchor"] == "B, C, D inverses"]
    assert {row["identity"].split(" on ")[0] for row in inverses} == {"B B^-1 = id", "C C^-1 = id", "D D^-1 = id"}
    assert any(row["identity"].endswith("z^8") for row in inverses)
    assert all(row["status"] == "pass" for row in rows)


def test_integration_suite_reports_skipped_pairs():
    rows = integration_suite(0, 2, SMALL)
    skipped = [row for row in rows if row["status"] == "skipped"]
    assert skipped
    assert all(row["counterexample"] is None for row in skipped)
    assert not [row for row in rows if row["status"] == "fail"]
    assert any("rhoi^8" in row["identity"] for row in rows if row["identity"].startswith("<Zp|>"))
