from app.metrics_logger import MetricsLogger


def test_empty_summary():
    summary = MetricsLogger().get_summary()
    assert summary["total_runs"] == 0
    assert summary["avg_latency_ms"] == 0.0


def test_log_and_summarize():
    metrics = MetricsLogger()
    metrics.log_run("normalize", 0.01, 0)
    metrics.log_run("verify", 0.5, 3, passed=10, failed=2, suites=["xi", "wpatch"])
    metrics.log_run("verify", 0.3, 0, passed=5, suites=["xi"])

    summary = metrics.get_summary()
    assert summary["total_runs"] == 3
    assert summary["verify_runs"] == 2
    assert summary["failed_runs"] == 1
    assert summary["rows_passed"] == 15
    assert summary["rows_failed"] == 2
    assert summary["avg_latency_ms"] == 270.0

    comparison = metrics.get_suite_comparison()
    assert list(comparison) == ["wpatch", "xi"]
    assert comparison["xi"] == {"count": 2, "avg_latency": 400.0, "failures": 1}


def test_recent_metrics():
    metrics = MetricsLogger()
    for n in range(12):
        metrics.log_run("star", 0.001 * n, 0)
    recent = metrics.get_recent_metrics(limit=5)
    assert len(recent) == 5
    assert recent[-1]["latency_ms"] == 11.0


def test_export_failure(tmp_path):
    metrics = MetricsLogger()
    assert not metrics.export_metrics(str(tmp_path / "missing" / "metrics.json"))
    assert metrics.export_metrics(str(tmp_path / "metrics.json"))
