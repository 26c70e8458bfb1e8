"""
Metrics Logger - Tracks command runs, suite results and latency
"""

from __future__ import annotations
from datetime import datetime
from typing import List, Optional
import json


class MetricsLogger:
    """Logs and tracks metrics for monitoring and analysis"""

    def __init__(self):
        """Initialize metrics logger"""
        self.metrics = []

    def log_run(
        self,
        command: str,
        latency: float,
        exit_code: int,
        passed: int = 0,
        failed: int = 0,
        suites: Optional[List[str]] = None,
    ) -> dict:
        """
        Log a command execution

        Args:
            command: CLI command name ("verify", "normalize", ...)
            latency: Run time in seconds
            exit_code: 0 ok, 1 parse error, 2 domain error, 3 verification failure
            passed: Report rows that passed (verify only)
            failed: Report rows that failed (verify only)
            suites: Suites executed (verify only)

        Returns:
            Metric entry as dictionary
        """
        metric = {
            "timestamp": datetime.now().isoformat(),
            "command": command,
            "latency_ms": round(latency * 1000, 2),
            "exit_code": exit_code,
            "status": "ok" if exit_code == 0 else "error",
            "rows_passed": passed,
            "rows_failed": failed,
            "suites": list(suites or []),
        }

        self.metrics.append(metric)
        return metric

    def get_summary(self) -> dict:
        """
        Get summary statistics

        Returns:
            Summary dictionary with aggregated metrics
        """
        if not self.metrics:
            return {
                "total_runs": 0,
                "verify_runs": 0,
                "failed_runs": 0,
                "total_latency_ms": 0.0,
                "avg_latency_ms": 0.0,
                "rows_passed": 0,
                "rows_failed": 0,
            }

        verify_count = sum(1 for m in self.metrics if m["command"] == "verify")
        failed_count = sum(1 for m in self.metrics if m["exit_code"] != 0)
        total_latency = sum(m["latency_ms"] for m in self.metrics)
        rows_passed = sum(m["rows_passed"] for m in self.metrics)
        rows_failed = sum(m["rows_failed"] for m in self.metrics)

        return {
            "total_runs": len(self.metrics),
            "verify_runs": verify_count,
            "failed_runs": failed_count,
            "success_percentage": round((1 - failed_count / len(self.metrics)) * 100, 1),
            "total_latency_ms": round(total_latency, 2),
            "avg_latency_ms": round(total_latency / len(self.metrics), 2),
            "rows_passed": rows_passed,
            "rows_failed": rows_failed,
        }

    def get_suite_comparison(self) -> dict:
        """
        Per-suite latency and outcome of verify runs

        Returns:
            Mapping suite name -> summary
        """
        by_suite = {}
        for m in self.metrics:
            if m["command"] != "verify":
                continue
            for suite in m["suites"]:
                by_suite.setdefault(suite, []).append(m)
        return {suite: self._summarize_metrics(runs) for suite, runs in sorted(by_suite.items())}

    @staticmethod
    def _summarize_metrics(metrics: list) -> dict:
        """Summarize a list of metrics"""
        if not metrics:
            return {"count": 0, "avg_latency": 0, "failures": 0}

        return {
            "count": len(metrics),
            "avg_latency": round(sum(m["latency_ms"] for m in metrics) / len(metrics), 2),
            "failures": sum(1 for m in metrics if m["exit_code"] != 0),
        }

    def get_recent_metrics(self, limit: int = 10) -> list:
        """Get recent metrics"""
        return self.metrics[-limit:]

    def export_metrics(self, filepath: str) -> bool:
        """
        Export metrics to JSON file

        Args:
            filepath: Path to save metrics

        Returns:
            True if successful
        """
        try:
            with open(filepath, "w") as f:
                json.dump(
                    {
                        "metrics": self.metrics,
                        "summary": self.get_summary(),
                        "comparison": self.get_suite_comparison(),
                    },
                    f,
                    indent=2,
                )
            return True
        except OSError as e:
            print(f"Error exporting metrics: {e}")
            return False
