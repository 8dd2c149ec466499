import json

import numpy as np
import pytest

from geomech.errors import ConvergenceError, OptionError
from geomech.eval.eval_utils import CheckReport, exact, measure
from geomech.eval.suites import SUITES, run_suites


class TestResults:
    def test_measure(self):
        result = measure("gap", 1e-10, lambda: (np.float64(1e-12), {"n": np.int64(3)}))
        assert result.passed
        assert result.max_deviation == 1e-12
        assert result.details == {"n": 3}
        assert not measure("gap", 1e-10, lambda: (1e-6, {})).passed

    def test_measure_at_least(self):
        assert measure("slope", 1.9, lambda: (2.01, {}), at_least=True).passed
        assert not measure("slope", 1.9, lambda: (1.2, {}), at_least=True).passed

    def test_engine_errors_fail_the_property(self):
        def boom():
            raise ConvergenceError(5, 1.0)

        result = measure("newton", 1e-10, boom)
        assert not result.passed
        assert result.max_deviation == float("inf")
        assert "did not converge" in result.details["error"]

    def test_exact(self):
        assert exact("formula", True).max_deviation == 0.0
        assert not exact("formula", False).passed


class TestReport:
    def _report(self):
        report = CheckReport(seed=0, trials=2)
        report.suites["bundles"] = [exact("a", True), measure("b", 1e-10, lambda: (1e-3, {"arr": np.ones(2)}))]
        return report

    def test_summary(self):
        report = self._report()
        assert not report.passed
        lines = report.lines()
        assert lines[0].startswith("PASS bundles/a")
        assert lines[1].startswith("FAIL bundles/b")
        assert lines[-1] == "FAIL"

    def test_json(self, tmp_path):
        payload = json.loads(self._report().write(tmp_path / "nested" / "report.json").read_text())
        assert payload["schema_version"] == 1
        assert payload["passed"] is False
        assert payload["suites"]["bundles"][1]["details"] == {"arr": [1.0, 1.0]}


class TestSuites:
    def test_unknown_suite(self):
        with pytest.raises(OptionError, match="Unknown suite"):
            run_suites("optics")

    @pytest.mark.parametrize("suite", ["bundles", "theorem1"])
    def test_fast_suites_pass(self, suite):
        report = run_suites(suite, trials=5, seed=3)
        failed = [r for r in report.suites[suite] if not r.passed]
        assert failed == []
        assert report.passed

    def test_theorem1_checks_the_degenerate_cases_exactly(self):
        results = {r.name: r for r in run_suites("theorem1", trials=4, seed=1).suites["theorem1"]}
        assert results["identity_w_zero"].passed
        assert results["identity_w_zero"].max_deviation <= 1e-14
        assert results["minus_r_w_full"].passed
        assert results["minus_r_w_full"].max_deviation <= 1e-10

    def test_suites_are_reproducible(self):
        first = run_suites("theorem1", trials=3, seed=7).to_dict()
        second = run_suites("theorem1", trials=3, seed=7).to_dict()
        assert first == second

    def test_registry(self):
        assert list(SUITES) == ["bundles", "theorem1", "mechanics", "field", "models"]
