from geomech.estimator.base_estimator import BaseEstimator
from geomech.eval.suites import run_suites


class CheckEstimator(BaseEstimator):
    """Runs the property suites and writes the JSON report."""
    command = "check"
    needs_model = False

    def check(self):
        """
        Run the configured suites.

        Returns:
            CheckReport: Report with one entry per property.
        """
        report = run_suites(self.args.suite, int(self.args.trials), int(self.args.seed), bool(self.args.progress))
        path = report.write(self.output_path("report", "check_report.json"))
        self.emit(report.lines() + [f"report: {path}"])
        return report
