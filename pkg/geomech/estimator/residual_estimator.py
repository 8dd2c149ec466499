from geomech.data.grid_io import read_section, write_residual_csv
from geomech.errors import ModelFileError, ModelValidationError, ShapeMismatchError
from geomech.estimator.base_estimator import BaseEstimator
from geomech.field.model import FieldModel
from geomech.field.residual import pde_residual


class ResidualEstimator(BaseEstimator):
    """Evaluates field equations on grid data and writes the per-node residuals."""
    command = "residual"

    def init_model(self):
        super().init_model()
        if not isinstance(self.model, FieldModel):
            raise ModelValidationError(f"residual needs a field model, '{self.model.name}' is a mechanics model")

    def init_section(self):
        path = self.args.get("field_data")
        if not path:
            raise ModelFileError("residual needs field_data=<path to .csv or .npz>")
        self.section = read_section(path)
        if self.grid is not None and tuple(self.grid.dims) != self.section.dims:
            raise ShapeMismatchError(f"grid data has dims {self.section.dims}, model file declares {self.grid.dims}")

    def residual(self):
        """
        Compute the residual report, write the CSV and print the maximum.

        Returns:
            ResidualReport: Per-node residuals.
        """
        self.init_section()
        report = pde_residual(self.model, self.section, self.args.which)
        out = write_residual_csv(report, self.output_path("out", "residual.csv"))
        lines = [f"# {report.which} residual"] + report.equations
        lines += [f"max residual: {report.max_abs:.3e}", f"per-node residuals: {out}"]
        self.emit(lines)
        return report
