import logging
import sys
import uuid
from pathlib import Path

from geomech.data.model_file import load_model_file
from geomech.errors import GeomechError, ModelFileError
from geomech.mechanics.dynamics import ProbeConfig
from geomech.models.catalog import get_entry
from geomech.numerics.newton import NewtonConfig
from geomech.paths import OUTPUT_FOLDER

log = logging.getLogger(__name__)


class BaseEstimator:
    """Common set-up of the command estimators."""
    command = "run"
    needs_model = True

    def __init__(self, args):
        """
        Initialize the estimator.

        Args:
            args (DictConfig): Composed command configuration.
        """
        self.args = args
        self.unique_id = str(uuid.uuid4())
        self.output_dir = OUTPUT_FOLDER / self.command / self.unique_id
        self.model, self.grid = None, None
        if self.needs_model:
            log.info("Initialize model...")
            self.init_model()
        self.init_solvers()

    def init_model(self):
        """Select the model from ``model_file`` or the catalog name ``model``."""
        path, name = self.args.get("model_file"), self.args.get("model")
        if path:
            parsed = load_model_file(path)
            self.model, self.grid = parsed.model, parsed.grid
        elif name:
            try:
                self.model = get_entry(name).model
            except ValueError as err:
                raise ModelFileError(str(err)) from err
        else:
            raise ModelFileError("no model selected: set model=<name> or model_file=<path>")
        log.info("model '%s' loaded", self.model.name)

    def init_solvers(self):
        self.newton_cfg = NewtonConfig.from_config(self.args.newton, tol=self.args.get("tol"))
        self.probe = ProbeConfig.from_config(self.args.probe, seed=self.args.get("seed"))

    def output_path(self, key, default_name):
        """Explicit path from ``args[key]``, else a file in the run folder."""
        explicit = self.args.get(key)
        if explicit:
            return Path(explicit)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / default_name

    @staticmethod
    def emit(lines):
        for line in lines:
            print(line)


def run_or_exit(action):
    """Run a command; engine errors print their report to stderr and exit with their code."""
    try:
        return action()
    except GeomechError as err:
        print(err.report(), file=sys.stderr)
        sys.exit(err.exit_code)
