import sys

import hydra
from omegaconf import DictConfig

from geomech.estimator.base_estimator import run_or_exit
from geomech.estimator.check_estimator import CheckEstimator


@hydra.main(config_path="../configs/configs_cli", config_name="check", version_base=None)
def check(cfg: DictConfig):
    """
    Run the property suites; the exit status is 0 only when every property passes.

    Args:
        cfg (DictConfig): Configuration parameters.
    """
    estimator = run_or_exit(lambda: CheckEstimator(cfg))
    report = run_or_exit(estimator.check)
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":
    import traceback
    try:
        check()
    except Exception:
        traceback.print_exc(file=sys.stderr)
        raise
