import sys

import hydra
from omegaconf import DictConfig

from geomech.estimator.base_estimator import run_or_exit
from geomech.estimator.residual_estimator import ResidualEstimator


@hydra.main(config_path="../configs/configs_cli", config_name="residual", version_base=None)
def residual(cfg: DictConfig):
    """
    Evaluate field equations on grid data and write the per-node residuals.

    Args:
        cfg (DictConfig): Configuration parameters.
    """
    estimator = run_or_exit(lambda: ResidualEstimator(cfg))
    run_or_exit(estimator.residual)


if __name__ == "__main__":
    import traceback
    try:
        residual()
    except Exception:
        traceback.print_exc(file=sys.stderr)
        raise
