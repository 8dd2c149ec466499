import sys

import hydra
from omegaconf import DictConfig

from geomech.estimator.base_estimator import run_or_exit
from geomech.estimator.derivation_estimator import DerivationEstimator


@hydra.main(config_path="../configs/configs_cli", config_name="derive", version_base=None)
def derive(cfg: DictConfig):
    """
    Print the phase dynamics, Euler-Lagrange equations and Legendre map of a model.

    Args:
        cfg (DictConfig): Configuration parameters.
    """
    estimator = run_or_exit(lambda: DerivationEstimator(cfg))
    run_or_exit(estimator.derive)


if __name__ == "__main__":
    import traceback
    try:
        derive()
    except Exception:
        traceback.print_exc(file=sys.stderr)
        raise
