import sys

import hydra
from omegaconf import DictConfig

from geomech.estimator.base_estimator import run_or_exit
from geomech.estimator.hamiltonize_estimator import HamiltonizeEstimator


@hydra.main(config_path="../configs/configs_cli", config_name="hamiltonize", version_base=None)
def hamiltonize(cfg: DictConfig):
    """
    Print the Hamiltonian of a Lagrangian model or its generating family.

    Args:
        cfg (DictConfig): Configuration parameters.
    """
    estimator = run_or_exit(lambda: HamiltonizeEstimator(cfg))
    run_or_exit(estimator.hamiltonize)


if __name__ == "__main__":
    import traceback
    try:
        hamiltonize()
    except Exception:
        traceback.print_exc(file=sys.stderr)
        raise
