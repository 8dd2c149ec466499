import sys

import hydra
from omegaconf import DictConfig

from geomech.estimator.base_estimator import run_or_exit
from geomech.estimator.integration_estimator import IntegrationEstimator


@hydra.main(config_path="../configs/configs_cli", config_name="integrate", version_base=None)
def integrate(cfg: DictConfig):
    """
    Integrate a mechanical model and write its trajectory CSV.

    Args:
        cfg (DictConfig): Configuration parameters.
    """
    estimator = run_or_exit(lambda: IntegrationEstimator(cfg))
    run_or_exit(estimator.integrate)


if __name__ == "__main__":
    import traceback
    try:
        integrate()
    except Exception:
        traceback.print_exc(file=sys.stderr)
        raise
