import numpy as np
import pytest
from hydra import compose, initialize_config_dir

from geomech.mechanics.model import MechModel
from geomech.models.catalog import get_entry
from geomech.paths import CONFIG_DIR, MODEL_FILES_DIR
from geomech.symbolic import parse


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def oscillator():
    """Harmonic oscillator with both L and H."""
    return MechModel(["q"], L=parse("0.5*v_q^2 - 0.5*q^2"), H=parse("0.5*p_q^2 + 0.5*q^2"), name="oscillator")


@pytest.fixture
def pendulum():
    return MechModel(["q"], L=parse("0.5*v_q^2 + cos(q)"), H=parse("0.5*p_q^2 - cos(q)"), name="pendulum")


@pytest.fixture
def singular_model():
    return get_entry("singular_two_velocity").model


@pytest.fixture
def model_files():
    return MODEL_FILES_DIR


@pytest.fixture
def make_cfg():
    """Compose a command configuration the way ``@hydra.main`` does."""

    def _compose(name, overrides=()):
        with initialize_config_dir(config_dir=str(CONFIG_DIR), version_base=None):
            return compose(config_name=name, overrides=["progress=false", *overrides])

    return _compose
