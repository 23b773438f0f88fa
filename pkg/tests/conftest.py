import math

import numpy as np
import pytest

from dimerfluor import SystemParams
from dimerfluor.params import FIGURE_GAMMA12


def make_params(big_r=1000.0, beta=math.pi / 4, omega=0.0, delta=0.0, gamma12=FIGURE_GAMMA12,
                **kw):
    return SystemParams.from_beta(big_r, beta, omega_drive=omega, delta_laser=delta,
                                  gamma12=gamma12, **kw)


def random_params(rng, big_r=(5.0, 500.0), omega_rel=(0.01, 1.5), delta_rel=(-1.5, 1.5)):
    """A random physically valid parameter set (gamma = 1)."""
    r = rng.uniform(*big_r)
    return make_params(
        big_r=r,
        beta=rng.uniform(0.0, math.pi / 2),
        omega=r * rng.uniform(*omega_rel),
        delta=r * rng.uniform(*delta_rel),
        gamma12=rng.uniform(0.0, 0.99),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig3_point():
    return make_params(omega=100.0)
