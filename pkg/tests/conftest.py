import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from omsteer import SqueezedField, SystemParams, solve_steady_state, build_drift


@pytest.fixture
def baseline_params():
    """Reference operating point: kappa1=kappa2=0.2, gamma_m=1e-5, g=5e-5,
    J=0.5, Delta1=Delta2=1.8, E=3.0e5 (units of omega_m)."""
    return SystemParams(kappa1=0.2, kappa2=0.2, gamma_m=1e-5, g=5e-5, J=0.5,
                        Delta1=1.8, Delta2=1.8, E=3.0e5)


@pytest.fixture
def vacuum_field():
    return SqueezedField(0.0, 0.0)


@pytest.fixture
def baseline_drift(baseline_params):
    ss = solve_steady_state(baseline_params)
    return build_drift(baseline_params, ss)


def random_stable_params(rng: np.random.Generator, max_tries: int = 200):
    """Draw a parameter set whose drift matrix is safely stable.

    Decay rates are kept moderate so the time-integration oracle converges
    quickly.
    """
    for _ in range(max_tries):
        params = SystemParams(
            kappa1=rng.uniform(0.1, 0.5),
            kappa2=rng.uniform(0.1, 0.5),
            gamma_m=rng.uniform(0.02, 0.2),
            g=10 ** rng.uniform(-5.5, -4.0),
            J=rng.uniform(0.0, 1.0),
            Delta1=rng.uniform(0.5, 2.5),
            Delta2=rng.uniform(0.5, 2.5),
            E=10 ** rng.uniform(4.0, 5.5),
            m_th=rng.uniform(0.0, 2.0),
        )
        ss = solve_steady_state(params)
        m = build_drift(params, ss)
        if np.linalg.eigvals(m).real.max() < -1e-3:
            return params
    raise AssertionError("could not draw a stable parameter set")
