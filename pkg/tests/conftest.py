"""Shared fixtures and helpers."""

import numpy as np
import pytest

from epscan import model


@pytest.fixture(scope="session")
def base_params():
    """Standard working point: Omega = 1, theta = pi/40, omega_r = 1.07."""
    return model.SystemParams.from_angle(1.0, np.pi / 40.0, omega_r=1.07)


def greedy_match_dev(a, b):
    """Largest pairing distance between two equal-size eigenvalue multisets."""
    rem = list(np.asarray(b, dtype=complex))
    worst = 0.0
    for x in np.asarray(a, dtype=complex):
        k = int(np.argmin(np.abs(np.array(rem) - x)))
        worst = max(worst, abs(rem.pop(k) - x))
    return worst
