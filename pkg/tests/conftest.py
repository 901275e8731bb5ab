import math

import pytest

from cesarolab import Seed, TailBoundParams


@pytest.fixture
def canonical_params():
    return TailBoundParams(c0=1.0, c1=1.0, c2=1.0, beta=0.5, gamma=1.0, delta=0.75)


@pytest.fixture
def seed():
    return Seed(20260810)


def pooled_se(se_a: float, se_b: float) -> float:
    return math.sqrt(se_a**2 + se_b**2)


def proportion_se(p_hat: float, n: int) -> float:
    return math.sqrt(max(p_hat * (1.0 - p_hat), 1e-12) / n)
