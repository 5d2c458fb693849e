import math
from pathlib import Path

import numpy as np
import pytest

from thermo_opt.potentials import MatrixCocycle, ScalarPotential, matrix_norm_potential
from thermo_opt.shift import full_shift, golden_mean_shift

MODELS = Path(__file__).resolve().parent.parent / "models"

POSITIVE_PAIR = [[[2, 1], [1, 1]], [[1, 1], [1, 2]]]
GOLDEN_PAIR = [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]
PHI = (1 + math.sqrt(5)) / 2


@pytest.fixture
def full2():
    return full_shift(2)


@pytest.fixture
def golden():
    return golden_mean_shift()


@pytest.fixture
def log23():
    return ScalarPotential([math.log(2), math.log(3)])


@pytest.fixture
def log3():
    return ScalarPotential([0.0, math.log(3)])


@pytest.fixture
def positive_pair():
    return MatrixCocycle(POSITIVE_PAIR)


@pytest.fixture
def positive_pot(positive_pair):
    return matrix_norm_potential(positive_pair)


@pytest.fixture
def scalar_mats():
    return MatrixCocycle([2 * np.eye(2), 3 * np.eye(2)])


def random_scalar_models(seed, count=5):
    """Random scalar potentials on random mixing shifts (full 2/3-shift or golden mean)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        shift = (full_shift(2), full_shift(3), golden_mean_shift())[i % 3]
        out.append((shift, ScalarPotential(rng.uniform(-1.0, 1.0, shift.alphabet_size))))
    return out


def random_positive_models(seed, count=3):
    rng = np.random.default_rng(seed)
    return [(full_shift(2), matrix_norm_potential(MatrixCocycle(rng.uniform(0.2, 2.0, (2, 2, 2)))))
            for _ in range(count)]


def convexity_defects(points):
    """Second divided differences of ``(t, estimate)`` pairs plus 3x the local bracket width."""
    out = []
    for (t0, a), (t1, b), (t2, c) in zip(points, points[1:], points[2:]):
        dd = ((c.point - b.point) / (t2 - t1) - (b.point - a.point) / (t1 - t0)) / ((t2 - t0) / 2)
        width = max(a.width, b.width, c.width)
        out.append((dd, -3 * width))
    return out
