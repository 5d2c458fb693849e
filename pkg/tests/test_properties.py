import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermo_opt.potentials import MatrixCocycle, ScalarPotential, matrix_norm_potential
from thermo_opt.pressure import gurevich_pressure, pressure_curve
from thermo_opt.shift import full_shift, golden_mean_shift
from thermo_opt.zerotemp import check_monotonicities, run_path

from conftest import convexity_defects, random_positive_models, random_scalar_models

TEMPS = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0)
weights = st.lists(st.floats(-2, 2), min_size=2, max_size=2)


@pytest.mark.parametrize("shift,pot", random_scalar_models(7) + random_positive_models(11))
def test_pressure_convex(shift, pot):
    curve = pressure_curve(shift, pot, TEMPS, 12)
    for dd, allowed in convexity_defects(curve):
        assert dd >= allowed


@settings(max_examples=15, deadline=None)
@given(weights)
def test_pressure_convex_hypothesis(w):
    curve = pressure_curve(full_shift(2), ScalarPotential(w), TEMPS, 10)
    for dd, allowed in convexity_defects(curve):
        assert dd >= allowed - 1e-9


@pytest.mark.parametrize("shift,pot", random_scalar_models(3, 3) + random_positive_models(5, 2))
def test_energy_nondecreasing(shift, pot):
    path = run_path(shift, pot, (1, 2, 4, 8, 16), depth=5)
    checks = {c.name: c for c in check_monotonicities(path)}
    assert checks["energy_nondecreasing"].passed
    assert checks["entropy_nonincreasing"].passed


@settings(max_examples=10, deadline=None)
@given(weights, st.sampled_from([0.5, 1.0, 2.0]))
def test_anchor_independence(w, t):
    shift = golden_mean_shift()
    pot = ScalarPotential(w)
    a = gurevich_pressure(shift, pot, t, 16, 1)
    b = gurevich_pressure(shift, pot, t, 16, 2)
    assert abs(a.point - b.point) <= a.width + b.width + 1e-12
    assert max(a.bracket[0], b.bracket[0]) <= min(a.bracket[1], b.bracket[1]) + 1e-12


@settings(max_examples=10, deadline=None)
@given(weights, st.floats(0.25, 4.0), st.sampled_from([0.5, 1.0, 3.0]))
def test_scalar_scaling_homogeneity(w, c, t):
    # P(t, c phi) = P(c t, phi): the partition sums are identical
    shift = full_shift(2)
    a = gurevich_pressure(shift, ScalarPotential(np.asarray(w) * c), t, 10)
    b = gurevich_pressure(shift, ScalarPotential(w), c * t, 10)
    assert a.point == pytest.approx(b.point, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("c", [0.5, 2.0, 3.0])
def test_matrix_scaling_homogeneity(positive_pair, c):
    # ||c A_w|| = c^n ||A_w||, so P(t) shifts by t log c
    shift = full_shift(2)
    base = matrix_norm_potential(positive_pair)
    scaled = matrix_norm_potential(MatrixCocycle(c * positive_pair.matrices))
    for t in (1.0, 2.0):
        a = gurevich_pressure(shift, base, t, 12)
        b = gurevich_pressure(shift, scaled, t, 12)
        assert b.point == pytest.approx(a.point + t * math.log(c), abs=1e-10)
        for n in range(1, 13):
            assert b.samples[n - 1][1] == pytest.approx(a.samples[n - 1][1] + n * t * math.log(c), abs=1e-9)


def test_potential_scaled_equals_scaled_weights(log23):
    shift = full_shift(2)
    a = gurevich_pressure(shift, log23.scaled(2.0), 1.5, 10)
    b = gurevich_pressure(shift, log23, 3.0, 10)
    assert a.point == pytest.approx(b.point, rel=1e-13)
