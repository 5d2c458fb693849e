import math

import numpy as np
import pytest

from thermo_opt.errors import (
    BracketTooWide,
    DepthMismatch,
    EmptyPeriodicSet,
    InsufficientCurve,
    NotMixing,
    ValidationError,
)
from thermo_opt.gibbs import periodic_orbit_measure, product_measure
from thermo_opt.potentials import MatrixCocycle, ScalarPotential, matrix_norm_potential, spectral_radius
from thermo_opt.pressure import (
    asymptotic_slope,
    gurevich_pressure,
    partition_sum,
    pressure_curve,
    pressure_derivative,
    variational_gap,
)
from thermo_opt.shift import full_shift, validate_shift

from conftest import PHI


def test_partition_sum_examples(full2, golden, log23):
    z = partition_sum(full2, ScalarPotential([0, 0]), 3.7, 5, 1)
    assert z.Z == pytest.approx(16)
    assert z.p_n == pytest.approx(0.8 * math.log(2))
    assert partition_sum(full2, log23, 1.0, 3, 1).Z == pytest.approx(50)
    assert partition_sum(golden, ScalarPotential([0, 0]), 1.0, 3, 1).Z == pytest.approx(3)


def test_partition_sum_empty():
    s = validate_shift([[0, 1], [1, 0]])
    with pytest.raises(EmptyPeriodicSet):
        partition_sum(s, ScalarPotential([0, 0]), 1.0, 3, 1)
    # even periods exist, so the failure is the missing mixing witness
    with pytest.raises(NotMixing):
        gurevich_pressure(s, ScalarPotential([0, 0]), 1.0, 5, 1)


def test_partition_sum_no_overflow(full2):
    z = partition_sum(full2, ScalarPotential([0, 1000.0]), 10.0, 12, 1)
    assert math.isfinite(z.log_Z)
    assert z.log_Z == pytest.approx(11 * 10000.0, rel=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 3.0])
def test_full_shift_closed_form(t):
    phi = np.array([0.2, -0.7, 1.1])
    s = full_shift(3)
    est = gurevich_pressure(s, ScalarPotential(phi), t, 12, 2)
    exact = math.log(np.exp(t * phi).sum())
    assert est.point == pytest.approx(exact, abs=1e-10)
    assert est.bracket[0] <= exact <= est.bracket[1]
    assert est.certified


def test_golden_mean_entropy(golden):
    est = gurevich_pressure(golden, ScalarPotential([0, 0]), 1.0, 24, 1)
    assert est.point == pytest.approx(math.log(PHI), abs=1e-6)
    assert est.bracket[0] <= math.log(PHI) <= est.bracket[1]


def test_single_matrix_gelfand():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    est = gurevich_pressure(full_shift(1), matrix_norm_potential(MatrixCocycle([a])), 1.0, 10, 1)
    assert est.point == pytest.approx(math.log(spectral_radius(a)), abs=1e-9)


def test_cocycle_pressure(full2, scalar_mats):
    pot = matrix_norm_potential(scalar_mats)
    for t in (1.0, 2.0):
        est = gurevich_pressure(full2, pot, t, 12, 1)
        assert est.point == pytest.approx(math.log(2 ** t + 3 ** t), abs=1e-10)
        assert est.bracket[0] <= math.log(2 ** t + 3 ** t) <= est.bracket[1]


def test_anchor_independence(golden):
    pot = ScalarPotential([0.3, 1.0])
    a, b = (gurevich_pressure(golden, pot, 1.5, 20, x) for x in (1, 2))
    assert abs(a.point - b.point) <= a.width + b.width
    assert abs(a.point - b.point) < 1e-8


def test_bracket_requires_nmax(full2, log23):
    with pytest.raises(ValidationError):
        gurevich_pressure(full2, log23, 1.0, 3, 1)
    with pytest.raises(ValidationError):
        gurevich_pressure(full2, log23, -1.0, 8, 1)


def test_derivative(full2):
    pot = ScalarPotential([0, math.log(3)])
    d = pressure_derivative(full2, pot, 1.0, 1e-3, n_max=12)
    assert d == pytest.approx(3 * math.log(3) / 4, abs=1e-4)
    c = pressure_derivative(full2, ScalarPotential([0.7, 0.7]), 2.0, 1e-3, n_max=10)
    assert c == pytest.approx(0.7, abs=1e-8)
    with pytest.raises(ValidationError):
        pressure_derivative(full2, pot, 1e-4, 1e-3)


def test_derivative_cocycle(full2, scalar_mats):
    d = pressure_derivative(full2, matrix_norm_potential(scalar_mats), 12.0, 1e-3, n_max=12)
    exact = (2 ** 12 * math.log(2) + 3 ** 12 * math.log(3)) / (2 ** 12 + 3 ** 12)
    assert d == pytest.approx(exact, abs=1e-6)
    assert abs(d - math.log(3)) < 0.01


def test_derivative_too_wide(golden):
    with pytest.raises(BracketTooWide):
        pressure_derivative(golden, ScalarPotential([0, 1]), 1.0, 1e-3, n_max=5, max_error=1e-12)


def test_asymptotic_slope(full2, log23):
    curve = pressure_curve(full2, log23, [10, 20, 30, 40, 50], 12)
    s = asymptotic_slope(curve)
    assert s.value == pytest.approx(math.log(3), abs=1e-6)
    assert s.secants_nondecreasing and s.ratios_nonincreasing
    with pytest.raises(InsufficientCurve):
        asymptotic_slope(curve[:2])


def test_zero_potential_slope(golden):
    s = asymptotic_slope(pressure_curve(golden, ScalarPotential([0, 0]), [1, 10, 100], 20))
    assert s.value == pytest.approx(0, abs=1e-9)
    assert all(r >= 0 for r in s.ratios)


def test_variational_gap(full2, log3, golden):
    zero = ScalarPotential([0, 0])
    assert variational_gap(full2, zero, 1.0, product_measure(full2, [0.5, 0.5], 6), 10) == pytest.approx(0, abs=1e-9)
    fixed = periodic_orbit_measure(full2, (1,), 4)
    assert variational_gap(full2, log3, 1.0, fixed, 10) == pytest.approx(math.log(4), abs=1e-9)
    gibbs = product_measure(full2, [0.25, 0.75], 6)
    assert abs(variational_gap(full2, log3, 1.0, gibbs, 10)) <= 1e-6
    with pytest.raises(DepthMismatch):
        variational_gap(golden, zero, 1.0, gibbs)


def test_scaling_exact(full2, positive_pot):
    a = partition_sum(full2, positive_pot.scaled(2.5), 1.5, 9, 1)
    b = partition_sum(full2, positive_pot, 3.75, 9, 1)
    assert a.log_Z == b.log_Z or a.log_Z == pytest.approx(b.log_Z, rel=1e-15)
