"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` to see the lines; they are shown
even when output capture is on.
"""

import math
import time

import numpy as np
import pytest

from thermo_opt.cli import main
from thermo_opt.gibbs import cesaro_invariantize, gibbs_certificate, nu_weights, reference_energy, tightness_bound
from thermo_opt.jsr import brute_force_jsr, periodic_lower_bound, thermo_jsr
from thermo_opt.potentials import (
    GeometricMatrixFamily,
    MatrixCocycle,
    ScalarPotential,
    SingularValuePotential,
    matrix_norm_potential,
)
from thermo_opt.pressure import gurevich_pressure, pressure_curve
from thermo_opt.shift import countable_full_shift, iter_word_blocks, truncate
from thermo_opt.zerotemp import check_monotonicities, run_path

from conftest import GOLDEN_PAIR, MODELS, PHI, POSITIVE_PAIR, convexity_defects, random_positive_models, random_scalar_models


@pytest.fixture
def report(capsys):
    def emit(label, passed, detail):
        with capsys.disabled():
            print("\n%s %s: %s" % ("PASS" if passed else "FAIL", label, detail))
        return passed

    return emit


def test_ac1_closed_form_pressure(report, full2, log23):
    start = time.perf_counter()
    errs, inside = [], True
    for t in (1, 2, 4):
        est = gurevich_pressure(full2, log23, t, 14)
        exact = math.log(2.0 ** t + 3.0 ** t)
        errs.append(abs(est.point - exact))
        inside &= est.bracket[0] <= exact <= est.bracket[1] and est.certified
    elapsed = time.perf_counter() - start
    ok = max(errs) <= 1e-8 and inside and elapsed < 1.0
    assert report("AC1 closed-form pressure", ok,
                  "max error %.3e (tol 1e-8), bracket contains exact: %s, %.3f s (< 1 s)" % (max(errs), inside, elapsed))


def test_ac2_topological_entropy(report, golden):
    start = time.perf_counter()
    est = gurevich_pressure(golden, ScalarPotential([0.0, 0.0]), 1.0, 24)
    elapsed = time.perf_counter() - start
    err = abs(est.point - math.log(PHI))
    ok = err <= 1e-6 and elapsed < 5.0
    assert report("AC2 topological entropy", ok, "error %.3e (tol 1e-6), %.3f s (< 5 s)" % (err, elapsed))


def test_ac3_maximising_measure(report, full2, log3):
    path = run_path(full2, log3, (1, 2, 4, 8, 16, 32), depth=8, horizon=8)
    last = path[-1]
    err = abs(last.energy - math.log(3))
    mass = last.measure.weight((2,) * 8)
    h = [r.entropy_rate for r in path]
    slack = max([0.0] + [b - a for a, b in zip(h, h[1:])])
    ok = last.t == 32 and err <= 1e-3 and mass >= 0.999 and slack <= 1e-9
    assert report("AC3 maximising measure", ok,
                  "energy error %.3e (tol 1e-3), all-2 mass %.6f (>= 0.999), entropy slack %.1e (<= 1e-9)"
                  % (err, mass, slack))


def test_ac4_gibbs_certificate(report, full2, positive_pot):
    start = time.perf_counter()
    lines, ok = [], True
    for t in (1, 2, 4):
        pr = gurevich_pressure(full2, positive_pot, t, 14)
        mu = cesaro_invariantize(nu_weights(full2, positive_pot, t, 16), 8, 8)
        c = gibbs_certificate(full2, positive_pot, t, 8, pr, mu)
        good = c.certified and c.log_max_ratio <= c.log_upper_bound and c.observed_min_ratio > 0
        ok &= good
        lines.append("t=%g max %.4g <= %.4g, min %.4g" % (t, c.observed_max_ratio, c.upper_bound, c.observed_min_ratio))
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30
    assert report("AC4 Gibbs certificate", ok, "; ".join(lines) + "; %.2f s (< 30 s)" % elapsed)


def test_ac5_jsr_ordering(report, positive_pair, scalar_mats):
    start = time.perf_counter()
    r = thermo_jsr(positive_pair, max_period=8)
    oracle = brute_force_jsr(positive_pair, n_max=12)
    elapsed = time.perf_counter() - start
    order = r.periodic_lower <= r.thermo <= oracle.upper
    gap = abs(r.thermo - oracle.estimate)
    s = thermo_jsr(scalar_mats)
    ok = order and gap <= 2e-2 and abs(s.thermo - 3) <= 1e-3 and elapsed < 60
    assert report("AC5 JSR ordering", ok,
                  "%.9f <= %.9f <= %.6f, |thermo - brute oracle| %.2e (tol 2e-2), {2I,3I} %.9f, %.2f s (< 60 s)"
                  % (r.periodic_lower, r.thermo, oracle.upper, gap, s.thermo, elapsed))


def test_ac6_golden_pair(report):
    cocycle = MatrixCocycle(GOLDEN_PAIR)
    per = periodic_lower_bound(cocycle, max_period=2)
    rho = brute_force_jsr(cocycle, n_max=12).values[-1]
    thermo = thermo_jsr(cocycle, schedule=(1, 2, 4, 8, 16))
    ok = abs(per.value - PHI) <= 1e-9 and 1.618 <= rho <= 1.80
    assert report("AC6 golden-ratio pair", ok,
                  "periodic %.12f (word %s), brute rho_12 %.4f in [1.618, 1.80], thermo %.6f (diagnostic, C=%.3f empirical)"
                  % (per.value, per.word, rho, thermo.thermo, matrix_norm_potential(cocycle).C))


def test_ac7_tightness(report):
    level, J = 10, 5
    family = GeometricMatrixFamily(np.array([[2.0, 1.0], [1.0, 1.0]]), 0.5)
    shift = truncate(countable_full_shift(), [level]).shifts[-1]
    pot = matrix_norm_potential(family.cocycle(level), shift, 3)
    schedule = (1, 2, 4, 8)
    path = run_path(shift, pot, schedule, depth=2, J=J, n_max=5, horizon=2)
    pr = gurevich_pressure(shift, pot, 1.0, 5)
    mu = cesaro_invariantize(nu_weights(shift, pot, 1.0, 4), 2, 2)
    log_d = gibbs_certificate(shift, pot, 1.0, 2, pr, mu, summability=family.summability()).log_D
    I, _ = reference_energy(shift, pot)
    ok, lines = True, []
    masses = [r.tail_mass for r in path]
    for r in path:
        bound = tightness_bound(r.t, log_d, pot.C, pot.M, I, family.sup_f1(level), J, family.tail())
        ok &= r.tail_mass <= bound
        lines.append("t=%g %.3e <= %.3e" % (r.t, r.tail_mass, bound))
    mono = all(b <= a + 1e-15 for a, b in zip(masses, masses[1:]))
    ok &= mono and len(masses) == len(schedule)
    assert report("AC7 tightness", ok, "; ".join(lines) + "; nonincreasing: %s" % mono)


def test_ac8_property_suites(report, full2, positive_pair, tmp_path):
    start = time.perf_counter()
    results = {}
    temps = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0)
    models = random_scalar_models(7) + random_positive_models(11)
    worst = min(dd - allowed for s, p in models for dd, allowed in convexity_defects(pressure_curve(s, p, temps, 12)))
    results["convexity (5 scalar + 3 matrix)"] = worst >= 0
    eng = True
    for s, p in models:
        checks = {c.name: c for c in check_monotonicities(run_path(s, p, (1, 2, 4, 8, 16), depth=5))}
        eng &= checks["energy_nondecreasing"].passed
    results["energy nondecreasing"] = eng
    anchor = True
    for s, p in models:
        ests = [gurevich_pressure(s, p, 1.0, 12, a) for a in range(1, s.alphabet_size + 1)]
        spread = max(e.point for e in ests) - min(e.point for e in ests)
        anchor &= spread <= sum(e.width for e in ests) + 1e-12
    results["anchor independence"] = anchor
    c = MatrixCocycle(np.random.default_rng(1).uniform(-2, 2, (2, 2, 2)), "spectral")
    s1, s2 = SingularValuePotential(c, 1, None, None), SingularValuePotential(c, 2, None, None)
    det_err = 0.0
    for words, state in iter_word_blocks(full2, 8, potential=s1):
        dets = np.ones(len(words))
        for j in range(words.shape[1]):
            dets = dets * np.linalg.det(c.matrices[words[:, j]])
        det_err = max(det_err, float(np.max(np.abs(s1._value(state) + s2._value(state) - np.log(np.abs(dets))))))
    results["det identity (%.1e)" % det_err] = det_err <= 1e-10
    a = thermo_jsr(positive_pair)
    b = thermo_jsr(MatrixCocycle(POSITIVE_PAIR, "spectral"))
    tol = (a.thermo_bracket[1] - a.thermo_bracket[0]) + (b.thermo_bracket[1] - b.thermo_bracket[0])
    results["norm independence"] = abs(a.thermo - b.thermo) <= tol + 1e-9
    pot = ScalarPotential([0.3, -0.7])
    hom = gurevich_pressure(full2, pot.scaled(2.5), 1.2, 12).point == gurevich_pressure(full2, pot, 3.0, 12).point
    results["scaling homogeneity"] = hom
    v_start = time.perf_counter()
    codes = [main(["verify", str(MODELS / (m + ".json")), "--out-dir", str(tmp_path / m), "--threads", "1"])
             for m in ("scalar_log3", "positive_pair", "golden_mean", "countable_geometric")]
    v_elapsed = time.perf_counter() - v_start
    results["verify suite %.1f s (< 300 s)" % v_elapsed] = codes == [0, 0, 0, 0] and v_elapsed < 300
    ok = all(results.values())
    detail = ", ".join("%s %s" % (k, "ok" if v else "FAILED") for k, v in results.items())
    assert report("AC8 property suites", ok, detail + "; %.1f s" % (time.perf_counter() - start))
