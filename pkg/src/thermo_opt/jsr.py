"""Joint spectral radius by three routes.

- brute force: ``rho_n = max ||A_w||^{1/n}`` over admissible words of length
  ``n``; both supported norms are submultiplicative, so every ``rho_n`` is an
  upper bound and the smallest one is reported as certified.
- periodic: ``max rho(A_w)^{1/|w|}`` over cyclically admissible words, always
  a lower bound.
- thermodynamic: ``exp`` of the maximal energy of the log-norm potential from
  the zero-temperature path.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DivergentTail, NoPositivityRatio, NotInClassR, ValidationError
from .potentials import MatrixNormPotential, matrix_norm_potential, tail_power_sum
from .shift import countable_full_shift, full_shift, iter_word_blocks, to_word, truncate
from .zerotemp import DEFAULT_SCHEDULE, brute_force_alpha, extract_maximiser, run_path

log = logging.getLogger(__name__)


def _default_shift(cocycle, shift):
    if shift is None:
        return full_shift(cocycle.k)
    if shift.alphabet_size != cocycle.k:
        raise ValidationError("shift alphabet and cocycle size differ")
    return shift


def default_brute_depth(k, budget=1 << 13):
    k = max(2, k)
    return max(1, min(12, int(math.log(budget) / math.log(k) + 1e-9)))


@dataclass(frozen=True)
class BruteForceJsr:
    """Per-depth maxima ``rho_n`` with witnesses.

    ``upper`` is ``min_n rho_n`` (certified); ``estimate`` is the ratio
    ``max ||A_w|| / max ||A_v||`` between the last two depths, usually much
    closer to the true value than ``rho_n`` itself.
    """

    values: tuple
    witnesses: tuple
    upper: float
    upper_n: int
    estimate: float

    @property
    def n_max(self):
        return len(self.values)

    @property
    def value(self):
        return self.values[-1]


def brute_force_jsr(cocycle, shift=None, n_max=12):
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    shift = _default_shift(cocycle, shift)
    pot = MatrixNormPotential(cocycle, None, None)
    logs, witnesses = [], []
    for n in range(1, n_max + 1):
        best, word = -math.inf, ()
        for words, state in iter_word_blocks(shift, n, potential=pot):
            vals = pot._value(state)
            i = int(np.argmax(vals))
            if vals[i] > best:
                best, word = float(vals[i]), to_word(words[i])
        logs.append(best)
        witnesses.append(word)
    values = tuple(math.exp(v / n) for n, v in enumerate(logs, start=1))
    i = int(np.argmin(values))
    est = math.exp(logs[-1] - logs[-2]) if n_max >= 2 else values[0]
    return BruteForceJsr(values, tuple(witnesses), values[i], i + 1, est)


class PeriodicBound(NamedTuple):
    value: float
    word: tuple


def periodic_lower_bound(cocycle, shift=None, max_period=8):
    """``max rho(A_w)^{1/|w|}`` over cyclically admissible ``w``, first word on ties."""
    shift = _default_shift(cocycle, shift)
    pot = MatrixNormPotential(cocycle, None, None)
    best = brute_force_alpha(shift, pot, max_period)
    return PeriodicBound(math.exp(best.value), best.word)


@dataclass(frozen=True)
class JsrResult:
    brute: BruteForceJsr
    periodic: PeriodicBound
    thermo: float
    thermo_bracket: tuple
    maximiser: object = field(repr=False)
    certified: bool = False
    tolerance: float = 0.0

    @property
    def brute_upper(self):
        return self.brute.upper

    @property
    def periodic_lower(self):
        return self.periodic.value

    @property
    def ordering_ok(self):
        tol = self.tolerance
        return self.periodic.value - tol <= self.thermo <= self.brute.upper + tol

    @property
    def verdict(self):
        return "PASS" if self.ordering_ok else "FAIL"

    @property
    def witnesses(self):
        return {
            "brute": self.brute.witnesses[-1],
            "periodic": self.periodic.word,
            "thermo": self.maximiser.argmax_cylinders[0] if self.maximiser.argmax_cylinders else (),
        }


def thermo_jsr(cocycle, shift=None, schedule=DEFAULT_SCHEDULE, n_max=None, depth=None,
               brute_n=None, max_period=None, c_cap=None, threads=None):
    """All three routes on one family.

    Positive families get the analytic almost-additivity constant; others run
    with an empirical constant and ``certified`` is False.

    Raises
    ------
    NotAlmostAdditive
        If the empirical constant exceeds ``c_cap``.
    """
    shift = _default_shift(cocycle, shift)
    pot = matrix_norm_potential(cocycle, shift=shift, c_cap=c_cap)
    if not pot.certified:
        log.warning("almost-additivity constant is empirical (%.4g); thermo route is a diagnostic", pot.C)
    brute_n = brute_n if brute_n is not None else default_brute_depth(cocycle.k)
    brute = brute_force_jsr(cocycle, shift, brute_n)
    path = run_path(shift, pot, schedule, depth=depth, n_max=n_max, threads=threads)
    mx = extract_maximiser(path, max_period)
    periodic = PeriodicBound(math.exp(mx.periodic_value), mx.best_periodic_orbit)
    thermo = math.exp(mx.alpha)
    tol = 1e-9 * max(1.0, thermo)
    return JsrResult(
        brute, periodic, thermo, (math.exp(mx.alpha_bracket[0]), math.exp(mx.alpha_bracket[1])),
        mx, pot.certified, tol,
    )


@dataclass(frozen=True)
class CountableJsr:
    """Per-level results on truncations of a countable family.

    The quantity approximated is the supremum of energies over invariant
    measures of the countable shift, which may differ from a supremum over
    periodic orbits.
    """

    levels: tuple
    results: tuple
    deltas: tuple
    tail_bounds: tuple
    skipped: tuple
    in_class_R: bool
    label: str = "sup over invariant measures"

    @property
    def values(self):
        return tuple(r.thermo for r in self.results)


def countable_jsr(family, levels, schedule=DEFAULT_SCHEDULE, countable=None, require_class_r=True,
                  threads=None, **kwargs):
    """Run :func:`thermo_jsr` on each truncation ``{1..l}`` of a countable family.

    ``family`` provides ``cocycle(level)``, ``sup_f1(level)``, ``tail()`` and
    ``positivity_ratio`` (see :class:`GeometricMatrixFamily`). The tail
    bound at level ``l`` is ``sum_{i > l} sup f_1|C_i``.

    Raises
    ------
    NoPositivityRatio
        If the generators are not positive.
    NotInClassR
        If the summability series diverge (unless ``require_class_r`` is off).
    """
    if family.positivity_ratio is None:
        raise NoPositivityRatio("countable family needs a positive min/max entry ratio")
    try:
        in_r = family.summability().in_class_R
    except DivergentTail as err:
        in_r = False
        reason = str(err)
    else:
        reason = "summability series diverge"
    if not in_r:
        if require_class_r:
            raise NotInClassR(reason)
        log.warning("family is not in class R; proceeding on request")
    fam = truncate(countable if countable is not None else countable_full_shift(), levels)
    results, tails = [], []
    for level, shift in fam:
        results.append(thermo_jsr(family.cocycle(level), shift, schedule, threads=threads, **kwargs))
        tail = family.tail() if in_r else None
        tails.append(float(tail_power_sum(family.sup_f1(level), level, 1.0, tail)) if tail else math.inf)
    vals = [r.thermo for r in results]
    deltas = tuple(b - a for a, b in zip(vals, vals[1:]))
    return CountableJsr(fam.levels, tuple(results), deltas, tuple(tails), fam.skipped, in_r)
