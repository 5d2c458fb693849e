"""Gibbs cylinder measures, their invariant averages and certificates.

The raw measure at depth ``l`` gives each admissible word the weight
``exp(t * eval(w))`` divided by the total, which is exact for
cylinder-constant potentials (the supremum over a cylinder is its value).
Averaging its shifted marginals over a horizon ``m`` produces an almost
invariant measure whose invariance defect is at most ``1/m`` per cylinder.

The certificate compares ``mu(C_w)`` with ``exp(-nP) * f_n^t`` on every
depth-``n`` cylinder against the constant::

    D = N e^{-3C} / (M^3 e^{(k-1)C} max(S, S^k)),   bound = (M e^{6C} / D^5)^t

where ``N`` is the smallest connector value ``f_k`` and ``S`` the sum of
``sup f_1`` over the alphabet.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DepthTooShallow,
    MissingConnectivity,
    MissingPressure,
    NormalizationDrift,
    NotMixing,
    ValidationError,
)
from .potentials import finite_summability, tail_power_sum
from .shift import connectivity_data, from_word, iter_word_blocks, to_word, word_array, word_codes

log = logging.getLogger(__name__)

RAW_NU = "raw_nu"
CESARO = "cesaro"
PRODUCT = "product_closed_form"
PERIODIC = "periodic_orbit"

DRIFT_LIMIT = 1e-9


@dataclass(frozen=True, eq=False)
class CylinderMeasure:
    """Probability vector on the admissible words of one depth.

    ``words`` is a lexicographically sorted array of 0-based symbols;
    ``invariance_tol`` is the shift-invariance defect the construction
    guarantees (None when it promises nothing).
    """

    depth: int
    words: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    shift: object = field(repr=False)
    provenance: str = RAW_NU
    invariance_tol: Optional[float] = None
    drift: float = 0.0

    def __post_init__(self):
        if self.words.shape != (len(self.weights), self.depth):
            raise ValidationError("words and weights disagree in shape")
        if (self.weights < 0).any() or not np.isfinite(self.weights).all():
            raise ValidationError("weights must be finite and nonnegative")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValidationError("weights must sum to 1")
        if self.depth > 1:
            t = self.shift.transition
            if not t[self.words[:, :-1], self.words[:, 1:]].all():
                raise ValidationError("measure charges a non-admissible word")
        self.words.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def codes(self):
        return word_codes(self.words, self.shift.alphabet_size)

    def weight(self, word):
        """Mass of the cylinder of a 1-based word of length ``depth``."""
        code = word_codes(from_word(word)[None], self.shift.alphabet_size)[0]
        codes = self.codes
        i = np.searchsorted(codes, code)
        if i < len(codes) and codes[i] == code:
            return float(self.weights[i])
        return 0.0

    def as_dict(self):
        return {to_word(w): float(p) for w, p in zip(self.words, self.weights)}

    def top(self, count=5):
        """Heaviest cylinders, ties broken lexicographically."""
        order = np.lexsort((np.arange(len(self.weights)), -self.weights))[:count]
        return [(to_word(self.words[i]), float(self.weights[i])) for i in order]

    def support(self, mass=0.95):
        """Fewest heaviest cylinders carrying at least ``mass``."""
        order = np.lexsort((np.arange(len(self.weights)), -self.weights))
        cum = np.cumsum(self.weights[order])
        stop = int(np.searchsorted(cum, mass - 1e-15)) + 1
        return [to_word(self.words[i]) for i in order[:stop]]


def make_measure(shift, words, weights, provenance, invariance_tol=None):
    """Normalise ``weights`` and build a measure.

    Raises
    ------
    NormalizationDrift
        If the weights were off from total mass 1 by more than ``1e-9``.
    """
    weights = np.asarray(weights, dtype=float)
    total = float(weights.sum())
    drift = abs(total - 1.0)
    if drift > DRIFT_LIMIT:
        raise NormalizationDrift("renormalisation by %.3g exceeds %.0e" % (drift, DRIFT_LIMIT))
    if drift:
        log.debug("renormalised %s measure by %.3g", provenance, drift)
    words = np.asarray(words, dtype=np.int16)
    return CylinderMeasure(words.shape[1], words, weights / total, shift, provenance, invariance_tol, drift)


def from_dict(shift, weights, provenance=RAW_NU, normalize=True):
    """Measure from ``{word: weight}``; renormalised when ``normalize``."""
    items = sorted(weights.items())
    words = np.array([from_word(w) for w, _ in items], dtype=np.int16)
    vals = np.array([v for _, v in items], dtype=float)
    if normalize:
        vals = vals / vals.sum()
    return make_measure(shift, words, vals, provenance)


def word_values(shift, potential, n):
    """All admissible depth-``n`` words (lexicographic) with their values."""
    words, values = [], []
    for w, state in iter_word_blocks(shift, n, potential=potential):
        words.append(w)
        values.append(potential._value(state))
    return np.vstack(words), np.concatenate(values)


def _softmax(values, t):
    if t == 0:
        z = np.where(np.isneginf(values), -np.inf, 0.0)
    else:
        z = t * values
    return np.exp(z - logsumexp(z))


def nu_weights(shift, potential, t, l, table=None):
    """Raw measure ``exp(t eval(w)) / sum`` on admissible words of length ``l``.

    ``table`` may hold a precomputed ``word_values(shift, potential, l)``.
    """
    if l < 1:
        raise ValidationError("depth must be >= 1")
    if t < 0:
        raise ValidationError("t must be >= 0")
    words, values = table if table is not None else word_values(shift, potential, l)
    return make_measure(shift, words, _softmax(values, t), RAW_NU)


def product_measure(shift, probs, depth):
    """Bernoulli measure on the full shift; exactly invariant.

    On other shifts the product weights are restricted to admissible words
    and renormalised, which is no longer invariant, so only full shifts are
    accepted.
    """
    probs = np.asarray(probs, dtype=float)
    if probs.size != shift.alphabet_size or not shift.transition.all():
        raise ValidationError("product measures need the full shift and one probability per symbol")
    if (probs < 0).any() or abs(probs.sum() - 1.0) > 1e-12:
        raise ValidationError("probabilities must be nonnegative and sum to 1")
    words = word_array(shift, depth)
    weights = np.prod(probs[words], axis=1)
    return make_measure(shift, words, weights, PRODUCT, invariance_tol=1e-12)


def periodic_orbit_measure(shift, word, depth):
    """Invariant measure equidistributed on the orbit of ``word`` repeated."""
    word = tuple(word)
    p = len(word)
    if not shift.allows(word[-1], word[0]):
        raise ValidationError("word %r is not cyclically admissible" % (word,))
    reps = depth // p + 2
    long = from_word(word * reps)
    windows = np.array([long[j : j + depth] for j in range(p)], dtype=np.int16)
    codes = word_codes(windows, shift.alphabet_size)
    uniq, first, counts = np.unique(codes, return_index=True, return_counts=True)
    return make_measure(shift, windows[first], counts / p, PERIODIC, invariance_tol=1e-12)


def marginal(measure, m):
    """Induced measure on the first ``m`` symbols."""
    if not 1 <= m <= measure.depth:
        raise ValidationError("marginal depth must lie in 1..depth")
    if m == measure.depth:
        return measure
    prefix = word_codes(measure.words[:, :m], measure.shift.alphabet_size)
    uniq, first, inv = np.unique(prefix, return_index=True, return_inverse=True)
    weights = np.bincount(inv, weights=measure.weights, minlength=len(uniq))
    return make_measure(
        measure.shift, measure.words[first, :m], weights, measure.provenance, measure.invariance_tol
    )


class CesaroPlan:
    """Window bookkeeping for averaging many raw measures on the same words."""

    def __init__(self, shift, raw_words, m, target_depth):
        n = raw_words.shape[1]
        if m < 1 or target_depth < 1:
            raise ValidationError("horizon and target depth must be >= 1")
        if n < target_depth + m:
            raise DepthTooShallow(
                "raw depth %d < target %d + horizon %d" % (n, target_depth, m)
            )
        k = shift.alphabet_size
        self.shift = shift
        self.m = m
        self.words = word_array(shift, target_depth)
        target_codes = word_codes(self.words, k)
        self.index = [
            np.searchsorted(target_codes, word_codes(raw_words[:, j : j + target_depth], k))
            for j in range(m)
        ]

    def apply(self, raw_weights):
        size = len(self.words)
        acc = np.zeros(size)
        for idx in self.index:
            acc += np.bincount(idx, weights=raw_weights, minlength=size)
        mu = make_measure(self.shift, self.words, acc / self.m, CESARO)
        # declare the measured defect (never above the 2/m guarantee) so later
        # tampering with the weights is detectable
        tol = min(2.0 / self.m, invariance_defect(mu) * (1 + 1e-9) + 1e-15)
        return CylinderMeasure(mu.depth, mu.words, mu.weights, mu.shift, CESARO, tol, mu.drift)


def cesaro_invariantize(measure, m, target_depth):
    """Average of the depth-``target_depth`` windows starting at ``0..m-1``.

    Raises
    ------
    DepthTooShallow
        If ``measure.depth < target_depth + m``.
    """
    plan = CesaroPlan(measure.shift, measure.words, m, target_depth)
    return plan.apply(measure.weights)


def invariance_defect(measure):
    """``max_u |mu(sigma^{-1} C_u) - mu(C_u)|`` over words ``u`` one symbol shorter."""
    if measure.depth < 2:
        return 0.0
    k = measure.shift.alphabet_size
    tail = word_codes(measure.words[:, 1:], k)
    head = word_codes(measure.words[:, :-1], k)
    codes = np.union1d(tail, head)
    pulled = np.bincount(np.searchsorted(codes, tail), measure.weights, len(codes))
    direct = np.bincount(np.searchsorted(codes, head), measure.weights, len(codes))
    return float(np.abs(pulled - direct).max())


def block_entropy(measure):
    w = measure.weights[measure.weights > 0]
    return float(-(w * np.log(w)).sum())


def entropy_rate(measure):
    """Conditional block entropy ``H_n - H_{n-1}``."""
    if measure.depth < 2:
        raise ValidationError("entropy rate needs depth >= 2")
    return block_entropy(measure) - block_entropy(marginal(measure, measure.depth - 1))


def block_entropy_rate(measure):
    """``H_n / n``, the more biased estimator."""
    return block_entropy(measure) / measure.depth


def energy(measure, potential):
    """``(1/n) sum_w mu(w) eval(w)`` at the measure's depth."""
    values = potential.log_values(measure.words)
    mask = measure.weights > 0
    return float(np.dot(measure.weights[mask], values[mask]) / measure.depth)


def energy_bias(measure, potential):
    """Almost-additivity bias ``C/n`` of :func:`energy`."""
    return (potential.C or 0.0) / measure.depth


def tail_mass(measure, J):
    """Mass of first symbols greater than ``J``."""
    return float(measure.weights[measure.words[:, 0] >= J].sum())


@dataclass(frozen=True)
class GibbsCertificate:
    """Ratio band check of a measure against ``exp(-nP) f_n^t``.

    Constants are held as logarithms; ``D``, ``upper_bound`` and friends are
    their exponentials.
    """

    t: float
    depth: int
    C: float
    M: float
    k: int
    N_bar: float
    S: float
    log_D: float
    log_upper_bound: float
    log_lower_band: float
    log_max_ratio: float
    log_min_ratio: float
    P_used: float
    invariance_defect: float
    invariance_tol: Optional[float]
    certified: bool
    passed: bool
    reasons: tuple

    @property
    def D(self):
        return math.exp(self.log_D)

    @property
    def upper_bound(self):
        return _exp(self.log_upper_bound)

    @property
    def lower_band(self):
        return _exp(self.log_lower_band)

    @property
    def observed_max_ratio(self):
        return _exp(self.log_max_ratio)

    @property
    def observed_min_ratio(self):
        return _exp(self.log_min_ratio)

    @property
    def lower_band_slack(self):
        """``log(min ratio / lower band)``; reported, never asserted."""
        return self.log_min_ratio - self.log_lower_band


def _exp(x):
    return math.exp(x) if x < 709 else math.inf


def certificate_constants(potential, connectivity, S):
    """``(log D, log N_bar)`` for a potential with certified ``C`` and ``M``."""
    C, M, k = potential.C, potential.M, connectivity.k
    log_n = min(potential.eval(w) for w in connectivity.W)
    log_max = max(math.log(S), k * math.log(S))
    log_d = log_n - 3 * C - (3 * math.log(M) + (k - 1) * C + log_max)
    return log_d, log_n


def gibbs_certificate(shift, potential, t, n, pressure, measure, connectivity=None, summability=None):
    """Check ``mu(C_w) / (exp(-nP) f_n^t(w)) <= (M e^{6C} / D^5)^t`` on every depth-``n`` cylinder.

    PASS also requires every ratio to be positive and, when the measure
    declares an invariance tolerance, its invariance defect to respect it.
    ``summability`` supplies ``S`` for truncated countable families.

    Raises
    ------
    MissingPressure
        Without a pressure estimate.
    MissingConnectivity
        If connector data cannot be found for the shift.
    """
    if pressure is None:
        raise MissingPressure("a PressureEstimate for the same t is required")
    if measure.depth != n:
        raise ValidationError("measure depth %d != n = %d" % (measure.depth, n))
    if potential.C is None:
        raise ValidationError("potential has no almost-additivity constant")
    if connectivity is None:
        try:
            connectivity = connectivity_data(shift)
        except NotMixing as err:
            raise MissingConnectivity(str(err)) from err
    report = summability if summability is not None else finite_summability(potential)
    S = report.sum_sup_f1
    C, M = potential.C, potential.M
    log_d, log_n = certificate_constants(potential, connectivity, S)
    log_upper = t * (math.log(M) + 6 * C - 5 * log_d)
    log_lower = 2 * t * log_d - C * t
    P = pressure.point

    words, values = word_values(shift, potential, n)
    k = shift.alphabet_size
    codes = measure.codes
    idx = np.searchsorted(codes, word_codes(words, k))
    idx = np.minimum(idx, len(codes) - 1)
    found = codes[idx] == word_codes(words, k)
    mu = np.where(found, measure.weights[idx], 0.0)
    with np.errstate(divide="ignore"):
        log_ratio = np.log(mu) + n * P - t * values
    log_ratio = np.where(np.isneginf(values) & (mu == 0), -np.inf, log_ratio)
    log_max, log_min = float(log_ratio.max()), float(log_ratio.min())

    defect = invariance_defect(measure)
    reasons = []
    if not log_max <= log_upper:
        reasons.append("max ratio exceeds bound")
    if not log_min > -math.inf:
        reasons.append("a cylinder has zero mass")
    if measure.invariance_tol is not None and defect > measure.invariance_tol:
        reasons.append("invariance defect %.3g > %.3g" % (defect, measure.invariance_tol))
    return GibbsCertificate(
        float(t), n, C, M, connectivity.k, math.exp(log_n), S, log_d, log_upper, log_lower,
        log_max, log_min, P, defect, measure.invariance_tol, potential.certified,
        not reasons, tuple(reasons),
    )


def corrupt(measure, index=0, factor=2.0):
    """Multiply one weight by ``factor`` and renormalise, keeping the provenance."""
    w = np.array(measure.weights)
    w[index] *= factor
    w /= w.sum()
    return make_measure(measure.shift, measure.words, w, measure.provenance, measure.invariance_tol)


def reference_energy(shift, potential, max_period=8):
    """Conservative energy ``I`` of the lexicographically first periodic orbit with finite energy.

    Uses the exact periodic exponent when available and otherwise the
    almost-additive lower estimate ``(eval(w^m) - C) / (m|w|)``.
    """
    for p in range(1, max_period + 1):
        for words, state in iter_word_blocks(shift, p, periodic=True, potential=potential):
            exact = potential._periodic_values(state)
            for row in range(len(words)):
                w = to_word(words[row])
                if exact is not None:
                    val = float(exact[row]) / p
                else:
                    reps = max(1, 16 // p)
                    val = (potential.eval(w * reps) - (potential.C or 0.0)) / (reps * p)
                if math.isfinite(val):
                    return val, w
    raise ValidationError("no periodic orbit with finite energy up to period %d" % max_period)


def tightness_bound(t, log_D, C, M, I, sup_f1, J, tail=None):
    """``(N e^{-I})^t sum_{i>J} (sup f_1|C_i)^t`` with ``N = M e^{6C} / D^5``."""
    log_N = math.log(M) + 6 * C - 5 * log_D
    s = tail_power_sum(sup_f1, J, t, tail)
    if s == 0:
        return 0.0
    return _exp(t * (log_N - I) + math.log(s))
