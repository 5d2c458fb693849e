"""Gurevich pressure of ``tF`` from anchored periodic-orbit partition sums.

For an anchor ``a`` let ``a_n = log Z_n`` where::

    Z_n = sum over words w of length n, w_1 = a, w_n -> a admissible,
          of exp(t * eval(w)).

Two-sided bounds on the limit ``P`` follow from almost-additivity and the
connector words of the shift (``k`` = connector length)::

    P >= (a_n + t*E_W - 2tC) / (n + k)
    P <= (a_n - t*(E_in + E_out) + 3tC) / (n - 2k - 1)

where ``E_W`` is the smallest connector value, ``E_in`` the smallest value of
``a`` followed by a connector, and ``E_out`` the smallest value of a connector
leading back into ``a``. The lower bound uses the injection
``(u, v) -> u w v`` (superadditivity), the upper bound the injection
``u -> a w u w'`` into anchored periodic words together with
subadditivity. Both need ``t >= 0`` and are only certified when ``C`` is.

The point estimate extrapolates the increments ``a_n - a_{n-1}``, which
converge geometrically on mixing shifts, by Aitken's delta-squared process
and clamps the result into the bracket.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from .errors import BracketTooWide, DepthMismatch, EmptyPeriodicSet, InsufficientCurve, ValidationError
from .shift import connectivity_data, count_words, iter_word_blocks


class PartitionSum(NamedTuple):
    log_Z: float
    p_n: float

    @property
    def Z(self):
        return math.exp(self.log_Z)


@dataclass(frozen=True)
class PressureEstimate:
    """Pressure of ``tF`` with a two-sided bracket.

    ``samples`` holds ``(n, log Z_n, p_n)`` for ``n = 1..n_max``; ``residual``
    estimates the extrapolation error of ``point`` (not a certified bound).
    """

    t: float
    anchor: int
    samples: tuple
    bracket: tuple
    point: float
    residual: float
    certified: bool
    method: str

    @property
    def width(self):
        return self.bracket[1] - self.bracket[0]

    @property
    def n_max(self):
        return self.samples[-1][0]


def _scaled(values, t):
    if t == 0:
        return np.where(np.isneginf(values), -np.inf, 0.0)
    return t * values


def periodic_log_values(shift, potential, n, anchor):
    """Values ``eval(w)`` of all anchored cyclically admissible words of length ``n``."""
    parts = [potential._value(state) for _, state in iter_word_blocks(shift, n, anchor, True, potential)]
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def periodic_tables(shift, potential, n_max, anchor):
    return [periodic_log_values(shift, potential, n, anchor) for n in range(1, n_max + 1)]


def _log_partition(values, t):
    if values.size == 0:
        return -math.inf
    return float(logsumexp(_scaled(values, t)))


def partition_sum(shift, potential, t, n, anchor):
    """Anchored periodic partition sum ``Z_n`` (as ``log Z_n``) and ``p_n = log(Z_n)/n``.

    Raises
    ------
    EmptyPeriodicSet
        If no period-``n`` point lies in the anchor cylinder.
    """
    if t < 0:
        raise ValidationError("t must be >= 0")
    values = periodic_log_values(shift, potential, n, anchor)
    if values.size == 0:
        raise EmptyPeriodicSet("no period-%d point in cylinder [%d]; p_n = -inf" % (n, anchor))
    logz = _log_partition(values, t)
    return PartitionSum(logz, logz / n)


def default_n_max(shift, anchor=1, budget=1 << 15, cap=16):
    n = 4
    while n < cap and count_words(shift, n + 1, anchor, periodic=True) <= budget:
        n += 1
    return n


@dataclass(frozen=True)
class BracketConstants:
    k: int
    E_W: float
    E_in: float
    E_out: float


def bracket_constants(shift, potential, anchor, connectivity=None):
    conn = connectivity if connectivity is not None else connectivity_data(shift)
    size = shift.alphabet_size
    pairs = [(a, b) for a in range(1, size + 1) for b in range(1, size + 1)]
    e_w = min(potential.eval(conn.connector(a, b)) for a, b in pairs)
    e_in = min(potential.eval((anchor,) + conn.connector(anchor, b)) for b in range(1, size + 1))
    e_out = min(potential.eval(conn.connector(c, anchor)) for c in range(1, size + 1))
    return BracketConstants(conn.k, e_w, e_in, e_out)


def pressure_bracket(logz, t, C, consts):
    """Certified interval for the pressure from ``log Z_1 .. log Z_nmax``."""
    k = consts.k
    lo, hi = -math.inf, math.inf
    for n, a in enumerate(logz, start=1):
        if not math.isfinite(a):
            continue
        lo = max(lo, (a + t * consts.E_W - 2 * t * C) / (n + k))
        if n >= 2 * k + 2:
            hi = min(hi, (a - t * (consts.E_in + consts.E_out) + 3 * t * C) / (n - 2 * k - 1))
    return lo, hi


def _extrapolate(logz):
    """Aitken delta-squared on the increments of ``log Z_n``."""
    inc = [logz[i] - logz[i - 1] for i in range(1, len(logz)) if math.isfinite(logz[i]) and math.isfinite(logz[i - 1])]
    if len(inc) < 3:
        finite = [(n, a) for n, a in enumerate(logz, start=1) if math.isfinite(a)]
        n, a = finite[-1]
        return a / n, math.inf, "p_n"
    d1, d2, d3 = inc[-3:]
    step = abs(d3 - d2)
    denom = d3 - 2.0 * d2 + d1
    scale = max(abs(d1), abs(d2), abs(d3), 1.0)
    if denom != 0 and abs(denom) > 1e-13 * scale:
        x = d3 - (d3 - d2) ** 2 / denom
        if abs(x - d3) <= 10.0 * step:
            return x, abs(x - d3), "aitken"
    return d3, step, "increment"


def gurevich_pressure(shift, potential, t, n_max=None, anchor=1, tables=None, constants=None):
    """Estimate ``P(tF)`` with a bracket from periodic samples ``n = 1..n_max``.

    ``tables`` (output of :func:`periodic_tables`) and ``constants`` may be
    passed to reuse enumerations across temperatures.

    Raises
    ------
    EmptyPeriodicSet
        If no sampled depth beyond the mixing witness has a periodic point.
    """
    if t < 0:
        raise ValidationError("t must be >= 0")
    if n_max is None:
        n_max = default_n_max(shift, anchor) if tables is None else len(tables)
    if n_max < 4:
        raise ValidationError("n_max must be >= 4")
    if potential.C is None:
        raise ValidationError("potential has no almost-additivity constant")
    if tables is None:
        tables = periodic_tables(shift, potential, n_max, anchor)
    tables = tables[:n_max]
    logz = [_log_partition(v, t) for v in tables]
    witness = shift.mixing_witness or 0
    if not any(math.isfinite(a) for a in logz[witness:]):
        raise EmptyPeriodicSet("no periodic point in cylinder [%d] for n up to %d" % (anchor, n_max))
    consts = constants if constants is not None else bracket_constants(shift, potential, anchor)
    lo, hi = pressure_bracket(logz, t, potential.C, consts)
    x, resid, method = _extrapolate(logz)
    point = min(max(x, lo), hi)
    samples = tuple((n, a, a / n) for n, a in enumerate(logz, start=1))
    return PressureEstimate(
        float(t), anchor, samples, (lo, hi), point, resid, potential.certified, method
    )


def pressure_curve(shift, potential, temperatures, n_max=None, anchor=1):
    if n_max is None:
        n_max = default_n_max(shift, anchor)
    tables = periodic_tables(shift, potential, n_max, anchor)
    consts = bracket_constants(shift, potential, anchor)
    return [(t, gurevich_pressure(shift, potential, t, n_max, anchor, tables, consts)) for t in temperatures]


def pressure_derivative(shift, potential, t, h=1e-3, n_max=None, anchor=1, max_error=1e-3):
    """Central difference ``(P(t+h) - P(t-h)) / 2h`` at matched ``n_max``.

    Raises
    ------
    BracketTooWide
        If the extrapolation residuals at ``t +- h`` leave the difference
        quotient uncertain by more than ``max_error``.
    """
    if not t - h > 0:
        raise ValidationError("need t - h > 0")
    if n_max is None:
        n_max = default_n_max(shift, anchor)
    tables = periodic_tables(shift, potential, n_max, anchor)
    consts = bracket_constants(shift, potential, anchor)
    hi = gurevich_pressure(shift, potential, t + h, n_max, anchor, tables, consts)
    lo = gurevich_pressure(shift, potential, t - h, n_max, anchor, tables, consts)
    err = (hi.residual + lo.residual) / (2 * h)
    if not err <= max_error:
        raise BracketTooWide(
            "derivative uncertainty %.3g > %.3g at n_max=%d; try n_max >= %d"
            % (err, max_error, n_max, 2 * n_max)
        )
    return (hi.point - lo.point) / (2 * h)


@dataclass(frozen=True)
class SlopeEstimate:
    """Estimate of ``lim P(tF)/t`` with the interval it was clamped to."""

    value: float
    lower: float
    upper: float
    secants: tuple
    ratios: tuple
    secants_nondecreasing: bool
    ratios_nonincreasing: bool


def asymptotic_slope(curve, lower=-math.inf, tol=1e-9):
    """``lim P(tF)/t`` from the last secant of the pressure curve.

    Convexity makes secants nondecreasing in ``t`` and bounded by the limit,
    while ``P(tF)/t`` (for ``t > 0``) is nonincreasing and bounded below by
    it. Both monotonicities are reported as diagnostics, up to ``tol`` plus
    bracket widths. The value is clamped into ``[lower, min_t upper(t)/t]``;
    pass the best periodic-orbit average as ``lower``.

    Raises
    ------
    InsufficientCurve
        With fewer than three increasing temperatures.
    """
    pts = sorted(curve, key=lambda c: c[0])
    ts = [t for t, _ in pts]
    if len(pts) < 3 or len(set(ts)) != len(ts):
        raise InsufficientCurve("need at least three distinct temperatures")
    est = [p for _, p in pts]
    secants = tuple(
        (est[i + 1].point - est[i].point) / (ts[i + 1] - ts[i]) for i in range(len(pts) - 1)
    )
    pos = [(t, p) for t, p in pts if t > 0]
    ratios = tuple(p.point / t for t, p in pos)
    upper = min((p.bracket[1] / t for t, p in pos), default=math.inf)
    slack = [tol + p.width / max(t, 1e-300) for t, p in pos]
    sec_ok = all(
        secants[i + 1] >= secants[i] - tol - (est[i].width + est[i + 2].width) / (ts[i + 2] - ts[i])
        for i in range(len(secants) - 1)
    )
    rat_ok = all(ratios[i + 1] <= ratios[i] + slack[i] for i in range(len(ratios) - 1))
    value = min(max(secants[-1], lower), upper)
    return SlopeEstimate(value, lower, upper, secants, ratios, sec_ok, rat_ok)


def variational_gap(shift, potential, t, measure, n_max=None, anchor=1):
    """``P(tF) - (h(measure) + t * energy(measure))``; nonnegative up to estimator bias.

    Raises
    ------
    DepthMismatch
        If the measure lives on another shift or is too shallow for an
        entropy estimate.
    """
    from .gibbs import energy, entropy_rate

    if measure.depth < 2 or not measure.shift.same_as(shift):
        raise DepthMismatch("measure must live on the same shift at depth >= 2")
    p = gurevich_pressure(shift, potential, t, n_max, anchor)
    return p.point - (entropy_rate(measure) + t * energy(measure, potential))
