"""Zero-temperature continuation: Gibbs approximants along ``t -> infinity``.

Every temperature of the schedule is handled independently: pressure from
anchored periodic sums, a raw Gibbs measure at depth ``n + m``, its Cesàro
average over horizon ``m`` at the target depth ``n``, then energy, entropy
rate and tail mass. Word enumerations and values are computed once and
shared by all temperatures.

The terminal measures approximate one accumulation point of the path; the
limit need not be unique and none is claimed.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import InconsistentBracket, InsufficientCurve, ThermoError, ValidationError
from .gibbs import CesaroPlan, energy, energy_bias, entropy_rate, tail_mass, word_values, _softmax
from .pressure import asymptotic_slope, bracket_constants, default_n_max, gurevich_pressure, periodic_tables
from .shift import iter_word_blocks, to_word

log = logging.getLogger(__name__)

DEFAULT_SCHEDULE = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
WORD_BUDGET = 1 << 16


def default_depth(shift, budget=WORD_BUDGET):
    """Target depth ``n`` such that the raw depth ``2n`` stays within ``budget`` words."""
    k = max(2, shift.alphabet_size)
    return max(1, int(math.log(budget) / (2 * math.log(k)) + 1e-9))


def default_max_period(shift, budget=1 << 14):
    k = max(2, shift.alphabet_size)
    return max(1, min(12, int(math.log(budget) / math.log(k) + 1e-9)))


def resolve_threads(threads=None):
    if threads is None:
        threads = int(os.environ.get("THERMO_OPT_THREADS", "1") or 1)
    return max(1, int(threads))


@dataclass(frozen=True)
class TemperaturePathRecord:
    """Snapshot of the Gibbs approximant at one temperature.

    ``error`` holds the error name when this temperature failed; the other
    numeric fields are then NaN.
    """

    t: float
    pressure: object
    energy: float
    energy_bias: float
    entropy_rate: float
    top_cylinders: tuple
    tail_mass: float
    measure: object = field(default=None, repr=False)
    error: Optional[str] = None

    @property
    def ok(self):
        return self.error is None

    @property
    def pressure_point(self):
        return self.pressure.point if self.pressure is not None else math.nan

    @property
    def bracket_width(self):
        return self.pressure.width if self.pressure is not None else math.nan


@dataclass(frozen=True)
class TemperaturePath:
    records: tuple
    shift: object = field(repr=False)
    potential: object = field(repr=False)
    depth: int
    horizon: int
    n_max: int
    J: int

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def good(self):
        return [r for r in self.records if r.ok]


def run_path(shift, potential, schedule=DEFAULT_SCHEDULE, depth=None, J=None, n_max=None,
             anchor=1, horizon=None, threads=None, top=5):
    """Gibbs approximants for every temperature of an increasing schedule.

    Errors at one temperature are recorded (``record.error``) and the rest
    of the schedule still runs. ``J`` defaults to the alphabet size, which
    gives zero tail mass on finite alphabets.
    """
    ts = [float(t) for t in schedule]
    if not ts or any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValidationError("schedule must be nonempty and strictly increasing")
    if ts[0] < 0:
        raise ValidationError("temperatures must be >= 0")
    if ts[0] < 1:
        log.warning("schedule starts below t = 1")
    n = depth if depth is not None else default_depth(shift)
    m = horizon if horizon is not None else n
    J = shift.alphabet_size if J is None else J
    if n_max is None:
        n_max = default_n_max(shift, anchor)
    tables = periodic_tables(shift, potential, n_max, anchor)
    consts = bracket_constants(shift, potential, anchor)
    raw_words, raw_values = word_values(shift, potential, n + m)
    plan = CesaroPlan(shift, raw_words, m, n)

    def one(t):
        try:
            pr = gurevich_pressure(shift, potential, t, n_max, anchor, tables, consts)
            mu = plan.apply(_softmax(raw_values, t))
            return TemperaturePathRecord(
                t, pr, energy(mu, potential), energy_bias(mu, potential), entropy_rate(mu),
                tuple(mu.top(top)), tail_mass(mu, J), mu,
            )
        except ThermoError as err:
            log.warning("t=%g failed: %s", t, err)
            nan = math.nan
            return TemperaturePathRecord(t, None, nan, nan, nan, (), nan, None, err.name)

    workers = resolve_threads(threads)
    if workers == 1:
        records = [one(t) for t in ts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, ts))
    return TemperaturePath(tuple(records), shift, potential, n, m, n_max, J)


class AlphaLowerBound(NamedTuple):
    value: float
    word: tuple
    slack: float


def brute_force_alpha(shift, potential, max_period):
    """Best periodic-orbit energy over cyclically admissible words of length ``<= max_period``.

    Exact periodic exponents are used when the potential provides them
    (``slack = 0``, a certified lower bound for the maximal energy);
    otherwise ``eval(w)/|w|`` with slack ``C/|w|``. Ties keep the shortest
    and then lexicographically first word.
    """
    if max_period < 1:
        raise ValidationError("max_period must be >= 1")
    best = AlphaLowerBound(-math.inf, (), math.inf)
    anchors = range(1, shift.alphabet_size + 1)
    for p in range(1, max_period + 1):
        for a in anchors:
            for words, state in iter_word_blocks(shift, p, a, True, potential):
                exact = potential._periodic_values(state)
                if exact is not None:
                    vals, slack = exact / p, 0.0
                else:
                    vals, slack = potential._value(state) / p, (potential.C or 0.0) / p
                i = int(np.argmax(vals))
                v = float(vals[i])
                if best.word == () or v > best.value + 1e-12 * max(1.0, abs(best.value)):
                    best = AlphaLowerBound(v, to_word(words[i]), slack)
    return best


@dataclass(frozen=True)
class MaximisationResult:
    """Estimate of the maximal energy with the measures that support it."""

    alpha: float
    alpha_bracket: tuple
    argmax_cylinders: tuple
    best_periodic_orbit: tuple
    periodic_value: float
    terminal_energy: float
    terminal_bias: float
    slope: object
    agreement_flag: bool
    certified: bool

    @property
    def width(self):
        return self.alpha_bracket[1] - self.alpha_bracket[0]


def extract_maximiser(path, max_period=None, support=0.95, tol=1e-9):
    """Reconcile terminal energy, pressure slope and periodic orbits.

    The bracket is ``[best periodic energy - slack, min_t upper(t)/t]``; the
    estimate is the pressure secant clamped into it. ``agreement_flag`` says
    whether the terminal energy agrees with it within its ``C/n`` bias.

    Raises
    ------
    InsufficientCurve
        With fewer than three successful temperatures.
    InconsistentBracket
        If the periodic lower bound exceeds the slope upper bound.
    """
    good = path.good
    if len(good) < 3:
        raise InsufficientCurve("need at least three successful temperatures")
    shift, pot = path.shift, path.potential
    if max_period is None:
        max_period = default_max_period(shift)
    best = brute_force_alpha(shift, pot, max_period)
    lower = best.value - best.slack
    slope = asymptotic_slope([(r.t, r.pressure) for r in good], lower=lower)
    upper = slope.upper
    if lower > upper + tol * max(1.0, abs(upper)):
        raise InconsistentBracket(
            "periodic lower bound %.12g exceeds slope upper bound %.12g" % (lower, upper)
        )
    term = good[-1]
    alpha = slope.value
    agree = abs(term.energy - alpha) <= term.energy_bias + 1e-3
    return MaximisationResult(
        alpha, (lower, upper), tuple(term.measure.support(support)), best.word, best.value,
        term.energy, term.energy_bias, slope, bool(agree), bool(pot.certified),
    )


class Check(NamedTuple):
    name: str
    passed: bool
    slack: float
    allowed: float


def check_monotonicities(path, tol=1e-6):
    """Structural checks along the path, reported as PASS/FAIL with slack.

    ``slack`` is the worst violation observed (0 when none) and ``allowed``
    the tolerance it is judged against.

    - entropy rate nonincreasing in ``t``
    - energy nondecreasing in ``t`` up to twice the ``C/n`` bias
    - energy never above the uniform bound ``max eval on one symbol + C``
    - sandwich ``energy <= P/t <= energy + h(first)/t`` up to bias and bracket
    """
    good = path.good
    if len(good) < 2:
        raise InsufficientCurve("need at least two successful temperatures")
    pot = path.potential
    C = pot.C or 0.0
    bias = max(r.energy_bias for r in good)

    def worst(pairs):
        return max([0.0] + [b - a for a, b in pairs])

    h = [r.entropy_rate for r in good]
    e = [r.energy for r in good]
    ent = worst(zip(h, h[1:]))
    eng = worst(zip(e[1:], e))
    ones = np.arange(pot.alphabet_size, dtype=np.int16)[:, None]
    uniform = float(np.max(pot.log_values(ones))) + C
    top = worst((uniform, x) for x in e)
    h0 = good[0].entropy_rate
    sand = 0.0
    for r in good:
        if r.t <= 0:
            continue
        ratio = r.pressure.point / r.t
        slack = r.energy_bias + r.pressure.width / r.t
        sand = max(sand, r.energy - ratio - slack, ratio - (r.energy + max(h0, 0.0) / r.t) - slack)
    return (
        Check("entropy_nonincreasing", ent <= tol, ent, tol),
        Check("energy_nondecreasing", eng <= tol + 2 * bias, eng, tol + 2 * bias),
        Check("energy_uniform_bound", top <= tol, top, tol),
        Check("pressure_sandwich", sand <= tol, max(sand, 0.0), tol),
    )
