"""Maximal Lyapunov exponent of piecewise-affine planar repellers.

Each branch of the repeller has a constant 2x2 derivative, so the top
singular value of the derivative cocycle along a coding is cylinder
constant and the zero-temperature machinery applies to ``log s_1``. Later
branches multiply on the left: the word ``w_1 ... w_n`` maps to
``A_{w_n} ... A_{w_1}``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NotAlmostAdditive, NotExpanding, ValidationError
from .potentials import ANALYTIC, MatrixCocycle, SingularValuePotential, singular_value_potential
from .shift import full_shift, iter_word_blocks, validate_shift
from .zerotemp import DEFAULT_SCHEDULE, extract_maximiser, run_path

log = logging.getLogger(__name__)

POSITIVE = "positive"
DOMINATED = "dominated"
NEITHER = "neither"


@dataclass(frozen=True, eq=False)
class RepellerSpec:
    """Branch derivatives plus the coding shift (full shift when omitted)."""

    branches: np.ndarray
    transition: Optional[np.ndarray] = None

    def __post_init__(self):
        b = np.array(self.branches, dtype=float)
        if b.ndim != 3 or b.shape[1:] != (2, 2) or b.shape[0] == 0:
            raise ValidationError("branches must be a nonempty list of 2x2 matrices")
        if not np.isfinite(b).all():
            raise ValidationError("branch entries must be finite")
        if (np.abs(np.linalg.det(b)) == 0).any():
            raise ValidationError("every branch matrix must be invertible")
        b.setflags(write=False)
        object.__setattr__(self, "branches", b)

    @property
    def k(self):
        return self.branches.shape[0]

    @property
    def shift(self):
        if self.transition is None:
            return full_shift(self.k)
        shift = validate_shift(self.transition)
        if shift.alphabet_size != self.k:
            raise ValidationError("coding shift alphabet differs from the branch count")
        return shift

    @property
    def expansion(self):
        """Smallest singular value over all branches."""
        return float(np.linalg.svd(self.branches, compute_uv=False)[:, -1].min())


def build_cocycle(spec, check_expansion=True):
    """Derivative cocycle with the spectral norm.

    Raises
    ------
    NotExpanding
        If some branch has a singular value ``<= 1`` (skipped when
        ``check_expansion`` is off).
    """
    if check_expansion and not spec.expansion > 1:
        raise NotExpanding("smallest branch singular value %.6g <= 1" % spec.expansion)
    return MatrixCocycle(spec.branches, "spectral")


@dataclass(frozen=True)
class HypothesisReport:
    """Which almost-additivity criterion the cocycle meets.

    ``gap`` is the certified (diagonal) or observed (triangular scan) growth
    rate of ``s_1/s_2`` per step; ``dominant`` the dominant diagonal index.
    """

    kind: str
    gap: float = math.nan
    dominant: Optional[int] = None
    exact_diagonal: bool = False
    detail: str = ""


def _triangular(m):
    upper = bool((m[:, 1, 0] == 0).all())
    lower = bool((m[:, 0, 1] == 0).all())
    return upper, lower


def _product_gap(cocycle, shift, max_len):
    """``min_n (min_w s_1/s_2 over |w| = n)^{1/n}`` over products of length ``<= max_len``."""
    s1pot = SingularValuePotential(cocycle, 1, None, None)
    s2pot = SingularValuePotential(cocycle, 2, None, None)
    best = math.inf
    for n in range(1, max_len + 1):
        worst = math.inf
        for _, state in iter_word_blocks(shift, n, potential=s1pot):
            gap = s1pot._value(state) - s2pot._value(state)
            worst = min(worst, float(gap.min()))
        best = min(best, math.exp(worst / n))
    return best


def check_hypotheses(cocycle, shift=None, max_len=None):
    """Classify a 2x2 cocycle as ``positive``, ``dominated`` or ``neither``.

    The dominated test is a sufficient condition only: diagonal families
    whose dominant diagonal index is the same for every generator, and
    triangular families with that property whose products up to ``max_len``
    keep a uniform singular value gap.
    """
    if cocycle.d != 2:
        raise ValidationError("hypothesis check needs 2x2 matrices")
    m = cocycle.matrices
    if cocycle.positive:
        return HypothesisReport(POSITIVE, detail="all entries positive")
    upper, lower = _triangular(m)
    if not (upper or lower):
        log.warning("cocycle is neither positive nor triangular; constants will be empirical")
        return HypothesisReport(NEITHER, detail="not positive, not triangular")
    d = np.abs(np.stack([m[:, 0, 0], m[:, 1, 1]], axis=1))
    for i in (0, 1):
        if (d[:, i] > d[:, 1 - i]).all():
            gen_gap = float((d[:, i] / d[:, 1 - i]).min())
            if upper and lower:
                return HypothesisReport(DOMINATED, gen_gap, i + 1, True, "diagonal, consistent dominant index")
            shift = shift if shift is not None else full_shift(cocycle.k)
            if max_len is None:
                max_len = max(1, min(10, int(math.log(1 << 14) / math.log(max(2, cocycle.k)))))
            gap = _product_gap(cocycle, shift, max_len)
            if gap > 1:
                return HypothesisReport(DOMINATED, gap, i + 1, False, "triangular, gap scan to length %d" % max_len)
            return HypothesisReport(NEITHER, gap, i + 1, False, "triangular gap scan failed")
    log.warning("no consistent dominant diagonal index; constants will be empirical")
    return HypothesisReport(NEITHER, detail="no consistent dominant diagonal index")


@dataclass(frozen=True)
class LyapunovResult:
    alpha: float
    maximiser: object = field(repr=False)
    hypotheses: HypothesisReport = None
    expansion_bound: float = math.nan
    certified: bool = False

    @property
    def argmax_cylinders(self):
        return self.maximiser.argmax_cylinders


def lyapunov_potential(cocycle, report, shift, c_cap=None):
    if report.exact_diagonal:
        # log s_1 is the Birkhoff sum of the dominant diagonal entry
        return SingularValuePotential(cocycle, 1, 0.0, ANALYTIC)
    return singular_value_potential(cocycle, 1, shift=shift, c_cap=c_cap)


def max_lyapunov(spec, schedule=DEFAULT_SCHEDULE, depth=None, override=False, check_expansion=True,
                 n_max=None, max_period=None, c_cap=None, threads=None):
    """Maximal top Lyapunov exponent over invariant measures of the repeller.

    Raises
    ------
    NotExpanding
        From :func:`build_cocycle`.
    NotAlmostAdditive
        If no hypothesis holds and ``override`` is off.
    """
    cocycle = build_cocycle(spec, check_expansion)
    shift = spec.shift
    report = check_hypotheses(cocycle, shift)
    if report.kind == NEITHER and not override:
        raise NotAlmostAdditive("no almost-additivity criterion holds (%s)" % report.detail)
    pot = lyapunov_potential(cocycle, report, shift, c_cap)
    path = run_path(shift, pot, schedule, depth=depth, n_max=n_max, threads=threads)
    mx = extract_maximiser(path, max_period)
    beta = spec.expansion
    return LyapunovResult(mx.alpha, mx, report, math.log(beta) if beta > 0 else -math.inf, pot.certified)
