"""Cylinder-constant almost-additive potentials.

A potential assigns to each admissible word ``w`` of length ``n`` the value
``log f_n`` on the cylinder ``C_w``. Because every value depends only on the
word, the Bowen constant is ``M = 1`` throughout and the only regularity
constant that needs certifying is the almost-additivity constant ``C``::

    |eval(uv) - eval(u) - eval(v)| <= C   for every admissible uv.

Evaluation is vectorised over word arrays and incremental along the word
tree: :func:`thermo_opt.shift.iter_word_blocks` drives ``_start`` /
``_extend`` so a depth-``n`` enumeration performs one matrix product per
tree edge.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    AlmostAdditivityViolated,
    DivergentTail,
    NonPositiveNorm,
    NotAlmostAdditive,
    SingularProduct,
    ValidationError,
)
from .shift import full_shift, iter_word_blocks, word_codes

ANALYTIC = "analytic"
EMPIRICAL = "empirical"


class AlmostAdditivePotential:
    """Base class. Subclasses implement the incremental state protocol."""

    depth_constant = True
    M = 1.0

    def __init__(self, alphabet_size, C=None, C_source=None):
        self.alphabet_size = alphabet_size
        self.C = C
        self.C_source = C_source

    # incremental protocol, overridden by subclasses
    def _start(self, symbols):
        raise NotImplementedError

    def _extend(self, state, symbols):
        raise NotImplementedError

    def _take(self, state, idx):
        raise NotImplementedError

    def _value(self, state):
        raise NotImplementedError

    def log_values(self, words):
        """Values ``log f_n`` for every row of a 0-based word array."""
        words = np.asarray(words)
        state = self._start(words[:, 0])
        for j in range(1, words.shape[1]):
            state = self._extend(state, words[:, j])
        return self._value(state)

    def eval(self, word):
        """Value on the cylinder labelled by a 1-based word."""
        row = np.array([[s - 1 for s in word]], dtype=np.int16)
        if row.min() < 0 or row.max() >= self.alphabet_size:
            raise ValidationError("word %r outside alphabet" % (word,))
        return float(self.log_values(row)[0])

    def _periodic_values(self, state):
        """Per-row ``lim (1/m) eval(w^m)`` for a word-tree state, or None."""
        return None

    def periodic_exponent(self, word):
        """Exact ``lim (1/m|w|) eval(w^m)`` when a closed form exists, else None."""
        row = np.array([[s - 1 for s in word]], dtype=np.int16)
        state = self._start(row[:, 0])
        for j in range(1, row.shape[1]):
            state = self._extend(state, row[:, j])
        vals = self._periodic_values(state)
        return None if vals is None else float(vals[0]) / len(word)

    def sup_f1(self):
        """``sup f_1`` on each one-symbol cylinder."""
        words = np.arange(self.alphabet_size, dtype=np.int16)[:, None]
        return np.exp(self.log_values(words))

    def scaled(self, s):
        return ScaledPotential(self, s)

    @property
    def certified(self):
        return self.C_source == ANALYTIC

    def describe(self):
        return type(self).__name__


class ScalarPotential(AlmostAdditivePotential):
    """Birkhoff sums of a locally constant function: ``eval(w) = sum weights[w_j]``."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float).ravel()
        if w.size == 0:
            raise ValidationError("need one weight per symbol")
        if np.isnan(w).any() or np.isposinf(w).any():
            raise ValidationError("weights must be finite or -inf")
        super().__init__(w.size, 0.0, ANALYTIC)
        self.weights = w

    def _start(self, symbols):
        return self.weights[symbols].copy()

    def _extend(self, state, symbols):
        return state + self.weights[symbols]

    def _take(self, state, idx):
        return state[idx]

    def _value(self, state):
        return state

    def _periodic_values(self, state):
        return state

    def describe(self):
        return "scalar(%s)" % ", ".join("%.6g" % x for x in self.weights)


def scalar_potential(weights):
    return ScalarPotential(weights)


class ScaledPotential(AlmostAdditivePotential):
    """``s`` times another potential; ``C`` scales with it."""

    def __init__(self, base, s):
        if not s > 0:
            raise ValidationError("scale must be positive")
        C = None if base.C is None else s * base.C
        super().__init__(base.alphabet_size, C, base.C_source)
        self.base = base
        self.s = float(s)

    def _start(self, symbols):
        return self.base._start(symbols)

    def _extend(self, state, symbols):
        return self.base._extend(state, symbols)

    def _take(self, state, idx):
        return self.base._take(state, idx)

    def _value(self, state):
        return self.s * self.base._value(state)

    def _periodic_values(self, state):
        v = self.base._periodic_values(state)
        return None if v is None else self.s * v


@dataclass(frozen=True, eq=False)
class MatrixCocycle:
    """Finite family of ``d x d`` matrices; word ``w`` maps to ``A_{w_n} ... A_{w_1}``."""

    matrices: np.ndarray
    norm_kind: str = "sum"

    def __post_init__(self):
        m = np.array(self.matrices, dtype=float)
        if m.ndim != 3 or m.shape[1] != m.shape[2] or m.shape[0] == 0:
            raise ValidationError("matrices must be a nonempty list of square matrices")
        if not np.isfinite(m).all():
            raise ValidationError("matrix entries must be finite")
        if (np.abs(m).reshape(len(m), -1).max(axis=1) == 0).any():
            raise ValidationError("zero matrices are not allowed")
        if self.norm_kind not in ("sum", "spectral"):
            raise ValidationError("norm_kind must be 'sum' or 'spectral'")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def d(self):
        return self.matrices.shape[1]

    @property
    def k(self):
        return self.matrices.shape[0]

    @property
    def positive(self):
        return bool((self.matrices > 0).all())

    @property
    def positivity_ratio(self):
        if not self.positive:
            return None
        flat = self.matrices.reshape(self.k, -1)
        return float((flat.min(axis=1) / flat.max(axis=1)).min())

    def product(self, word):
        p = np.identity(self.d)
        for s in word:
            p = self.matrices[s - 1] @ p
        return p

    def scaled(self, c):
        return MatrixCocycle(self.matrices * c, self.norm_kind)

    def with_norm(self, norm_kind):
        return MatrixCocycle(self.matrices, norm_kind)


def spectral_radius(a):
    """Spectral radius; closed-form characteristic polynomial for 2x2."""
    return float(spectral_radii(np.asarray(a, dtype=float)[None])[0])


def spectral_radii(p):
    """Spectral radius of each matrix in a stack."""
    p = np.asarray(p, dtype=float)
    if p.shape[1:] == (2, 2):
        tr = p[:, 0, 0] + p[:, 1, 1]
        det = p[:, 0, 0] * p[:, 1, 1] - p[:, 0, 1] * p[:, 1, 0]
        disc = tr * tr - 4.0 * det
        real = 0.5 * (np.abs(tr) + np.sqrt(np.maximum(disc, 0.0)))
        return np.where(disc >= 0, real, np.sqrt(np.abs(det)))
    return np.abs(np.linalg.eigvals(p)).max(axis=-1)


def _top_singular_2x2(p):
    """Largest singular value of a stack of 2x2 matrices."""
    fro2 = np.einsum("wij,wij->w", p, p)
    det = p[:, 0, 0] * p[:, 1, 1] - p[:, 0, 1] * p[:, 1, 0]
    disc = np.sqrt(np.maximum(fro2 * fro2 - 4.0 * det * det, 0.0))
    return np.sqrt(0.5 * (fro2 + disc)), det


class _ProductPotential(AlmostAdditivePotential):
    """Shared bookkeeping: products kept max-entry normalised plus a log scale."""

    def __init__(self, cocycle, C, C_source):
        super().__init__(cocycle.k, C, C_source)
        self.cocycle = cocycle
        self._mats = cocycle.matrices

    @staticmethod
    def _renorm(p, logscale):
        s = np.abs(p).reshape(len(p), -1).max(axis=1)
        if (s == 0).any():
            raise NonPositiveNorm("matrix product vanished")
        return p / s[:, None, None], logscale + np.log(s)

    def _start(self, symbols):
        p = self._mats[symbols]
        return self._renorm(p, np.zeros(len(p)))

    def _extend(self, state, symbols):
        p, logscale = state
        return self._renorm(np.matmul(self._mats[symbols], p), logscale)

    def _take(self, state, idx):
        p, logscale = state
        return p[idx], logscale[idx]

    def _periodic_values(self, state):
        # log spectral radius of the product
        p, logscale = state
        with np.errstate(divide="ignore"):
            return logscale + np.log(spectral_radii(p))


class MatrixNormPotential(_ProductPotential):
    """``eval(w) = log ||A_{w_n} ... A_{w_1}||`` for the cocycle's norm."""

    def _value(self, state):
        p, logscale = state
        if self.cocycle.norm_kind == "sum":
            nrm = np.abs(p).sum(axis=(1, 2))
        elif self.cocycle.d == 2:
            nrm = _top_singular_2x2(p)[0]
        else:
            nrm = np.linalg.norm(p, ord=2, axis=(1, 2))
        if (nrm == 0).any():
            raise NonPositiveNorm("matrix product has zero norm")
        return logscale + np.log(nrm)

    def describe(self):
        return "matrix_norm(k=%d, d=%d, norm=%s)" % (self.cocycle.k, self.cocycle.d, self.cocycle.norm_kind)


class SingularValuePotential(_ProductPotential):
    """``eval(w) = log s_index(A_{w_n} ... A_{w_1})`` for 2x2 cocycles.

    ``log |det|`` is accumulated generator by generator, so ``s_2 = |det|/s_1``
    stays accurate on nearly singular products where ``ad - bc`` of the
    normalised product would cancel.
    """

    def __init__(self, cocycle, index, C, C_source):
        super().__init__(cocycle, C, C_source)
        self.index = index
        with np.errstate(divide="ignore"):
            self._logdet = np.log(np.abs(np.linalg.det(self._mats)))

    def _start(self, symbols):
        p, logscale = super()._start(symbols)
        return p, logscale, self._logdet[symbols]

    def _extend(self, state, symbols):
        p, logscale = super()._extend(state[:2], symbols)
        return p, logscale, state[2] + self._logdet[symbols]

    def _take(self, state, idx):
        return state[0][idx], state[1][idx], state[2][idx]

    def _value(self, state):
        p, logscale, logdet = state
        s1 = _top_singular_2x2(p)[0]
        if self.index == 1:
            return logscale + np.log(s1)
        if np.isneginf(logdet).any():
            raise SingularProduct("product is singular, s_2 = 0")
        return logdet - logscale - np.log(s1)

    def _periodic_values(self, state):
        # s_1 grows like the top eigenvalue, s_2 like the other one
        p, logscale, logdet = state
        with np.errstate(divide="ignore"):
            top = logscale + np.log(spectral_radii(p))
            if self.index == 1:
                return top
            return logdet - top

    def describe(self):
        return "singular_value(index=%d, k=%d)" % (self.index, self.cocycle.k)


def analytic_norm_constant(cocycle):
    """Closed-form ``C`` for positive families, None otherwise.

    With ``r`` the smallest min/max entry ratio over the generators, the
    entry-sum norm obeys ``(r/d) ||X|| ||Y|| <= ||XY|| <= ||X|| ||Y||`` for
    products of generators, so ``C = log(d/r)``. The spectral norm sits within
    a factor ``d`` of the entry-sum norm on nonnegative matrices, which costs
    one extra ``log d``.
    """
    r = cocycle.positivity_ratio
    if r is None:
        return None
    d = cocycle.d
    c = math.log(d / r)
    if cocycle.norm_kind == "spectral":
        c += math.log(d)
    return c


def default_certification_length(shift, budget=1 << 15):
    k = shift.alphabet_size
    return max(2, min(10, int(math.log(budget) / math.log(max(k, 2)))))


def empirical_constant(potential, shift, max_len):
    """Largest ``|eval(uv) - eval(u) - eval(v)|`` over admissible ``uv`` with ``|uv| <= max_len``."""
    if max_len < 2:
        raise ValidationError("max_len must be >= 2")
    k = shift.alphabet_size
    tables = {}
    worst = 0.0
    for n in range(1, max_len + 1):
        codes, values = [], []
        for words, state in iter_word_blocks(shift, n, potential=potential):
            vals = potential._value(state)
            codes.append(word_codes(words, k))
            values.append(vals)
            for s in range(1, n):
                pc, pv = tables[s]
                sc, sv = tables[n - s]
                left = pv[np.searchsorted(pc, word_codes(words[:, :s], k))]
                right = sv[np.searchsorted(sc, word_codes(words[:, s:], k))]
                gap = np.abs(vals - left - right)
                gap = gap[np.isfinite(gap)]
                if gap.size:
                    worst = max(worst, float(gap.max()))
        if n < max_len:
            tables[n] = (np.concatenate(codes), np.concatenate(values))
    return worst


@dataclass(frozen=True)
class CertifiedConstants:
    C: float
    M: float
    source: str
    empirical: float
    max_len: int
    note: str


def certify_constants(potential, shift, max_len=None):
    """Certify almost-additivity and Bowen constants.

    Returns the analytic ``C`` when the potential carries one (after checking
    that an exhaustive scan up to ``max_len`` does not contradict it),
    otherwise the empirical maximum flagged ``empirical``.

    Raises
    ------
    AlmostAdditivityViolated
        An analytic constant is contradicted by the scan.
    """
    if max_len is None:
        max_len = default_certification_length(shift)
    emp = empirical_constant(potential, shift, max_len)
    note = "M = 1: values depend on the word only, so sup and inf over a cylinder agree"
    if potential.C_source == ANALYTIC and potential.C is not None:
        if emp > potential.C + 1e-9 * (1.0 + potential.C):
            raise AlmostAdditivityViolated(
                "empirical constant %.6g exceeds analytic %.6g" % (emp, potential.C)
            )
        return CertifiedConstants(potential.C, 1.0, ANALYTIC, emp, max_len, note)
    return CertifiedConstants(emp, 1.0, EMPIRICAL, emp, max_len, note)


def _with_constant(pot, cocycle, shift, max_len, c_cap):
    if pot.C is None:
        shift = shift if shift is not None else full_shift(cocycle.k)
        n = max_len if max_len is not None else default_certification_length(shift)
        emp = empirical_constant(pot, shift, n)
        if c_cap is not None and emp > c_cap:
            raise NotAlmostAdditive("empirical constant %.6g exceeds cap %.6g" % (emp, c_cap))
        pot.C, pot.C_source = emp, EMPIRICAL
    return pot


def matrix_norm_potential(cocycle, shift=None, max_len=None, c_cap=None):
    """Log-norm potential of a cocycle.

    ``C`` is analytic for positive families and otherwise estimated by an
    exhaustive split scan on ``shift`` (full shift by default).
    """
    c = analytic_norm_constant(cocycle)
    pot = MatrixNormPotential(cocycle, c, ANALYTIC if c is not None else None)
    return _with_constant(pot, cocycle, shift, max_len, c_cap)


def singular_value_potential(cocycle, index, shift=None, max_len=None, c_cap=None):
    if cocycle.d != 2:
        raise ValidationError("singular value potentials need 2x2 matrices")
    if index not in (1, 2):
        raise ValidationError("sv_index must be 1 or 2")
    c = analytic_norm_constant(cocycle.with_norm("spectral")) if index == 1 else None
    pot = SingularValuePotential(cocycle, index, c, ANALYTIC if c is not None else None)
    return _with_constant(pot, cocycle, shift, max_len, c_cap)


# summability (class R) --------------------------------------------------------


@dataclass(frozen=True)
class GeometricTail:
    """Values beyond index ``start`` decay geometrically: ``v_i = v_start * ratio**(i - start)``."""

    ratio: float
    start: int


@dataclass(frozen=True)
class SummabilityReport:
    sum_sup_f1: float
    condition4: float
    in_class_R: bool
    prefix_sum: float
    tail_sum: float


def _xlogx(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    pos = v > 0
    out[pos] = v[pos] * np.log(v[pos])
    return out


def summability_report(sup_f1, tail: Optional[GeometricTail] = None):
    """Partial sums plus closed-form geometric tails for both class-R series.

    ``sup_f1`` lists ``sup f_1|C_i`` for ``i = 1..p``; with a tail the values
    for ``i > tail.start`` follow the geometric model anchored at
    ``sup_f1[tail.start - 1]`` and prefix entries past ``tail.start`` are ignored.

    Raises
    ------
    DivergentTail
        If the tail ratio is not below 1.
    """
    v = np.asarray(sup_f1, dtype=float).ravel()
    if (v < 0).any() or not np.isfinite(v).all():
        raise ValidationError("sup f_1 values must be finite and nonnegative")
    tail_sum = tail_c4 = 0.0
    if tail is not None:
        r = float(tail.ratio)
        if r >= 1:
            raise DivergentTail("geometric tail ratio %.6g >= 1" % r)
        if r < 0:
            raise ValidationError("tail ratio must be nonnegative")
        if not 1 <= tail.start <= v.size:
            raise ValidationError("tail start must index the supplied prefix")
        v = v[: tail.start]
        anchor = v[-1]
        if r > 0 and anchor > 0:
            g = r / (1.0 - r)
            tail_sum = anchor * g
            tail_c4 = anchor * math.log(anchor) * g + anchor * math.log(r) * r / (1.0 - r) ** 2
    prefix_sum = float(v.sum())
    total = prefix_sum + tail_sum
    c4 = float(_xlogx(v).sum()) + tail_c4
    return SummabilityReport(
        float(total), float(c4), bool(math.isfinite(total) and math.isfinite(c4)), prefix_sum, float(tail_sum)
    )


def finite_summability(potential):
    return summability_report(potential.sup_f1())


def tail_power_sum(values, J, t=1.0, tail=None):
    """``sum_{i > J} v_i**t`` over the listed values plus the geometric tail past them."""
    v = np.asarray(values, dtype=float)
    total = float(np.sum(v[J:] ** t)) if J < v.size else 0.0
    if tail is not None and v.size and tail.ratio > 0:
        # geometric continuation beyond the listed prefix
        q = tail.ratio ** t
        first = max(v.size, J)
        last_v = v[-1] * tail.ratio ** (first - v.size)
        total += float(last_v ** t * q / (1.0 - q))
    return total


# countable families ------------------------------------------------------------


class GeometricScalarFamily:
    """Countable scalar potential with ``f_1|C_i = scale * ratio**i``."""

    def __init__(self, scale, ratio):
        if not (scale > 0 and ratio > 0):
            raise ValidationError("scale and ratio must be positive")
        self.scale = float(scale)
        self.ratio = float(ratio)

    def sup_f1(self, level):
        return self.scale * self.ratio ** np.arange(1, level + 1)

    def restrict(self, level):
        return ScalarPotential(np.log(self.sup_f1(level)))

    def tail(self):
        return GeometricTail(self.ratio, 1)

    def summability(self):
        return summability_report(self.sup_f1(1), self.tail())

    positivity_ratio = None


class GeometricMatrixFamily:
    """Countable matrix family ``A_i = ratio**i * base`` (``i = 1, 2, ...``)."""

    def __init__(self, base, ratio, norm_kind="sum"):
        self.base = np.array(base, dtype=float)
        if not ratio > 0:
            raise ValidationError("ratio must be positive")
        self.ratio = float(ratio)
        self.norm_kind = norm_kind
        MatrixCocycle(self.base[None], norm_kind)

    def cocycle(self, level):
        scales = self.ratio ** np.arange(1, level + 1)
        return MatrixCocycle(scales[:, None, None] * self.base[None], self.norm_kind)

    def restrict(self, level, shift=None, max_len=None):
        return matrix_norm_potential(self.cocycle(level), shift=shift, max_len=max_len)

    def sup_f1(self, level):
        c = MatrixCocycle(self.base[None], self.norm_kind)
        pot = MatrixNormPotential(c, 0.0, ANALYTIC)
        nb = float(np.exp(pot.eval((1,))))
        return nb * self.ratio ** np.arange(1, level + 1)

    @property
    def positivity_ratio(self):
        return MatrixCocycle(self.base[None], self.norm_kind).positivity_ratio

    def tail(self):
        return GeometricTail(self.ratio, 1)

    def summability(self):
        return summability_report(self.sup_f1(1), self.tail())
