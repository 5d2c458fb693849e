"""JSON model files for the command line.

A model names one shift, then either a potential or a repeller, plus run
settings::

    {
      "schema_version": 1,
      "shift": {"type": "full", "k": 2},
      "potential": {"type": "scalar", "weights": [0.0, 1.0986]},
      "schedule": [1, 2, 4, 8, 16, 32, 64],
      "depths": {"n_max": 14, "measure_depth": 8, "horizon": 8,
                 "max_period": 8, "brute_n": 12},
      "J": 2,
      "anchor": 1,
      "measure": {"type": "gibbs"},
      "outputs": {"dir": "out"}
    }

Shift types: ``full`` (``k``), ``matrix`` (``transition``), ``golden_mean``
and ``countable`` (``generator`` = ``"full"``, ``levels``). Potential types:
``scalar`` (``weights`` as logs or ``exp_weights``), ``matrix``
(``matrices``, ``norm`` = ``sum`` | ``spectral``, optional ``c_cap``) and
``singular`` (``matrices``, ``index``). On a countable shift the potential
is a geometric family: ``scalar`` with ``scale`` and ``ratio``, or
``matrix`` with ``base`` and ``ratio``. A ``repeller`` section holds
``branches``, optional ``transition``, ``check_expansion`` and
``override``. ``measure`` may be ``{"type": "corrupted", "index": i,
"factor": f}`` to test the certificate on a tampered Gibbs measure.
"""

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import ModelError, ValidationError
from .lyapunov import RepellerSpec
from .potentials import (
    GeometricMatrixFamily,
    GeometricScalarFamily,
    MatrixCocycle,
    ScalarPotential,
    finite_summability,
    matrix_norm_potential,
    singular_value_potential,
)
from .shift import count_words, countable_full_shift, full_shift, golden_mean_shift, truncate, validate_shift
from .zerotemp import DEFAULT_SCHEDULE, default_depth, default_max_period

SCHEMA_VERSION = 1
WORD_LIMIT = 2_000_000

_COUNTABLE_GENERATORS = {"full": countable_full_shift}


def _get(d, key, kind, default=None, required=False):
    if key not in d:
        if required:
            raise ModelError("missing field %r" % key)
        return default
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ModelError("field %r has the wrong type" % key)
    return v


def _matrices(v, name):
    try:
        m = np.array(v, dtype=float)
    except (TypeError, ValueError) as err:
        raise ModelError("%s must be numeric" % name) from err
    return m


@dataclass(frozen=True, eq=False)
class Model:
    raw: dict = field(repr=False)
    source: Optional[str] = None

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as err:
            raise ModelError("cannot read model %s: %s" % (path, err)) from err
        except json.JSONDecodeError as err:
            raise ModelError("model %s is not valid JSON: %s" % (path, err)) from err
        return cls.from_dict(data, str(path))

    @classmethod
    def from_dict(cls, data, source=None):
        if not isinstance(data, dict):
            raise ModelError("model must be a JSON object")
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ModelError("unsupported schema_version %r" % (version,))
        has_pot, has_rep = "potential" in data, "repeller" in data
        if has_pot == has_rep:
            raise ModelError("model needs exactly one of 'potential' or 'repeller'")
        model = cls(data, source)
        # touch everything that validates eagerly
        model.schedule
        model.shift
        model.depths
        model.check_budget()
        return model

    # shift -------------------------------------------------------------
    @cached_property
    def shift_spec(self):
        spec = self.raw.get("shift")
        if spec is None and "repeller" in self.raw:
            return {"type": "repeller"}
        if not isinstance(spec, dict):
            raise ModelError("missing 'shift' section")
        return spec

    @property
    def countable(self):
        return self.shift_spec.get("type") == "countable"

    @cached_property
    def truncations(self):
        spec = self.shift_spec
        gen = _get(spec, "generator", str, "full")
        if gen not in _COUNTABLE_GENERATORS:
            raise ModelError("unknown countable generator %r" % gen)
        levels = _get(spec, "levels", list, required=True)
        if not levels or not all(isinstance(l, int) and l >= 1 for l in levels):
            raise ModelError("levels must be positive integers")
        return truncate(_COUNTABLE_GENERATORS[gen](), levels)

    @property
    def level(self):
        """Working truncation level (the largest valid one)."""
        return self.truncations.levels[-1] if self.countable else None

    @cached_property
    def shift(self):
        spec = self.shift_spec
        kind = spec.get("type")
        if kind == "full":
            k = _get(spec, "k", int, required=True)
            if k < 1:
                raise ModelError("k must be >= 1")
            return full_shift(k)
        if kind == "golden_mean":
            return golden_mean_shift()
        if kind == "matrix":
            return validate_shift(_get(spec, "transition", list, required=True))
        if kind == "countable":
            return self.truncations.shifts[-1]
        if kind == "repeller":
            return self.repeller.shift
        raise ModelError("unknown shift type %r" % (kind,))

    # potential ---------------------------------------------------------
    @cached_property
    def potential_spec(self):
        spec = self.raw.get("potential")
        if not isinstance(spec, dict):
            raise ModelError("'potential' must be an object")
        return spec

    @property
    def has_potential(self):
        return "potential" in self.raw

    @cached_property
    def family(self):
        """Geometric countable family, or None on finite shifts."""
        if not (self.countable and self.has_potential):
            return None
        spec = self.potential_spec
        kind = spec.get("type")
        ratio = _get(spec, "ratio", (int, float), required=True)
        if kind == "scalar":
            return GeometricScalarFamily(_get(spec, "scale", (int, float), 1.0), ratio)
        if kind == "matrix":
            base = _matrices(_get(spec, "base", list, required=True), "base")
            return GeometricMatrixFamily(base, ratio, _get(spec, "norm", str, "sum"))
        raise ModelError("countable potentials must be 'scalar' or 'matrix'")

    @cached_property
    def cocycle(self):
        """Matrix cocycle of a matrix/singular potential or repeller, else None."""
        if "repeller" in self.raw:
            from .lyapunov import build_cocycle

            return build_cocycle(self.repeller, self.repeller_options["check_expansion"])
        spec = self.potential_spec
        kind = spec.get("type")
        if self.countable:
            return self.family.cocycle(self.level) if kind == "matrix" else None
        if kind in ("matrix", "singular"):
            m = _matrices(_get(spec, "matrices", list, required=True), "matrices")
            norm = _get(spec, "norm", str, "sum" if kind == "matrix" else "spectral")
            cocycle = MatrixCocycle(m, norm)
            if cocycle.k != self.shift.alphabet_size:
                raise ModelError("number of matrices must equal the alphabet size")
            return cocycle
        return None

    @cached_property
    def potential(self):
        if "repeller" in self.raw:
            from .lyapunov import check_hypotheses, lyapunov_potential

            report = check_hypotheses(self.cocycle, self.shift)
            return lyapunov_potential(self.cocycle, report, self.shift)
        spec = self.potential_spec
        kind = spec.get("type")
        c_cap = _get(spec, "c_cap", (int, float))
        cert_len = self.depths.get("cert_len")
        if self.countable:
            if kind == "scalar":
                return self.family.restrict(self.level)
            return matrix_norm_potential(self.cocycle, self.shift, cert_len, c_cap)
        if kind == "scalar":
            if "exp_weights" in spec:
                w = np.asarray(_get(spec, "exp_weights", list), dtype=float)
                if (w < 0).any():
                    raise ValidationError("exp_weights must be nonnegative")
                with np.errstate(divide="ignore"):
                    w = np.log(w)
            else:
                w = _get(spec, "weights", list, required=True)
            pot = ScalarPotential(w)
            if pot.alphabet_size != self.shift.alphabet_size:
                raise ModelError("one weight per symbol is required")
            return pot
        if kind == "matrix":
            return matrix_norm_potential(self.cocycle, self.shift, cert_len, c_cap)
        if kind == "singular":
            return singular_value_potential(self.cocycle, _get(spec, "index", int, 1), self.shift, cert_len, c_cap)
        raise ModelError("unknown potential type %r" % (kind,))

    @cached_property
    def summability(self):
        if self.family is not None:
            return self.family.summability()
        return finite_summability(self.potential)

    def sup_f1_values(self):
        if self.family is not None:
            return self.family.sup_f1(self.level), self.family.tail()
        return self.potential.sup_f1(), None

    # repeller ----------------------------------------------------------
    @cached_property
    def repeller(self):
        spec = self.raw.get("repeller")
        if not isinstance(spec, dict):
            raise ModelError("'repeller' must be an object")
        branches = _matrices(_get(spec, "branches", list, required=True), "branches")
        return RepellerSpec(branches, _get(spec, "transition", list))

    @property
    def repeller_options(self):
        spec = self.raw.get("repeller", {})
        return {
            "check_expansion": bool(spec.get("check_expansion", True)),
            "override": bool(spec.get("override", False)),
        }

    # run settings ------------------------------------------------------
    @cached_property
    def schedule(self):
        s = _get(self.raw, "schedule", list, list(DEFAULT_SCHEDULE))
        if not s or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in s):
            raise ModelError("schedule must be a nonempty list of numbers")
        s = tuple(float(t) for t in s)
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ModelError("schedule must be strictly increasing")
        if s[0] < 0:
            raise ModelError("temperatures must be >= 0")
        return s

    @cached_property
    def depths(self):
        d = _get(self.raw, "depths", dict, {})
        for key, v in d.items():
            if not isinstance(v, int) or v < 1:
                raise ModelError("depth %r must be a positive integer" % key)
        out = dict(d)
        n = out.setdefault("measure_depth", default_depth(self.shift))
        out.setdefault("horizon", n)
        out.setdefault("max_period", default_max_period(self.shift))
        return out

    @property
    def n_max(self):
        return self.depths.get("n_max")

    @property
    def J(self):
        J = _get(self.raw, "J", int, self.shift.alphabet_size if not self.countable else 5)
        if J < 0:
            raise ModelError("J must be >= 0")
        return J

    @property
    def anchor(self):
        a = _get(self.raw, "anchor", int, 1)
        if not 1 <= a <= self.shift.alphabet_size:
            raise ModelError("anchor outside the alphabet")
        return a

    @property
    def measure_spec(self):
        m = _get(self.raw, "measure", dict, {"type": "gibbs"})
        if m.get("type", "gibbs") not in ("gibbs", "corrupted"):
            raise ModelError("measure type must be 'gibbs' or 'corrupted'")
        return m

    @property
    def out_dir(self):
        return _get(self.raw, "outputs", dict, {}).get("dir")

    def check_budget(self):
        raw_depth = self.depths["measure_depth"] + self.depths["horizon"]
        counts = [count_words(self.shift, raw_depth)]
        if self.n_max:
            counts.append(count_words(self.shift, self.n_max))
        if max(counts) > WORD_LIMIT:
            raise ModelError("depths exceed the enumeration budget of %d words" % WORD_LIMIT)
