"""Command line entry point: ``thermo-opt <subcommand> MODEL.json``.

Subcommands and their artifacts (CSV columns in order):

  pressure   pressure.csv   t, n, log_Z_n, p_n, bracket_lo, bracket_hi, point
  gibbs      certificate.json, weights.csv (t, word, weight; depth <= 10)
  zerotemp   zerotemp.csv   t, pressure, bracket_width, energy, entropy_rate,
                            tail_mass, top_cylinder, top_weight
             maximiser.json
  jsr        jsr.json
  lyap       lyap.json
  verify     verify.json    (exit 1 when any check fails)

Artifacts go to ``--out-dir``, else the model's ``outputs.dir``, else
stdout. Exit codes: 0 success, 1 verify failure, 2 invalid input,
3 computation error.
"""

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import ThermoError, ValidationError
from .gibbs import cesaro_invariantize, corrupt, gibbs_certificate, nu_weights, reference_energy, tightness_bound
from .jsr import countable_jsr, thermo_jsr
from .lyapunov import max_lyapunov
from .model import SCHEMA_VERSION, Model
from .potentials import certify_constants
from .pressure import gurevich_pressure, pressure_curve
from .zerotemp import check_monotonicities, extract_maximiser, run_path

log = logging.getLogger("thermo_opt")


def _word(w):
    return "".join(str(s) if s < 10 else "(%d)" % s for s in w)


def _num(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else _num(x)
    return x


def _json(obj):
    body = {"schema_version": SCHEMA_VERSION}
    body.update(obj)
    return json.dumps(_jsonable(body), indent=2) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


# subcommands -----------------------------------------------------------------


def cmd_pressure(model, args):
    pot = model.potential
    curve = pressure_curve(model.shift, pot, model.schedule, model.n_max, model.anchor)
    rows = []
    for t, est in curve:
        for n, logz, p in est.samples:
            rows.append((t, n, logz, p, est.bracket[0], est.bracket[1], est.point))
    return {"pressure.csv": _csv(["t", "n", "log_Z_n", "p_n", "bracket_lo", "bracket_hi", "point"], rows)}, 0


def _gibbs_measure(model, t, n, m, pot):
    raw = nu_weights(model.shift, pot, t, n + m)
    mu = cesaro_invariantize(raw, m, n)
    spec = model.measure_spec
    if spec.get("type") == "corrupted":
        mu = corrupt(mu, int(spec.get("index", 0)), float(spec.get("factor", 2.0)))
    return mu


def _certificates(model, temperatures):
    pot = model.potential
    n, m = model.depths["measure_depth"], model.depths["horizon"]
    out = []
    for t in temperatures:
        pr = gurevich_pressure(model.shift, pot, t, model.n_max, model.anchor)
        mu = _gibbs_measure(model, t, n, m, pot)
        cert = gibbs_certificate(model.shift, pot, t, n, pr, mu, summability=model.summability)
        out.append((cert, mu))
    return out


def _cert_dict(c):
    return {
        "t": c.t, "depth": c.depth, "C": c.C, "M": c.M, "k": c.k, "N_bar": c.N_bar, "S": c.S,
        "D": c.D, "log_upper_bound": c.log_upper_bound, "upper_bound": c.upper_bound,
        "observed_max_ratio": c.observed_max_ratio, "observed_min_ratio": c.observed_min_ratio,
        "lower_band": c.lower_band, "P_used": c.P_used, "invariance_defect": c.invariance_defect,
        "invariance_tol": c.invariance_tol, "certified_C": c.certified,
        "result": "PASS" if c.passed else "FAIL", "reasons": list(c.reasons),
    }


def cmd_gibbs(model, args):
    certs = _certificates(model, model.schedule)
    rows = []
    for cert, mu in certs:
        if mu.depth <= 10:
            rows.extend((cert.t, _word(w), p) for w, p in mu.as_dict().items())
    body = {"certificates": [_cert_dict(c) for c, _ in certs],
            "result": "PASS" if all(c.passed for c, _ in certs) else "FAIL"}
    return {"certificate.json": _json(body), "weights.csv": _csv(["t", "word", "weight"], rows)}, 0


def _path(model, args):
    return run_path(
        model.shift, model.potential, model.schedule, depth=model.depths["measure_depth"], J=model.J,
        n_max=model.n_max, anchor=model.anchor, horizon=model.depths["horizon"], threads=args.threads,
    )


def _maximiser_dict(mx):
    return {
        "alpha": mx.alpha, "alpha_bracket": list(mx.alpha_bracket),
        "argmax_cylinders": [_word(w) for w in mx.argmax_cylinders],
        "best_periodic_orbit": _word(mx.best_periodic_orbit), "periodic_value": mx.periodic_value,
        "terminal_energy": mx.terminal_energy, "terminal_bias": mx.terminal_bias,
        "slope": mx.slope.value, "agreement_flag": mx.agreement_flag, "certified_C": mx.certified,
        "note": "terminal measure approximates one accumulation point of the path",
    }


def cmd_zerotemp(model, args):
    path = _path(model, args)
    rows = []
    for r in path:
        top = r.top_cylinders[0] if r.top_cylinders else ((), math.nan)
        rows.append((r.t, r.pressure_point, r.bracket_width, r.energy, r.entropy_rate, r.tail_mass,
                     _word(top[0]) if r.ok else r.error, top[1]))
    header = ["t", "pressure", "bracket_width", "energy", "entropy_rate", "tail_mass", "top_cylinder", "top_weight"]
    mx = extract_maximiser(path, model.depths["max_period"])
    return {"zerotemp.csv": _csv(header, rows), "maximiser.json": _json(_maximiser_dict(mx))}, 0


def _jsr_dict(r):
    return {
        "brute": {"n": r.brute.n_max, "value": r.brute.value, "upper": r.brute.upper,
                  "upper_n": r.brute.upper_n, "estimate": r.brute.estimate,
                  "witness": _word(r.brute.witnesses[-1])},
        "periodic": {"period": len(r.periodic.word), "value": r.periodic.value, "witness": _word(r.periodic.word)},
        "thermo": {"value": r.thermo, "bracket": list(r.thermo_bracket), "certified_C": r.certified},
        "verdict": r.verdict,
    }


def _jsr_kwargs(model, args):
    d = model.depths
    return {"n_max": model.n_max, "depth": d["measure_depth"], "brute_n": d.get("brute_n"),
            "max_period": d["max_period"], "threads": args.threads}


def cmd_jsr(model, args):
    if model.countable:
        fam = model.family
        if not hasattr(fam, "cocycle"):
            raise ValidationError("jsr needs a matrix family")
        res = countable_jsr(fam, model.truncations.levels, model.schedule, n_max=model.n_max, threads=args.threads)
        body = {"levels": list(res.levels), "per_level": [_jsr_dict(r) for r in res.results],
                "deltas": list(res.deltas), "tail_bounds": list(res.tail_bounds),
                "skipped": [list(s) for s in res.skipped], "label": res.label}
        return {"jsr.json": _json(body)}, 0
    if model.cocycle is None:
        raise ValidationError("jsr needs matrices in the potential section")
    res = thermo_jsr(model.cocycle, model.shift, model.schedule, **_jsr_kwargs(model, args))
    return {"jsr.json": _json(_jsr_dict(res))}, 0


def cmd_lyap(model, args):
    if "repeller" not in model.raw:
        raise ValidationError("lyap needs a 'repeller' section")
    opts = model.repeller_options
    d = model.depths
    res = max_lyapunov(model.repeller, model.schedule, d["measure_depth"], opts["override"],
                       opts["check_expansion"], model.n_max, d["max_period"], threads=args.threads)
    h = res.hypotheses
    body = {"alpha": res.alpha, "hypotheses": {"kind": h.kind, "gap": h.gap, "dominant": h.dominant, "detail": h.detail},
            "expansion_bound": res.expansion_bound, "certified_C": res.certified,
            "maximiser": _maximiser_dict(res.maximiser)}
    return {"lyap.json": _json(body)}, 0


# verify ------------------------------------------------------------------------


def _check(checks, name, passed, **info):
    checks.append(dict(name=name, result="PASS" if passed else "FAIL", **info))


def cmd_verify(model, args):
    checks = []
    shift, pot = model.shift, model.potential
    d = model.depths
    cc = certify_constants(pot, shift, d.get("cert_len"))
    _check(checks, "almost_additivity", True, C=cc.C, empirical=cc.empirical, source=cc.source, max_len=cc.max_len)

    curve = pressure_curve(shift, pot, model.schedule, model.n_max, model.anchor)
    pts = [(t, e) for t, e in curve]
    ok = all(e.bracket[0] <= e.point <= e.bracket[1] for _, e in pts)
    _check(checks, "pressure_bracket_order", ok)
    worst = 0.0
    for (t0, a), (t1, b), (t2, c) in zip(pts, pts[1:], pts[2:]):
        dd = (c.point - b.point) / (t2 - t1) - (b.point - a.point) / (t1 - t0)
        slack = 3 * max(a.width, b.width, c.width) / min(t1 - t0, t2 - t1)
        worst = min(worst, dd + slack)
    _check(checks, "pressure_convexity", worst >= 0, worst=worst)
    anchors = []
    t_mid = model.schedule[0]
    for a in range(1, shift.alphabet_size + 1):
        anchors.append(gurevich_pressure(shift, pot, t_mid, model.n_max, a))
    spread = max(e.point for e in anchors) - min(e.point for e in anchors)
    _check(checks, "anchor_independence", spread <= sum(e.width for e in anchors) + 1e-12, spread=spread)

    for cert, _ in _certificates(model, model.schedule[:3]):
        _check(checks, "gibbs_certificate_t=%g" % cert.t, cert.passed, reasons=list(cert.reasons),
               max_ratio=cert.observed_max_ratio, bound=cert.upper_bound)

    path = _path(model, args)
    for c in check_monotonicities(path):
        _check(checks, c.name, c.passed, slack=c.slack, allowed=c.allowed)
    try:
        mx = extract_maximiser(path, d["max_period"])
        _check(checks, "maximiser_bracket", mx.alpha_bracket[0] <= mx.alpha <= mx.alpha_bracket[1],
               alpha=mx.alpha, bracket=list(mx.alpha_bracket))
    except ThermoError as err:
        _check(checks, "maximiser_bracket", False, error=err.name)

    if model.countable and model.family is not None:
        vals, tail = model.sup_f1_values()
        log_d = _certificates(model, model.schedule[:1])[0][0].log_D
        I, _ = reference_energy(shift, pot)
        masses = [r.tail_mass for r in path.good]
        for r in path.good:
            bound = tightness_bound(r.t, log_d, pot.C, pot.M, I, vals, model.J, tail)
            _check(checks, "tightness_t=%g" % r.t, r.tail_mass <= bound, tail_mass=r.tail_mass, bound=bound)
        _check(checks, "tail_mass_nonincreasing", all(b <= a + 1e-12 for a, b in zip(masses, masses[1:])))

    if model.cocycle is not None and model.has_potential and not model.countable and model.potential_spec.get("type") == "matrix":
        res = thermo_jsr(model.cocycle, shift, model.schedule, **_jsr_kwargs(model, args))
        _check(checks, "jsr_ordering", res.ordering_ok, periodic=res.periodic.value, thermo=res.thermo,
               brute_upper=res.brute.upper)

    failed = [c["name"] for c in checks if c["result"] == "FAIL"]
    body = {"checks": checks, "result": "FAIL" if failed else "PASS", "failed": failed}
    for c in checks:
        print("%s %s" % (c["result"], c["name"]), file=sys.stderr)
    return {"verify.json": _json(body)}, 1 if failed else 0


COMMANDS = {
    "pressure": cmd_pressure,
    "gibbs": cmd_gibbs,
    "zerotemp": cmd_zerotemp,
    "jsr": cmd_jsr,
    "lyap": cmd_lyap,
    "verify": cmd_verify,
}


def build_parser():
    p = argparse.ArgumentParser(
        prog="thermo-opt",
        description=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name, help="run the %s pipeline" % name)
        s.add_argument("model", help="JSON model file")
        s.add_argument("--out-dir", help="directory for artifacts (default: model outputs.dir or stdout)")
        s.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: $THERMO_OPT_THREADS or 1)")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def _emit(artifacts, out_dir):
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        for name, text in artifacts.items():
            with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return
    for name, text in artifacts.items():
        if len(artifacts) > 1:
            sys.stdout.write("# %s\n" % name)
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        model = Model.load(args.model)
        artifacts, code = COMMANDS[args.command](model, args)
    except ValidationError as err:
        print("error: %s: %s" % (err.name, err), file=sys.stderr)
        return 2
    except ThermoError as err:
        print("error: %s: %s" % (err.name, err), file=sys.stderr)
        return 3
    _emit(artifacts, args.out_dir or model.out_dir)
    return code


if __name__ == "__main__":
    sys.exit(main())
