"""Command-line surface.

Every operation is exposed as a subcommand writing JSON (default) or CSV to
stdout or --output.  Diagnostics go to stderr only.  Conventions:

  * rationals are written p/q on the command line and in output;
  * alpha may be "inf";
  * integers that can exceed double precision (counts, numerators) are
    emitted as JSON strings;
  * sequence specs: explicit:1,2,3 | exp_floor | power_floor:A |
    constant_one | scaled:M:<spec>;
  * growth specs: power:c:g | exp:a:b | tower:a:b | stretch:c:g |
    explicit:v1,v2,...;
  * family specs: uniform:lo:hi[:monotone] | d:<seq> | c:A:EPS:K |
    ctilde:A:EPS:K.

If CFLAB_OUTPUT_DIR is set, relative --output paths are resolved under it.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import covers, ergodic, exponent, spectra
from .cfcore import (ConstantOneSeq, ExpFloorSeq, ExplicitSeq, PowerFloorSeq,
                     ScaledSeq, convergents, cylinder, expand)
from .errors import CflabError, ContractViolation

MAX_SAFE_INT = 2**53


# -- value parsing ---------------------------------------------------------------

def parse_rational(text: str):
    """p/q or an integer -> Fraction; decimal -> float; 'inf' -> math.inf."""
    t = text.strip()
    if t == "inf":
        return math.inf
    if "/" in t or t.lstrip("+-").isdigit():
        try:
            return Fraction(t)
        except (ValueError, ZeroDivisionError):
            raise ContractViolation(f"cannot parse rational {text!r}")
    try:
        return float(t)
    except ValueError:
        raise ContractViolation(f"cannot parse number {text!r}")


def parse_seq(spec: str):
    head, _, rest = spec.partition(":")
    if head == "explicit":
        if not rest:
            raise ContractViolation("explicit: needs a comma-separated list")
        return ExplicitSeq([int(v) for v in rest.split(",")])
    if head == "exp_floor":
        return ExpFloorSeq()
    if head == "power_floor":
        a = parse_rational(rest)
        return PowerFloorSeq(a if isinstance(a, Fraction) else Fraction(a))
    if head == "constant_one":
        return ConstantOneSeq()
    if head == "scaled":
        factor, _, inner = rest.partition(":")
        return ScaledSeq(parse_seq(inner), int(factor))
    raise ContractViolation(f"unknown sequence spec {spec!r}")


def parse_phi(spec: str) -> spectra.PhiSpec:
    head, _, rest = spec.partition(":")
    parts = rest.split(":") if rest else []
    if head == "power" and len(parts) == 2:
        return spectra.phi_power(float(parts[0]), float(parts[1]))
    if head == "exp" and len(parts) == 2:
        return spectra.phi_exponential(float(parts[0]), float(parts[1]))
    if head == "tower" and len(parts) == 2:
        return spectra.phi_tower(float(parts[0]), float(parts[1]))
    if head == "stretch" and len(parts) == 2:
        return spectra.phi_stretched(float(parts[0]), float(parts[1]))
    if head == "explicit" and rest:
        return spectra.phi_explicit([float(v) for v in rest.split(",")])
    raise ContractViolation(f"unknown growth spec {spec!r}")


def parse_family(spec: str) -> covers.ConstraintFamily:
    head, _, rest = spec.partition(":")
    if head == "uniform":
        parts = rest.split(":")
        if len(parts) not in (2, 3):
            raise ContractViolation("uniform family needs lo:hi[:monotone]")
        lo, hi = int(parts[0]), int(parts[1])
        mono = len(parts) == 3 and parts[2] == "monotone"
        return covers.uniform_family(range(lo, hi + 1), monotone=mono)
    if head == "d":
        return covers.d_family(parse_seq(rest))
    if head in ("c", "ctilde"):
        parts = rest.split(":")
        if len(parts) != 3:
            raise ContractViolation(f"{head} family needs alpha:eps:k")
        alpha, eps, k = parse_rational(parts[0]), parse_rational(parts[1]), int(parts[2])
        ctor = covers.c_family if head == "c" else covers.c_tilde_family
        return ctor(alpha, eps, k)
    raise ContractViolation(f"unknown family spec {spec!r}")


# -- serialization -----------------------------------------------------------------

def jsonable(v):
    """Map values into strict JSON: no Infinity/NaN, no precision loss."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else _safe_int(v.numerator)
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, np.integer)):
        return _safe_int(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return "nan"
        return f
    if isinstance(v, np.ndarray):
        return [jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    return v


def _safe_int(n: int):
    return n if abs(n) <= MAX_SAFE_INT else str(n)


def emit(payload, rows_for_csv, args):
    """Write payload as JSON or the given rows as CSV to the chosen stream."""
    if args.format == "json":
        text = json.dumps(jsonable(payload), indent=2) + "\n"
    else:
        buf = io.StringIO()
        rows = rows_for_csv() if callable(rows_for_csv) else rows_for_csv
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows:
            writer.writerow(["" if c is None else c for c in
                             (jsonable(x) for x in row)])
        text = buf.getvalue()
    if args.output:
        path = args.output
        base = os.environ.get("CFLAB_OUTPUT_DIR")
        if base and not os.path.isabs(path):
            path = os.path.join(base, path)
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def estimate_dict(est) -> dict:
    return {
        "tail_sup": est.tail_sup, "tail_inf": est.tail_inf, "final": est.final,
        "diverged": est.diverged, "drift": est.drift, "window": est.window,
    }


def estimate_rows(est, head=()):
    yield (*head, "tail_sup", est.tail_sup)
    yield (*head, "tail_inf", est.tail_inf)
    yield (*head, "final", est.final)
    yield (*head, "diverged", est.diverged)
    yield (*head, "drift", est.drift)


# -- subcommand handlers -------------------------------------------------------------

def cmd_expand(args):
    x = parse_rational(args.x)
    if not isinstance(x, Fraction):
        raise ContractViolation("expand needs an exact rational like 3/7")
    digits = expand(x, max_terms=args.max_terms).entries
    emit(digits, [("index", "quotient"), *((i + 1, d) for i, d in enumerate(digits))],
         args)


def cmd_convergents(args):
    seq = parse_seq(args.seq)
    convs = convergents(seq, args.n)
    payload = [{"n": c.n, "p": c.p, "q": c.q} for c in convs]
    emit(payload, [("n", "p", "q"), *((c.n, c.p, c.q) for c in convs)], args)


def cmd_cylinder(args):
    prefix = [int(v) for v in args.prefix.split(",")]
    c = cylinder(prefix)
    payload = {"depth": c.depth, "lo": c.lo, "hi": c.hi, "length": c.length}
    emit(payload, [("depth", "lo", "hi", "length"),
                   (c.depth, c.lo, c.hi, c.length)], args)


def cmd_tau(args):
    seq = parse_seq(args.seq)
    if args.estimator == "series":
        if args.s is None:
            raise ContractViolation("series estimator needs --s")
        v = exponent.tau_series_sum(seq, args.s, args.n)
        emit({"estimator": "series", "s": args.s, "n": args.n, "log_sum": v},
             [("estimator", "s", "n", "log_sum"), ("series", args.s, args.n, v)],
             args)
        return
    if args.estimator == "monotone":
        est = exponent.tau_monotone_estimate(seq, args.n, window=args.window)
    else:
        est = exponent.liminf_ratio_estimate(seq, args.n, window=args.window)
    payload = {"estimator": args.estimator, "n": args.n, **estimate_dict(est)}
    emit(payload, [("key", "value"), ("estimator", args.estimator),
                   ("n", args.n), *estimate_rows(est)], args)


def cmd_construct(args):
    alpha = parse_rational(args.alpha)
    seq = exponent.construct_tau(alpha)
    entries = [seq.a(i) for i in range(1, args.terms + 1)]
    payload = {"alpha": alpha, "kind": seq.describe(), "entries": entries}
    emit(payload, [("index", "entry"), *((i + 1, v) for i, v in enumerate(entries))],
         args)


def cmd_splice(args):
    prefix = ExplicitSeq([int(v) for v in args.prefix.split(",")])
    seq = exponent.splice(prefix, args.cut, parse_seq(args.tail))
    entries = [seq.a(i) for i in range(1, args.terms + 1)]
    payload = {"cut": args.cut, "kind": seq.describe(), "entries": entries}
    emit(payload, [("index", "entry"), *((i + 1, v) for i, v in enumerate(entries))],
         args)


def cmd_spectrum(args):
    alpha = parse_rational(args.alpha)
    if args.set == "trichotomy":
        payload = spectra.intersection_trichotomy(alpha)
        emit(payload, [tuple(payload.keys()), tuple(payload.values())], args)
        return
    fn = {"full": spectra.dim_level_full, "lambda": spectra.dim_level_lambda,
          "e": spectra.dim_e, "f": spectra.dim_f}[args.set]
    pt = fn(alpha)
    payload = {"alpha": pt.alpha, "dim": pt.dim, "regime": pt.regime}
    emit(payload, [("alpha", "dim", "regime"), (pt.alpha, pt.dim, pt.regime)], args)


def cmd_xi(args):
    est = spectra.xi_limit(parse_seq(args.s_seq), args.n, window=args.window)
    payload = {"n": args.n, "xi": est.tail_sup,
               "dim": spectra.dim_from_xi(est.tail_sup), **estimate_dict(est)}
    emit(payload, [("key", "value"), *((k, v) for k, v in payload.items())], args)


def _b_command(args, reader):
    est = reader(parse_phi(args.phi), args.n, window=args.window)
    log_b = est.tail_sup
    payload = {"n": args.n, "log_b": log_b,
               "b": math.exp(log_b) if not est.diverged else math.inf,
               "dim": spectra.dim_from_b(log_b, est.diverged),
               **estimate_dict(est)}
    emit(payload, [("key", "value"), *((k, v) for k, v in payload.items())], args)


def cmd_bgrowth(args):
    _b_command(args, spectra.b_growth)


def cmd_bhirst(args):
    _b_command(args, spectra.b_hirst)


def cmd_tseq(args):
    ts = spectra.t_sequence(parse_phi(args.phi), eps=args.eps, n_max=args.n,
                            b=args.b, horizon_cap=args.horizon_cap)
    payload = {
        "n": args.n, "eps": ts.eps, "b_used": ts.b_used, "horizon": ts.horizon,
        "monotone_violation": ts.first_monotonicity_violation(),
        "growth_violation": ts.first_growth_violation(),
        "liminf": estimate_dict(ts.liminf_ratio),
    }
    if args.full:
        payload["loglog_t"] = ts.loglog_t
    emit(payload, [("j", "loglog_t"),
                   *((j + 1, v) for j, v in enumerate(ts.loglog_t))], args)


def cmd_count(args):
    emit(covers.count_monotone(args.n, args.L),
         [("count",), (covers.count_monotone(args.n, args.L),)], args)


def cmd_enumerate(args):
    fam = parse_family(args.family)
    tuples = list(covers.enumerate_family(fam, args.n, cap=args.cap))
    emit(tuples, [tuple(f"a{i+1}" for i in range(args.n)), *tuples], args)


def cmd_falconer(args):
    s = parse_seq(args.s_seq)
    m = [s.a(k) - 1 for k in range(1, args.n + 1)]
    log_eps = covers.gap_epsilon_block(s, args.n)
    est = covers.falconer_lower_bound(m, log_eps, window=args.window)
    payload = {"n": args.n, "dim_lower": est.tail_inf, **estimate_dict(est)}
    emit(payload, [("key", "value"), *((k, v) for k, v in payload.items())], args)


def cmd_critical(args):
    if args.levels:
        source = covers.d_family_levels(parse_seq(args.levels), args.n)
    elif args.family:
        source = parse_family(args.family)
    else:
        raise ContractViolation("critical needs --family or --levels")
    rep = covers.critical_exponent(source, args.n, cap=args.cap)
    payload = {"s_star": rep.s_star, "bracket": list(rep.bracket),
               "generation": rep.generation, "mode": rep.mode}
    emit(payload, [("s_star", "bracket_lo", "bracket_hi", "generation", "mode"),
                   (rep.s_star, rep.bracket[0], rep.bracket[1],
                    rep.generation, rep.mode)], args)


def cmd_ergodic(args):
    run = ergodic.ergodic_run(args.t, args.samples, args.orbit, args.seed,
                              trunc_k=args.trunc_k, threads=args.threads)
    payload = run.to_dict()
    if not args.full:
        del payload["averages"]
    rows = [(k, v) for k, v in payload.items() if k != "averages"]
    emit(payload, [("key", "value"), *rows], args)


def cmd_ephi_table(args):
    specs = [parse_phi(s) for s in args.phi] if args.phi else None
    rows = spectra.ephi_figure_table(specs, n_max=args.n)
    header = ("label", "log_b", "b", "dim", "diverged", "nondecreasing",
              "phi_over_log_grows")
    emit(rows, [header, *(tuple(r[h] for h in header) for r in rows)], args)


# -- parser ---------------------------------------------------------------------------

def _common_flags() -> argparse.ArgumentParser:
    # accepted before or after the subcommand; SUPPRESS keeps the subparser
    # from overwriting a value already parsed at the top level
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--format", choices=("json", "csv"),
                   default=argparse.SUPPRESS)
    c.add_argument("--output", default=argparse.SUPPRESS,
                   help="write results to this file instead of stdout")
    c.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="worker bound for parallel-capable subcommands")
    return c


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cflab",
        description="Continued-fraction growth exponents, spectra, and covers.",
        parents=[_common_flags()])
    top.set_defaults(format="json", output=None, threads=os.cpu_count() or 1)
    sub = top.add_subparsers(dest="command", required=True)

    # set_defaults rewrites the default on the parent's action objects, so the
    # subcommands need their own instance to keep SUPPRESS intact
    common = _common_flags()

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(handler=fn)
        return p

    p = add("expand", cmd_expand, help="partial quotients of a rational")
    p.add_argument("--x", required=True, help="rational in (0,1), e.g. 3/7")
    p.add_argument("--max-terms", type=int, default=None)

    p = add("convergents", cmd_convergents, help="p_n/q_n along a sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("cylinder", cmd_cylinder, help="interval of a digit prefix")
    p.add_argument("--prefix", required=True, help="comma-separated digits")

    p = add("tau", cmd_tau, help="convergence-exponent estimators")
    p.add_argument("--seq", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--estimator", choices=("monotone", "liminf", "series"),
                   default="monotone")
    p.add_argument("--s", type=float, default=None, help="exponent for series mode")
    p.add_argument("--window", type=int, default=None)

    p = add("construct", cmd_construct, help="sequence with a target exponent")
    p.add_argument("--alpha", required=True)
    p.add_argument("--terms", type=int, default=16)

    p = add("splice", cmd_splice, help="replace the first entries of a sequence")
    p.add_argument("--prefix", required=True, help="comma-separated digits")
    p.add_argument("--cut", type=int, required=True)
    p.add_argument("--tail", required=True)
    p.add_argument("--terms", type=int, default=16)

    p = add("spectrum", cmd_spectrum, help="closed-form dimension values")
    p.add_argument("--set", choices=("full", "lambda", "e", "f", "trichotomy"),
                   required=True)
    p.add_argument("--alpha", required=True)

    p = add("xi", cmd_xi, help="xi reading and implied dimension")
    p.add_argument("--s-seq", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=int, default=None)

    for name, fn in (("bgrowth", cmd_bgrowth), ("bhirst", cmd_bhirst)):
        p = add(name, fn, help=f"{name} reading and implied dimension")
        p.add_argument("--phi", required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--window", type=int, default=None)

    p = add("tseq", cmd_tseq, help="auxiliary sup-sequence in log log domain")
    p.add_argument("--phi", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--horizon-cap", type=int, default=200000)
    p.add_argument("--full", action="store_true", help="include the whole array")

    p = add("count", cmd_count, help="number of nondecreasing tuples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, required=True)

    p = add("enumerate", cmd_enumerate, help="list a constraint family")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, default=covers.DEFAULT_ENUM_CAP)

    p = add("falconer", cmd_falconer, help="nested-construction dimension lower bound")
    p.add_argument("--s-seq", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=int, default=None)

    p = add("critical", cmd_critical, help="critical exponent of a cover")
    p.add_argument("--family", default=None)
    p.add_argument("--levels", default=None,
                   help="banded-family scale sequence for analytic bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, default=covers.DEFAULT_LENGTH_CAP)

    p = add("ergodic", cmd_ergodic, help="Birkhoff sandwich Monte Carlo")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--orbit", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trunc-k", type=int, default=ergodic.DEFAULT_TRUNC)
    p.add_argument("--full", action="store_true", help="include every average")

    p = add("ephi-table", cmd_ephi_table, help="growth-law table of B and dim")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--phi", action="append", default=None,
                   help="growth spec; repeatable, default family if omitted")

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except CflabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
