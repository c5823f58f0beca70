"""Batch command-line front end.

Every subcommand prints a human-readable table to stdout. With ``--out`` the
same rows go to a CSV file (header row, RFC-4180 quoting); ``construct`` and
``solve`` instead write a UTF-8 ``key: value`` certificate record.

Exit status: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import constructions, core, graphon, montecarlo, rates, varsolve
from .core import NumericalError, ValidationError

FMT = "{:.12g}"

# CSV columns per subcommand
COLUMNS = {
    "rate": ["mode", "delta", "s", "t", "value", "branch", "clique", "anticlique"],
    "indpoly": ["s", "k", "coefficient"],
    "simulate": ["n", "p", "stat", "threshold", "trials", "successes", "estimate", "std_error", "seed"],
    "conditional": ["n", "p", "delta", "trials", "successes", "estimate", "std_error", "seed"],
    "oracle": ["n", "p", "stat", "threshold", "probability"],
    "graphon-check": ["check", "instances", "violations", "max_excess"],
    "rate-curve": ["n", "p", "threshold", "trials", "successes", "estimate", "std_error",
                   "normalized_rate", "theory", "exact", "censored"],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return FMT.format(float(x))
    return str(x)


def _emit_table(cmd: str, rows: list[dict], out: str | None, stream) -> None:
    cols = COLUMNS[cmd]
    text = [[fmt(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(t[i]) for t in text)) for i, c in enumerate(cols)]
    print("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip(), file=stream)
    for t in text:
        print("  ".join(v.ljust(w) for v, w in zip(t, widths)).rstrip(), file=stream)
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(cols)
            writer.writerows(text)


def _emit_record(record: dict, out: str | None, stream) -> None:
    lines = [f"{k}: {fmt(v)}" for k, v in record.items()]
    print("\n".join(lines), file=stream)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="spectral-ldp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    r = sub.add_parser("rate", help="closed-form rate functions")
    r.add_argument("--mode", choices=["lambda1", "centered", "cycle", "theta"], default="lambda1")
    r.add_argument("--delta", type=float)
    r.add_argument("--s", type=int)
    r.add_argument("--t", type=float)
    r.add_argument("--out")

    i = sub.add_parser("indpoly", help="independence polynomial of the s-cycle")
    i.add_argument("--s", type=int, required=True)
    i.add_argument("--method", choices=["recursive", "bruteforce"], default="bruteforce")
    i.add_argument("--out")

    c = sub.add_parser("construct", help="planted construction and its certificate")
    c.add_argument("--kind", choices=list(constructions.KINDS), required=True)
    c.add_argument("--n", type=_positive_int, required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--delta", type=float, required=True)
    c.add_argument("--out")

    s = sub.add_parser("solve", help="numerical variational solver")
    s.add_argument("--problem", choices=["phi1", "phi2"], default="phi1")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--max-iter", type=_positive_int, default=5000)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--seed", type=_seed, default=42)
    s.add_argument("--out")

    m = sub.add_parser("simulate", help="Monte Carlo tail estimate")
    m.add_argument("--n", type=_positive_int, required=True)
    m.add_argument("--p", type=float, required=True)
    m.add_argument("--stat", choices=list(core.STATISTICS), default="lambda1")
    m.add_argument("--threshold", type=float, required=True)
    m.add_argument("--trials", type=_positive_int, default=10000)
    m.add_argument("--seed", type=_seed, default=42)
    m.add_argument("--out")

    k = sub.add_parser("conditional", help="P(lambda2 >= delta n p | planted clique)")
    k.add_argument("--n", type=_positive_int, required=True)
    k.add_argument("--p", type=float, required=True)
    k.add_argument("--delta", type=float, required=True)
    k.add_argument("--trials", type=_positive_int, default=100)
    k.add_argument("--seed", type=_seed, default=42)
    k.add_argument("--out")

    o = sub.add_parser("oracle", help="exact tail probability by enumeration (n <= 6)")
    o.add_argument("--n", type=_positive_int, required=True)
    o.add_argument("--p", type=float, required=True)
    o.add_argument("--stat", choices=list(core.STATISTICS), default="lambda1")
    o.add_argument("--threshold", type=float, required=True)
    o.add_argument("--out")

    g = sub.add_parser("graphon-check", help="inequality battery on random step graphons")
    g.add_argument("--m", type=_positive_int, default=8)
    g.add_argument("--p", type=float, default=0.1)
    g.add_argument("--s", type=int, default=4)
    g.add_argument("--instances", type=_positive_int, default=1000)
    g.add_argument("--seed", type=_seed, default=42)
    g.add_argument("--out")

    rc = sub.add_parser("rate-curve", help="empirical normalised rate against theory")
    rc.add_argument("--ns", required=True, help="comma-separated vertex counts")
    rc.add_argument("--p", type=float, help="constant edge probability")
    rc.add_argument("--p-scale", type=float, help="p = scale * n^-exponent")
    rc.add_argument("--p-exponent", type=float, default=0.5)
    rc.add_argument("--delta", type=float, required=True)
    rc.add_argument("--trials", type=_positive_int, default=10000)
    rc.add_argument("--seed", type=_seed, default=42)
    rc.add_argument("--out")
    return ap


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"--{name} is required for this mode")


def _cmd_rate(args, out):
    if args.mode == "lambda1":
        _need(args, "delta")
        res = rates.rate_lambda1(args.delta)
        row = {"value": res.value, "branch": res.branch, "clique": res.clique, "anticlique": res.anticlique}
    elif args.mode == "centered":
        _need(args, "delta")
        row = {"value": rates.rate_centered(args.delta)}
    elif args.mode == "cycle":
        _need(args, "s", "t")
        res = rates.rate_cycle(args.s, args.t)
        row = {"value": res.value, "branch": res.branch, "clique": res.clique, "anticlique": res.anticlique}
    else:
        _need(args, "s", "delta")
        row = {"value": rates.solve_theta_bar(args.s, args.delta)}
    row.update(mode=args.mode, delta=args.delta, s=args.s, t=args.t)
    _emit_table("rate", [row], args.out, out)


def _cmd_indpoly(args, out):
    fn = rates.indpoly_bruteforce if args.method == "bruteforce" else rates.indpoly_recursive
    poly = fn(args.s)
    print("coefficients: " + ",".join(str(c) for c in poly.coeffs), file=out)
    _emit_table("indpoly", [{"s": args.s, "k": k, "coefficient": c} for k, c in enumerate(poly.coeffs)],
                args.out, out)


def _cmd_construct(args, out):
    c = constructions.build(args.kind, args.n, args.p, args.delta)
    rep = constructions.certify(c)
    _emit_record({
        "kind": c.kind, "n": c.n, "p": c.p, "delta": c.delta, "planted": c.planted, "s": c.s, "z": c.z,
        "statistic": rep.statistic, "achieved": rep.achieved, "eigensolve": rep.eigensolve,
        "threshold": rep.threshold, "feasible": rep.feasible, "entropy": c.entropy.value,
        "entropy_normalized": c.entropy.normalized,
    }, args.out, out)
    if not rep.feasible:
        raise NumericalError("construction does not reach the threshold")


def _cmd_solve(args, out):
    opts = varsolve.SolverOptions(max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    fn = varsolve.solve_phi1 if args.problem == "phi1" else varsolve.solve_phi2
    cert = fn(args.n, args.p, args.delta, opts)
    rate = rates.rate_lambda1(args.delta).value if args.problem == "phi1" else rates.rate_centered(args.delta)
    _emit_record({
        "problem": args.problem, "n": args.n, "p": args.p, "delta": args.delta, "statistic": cert.statistic,
        "constraint_value": cert.constraint_value, "threshold": cert.threshold, "slack": cert.slack,
        "entropy": cert.entropy.value, "entropy_normalized": cert.entropy.normalized, "asymptotic_rate": rate,
        "iterations": cert.iterations, "restarts_used": cert.restarts_used, "start": cert.start,
        "seed": cert.seed,
    }, args.out, out)


def _cmd_simulate(args, out):
    est = montecarlo.estimate_tail(args.n, args.p, args.stat, args.threshold, args.trials, args.seed)
    _emit_table("simulate", [{
        "n": args.n, "p": args.p, "stat": args.stat, "threshold": args.threshold, "trials": est.trials,
        "successes": est.successes, "estimate": est.estimate, "std_error": est.std_error, "seed": est.seed,
    }], args.out, out)


def _cmd_conditional(args, out):
    est = montecarlo.conditional_lambda2(args.n, args.p, args.delta, args.trials, args.seed)
    _emit_table("conditional", [{
        "n": args.n, "p": args.p, "delta": args.delta, "trials": est.trials, "successes": est.successes,
        "estimate": est.estimate, "std_error": est.std_error, "seed": est.seed,
    }], args.out, out)


def _cmd_oracle(args, out):
    prob = core.enumerate_exact_tail(args.n, args.p, args.stat, args.threshold)
    _emit_table("oracle", [{"n": args.n, "p": args.p, "stat": args.stat, "threshold": args.threshold,
                            "probability": prob}], args.out, out)


def inequality_battery(m: int, p: float, s: int, instances: int, seed: int) -> list[dict]:
    """Count violations (beyond 1e-10 relative) of the spectral inequalities on random instances."""
    core.check_p(p)
    core.check_even(s)
    rng = np.random.default_rng(seed)
    tallies = {k: [0, -math.inf] for k in ("schatten", "interlacing", "cycle_holder", "opnorm_cycle")}

    def record(name, lhs, rhs):
        excess = lhs - rhs - 1e-10 * max(1.0, abs(rhs))
        if excess > 0:
            tallies[name][0] += 1
        tallies[name][1] = max(tallies[name][1], lhs - rhs)

    for _ in range(instances):
        w = np.triu(rng.random((m, m)) * (rng.random((m, m)) < rng.random()), 1)
        g = core.WeightedGraph(w + w.T)
        record("schatten", *core.schatten_bound_check(g, s))
        record("interlacing", core.spectrum(g).lambda2, core.centered_opnorm(g, p))
        u = rng.random((m, m))
        u = graphon.StepGraphon((u + u.T) / 2)
        record("cycle_holder", *graphon.holder_cycle_check(u, s))
        v = rng.uniform(-1, 1, (m, m))
        record("opnorm_cycle", *graphon.opnorm_bound_check(graphon.StepGraphon((v + v.T) / 2, signed=True), s))
    return [{"check": k, "instances": instances, "violations": v[0], "max_excess": v[1]} for k, v in tallies.items()]


def _cmd_graphon_check(args, out):
    rows = inequality_battery(args.m, args.p, args.s, args.instances, args.seed)
    _emit_table("graphon-check", rows, args.out, out)
    if any(r["violations"] for r in rows):
        raise NumericalError("inequality violations found")


def _cmd_rate_curve(args, out):
    try:
        ns = [int(x) for x in args.ns.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"--ns must be comma-separated integers: {exc}") from None
    if (args.p is None) == (args.p_scale is None):
        raise ValidationError("give exactly one of --p or --p-scale")
    rule = args.p if args.p is not None else (lambda n: args.p_scale * n ** (-args.p_exponent))
    rows = montecarlo.rate_curve(ns, rule, args.delta, args.trials, args.seed)
    _emit_table("rate-curve", [r.__dict__ for r in rows], args.out, out)


COMMANDS = {
    "rate": _cmd_rate, "indpoly": _cmd_indpoly, "construct": _cmd_construct, "solve": _cmd_solve,
    "simulate": _cmd_simulate, "conditional": _cmd_conditional, "oracle": _cmd_oracle,
    "graphon-check": _cmd_graphon_check, "rate-curve": _cmd_rate_curve,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.cmd](args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=err)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
