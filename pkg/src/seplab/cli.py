"""Command-line entry point: ``seplab <subcommand> [flags]``.

Exit status is 0 on success, 1 on invalid input and 2 when a check
(``verify``, ``gradients``, ``oracle``) finds a failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict
from fractions import Fraction

import numpy as np

from . import ensemble, moments, oracle, stein
from .graph import SimParams, erdos_renyi
from .triangulation import random_arc_order

SEED_ENV = "SEPLAB_SEED"
ORDER_FLAGS = {"fresh": "fresh_per_replicate", "fixed": "fixed"}

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _float_list(text: str) -> list:
    try:
        out = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _probability(text: str):
    """A probability; ``a/b`` stays an exact fraction."""
    try:
        val = Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}")
    if not 0 <= val <= 1:
        raise argparse.ArgumentTypeError(f"probability outside [0, 1]: {text!r}")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seplab", description="Edge counts of random symmetric edge polytopes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, model=True, seed=True, out=True):
        if model:
            p.add_argument("--model", choices=ensemble.MODELS, default="polytope")
        if seed:
            p.add_argument("--seed", type=int, default=None,
                           help=f"random seed (default: ${SEED_ENV} or 0)")
        if out:
            p.add_argument("--out", default=None, help="output file (default: stdout)")
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    def sim_flags(p):
        p.add_argument("--reps", type=int, default=1000)
        p.add_argument("--order", choices=tuple(ORDER_FLAGS), default="fresh")
        p.add_argument("--method", choices=ensemble.METHODS, default="dense")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("exact", help="closed-form expectation and principal variance terms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_probability, required=True)
    p.add_argument("--origin-variant", choices=moments.ORIGIN_VARIANTS, default=moments.PROOF_P)
    p.add_argument("--format", choices=("text", "json"), default="text")
    common(p, seed=False, out=False)

    p = sub.add_parser("simulate", help="Monte Carlo ensemble at one (n, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    sim_flags(p)
    common(p)

    p = sub.add_parser("sweep", help="ensembles over a probability grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_float_list, default=None, help="comma-separated grid")
    p.add_argument("--p-start", type=float)
    p.add_argument("--p-end", type=float)
    p.add_argument("--p-step", type=float)
    sim_flags(p)
    common(p)

    p = sub.add_parser("clt", help="KS distances and Stein-bound estimates over a list of n")
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated node counts")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--stein-reps", type=int, default=500)
    p.add_argument("--pilot-reps", type=int, default=500)
    sim_flags(p)
    common(p)

    p = sub.add_parser("gradients", help="sample the almost-sure gradient bounds")
    p.add_argument("--n", type=_int_list, default=[6, 12, 24])
    p.add_argument("--p", type=_float_list, default=[0.2, 0.5, 0.8])
    p.add_argument("--samples", type=int, default=1000)
    common(p)

    p = sub.add_parser("oracle", help="compare the combinatorial rule with exact geometry")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--override", action="store_true", help="lift the node-count guard")
    common(p, model=False)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", type=_int_list, default=None, help="criterion numbers to run")
    p.add_argument("--seed", type=int, default=None)
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}")


def _check_positive(name, value, minimum=1):
    if value < minimum:
        raise UsageError(f"--{name} must be at least {minimum}")


def _check_open_p(p):
    if not 0 < p < 1:
        raise UsageError("--p must lie strictly between 0 and 1")


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _config(args, seed, **extra) -> dict:
    """Run configuration written into the output header; ``--threads`` and ``--out`` are left out."""
    cfg = {k: v for k, v in vars(args).items() if k not in ("threads", "out", "seed")}
    cfg["seed"] = seed
    cfg.update(extra)
    return cfg


def _grid(args) -> list:
    if args.p is not None:
        if any(x is not None for x in (args.p_start, args.p_end, args.p_step)):
            raise UsageError("use either --p or --p-start/--p-end/--p-step")
        return list(args.p)
    if None in (args.p_start, args.p_end, args.p_step):
        raise UsageError("sweep needs --p or all of --p-start, --p-end, --p-step")
    if args.p_step <= 0 or args.p_end < args.p_start:
        raise UsageError("need --p-step > 0 and --p-end >= --p-start")
    count = int(math.floor((args.p_end - args.p_start) / args.p_step + 1e-9)) + 1
    return [round(args.p_start + k * args.p_step, 12) for k in range(count)]


def _rows_out(args, rows, cfg):
    if args.format == "json":
        _emit(ensemble.rows_to_json(rows, cfg), args.out)
    else:
        _emit(ensemble.rows_to_csv(rows, cfg), args.out)


def cmd_exact(args) -> int:
    _check_positive("n", args.n)
    if args.model == "polytope":
        exp = moments.expectation_polytope(args.n, args.p)
        var = moments.variance_case1_polytope(args.n, args.p)
    else:
        exp = moments.expectation_triangulation(args.n, args.p, args.origin_variant)
        var = None
    report = moments.moment_report(args.n, args.p, args.model, args.origin_variant)
    out = {"n": args.n, "p": str(args.p), "model": args.model,
           "expectation": str(exp) if isinstance(exp, Fraction) else exp,
           "variance_case1": (str(var) if isinstance(var, Fraction) else var),
           "regime": report.regime_label}
    if args.model == "triangulation":
        out["origin_variant"] = args.origin_variant
    if args.format == "json":
        sys.stdout.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    else:
        for k, v in out.items():
            sys.stdout.write(f"{k}: {v}\n")
    return EXIT_OK


def _validate_sim(args):
    _check_positive("reps", args.reps, 2)
    _check_positive("threads", args.threads)


def cmd_simulate(args) -> int:
    _check_positive("n", args.n, 2)
    _check_open_p(args.p)
    _validate_sim(args)
    seed = _seed(args)
    rows = ensemble.sweep(args.n, [args.p], args.model, args.reps, seed,
                          ORDER_FLAGS[args.order], args.method, args.threads)
    _rows_out(args, rows, _config(args, seed))
    return EXIT_OK


def cmd_sweep(args) -> int:
    _check_positive("n", args.n, 2)
    ps = _grid(args)
    for p in ps:
        _check_open_p(p)
    _validate_sim(args)
    seed = _seed(args)
    rows = ensemble.sweep(args.n, ps, args.model, args.reps, seed,
                          ORDER_FLAGS[args.order], args.method, args.threads)
    _rows_out(args, rows, _config(args, seed, p_grid=ps))
    return EXIT_OK


CLT_FIELDS = ensemble.CSV_FIELDS + ("kolmogorov_bound", "B1", "B2", "B3", "B4", "B5")


def cmd_clt(args) -> int:
    _check_open_p(args.p)
    _validate_sim(args)
    _check_positive("stein-reps", args.stein_reps)
    for n in args.n:
        _check_positive("n", n, 2)
    seed = _seed(args)
    records = []
    for n in args.n:
        row = ensemble.sweep(n, [args.p], args.model, args.reps, seed,
                             ORDER_FLAGS[args.order], args.method, args.threads)[0]
        terms = stein.estimate_stein_terms(SimParams(n, args.p, seed), args.model,
                                           args.stein_reps, args.pilot_reps)
        rec = asdict(row)
        rec["kolmogorov_bound"] = terms.kolmogorov_bound
        rec.update(zip(("B1", "B2", "B3", "B4", "B5"), terms.terms()))
        records.append(rec)
    cfg = _config(args, seed)
    fmt = ensemble.format_float
    if args.format == "json":
        rows = [{k: (float(fmt(r[k])) if isinstance(r[k], float) else r[k]) for k in CLT_FIELDS}
                for r in records]
        _emit(json.dumps({"config": cfg, "rows": rows}, sort_keys=True, indent=2) + "\n", args.out)
    else:
        lines = ["# config=" + json.dumps(cfg, sort_keys=True), ",".join(CLT_FIELDS)]
        for r in records:
            lines.append(",".join(fmt(r[k]) if isinstance(r[k], float) else str(r[k])
                                  for k in CLT_FIELDS))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def gradient_check(ns, ps, samples: int, model: str, seed: int) -> dict:
    """Sample ``samples`` instances per ``(n, p)``, cycling through first gradients,
    disjoint second gradients and adjacent second gradients."""
    kinds = ("first", "second_disjoint", "second_adjacent")
    stats = {k: {"count": 0, "violations": 0, "max_ratio": 0.0} for k in kinds}
    for n in ns:
        if n < 4:
            raise ValueError("gradient checks need n >= 4")
        for p in ps:
            params = SimParams(n, p, seed)
            pick = np.random.default_rng([seed, n, int(round(p * 1e6))])
            for i in range(samples):
                g = erdos_renyi(params, i)
                order = random_arc_order(n, seed + i) if model == "triangulation" else None
                kind = kinds[i % 3]
                nodes = [int(x) + 1 for x in pick.permutation(n)[:4]]
                if kind == "first":
                    s = stein.discrete_gradient(g, nodes[:2], model, order, p)
                elif kind == "second_disjoint":
                    s = stein.second_gradient(g, nodes[:2], nodes[2:], model, order, p)
                else:
                    s = stein.second_gradient(g, nodes[:2], nodes[1:3], model, order, p)
                st = stats[kind]
                st["count"] += 1
                st["violations"] += not s.within_bound
                st["max_ratio"] = max(st["max_ratio"], s.ratio)
    return stats


def cmd_gradients(args) -> int:
    _check_positive("samples", args.samples)
    for p in args.p:
        _check_open_p(p)
    seed = _seed(args)
    try:
        stats = gradient_check(args.n, args.p, args.samples, args.model, seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = {"config": _config(args, seed), "checks": stats}
    if args.format == "json":
        _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    else:
        lines = ["# config=" + json.dumps(report["config"], sort_keys=True),
                 "kind,count,violations,max_ratio"]
        for k, st in stats.items():
            lines.append(f"{k},{st['count']},{st['violations']},{ensemble.format_float(st['max_ratio'])}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(st["violations"] == 0 for st in stats.values()) else EXIT_CHECK_FAILED


def cmd_oracle(args) -> int:
    _check_positive("n", args.n, 2)
    seed = _seed(args)
    if args.exhaustive:
        if args.n > oracle.MAX_ORACLE_NODES and not args.override:
            raise UsageError(f"--n above {oracle.MAX_ORACLE_NODES} needs --override")
        graphs = list(oracle.all_graphs(args.n))
    else:
        _check_open_p(args.p)
        _check_positive("samples", args.samples)
        params = SimParams(args.n, args.p, seed)
        graphs = [erdos_renyi(params, i) for i in range(args.samples)]
    matched = 0
    mismatches = []
    for g in graphs:
        try:
            res = oracle.enumerate_edges(g, override=args.override)
        except oracle.SizeGuardError as exc:
            raise UsageError(str(exc))
        if res.combinatorial_match:
            matched += 1
        else:
            mismatches.append({"graph": g.to_edge_list(), "pairs": [str(x) for x in res.mismatches]})
    report = {"config": _config(args, seed), "graphs": len(graphs), "matched": matched,
              "mismatches": mismatches}
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    sys.stderr.write(f"{matched}/{len(graphs)} graphs matched\n")
    return EXIT_OK if matched == len(graphs) else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    from . import acceptance

    seed = _seed(args)
    results = acceptance.run_all(args.only, seed=seed)
    for r in results:
        sys.stdout.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


COMMANDS = {"exact": cmd_exact, "simulate": cmd_simulate, "sweep": cmd_sweep, "clt": cmd_clt,
            "gradients": cmd_gradients, "oracle": cmd_oracle, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ValueError, stein.DegenerateVarianceError) as exc:
        sys.stderr.write(f"seplab: error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
