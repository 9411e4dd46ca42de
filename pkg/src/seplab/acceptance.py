"""Acceptance checks, shared by ``seplab verify`` and the test suite.

Every check returns a :class:`CheckResult`; tolerances are the module
constants below.
"""
from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ensemble, moments, oracle, stein
from .graph import Graph, SimParams, erdos_renyi
from .polytope import count_edges
from .triangulation import count_tri_edges, random_arc_order

SMALL_GRAPHS = {
    "triangle": (3, [(1, 2), (2, 3), (1, 3)], 6),
    "K4": (4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], 24),
    "P4": (4, [(1, 2), (2, 3), (3, 4)], 12),
    "single arc": (2, [(1, 2)], 0),
}
ORACLE_RANDOM_GRAPHS = 200
MEAN_TOLERANCE_SE = 4.0
EXACT_NS = (2, 3, 4)
EXACT_PS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
ORDER_GRAPHS = 100
ORDERS_PER_GRAPH = 5
ORDER_MAX_NODES = 12
VARIANCE_RATIO_RANGE = (0.5, 2.0)
DIP_PS = (0.55, 0.7071, 0.85)
DIP_FACTOR = 0.5
GRADIENT_INSTANCES = 10_000
GRADIENT_NS = (6, 12, 24)
GRADIENT_PS = (0.2, 0.5, 0.8)
CLT_NS = (15, 30, 60)
CLT_P = 0.3
CLT_REPS = 5000
KS_LIMIT = 0.05
STEIN_REPS = 2000


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def check_small_counts(seed: int = 0) -> CheckResult:
    parts, ok = [], True
    for name, (n, arcs, expected) in SMALL_GRAPHS.items():
        g = Graph.from_arcs(n, arcs)
        comb = count_edges(g).total
        res = oracle.enumerate_edges(g)
        good = comb == expected and res.edge_count == expected and res.combinatorial_match
        ok &= good
        parts.append(f"{name}={comb}/{res.edge_count}")
    return CheckResult(1, "small polytope counts", ok, "counter/oracle " + ", ".join(parts))


def check_oracle_equivalence(seed: int = 0) -> CheckResult:
    bad4 = sum(not oracle.enumerate_edges(g).combinatorial_match
               for g in oracle.all_graphs(4) if g.m)
    params = SimParams(5, 0.5, seed)
    bad5 = sum(not oracle.enumerate_edges(g).combinatorial_match
               for g in (erdos_renyi(params, i) for i in range(ORACLE_RANDOM_GRAPHS)) if g.m)
    # the empty graph has no polytope and trivially no edges on either side
    return CheckResult(2, "oracle equivalence", bad4 == 0 and bad5 == 0,
                       f"mismatches: {bad4} of 64 (n=4), {bad5} of {ORACLE_RANDOM_GRAPHS} (n=5)")


def _mean_check(model: str, seed: int, method: str) -> tuple:
    params = SimParams(30, 0.1, seed)
    summ = ensemble.run_ensemble(params, model, 2000, "fresh_per_replicate", method, False)
    if model == "polytope":
        ref = moments.expectation_polytope(30, 0.1)
    else:
        ref = moments.expectation_triangulation(30, 0.1, moments.PROOF_P)
    z = abs(summ.sample_mean - ref) / summ.standard_error_mean
    return z <= MEAN_TOLERANCE_SE, f"mean {summ.sample_mean:.3f} vs {ref:.3f} ({z:.2f} se)"


def check_expectation_polytope(seed: int = 0) -> CheckResult:
    ok, text = _mean_check("polytope", seed, "dense")
    exact_ok = all(oracle.exhaustive_expectation(n, p, oracle.POLYTOPE_ORACLE)
                   == moments.expectation_polytope(n, p)
                   for n in EXACT_NS for p in EXACT_PS)
    return CheckResult(3, "polytope expectation", ok and exact_ok,
                       f"{text}; exhaustive == closed form: {exact_ok}")


def check_expectation_triangulation(seed: int = 0) -> CheckResult:
    ok, text = _mean_check("triangulation", seed, "enumerate")
    exh = oracle.exhaustive_expectation(2, Fraction(1, 2), oracle.TRIANGULATION_COMBINATORIAL)
    proof = moments.expectation_triangulation(2, Fraction(1, 2), moments.PROOF_P)
    theorem = moments.expectation_triangulation(2, Fraction(1, 2), moments.THEOREM_P2)
    disc = exh == 1 and proof == exh and theorem != exh
    return CheckResult(4, "triangulation expectation", ok and disc,
                       f"{text}; n=2 exhaustive {exh}, proof_p {proof}, theorem_p2 {theorem}")


def check_order_invariance(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng([seed, 5])
    varying = 0
    for i in range(ORDER_GRAPHS):
        n = int(rng.integers(2, ORDER_MAX_NODES + 1))
        p = float(rng.uniform(0.1, 0.9))
        g = erdos_renyi(SimParams(n, p, seed), i)
        totals = {count_tri_edges(g, random_arc_order(n, int(rng.integers(2**63)))).total
                  for _ in range(ORDERS_PER_GRAPH)}
        varying += len(totals) > 1
    return CheckResult(5, "order invariance", varying == 0,
                       f"{varying} of {ORDER_GRAPHS} graphs with order-dependent totals")


def check_variance_principal(seed: int = 0) -> CheckResult:
    summ = ensemble.run_ensemble(SimParams(60, 0.3, seed), "polytope", 5000, keep_samples=False)
    ratio = summ.sample_variance / moments.variance_case1_polytope(60, 0.3)
    lo, hi = VARIANCE_RATIO_RANGE
    return CheckResult(6, "variance principal terms", lo <= ratio <= hi,
                       f"sample/principal = {ratio:.4f}, allowed [{lo}, {hi}]")


def normalized_variances(seed: int = 0, n: int = 60, reps: int = 5000) -> list:
    out = []
    for p in DIP_PS:
        summ = ensemble.run_ensemble(SimParams(n, p, seed), "polytope", reps, keep_samples=False)
        out.append(summ.sample_variance / (n**6 * p**3 * (1 - p)))
    return out


def check_variance_dip(seed: int = 0) -> CheckResult:
    lo, mid, hi = normalized_variances(seed)
    ok = mid < lo and mid < hi and mid <= DIP_FACTOR * lo and mid <= DIP_FACTOR * hi
    return CheckResult(7, "variance dip at 1/sqrt(2)", ok,
                       f"normalized variances {lo:.4g}, {mid:.4g}, {hi:.4g}")


def check_gradient_bounds(seed: int = 0) -> CheckResult:
    from .cli import gradient_check

    per_cell = math.ceil(GRADIENT_INSTANCES / (len(GRADIENT_NS) * len(GRADIENT_PS)))
    parts, ok = [], True
    for model in ensemble.MODELS:
        stats = gradient_check(GRADIENT_NS, GRADIENT_PS, per_cell, model, seed)
        total = sum(s["count"] for s in stats.values())
        viol = sum(s["violations"] for s in stats.values())
        worst = max(s["max_ratio"] for s in stats.values())
        ok &= viol == 0 and total >= GRADIENT_INSTANCES
        parts.append(f"{model}: {viol} violations in {total}, max ratio {worst:.3f}")
    return CheckResult(8, "gradient bounds", ok, "; ".join(parts))


def ks_trend(model: str, seed: int = 0) -> list:
    return [ensemble.ks_distance_to_normal(
        ensemble.run_ensemble(SimParams(n, CLT_P, seed), model, CLT_REPS,
                              keep_samples=True).samples).distance
        for n in CLT_NS]


def _strictly_decreasing(xs) -> bool:
    return all(a > b for a, b in zip(xs, xs[1:]))


def check_clt_trend(seed: int = 0) -> CheckResult:
    parts, ok = [], True
    for model in ensemble.MODELS:
        d = ks_trend(model, seed)
        ok &= _strictly_decreasing(d) and d[-1] < KS_LIMIT
        parts.append(f"{model} " + " > ".join(f"{x:.4f}" for x in d))
    return CheckResult(9, "KS trend", ok, "; ".join(parts))


def check_stein_trend(seed: int = 0) -> CheckResult:
    parts, ok = [], True
    for model in ensemble.MODELS:
        bounds = [stein.estimate_stein_terms(SimParams(n, CLT_P, seed), model, STEIN_REPS)
                  .kolmogorov_bound for n in CLT_NS]
        ok &= _strictly_decreasing(bounds)
        parts.append(f"{model} " + " > ".join(f"{b:.4f}" for b in bounds))
    return CheckResult(10, "Stein bound trend", ok, "; ".join(parts))


DETERMINISM_RUNS = (
    ["simulate", "--n", "20", "--p", "0.3", "--reps", "400"],
    ["simulate", "--n", "12", "--p", "0.4", "--reps", "60", "--model", "triangulation",
     "--method", "enumerate", "--format", "json"],
    ["sweep", "--n", "15", "--p-start", "0.2", "--p-end", "0.6", "--p-step", "0.2",
     "--reps", "300"],
    ["clt", "--n", "10,16", "--p", "0.3", "--reps", "200", "--stein-reps", "40",
     "--pilot-reps", "100", "--model", "triangulation"],
)


def check_determinism(seed: int = 0, thread_counts=(1, 2, 3)) -> CheckResult:
    from .cli import main

    differing = []
    with tempfile.TemporaryDirectory() as tmp:
        for k, argv in enumerate(DETERMINISM_RUNS):
            blobs = []
            for t in thread_counts:
                path = os.path.join(tmp, f"run{k}_t{t}.out")
                code = main(argv + ["--seed", str(seed), "--threads", str(t), "--out", path])
                with open(path, "rb") as fh:
                    blobs.append((code, fh.read()))
            if len(set(blobs)) != 1 or blobs[0][0] != 0:
                differing.append(argv[0])
    return CheckResult(11, "determinism across threads", not differing,
                       f"{len(DETERMINISM_RUNS)} runs x threads {list(thread_counts)}; "
                       f"differing: {differing or 'none'}")


CHECKS = {
    1: check_small_counts,
    2: check_oracle_equivalence,
    3: check_expectation_polytope,
    4: check_expectation_triangulation,
    5: check_order_invariance,
    6: check_variance_principal,
    7: check_variance_dip,
    8: check_gradient_bounds,
    9: check_clt_trend,
    10: check_stein_trend,
    11: check_determinism,
}


def run_check(number: int, seed: int = 0) -> CheckResult:
    if number not in CHECKS:
        raise ValueError(f"no acceptance criterion {number}")
    start = time.perf_counter()
    res = CHECKS[number](seed)
    res.seconds = time.perf_counter() - start
    return res


def run_all(numbers=None, seed: int = 0) -> list:
    return [run_check(k, seed) for k in (numbers or sorted(CHECKS))]
