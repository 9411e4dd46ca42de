"""Monte Carlo ensembles of edge counts, summary statistics and KS distances."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph import (STREAM_ORDER, Graph, SimParams, derived_seed,
                    sample_adjacency)
from .polytope import count_edges, edge_counts_dense
from .triangulation import count_tri_edges, random_arc_order, tri_edge_counts_dense

MODELS = ("polytope", "triangulation")
ORDER_POLICIES = ("fresh_per_replicate", "fixed")
METHODS = ("dense", "enumerate")
SAMPLE_MOMENTS = "sample_moments"
EXACT_MEAN_SAMPLE_VAR = "exact_mean_sample_var"

CSV_FIELDS = ("p", "n", "model", "replicates", "mean", "variance", "skewness",
              "ks_distance", "seed")


def model_total(adjacency, model: str) -> int:
    """Edge count ``K`` of one graph under ``model``, from its dense adjacency."""
    if model == "polytope":
        return edge_counts_dense(adjacency).total
    if model == "triangulation":
        return tri_edge_counts_dense(adjacency).total
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


def _check_choice(name, value, allowed):
    if value not in allowed:
        raise ValueError(f"{name} must be one of {allowed}, got {value!r}")


@dataclass
class EnsembleSummary:
    replicates: int
    sample_mean: float
    sample_variance: float
    sample_skewness: float
    standard_error_mean: float
    samples: Optional[np.ndarray] = field(default=None, repr=False)


class RunningMoments:
    """One-pass mean, unbiased variance and skewness (Welford / Terriberry updates)."""

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.m3 = 0.0

    def push(self, x: float):
        n1 = self.count
        self.count += 1
        n = self.count
        delta = x - self.mean
        delta_n = delta / n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m3 += term1 * delta_n * (n - 2) - 3 * delta_n * self.m2
        self.m2 += term1

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def skewness(self) -> float:
        """Moment skewness ``g1 = m3 / m2^(3/2)`` (0 for a constant sample)."""
        if self.count < 2 or self.m2 <= 0:
            return 0.0
        return math.sqrt(self.count) * self.m3 / self.m2**1.5


def summarize(samples, keep_samples: bool = True) -> EnsembleSummary:
    acc = RunningMoments()
    for x in samples:
        acc.push(float(x))
    var = acc.variance
    arr = np.asarray(samples) if keep_samples else None
    return EnsembleSummary(acc.count, acc.mean, var, acc.skewness,
                           math.sqrt(var / acc.count), arr)


def _replicate_count(params: SimParams, model: str, index: int, order_policy: str,
                     method: str) -> int:
    adj = sample_adjacency(params, index)
    if method == "dense":
        return model_total(adj, model)
    g = Graph.from_adjacency(adj)
    if model == "polytope":
        return count_edges(g).total
    order_index = index if order_policy == "fresh_per_replicate" else 0
    order = random_arc_order(params.n, derived_seed(params.seed, STREAM_ORDER, order_index))
    return count_tri_edges(g, order).total


def _count_chunk(args) -> list:
    params, model, indices, order_policy, method = args
    return [_replicate_count(params, model, i, order_policy, method) for i in indices]


def sample_counts(params: SimParams, model: str, replicates: int,
                  order_policy: str = "fresh_per_replicate", method: str = "dense",
                  threads: int = 1, first_index: int = 0) -> np.ndarray:
    """``K`` for replicates ``first_index .. first_index + replicates - 1``, in index order.

    Replicate ``i`` depends only on ``(seed, i)``, and chunks are reassembled
    in index order, so the result does not depend on ``threads``.
    """
    _check_choice("model", model, MODELS)
    _check_choice("order_policy", order_policy, ORDER_POLICIES)
    _check_choice("method", method, METHODS)
    indices = list(range(first_index, first_index + replicates))
    if threads <= 1 or replicates < 2 * threads:
        out = _count_chunk((params, model, indices, order_policy, method))
    else:
        size = math.ceil(len(indices) / threads)
        chunks = [(params, model, indices[k:k + size], order_policy, method)
                  for k in range(0, len(indices), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            out = [k for part in pool.map(_count_chunk, chunks) for k in part]
    return np.asarray(out, dtype=np.int64)


def run_ensemble(params: SimParams, model: str = "polytope", replicates: int = 1000,
                 order_policy: str = "fresh_per_replicate", method: str = "dense",
                 keep_samples: bool = False, threads: int = 1) -> EnsembleSummary:
    """Sample ``replicates`` graphs and summarise their edge counts.

    ``method="enumerate"`` runs the pair-by-pair counters; for the
    triangulation it draws an arc order per replicate (``fresh_per_replicate``)
    or one shared order (``fixed``).  ``method="dense"`` uses the matrix
    identities, for which the order is irrelevant.  Raw counts are kept
    only with ``keep_samples=True`` (needed for KS distances).
    """
    if replicates < 2:
        raise ValueError("an ensemble needs at least 2 replicates")
    ks = sample_counts(params, model, replicates, order_policy, method, threads)
    return summarize(ks, keep_samples)


def normal_cdf(z: float) -> float:
    """Standard normal distribution function, ``0.5 * erfc(-z / sqrt 2)``.

    ``math.erfc`` keeps full relative accuracy in both tails, which a
    ``1 + erf`` formulation would lose for negative ``z``.
    """
    if not math.isfinite(z):
        raise ValueError("normal_cdf needs a finite argument")
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


@dataclass(frozen=True)
class KSReport:
    distance: float
    standardization: str


def standardize(samples, standardization: str = SAMPLE_MOMENTS,
                exact_mean: Optional[float] = None) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    if standardization == SAMPLE_MOMENTS:
        center = math.fsum(x) / x.size
    elif standardization == EXACT_MEAN_SAMPLE_VAR:
        if exact_mean is None:
            raise ValueError("exact_mean_sample_var needs exact_mean")
        center = float(exact_mean)
    else:
        raise ValueError(f"unknown standardization {standardization!r}")
    mean = math.fsum(x) / x.size
    var = math.fsum((x - mean) ** 2) / (x.size - 1)
    if var <= 0:
        raise ValueError("samples have zero variance")
    return (x - center) / math.sqrt(var)


def ks_distance_to_normal(samples, standardization: str = SAMPLE_MOMENTS,
                          exact_mean: Optional[float] = None) -> KSReport:
    """Kolmogorov distance between the standardised empirical law and N(0, 1)."""
    z = np.sort(standardize(samples, standardization, exact_mean))
    r = z.size
    cdf = np.array([normal_cdf(v) for v in z])
    i = np.arange(1, r + 1)
    d = max(float(np.max(np.abs(i / r - cdf))), float(np.max(np.abs((i - 1) / r - cdf))))
    return KSReport(d, standardization)


@dataclass(frozen=True)
class SweepRow:
    p: float
    n: int
    model: str
    replicates: int
    mean: float
    variance: float
    skewness: float
    ks_distance: float
    seed: int


def sweep(n: int, ps: Sequence[float], model: str = "polytope", replicates: int = 1000,
          seed: int = 0, order_policy: str = "fresh_per_replicate", method: str = "dense",
          threads: int = 1) -> list:
    """One summary row per probability in ``ps``."""
    if not ps:
        raise ValueError("the probability grid is empty")
    rows = []
    for p in ps:
        params = SimParams(n, p, seed)
        summ = run_ensemble(params, model, replicates, order_policy, method, True, threads)
        try:
            ks = ks_distance_to_normal(summ.samples).distance
        except ValueError:
            ks = float("nan")
        rows.append(SweepRow(p, n, model, replicates, summ.sample_mean, summ.sample_variance,
                             summ.sample_skewness, ks, seed))
    return rows


def format_float(x: float) -> str:
    return f"{x:.12g}"


def rows_to_csv(rows, config: Optional[dict] = None) -> str:
    """CSV text; ``config`` is embedded as a leading ``# config=`` comment line."""
    buf = io.StringIO()
    if config is not None:
        buf.write("# config=" + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        d = asdict(r)
        w.writerow([format_float(d[k]) if isinstance(d[k], float) else d[k] for k in CSV_FIELDS])
    return buf.getvalue()


def rows_to_json(rows, config: Optional[dict] = None) -> str:
    """JSON mirror of :func:`rows_to_csv` with the same field names and float formatting."""
    out_rows = []
    for r in rows:
        d = asdict(r)
        out_rows.append({k: (float(format_float(d[k])) if isinstance(d[k], float) else d[k])
                         for k in CSV_FIELDS})
    return json.dumps({"config": config, "rows": out_rows}, sort_keys=True, indent=2) + "\n"
