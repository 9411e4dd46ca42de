"""Closed-form moments of the edge counts.

All expressions are evaluated in exact rational arithmetic: a ``Fraction``
(or ``int``) probability returns a ``Fraction``; a ``float`` is converted
exactly to a rational and the result is rounded once to ``float`` at the
end.  This keeps the ``(1 - 2p^2)^2`` cancellation near ``p = 1/sqrt(2)``
meaningful for large ``n``.

``(n)_k`` denotes the falling factorial ``n (n-1) ... (n-k+1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

PROOF_P = "proof_p"
THEOREM_P2 = "theorem_p2"
ORIGIN_VARIANTS = (PROOF_P, THEOREM_P2)


def falling_factorial(n: int, k: int) -> int:
    if n < k:
        return 0
    return math.perm(n, k)


def critical_p() -> float:
    """The probability ``1/sqrt(2)`` at which the leading variance coefficient vanishes."""
    return 1.0 / math.sqrt(2.0)


def expectation_polytope(n: int, p):
    """Exact ``E[K]`` for the polytope edge count of G(n, p)."""
    P, out = _exact(p)
    one = Fraction(1)
    val = (12 * math.comb(n, 4) * P**2 * (one - P**2)
           + 6 * math.comb(n, 3) * P**2 * (one + (one - P) * _pow(one - P**2, n - 3)))
    return out(val)


def expectation_triangulation(n: int, p, origin_variant: str = PROOF_P):
    """Exact ``E[K]`` for the triangulation edge count.

    ``origin_variant`` picks the origin-spoke term: ``"proof_p"`` gives
    ``2 C(n,2) p`` (two spokes per present arc, the correct count);
    ``"theorem_p2"`` gives the ``2 C(n,2) p^2`` form kept for comparison.
    """
    if origin_variant not in ORIGIN_VARIANTS:
        raise ValueError(f"origin_variant must be one of {ORIGIN_VARIANTS}")
    P, out = _exact(p)
    one = Fraction(1)
    c2 = math.comb(n, 2)
    val = (6 * math.comb(n, 4) * P**2 * (2 - P**2)
           + 6 * math.comb(n, 3) * P**2
           + 2 * c2 * (one - P) * (one - _pow(one - P**2, n - 2)))
    val += 2 * c2 * (P if origin_variant == PROOF_P else P**2)
    return out(val)


def variance_case1_subcases(n: int, p) -> dict:
    """Covariance contributions of pairs of disjoint-arc pairs, one entry per configuration.

    Keys name the overlap of the two 4-node supports (2, 3 or 4 shared
    nodes) and the configuration within it.  Values are exact rationals.
    """
    P, _ = _exact(p)
    Q = 1 - P
    r = 1 - P**2
    f4, f5, f6 = (falling_factorial(n, k) for k in (4, 5, 6))
    return {
        "two_nodes/two_2paths": 2 * f6 * P**7 * Q,
        "two_nodes/3path_plus_arc": -4 * f6 * P**5 * Q * r,
        "two_nodes/shared_arc": 2 * f6 * P**3 * Q * r**2,
        "three_nodes/alternating_4path": -4 * f5 * P**5 * Q * (4 * r - P),
        "three_nodes/shared_arc_plus_node": 4 * f5 * P**3 * Q * (P**3 + 2 * r**2),
        "four_nodes/4cycle": -f4 * P**4 * r * (3 - 4 * P**2),
        "four_nodes/identical": f4 * P**2 * r * (1 - P**2 * r + r**2),
    }


def variance_case1_polytope(n: int, p):
    """Principal variance terms of the polytope edge count.

    Sum of all covariances between pairs whose two arcs are disjoint.  The
    remaining covariances (some pair sharing a node) carry a factor
    ``(1 - p^2)^(n - k)`` and are left out, so this is a reference value
    rather than the exact variance.
    """
    P, out = _exact(p)
    Q = 1 - P
    r = 1 - P**2
    s = 1 - 2 * P**2
    f4, f5, f6 = (falling_factorial(n, k) for k in (4, 5, 6))
    val = (2 * f6 * P**3 * Q * s**2
           + 8 * f5 * P**3 * Q * (P**3 * Q + s**2)
           - f4 * P**4 * r * (3 - 4 * P**2)
           + f4 * P**2 * r * (1 - P**2 * r + r**2))
    return out(val)


def binomial_moment4(m: int, p):
    """Exact ``E[X^4]`` for ``X ~ Bin(m, p)``: ``(m)_4 p^4 + 6 (m)_3 p^3 + 7 (m)_2 p^2 + m p``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    P, out = _exact(p)
    val = (falling_factorial(m, 4) * P**4 + 6 * falling_factorial(m, 3) * P**3
           + 7 * falling_factorial(m, 2) * P**2 + m * P)
    return out(val)


@dataclass(frozen=True)
class MomentReport:
    n: int
    p: float
    expectation: float
    variance_principal: float
    regime_label: str


def moment_report(n: int, p, model: str = "polytope",
                  origin_variant: str = PROOF_P) -> MomentReport:
    """Expectation, principal variance terms (polytope only) and a regime label."""
    if model == "polytope":
        exp = expectation_polytope(n, p)
        var = variance_case1_polytope(n, p)
        pf = float(p)
        disjoint = 12 * math.comb(n, 4) * pf**2 * (1 - pf**2)
        adjacent = 6 * math.comb(n, 3) * pf**2
        mean_label = "disjoint-pairs dominated" if disjoint >= adjacent else "adjacent-pairs dominated"
        if n >= 1 and abs(pf - critical_p()) <= n ** -0.5:
            var_label = "critical window around 1/sqrt(2)"
        else:
            var_label = "generic variance n^6 p^3 (1-p)(1-sqrt2 p)^2"
        label = f"{mean_label}; {var_label}"
    elif model == "triangulation":
        exp = expectation_triangulation(n, p, origin_variant)
        var = float("nan")
        label = "triangulation: variance has no closed form (lower bound n^6 p^3 only)"
    else:
        raise ValueError(f"unknown model {model!r}")
    return MomentReport(n, float(p), float(exp), float(var), label)


def _exact(p):
    """Exact rational copy of ``p`` plus a converter back to the caller's number type."""
    if isinstance(p, Rational):
        P = Fraction(p)
        out = _identity
    else:
        P = Fraction(float(p))
        out = float
    if not 0 <= P <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return P, out


def _identity(x):
    return x


def _pow(base: Fraction, k: int) -> Fraction:
    # binomial prefactors vanish whenever k < 0; avoid 0 ** negative
    return base**k if k >= 0 else Fraction(0)
