"""The (R2, R4) moment landscape and its Schmidt-number regions.

Minimizing the fourth moment at fixed second moment under the trace-norm
budget of the Schmidt-number-k criterion yields singular-value patterns
(0, ..., 0, l, m, ..., m) with l <= m; the optimum per zero-count solves a
two-unknown system in closed form. For separable states (k = 1) the result is
the piecewise function f_lb with kinks at x = 1/N, N = 2..d1^2-1, realized by
N equal singular values. The upper boundary is x^2, valid up to a purity cap;
the lower boundary of *all* states is the isotropic-family parabola g_lb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .moments import MomentPoint

_DOMAIN_TOL = 1e-9


def f_ub(x: float) -> float:
    """Upper boundary of the separable (and of the full) set."""
    return x * x


def g_lb(x: float, d1: int) -> float:
    """Lower boundary of all states, traced by the isotropic family."""
    return (d1 * d1 + 1) / (3.0 * (d1 * d1 - 1)) * x * x


def kink_positions(d1: int) -> list[float]:
    """Abscissae 1/(d1^2-1), ..., 1/3, 1/2 of the separable lower boundary."""
    return [1.0 / n for n in range(d1 * d1 - 1, 1, -1)]


def f_lb(x: float, d1: int) -> float:
    """Separable-set lower boundary (piecewise closed form).

    Branch m covers [1/(d1^2-m), 1/(d1^2-m-1)); the first branch (constraint
    inactive, all singular values equal) coincides with g_lb.
    """
    if not 0.0 <= x <= 1.0 + 1e-12:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    nsq = d1 * d1
    if x <= 1.0 / (nsq - 1):
        return g_lb(x, d1)
    for m in range(1, nsq - 1):
        big_n = nsq - m
        hi = 1.0 if m == nsq - 2 else 1.0 / (big_n - 1)
        if x < hi or m == nsq - 2:
            v = big_n * (big_n - 1) * (x - 1.0 / big_n)
            sv = math.sqrt(max(v, 0.0))
            bracket = (sv - 1.0) ** 4 + (sv + big_n - 1) ** 4 / (big_n - 1) ** 3
            return x * x / 3.0 + 2.0 * bracket / (3.0 * big_n**4)
    raise AssertionError("unreachable")


def trace_budget(d1: int, d2: int, k: int) -> float:
    """Trace-norm cap sqrt((d1-1)(d2-1)) + sqrt(d1 d2)(k-1) on Schmidt-number-k states."""
    return math.sqrt((d1 - 1) * (d2 - 1)) + math.sqrt(d1 * d2) * (k - 1)


def purity_cap_x(d1: int, d2: int, k: int) -> float:
    """Largest R2 compatible with a Schmidt-number-k state (purity bound)."""
    return 1.0 + (k - 1) / k * (d1 + d2) / ((d1 - 1) * (d2 - 1))


def detection_onset_x(d1: int, d2: int, k: int) -> float:
    """R2 where the SN-k lower boundary departs from g_lb.

    Below this abscissa the all-equal spectrum satisfies the trace budget, so
    the two boundaries coincide and the two-moment criterion has no margin.
    """
    s1sq = (d1 - 1) * (d2 - 1)
    return trace_budget(d1, d2, k) ** 2 / ((d1 * d1 - 1) * s1sq)


def _check_k(d1: int, d2: int, k: int):
    if not 1 <= k <= min(d1, d2):
        raise ValueError(f"k must be in 1..min(d1, d2), got {k}")


def lower_boundary_k(x: float, d1: int, d2: int, k: int) -> float:
    """Minimal R4 over SN-k-compatible spectra at fixed R2 = x.

    Enumerates the zero count, solving each (l, m) branch in closed form;
    reproduces f_lb exactly at k = 1.
    """
    _check_k(d1, d2, k)
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    cap = purity_cap_x(d1, d2, k)
    if x > cap + _DOMAIN_TOL:
        raise ValueError(f"R2 = {x} exceeds the purity cap {cap} for k = {k}")
    s1sq = (d1 - 1) * (d2 - 1)
    budget = trace_budget(d1, d2, k)
    n_sigma = d1 * d1 - 1
    c = x * s1sq
    best = None
    for nonzero in range(1, n_sigma + 1):
        # all equal, trace budget possibly slack
        if c * nonzero <= budget**2 * (1 + 1e-12):
            cand = c * c / nonzero
            best = cand if best is None else min(best, cand)
        # one value l plus (nonzero-1) copies of mm, trace budget tight
        n = nonzero - 1
        if n == 0:
            continue
        disc = n * ((n + 1) * c - budget**2)
        if disc < 0:
            continue
        mm = (n * budget + math.sqrt(disc)) / (n * (n + 1))
        l = budget - n * mm
        if -1e-12 <= l <= mm + 1e-12:
            cand = max(l, 0.0) ** 4 + n * mm**4
            best = cand if best is None else min(best, cand)
    if best is None:
        raise ValueError(f"no SN-{k} spectrum reaches R2 = {x}")
    return (2.0 * best + c * c) / (3.0 * s1sq * s1sq)


def region_upper_k(x: float, d1: int, d2: int, k: int) -> float:
    """Upper boundary x^2 of the SN-k region, defined up to the purity cap.

    For k >= 2 the purity argument is likely not tight; callers should treat
    the value as an outer bound.
    """
    _check_k(d1, d2, k)
    cap = purity_cap_x(d1, d2, k)
    if not 0 <= x <= cap + _DOMAIN_TOL:
        raise ValueError(f"R2 = {x} outside [0, {cap}] for k = {k}")
    return x * x


def classify(point: MomentPoint, tol: float = 1e-9) -> int | None:
    """Smallest k whose region contains the point, or None if outside all.

    A point below region k's lower boundary is inconsistent with Schmidt
    number <= k, i.e. certifies SN >= k+1 (when the moments are exact).
    """
    d1, d2 = point.d1, point.d2
    x, y = point.r2t, point.r4t
    for k in range(1, min(d1, d2) + 1):
        cap = purity_cap_x(d1, d2, k)
        if x > cap + tol:
            continue
        lo = lower_boundary_k(min(x, cap), d1, d2, k)
        if lo - tol <= y <= x * x + tol:
            return k
    return None


@dataclass(frozen=True)
class BoundaryCurves:
    d1: int
    d2: int
    k: int
    samples: tuple[tuple[float, float, float, bool], ...]  # (x, lower, upper, is_kink)
    kinks: tuple[float, ...]
    upper_tight: bool


def region_kinks(d1: int, d2: int, k: int) -> list[float]:
    """Kink abscissae of region k (within the purity-capped domain)."""
    _check_k(d1, d2, k)
    s1sq = (d1 - 1) * (d2 - 1)
    budget_sq = trace_budget(d1, d2, k) ** 2
    cap = purity_cap_x(d1, d2, k)
    pos = [budget_sq / (n * s1sq) for n in range(d1 * d1 - 1, 1, -1)]
    return [p for p in pos if p <= cap + _DOMAIN_TOL]


def emit_curves(d1: int, d2: int, k: int, n_samples: int) -> BoundaryCurves:
    """Sample (lower, upper) over a uniform grid plus the exact kink abscissae."""
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    _check_k(d1, d2, k)
    cap = purity_cap_x(d1, d2, k)
    kinks = region_kinks(d1, d2, k)
    grid = list(np.linspace(0.0, cap, n_samples))
    xs = sorted(set(grid) | set(kinks))
    kink_set = set(kinks)
    rows = []
    for x in xs:
        rows.append((x, lower_boundary_k(x, d1, d2, k), x * x, x in kink_set))
    return BoundaryCurves(d1, d2, k, tuple(rows), tuple(kinks), upper_tight=(k == 1))
