"""Moment-matching diagonal observables.

For local dimension d there is a unique diagonal observable A_d whose
Haar-unitary moments reproduce the Bloch-sphere (orthogonal) moments for all
odd orders and all even orders t <= d. Its spectrum is pinned down by the
power traces

    Tr(A^t) = a_0 d + sum_{k=1}^{t/2} a_k C(t,2k) sum_g a(k,g) d^{k+1-2g}

with coefficients

    a_k = (-1)^{t/2-k} d^k (d^2-3)!! (t-2k-1)!! / (d^2-3+t)!!

and a(n,g) the number of gluings of a 2n-gon into a genus-g surface
(OEIS A035309). Solving Newton's identities for the characteristic polynomial
and rooting it recovers the eigenvalues; they are real for d <= 7 and come in
+-x pairs (complex quadruples from d = 8 on).

A rank-4 observable matching orders t <= 4 exists in closed form for every d:
eigenvalues {+-k1, +-k2, 0, ...} with
k_{1,2} = sqrt(d +- sqrt(d(8 - d - 20/(d^2+1)))) / 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import qla

MAX_GLUING_ORDER = 8


@dataclass(frozen=True)
class GluingTable:
    """Counts a(n,g) of 2n-gon side gluings by genus g = 0..floor(n/2)."""

    n: int
    counts: tuple[int, ...]

    def total(self) -> int:
        return sum(self.counts)


@lru_cache(maxsize=None)
def gluing_counts(n: int) -> GluingTable:
    """Brute force over all (2n-1)!! pairings of the 2n polygon sides.

    The glued surface has one face and n edges; its vertex count is the
    number of cycles of (rotation o pairing), so the genus follows from
    chi = V - n + 1.
    """
    if not 1 <= n <= MAX_GLUING_ORDER:
        raise ValueError(f"n must be in 1..{MAX_GLUING_ORDER}, got {n}")
    m = 2 * n
    counts = [0] * (n // 2 + 1)
    pair = [-1] * m

    def cycles() -> int:
        seen = [False] * m
        num = 0
        for start in range(m):
            if seen[start]:
                continue
            num += 1
            i = start
            while not seen[i]:
                seen[i] = True
                i = (pair[i] + 1) % m
        return num

    def extend():
        first = -1
        for i in range(m):
            if pair[i] < 0:
                first = i
                break
        if first < 0:
            genus = (n + 1 - cycles()) // 2
            counts[genus] += 1
            return
        for j in range(first + 1, m):
            if pair[j] < 0:
                pair[first], pair[j] = j, first
                extend()
                pair[first] = pair[j] = -1

    extend()
    return GluingTable(n, tuple(counts))


def _dfact(n: int) -> int:
    """Double factorial with (-1)!! = 0!! = 1."""
    if n <= 0:
        return 1
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def a_coeff(t: int, k: int, d: int) -> float:
    """Twirl coefficient a_k^(t) of the k-two-cycle permutation class."""
    if t < 2 or t % 2 != 0:
        raise ValueError(f"t must be even >= 2, got {t}")
    if not 0 <= k <= t // 2:
        raise ValueError(f"k must be in 0..t/2, got {k}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    # (d^2-3)!! / (d^2-3+t)!! telescopes to 1/prod_{j=1}^{t/2} (d^2-3+2j)
    denom = 1
    for j in range(1, t // 2 + 1):
        denom *= d * d - 3 + 2 * j
    sign = -1 if (t // 2 - k) % 2 else 1
    return sign * d**k * _dfact(t - 2 * k - 1) / denom


def power_trace(t: int, d: int) -> float:
    """Tr(A_d^t) for even t, from the twirl coefficients and gluing counts."""
    if t < 2 or t % 2 != 0:
        raise ValueError(f"t must be even >= 2, got {t}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    total = a_coeff(t, 0, d) * d
    for k in range(1, t // 2 + 1):
        glue = sum(c * d ** (k + 1 - 2 * g) for g, c in enumerate(gluing_counts(k).counts))
        total += a_coeff(t, k, d) * math.comb(t, 2 * k) * glue
    return total


@dataclass(frozen=True)
class ObservableSpectrum:
    """Eigenvalues of a moment-matching observable.

    match_order is the largest order t with guaranteed moment equality
    (math.inf for d = 2, where all moments coincide).
    """

    d: int
    eigenvalues: tuple[complex, ...]
    match_order: float
    kind: str

    def power_sum(self, t: int) -> complex:
        return complex(np.sum(np.asarray(self.eigenvalues) ** t))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.eigenvalues, dtype=np.complex128)


def _sort_desc(eigs) -> tuple[complex, ...]:
    arr = np.asarray(eigs, dtype=np.complex128)
    order = np.lexsort((arr.imag, arr.real))[::-1]
    return tuple(map(complex, arr[order]))


def _full_match_order(d: int) -> float:
    if d == 2:
        return math.inf
    if d == 3:
        return 4
    return d


def spectrum_full(d: int) -> ObservableSpectrum:
    """Spectrum of A_d from the d trace constraints t = 1..d.

    Newton's identities turn the power sums (zero for odd t,
    power_trace(t, d) for even t) into the characteristic polynomial; odd
    elementary symmetric functions vanish, so the polynomial is even and is
    rooted in u = z^2, which keeps the +-pairing exact.
    """
    if not 2 <= d <= 10:
        raise ValueError(f"d must be in 2..10, got {d}")
    psums = [0.0] * (d + 1)
    for t in range(2, d + 1, 2):
        psums[t] = power_trace(t, d)
    elem = [1.0] + [0.0] * d
    for k in range(1, d + 1):
        acc = 0.0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elem[k - i] * psums[i]
        elem[k] = acc / k
    h = d // 2
    # char poly z^d - e1 z^{d-1} + ... = (z if d odd) * q(z^2)
    q_desc = [elem[2 * j] for j in range(h + 1)]
    roots_u = qla.poly_roots(q_desc[::-1]).roots
    eigs = []
    for u in roots_u:
        if abs(u.imag) <= 1e-10 * max(1.0, abs(u)):
            u = u.real
            lam = math.sqrt(u) if u >= 0 else 1j * math.sqrt(-u)
        else:
            lam = cmath.sqrt(u)
        eigs.extend([lam, -lam])
    if d % 2:
        eigs.append(0.0)
    return ObservableSpectrum(d, _sort_desc(eigs), _full_match_order(d), "full")


def spectrum_rank4(d: int) -> ObservableSpectrum:
    """Closed-form observable with at most four non-zero eigenvalues.

    Matches moments t <= 4 in every dimension. The inner radicand
    d(8 - d - 20/(d^2+1)) turns negative from d = 8 on, where the kappa pair
    becomes a complex-conjugate pair (measurable by assigning complex
    outcomes); both trace identities still hold.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    w = d * (8.0 - d - 20.0 / (d * d + 1.0))
    inner = cmath.sqrt(w)
    kappa1 = 0.5 * cmath.sqrt(d + inner)
    kappa2 = 0.5 * cmath.sqrt(d - inner)
    if abs(kappa1.imag) < 1e-14:
        kappa1 = kappa1.real
    if abs(kappa2.imag) < 1e-14:
        kappa2 = kappa2.real
    if d == 2:
        eigs = [kappa1, -kappa1]
    elif d == 3:
        eigs = [kappa1, 0.0, -kappa1]
    else:
        eigs = [kappa1, kappa2, -kappa2, -kappa1] + [0.0] * (d - 4)
    match_order = math.inf if d == 2 else 4
    return ObservableSpectrum(d, _sort_desc(eigs), match_order, "rank4")
