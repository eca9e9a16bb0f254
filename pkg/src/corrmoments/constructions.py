"""Extremal separable states from equiangular sets and MUBs.

Symmetrized two-copy mixtures of an equiangular set with pairwise overlap
1/sqrt(d) land exactly on the kink at R2 = 1/N (their correlation matrix is a
Gramian with T^2 = ((d-1)/N) T); m mutually unbiased bases give the kink at
R2 = 1/(m(d-1)) via T^2 = T/m; and the two-term interpolation over an
(N+1)-sized set traces the boundary between adjacent kinks with spectrum
(0, ..., 0, l, m, ..., m), l = (d-1)(1-p), m = (d-1)p/N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qla
from .bloch import BipartiteState, decompose, gell_mann_basis

_OVERLAP_TOL = 1e-9


class ConstructionError(ValueError):
    """A construction's input set does not meet its overlap/size contract."""


@dataclass(frozen=True)
class EquiangularSet:
    """N unit vectors in C^d with constant pairwise |<psi_i|psi_j>| = overlap."""

    d: int
    vectors: tuple[np.ndarray, ...]
    overlap: float

    def __post_init__(self):
        vecs = []
        for v in self.vectors:
            v = np.asarray(v, dtype=np.complex128).ravel()
            if v.size != self.d:
                raise ConstructionError(f"vector of length {v.size}, expected {self.d}")
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ConstructionError("vectors must be unit norm")
            v.flags.writeable = False
            vecs.append(v)
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                ov = abs(np.vdot(vecs[i], vecs[j]))
                if abs(ov - self.overlap) > _OVERLAP_TOL:
                    raise ConstructionError(
                        f"pair ({i},{j}) has overlap {ov}, expected {self.overlap}"
                    )
        object.__setattr__(self, "vectors", tuple(vecs))

    def __len__(self) -> int:
        return len(self.vectors)

    def prefix(self, n: int) -> "EquiangularSet":
        """Equiangular subset of the first n vectors (overlap unchanged)."""
        if not 1 <= n <= len(self.vectors):
            raise ConstructionError(f"prefix size {n} out of range")
        return EquiangularSet(self.d, self.vectors[:n], self.overlap)


@dataclass(frozen=True)
class MubFamily:
    """m orthonormal bases of C^d, pairwise unbiased (cross overlaps 1/sqrt d)."""

    d: int
    bases: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        target = 1.0 / math.sqrt(self.d)
        frozen = []
        mats = []
        for b in self.bases:
            mat = np.asarray(b, dtype=np.complex128)
            if mat.shape != (self.d, self.d):
                raise ConstructionError(f"basis shape {mat.shape}, expected ({self.d},{self.d})")
            if np.max(np.abs(mat.conj() @ mat.T - np.eye(self.d))) > 1e-10:
                raise ConstructionError("basis is not orthonormal")
            mat.flags.writeable = False
            mats.append(mat)
            frozen.append(tuple(mat))
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                cross = np.abs(mats[i].conj() @ mats[j].T)
                if np.max(np.abs(cross - target)) > _OVERLAP_TOL:
                    raise ConstructionError(f"bases {i},{j} are not mutually unbiased")
        object.__setattr__(self, "bases", tuple(frozen))

    @property
    def m(self) -> int:
        return len(self.bases)


def qubit_trio() -> EquiangularSet:
    """|0>, |+>, |+_i>: the maximal qubit set with overlap 1/sqrt(2)."""
    s = 1.0 / math.sqrt(2)
    vecs = [np.array([1, 0]), np.array([s, s]), np.array([s, s * 1j])]
    return EquiangularSet(2, tuple(vecs), s)


def sic_fiducial_set(d: int) -> EquiangularSet:
    """Maximal equiangular set of d^2 vectors with overlap 1/sqrt(d+1).

    d = 2: Bloch-tetrahedron vectors; d = 3: Weyl-Heisenberg orbit of the
    fiducial (0, 1, -1)/sqrt(2).
    """
    if d == 2:
        a = math.sqrt(1.0 / 3.0)
        b = math.sqrt(2.0 / 3.0)
        w = np.exp(2j * np.pi / 3)
        vecs = [np.array([1, 0]), np.array([a, b]), np.array([a, b * w]), np.array([a, b * w**2])]
        return EquiangularSet(2, tuple(vecs), a)
    if d == 3:
        fid = np.array([0, 1, -1], dtype=np.complex128) / math.sqrt(2)
        w = np.exp(2j * np.pi / 3)
        vecs = []
        for a in range(3):
            for b in range(3):
                v = np.array([w ** (b * ((j - a) % 3)) * fid[(j - a) % 3] for j in range(3)])
                vecs.append(v)
        return EquiangularSet(3, tuple(vecs), 0.5)
    raise ConstructionError(f"no fiducial shipped for d = {d} (supported: 2, 3)")


def pad_sic(d: int) -> EquiangularSet:
    """Embed the (d-1)-dimensional maximal set into C^d; overlap becomes 1/sqrt(d)."""
    if d - 1 not in (2, 3):
        raise ConstructionError(f"pad_sic needs d - 1 in {{2, 3}}, got d = {d}")
    base = sic_fiducial_set(d - 1)
    vecs = tuple(np.concatenate([v, [0.0]]) for v in base.vectors)
    return EquiangularSet(d, vecs, 1.0 / math.sqrt(d))


# exact d = 4 table (5 bases), entries are (a + b i)/2; generated from the
# standard partition of the two-qubit Paulis into commuting triples
_D4_MUB_NUMERATORS = (
    (
        (0, 0, 0, 2),
        (0, 2, 0, 0),
        (0, 0, 2, 0),
        (2, 0, 0, 0),
    ),
    (
        (1, -1, -1, 1),
        (1, -1, 1, -1),
        (1, 1, -1, -1),
        (1, 1, 1, 1),
    ),
    (
        (1, -1j, -1j, -1),
        (1, -1j, 1j, 1),
        (1, 1j, -1j, 1),
        (1, 1j, 1j, -1),
    ),
    (
        (1, -1, -1j, -1j),
        (1, 1, -1j, 1j),
        (1, 1, 1j, -1j),
        (1, -1, 1j, 1j),
    ),
    (
        (1, -1j, -1, -1j),
        (1, -1j, 1, 1j),
        (1, 1j, 1, -1j),
        (1, 1j, -1, 1j),
    ),
)


def mub_prime(d: int) -> MubFamily:
    """d + 1 mutually unbiased bases for prime d (2, 3, 5, 7) or d = 4.

    Odd primes use the quadratic-phase construction
    psi^a_j[k] = omega^(a k^2 + j k)/sqrt(d); d = 2 uses the Pauli eigenbases
    and d = 4 ships as a verified constant table.
    """
    if d == 2:
        s = 1.0 / math.sqrt(2)
        bases = (
            (np.array([1.0, 0.0]), np.array([0.0, 1.0])),
            (np.array([s, s]), np.array([s, -s])),
            (np.array([s, s * 1j]), np.array([s, -s * 1j])),
        )
        return MubFamily(2, bases)
    if d == 4:
        bases = tuple(
            tuple(np.asarray(row, dtype=np.complex128) / 2.0 for row in basis)
            for basis in _D4_MUB_NUMERATORS
        )
        return MubFamily(4, bases)
    if d in (3, 5, 7):
        w = np.exp(2j * np.pi / d)
        ks = np.arange(d)
        bases = [tuple(np.eye(d, dtype=np.complex128))]
        for a in range(d):
            basis = tuple(w ** ((a * ks * ks + j * ks) % d) / math.sqrt(d) for j in range(d))
            bases.append(basis)
        return MubFamily(d, tuple(bases))
    raise ConstructionError(f"no MUB construction for d = {d} (supported: 2, 3, 4, 5, 7)")


def _symmetric_two_copy(vectors, weights, d: int) -> BipartiteState:
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    for w, v in zip(weights, vectors):
        proj = np.outer(v, v.conj())
        rho += w * np.kron(proj, proj)
    return BipartiteState(d, d, rho)


def theorem2_state(eset: EquiangularSet) -> BipartiteState:
    """Kink state (1/N) sum_i |psi_i><psi_i| x |psi_i><psi_i| at R2 = 1/N.

    Requires overlap 1/sqrt(d); the correlation matrix is then a Gramian with
    T^2 = ((d-1)/N) T and Tr T = d - 1.
    """
    target = 1.0 / math.sqrt(eset.d)
    if abs(eset.overlap - target) > _OVERLAP_TOL:
        raise ConstructionError(
            f"kink construction needs overlap 1/sqrt(d) = {target}, got {eset.overlap}"
        )
    n = len(eset)
    return _symmetric_two_copy(eset.vectors, [1.0 / n] * n, eset.d)


def corollary1_family(eset: EquiangularSet, p: float) -> BipartiteState:
    """Interpolating family between the kinks at 1/(N+1) and 1/N.

    Uses the first N vectors of the (N+1)-sized set with weight p/N each and
    the last vector with weight 1-p; valid for N/(N+1) <= p <= 1.
    """
    target = 1.0 / math.sqrt(eset.d)
    if abs(eset.overlap - target) > _OVERLAP_TOL:
        raise ConstructionError(f"needs overlap 1/sqrt(d) = {target}, got {eset.overlap}")
    n = len(eset) - 1
    if n < 1:
        raise ConstructionError("set must contain at least 2 vectors")
    if not n / (n + 1) - 1e-12 <= p <= 1.0 + 1e-12:
        raise ConstructionError(f"p = {p} outside [{n}/{n + 1}, 1]")
    weights = [p / n] * n + [1.0 - p]
    return _symmetric_two_copy(eset.vectors, weights, eset.d)


def theorem3_state(mubs: MubFamily, m_use: int) -> BipartiteState:
    """Kink state from the first m_use bases, at R2 = 1/(m_use (d-1))."""
    if not 1 <= m_use <= mubs.m:
        raise ConstructionError(f"m_use = {m_use} out of range 1..{mubs.m}")
    d = mubs.d
    vectors = [v for basis in mubs.bases[:m_use] for v in basis]
    return _symmetric_two_copy(vectors, [1.0 / (m_use * d)] * len(vectors), d)


def correlation_matrix(state: BipartiteState) -> np.ndarray:
    """T of the state in the Gell-Mann bases (convenience for the reports)."""
    return decompose(state, gell_mann_basis(state.d1), gell_mann_basis(state.d2)).T


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    residual: float
    passed: bool


def projector_report(state: BipartiteState, scale: float, tol: float = 1e-9) -> VerificationReport:
    """Residual of T^2 = scale * T (the kink-state projector identity)."""
    t = correlation_matrix(state)
    residual = float(np.max(np.abs(t @ t - scale * t)))
    return VerificationReport(f"T^2 = {scale:.12g} * T", residual, residual <= tol)


def spectrum_report(state: BipartiteState, expected, tol: float = 1e-8) -> VerificationReport:
    """Residual of the correlation spectrum against an expected value list."""
    t = correlation_matrix(state)
    got = np.sort(qla.svd_values(t))
    want = np.sort(np.asarray(expected, dtype=float))
    residual = float(np.max(np.abs(got - want)))
    return VerificationReport("singular values of T", residual, residual <= tol)


def corollary1_expected_spectrum(d: int, n: int, p: float) -> np.ndarray:
    """(0, ..., 0, l, m, ..., m) with m = (d-1)p/N (N times), l = (d-1)(1-p)."""
    mm = (d - 1) * p / n
    ll = (d - 1) * (1.0 - p)
    return np.array([0.0] * (d * d - 1 - n - 1) + [ll] + [mm] * n)


# equiangular-set sizes and MUB counts available to the coverage report;
# d = 5 uses one vector per MUB (6 bases), d = 6 the literature count of 3
_EAS_MAX = {2: 3, 3: 4, 4: 9, 5: 6, 6: 3}
_MUB_COUNT = {2: 3, 3: 4, 4: 5, 5: 6, 6: 3}


@dataclass(frozen=True)
class KinkCoverage:
    d: int
    covered: tuple[int, ...]
    missing: tuple[int, ...]
    sources: dict[int, tuple[str, ...]] = field(repr=False)


def kink_coverage(d: int) -> KinkCoverage:
    """Which kinks K = 1..d^2-1 the shipped constructions reach."""
    if d not in _EAS_MAX:
        raise ConstructionError(f"coverage report supports d in 2..6, got {d}")
    total = d * d - 1
    sources: dict[int, list[str]] = {k: [] for k in range(1, total + 1)}
    for k in range(1, _EAS_MAX[d] + 1):
        sources[k].append(f"equiangular set of size {k}")
    for m in range(1, _MUB_COUNT[d] + 1):
        k = m * (d - 1)
        if k <= total:
            sources[k].append(f"{m} MUB{'s' if m > 1 else ''}")
    covered = tuple(k for k in range(1, total + 1) if sources[k])
    missing = tuple(k for k in range(1, total + 1) if not sources[k])
    return KinkCoverage(d, covered, missing, {k: tuple(v) for k, v in sources.items() if v})


@dataclass(frozen=True)
class TraceCheck:
    k: int
    value: float
    expected: float
    residual: float
    passed: bool


def mub_trace_constraints(T, d: int, m: int, k_max: int, tol: float = 1e-8) -> list[TraceCheck]:
    """Check Tr(T^k) = (d-1)/m^(k-1) for k = 1..k_max.

    The condition is necessary for T to come from the m-MUB construction; it
    is the feasibility probe for the existence question of m MUBs in
    dimension d.
    """
    t = np.asarray(T, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError(f"T must be square, got {t.shape}")
    if np.max(np.abs(t - t.T)) > 1e-9:
        raise ValueError("T must be symmetric")
    checks = []
    power = np.eye(t.shape[0])
    for k in range(1, k_max + 1):
        power = power @ t
        value = float(np.trace(power))
        expected = (d - 1) / m ** (k - 1)
        residual = abs(value - expected)
        checks.append(TraceCheck(k, value, expected, residual, residual <= tol))
    return checks
