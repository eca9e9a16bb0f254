"""Operator bases and the generalized Bloch decomposition.

A bipartite state rho on C^{d1} x C^{d2} is expanded over traceless Hermitian
local bases {lam_i}, {lamt_j} (plus identity) normalized to
Tr(lam_i lam_j) = d delta_ij:

    rho = [1x1 + sum_i a_i lam_i x 1 + sum_j b_j 1 x lamt_j
           + sum_ij T_ij lam_i x lamt_j] / (d1 d2)

The local vectors alpha, beta and the correlation matrix T are real for a
Hermitian basis; the singular values of T are local-unitary invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qla


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class OperatorBasis:
    """Hermitian operator basis lam_0..lam_{d^2-1}, lam_0 = identity."""

    d: int
    elems: tuple[np.ndarray, ...]

    def traceless(self) -> tuple[np.ndarray, ...]:
        return self.elems[1:]


def gell_mann_basis(d: int) -> OperatorBasis:
    """Generalized Gell-Mann basis rescaled so Tr(lam_i lam_j) = d delta_ij.

    Ordering after the identity: symmetric pairs (lexicographic), then
    antisymmetric pairs, then diagonal. For d = 2 this gives the Paulis
    sigma_x, sigma_y, sigma_z.
    """
    if d < 2:
        raise ValueError(f"basis needs dimension >= 2, got {d}")
    scale = np.sqrt(d / 2.0)
    elems = [np.eye(d, dtype=np.complex128)]
    sym, asym = [], []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[j, k] = m[k, j] = 1.0
            sym.append(m * scale)
            m = np.zeros((d, d), dtype=np.complex128)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            asym.append(m * scale)
    diag = []
    for l in range(1, d):
        v = np.zeros(d)
        v[:l] = 1.0
        v[l] = -l
        diag.append(np.diag(v * np.sqrt(2.0 / (l * (l + 1)))).astype(np.complex128) * scale)
    elems.extend(sym + asym + diag)
    return OperatorBasis(d, tuple(_freeze(m) for m in elems))


def _swap_subsystems(rho: np.ndarray, d1: int, d2: int) -> np.ndarray:
    r = rho.reshape(d1, d2, d1, d2)
    return r.transpose(1, 0, 3, 2).reshape(d1 * d2, d1 * d2)


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix with local dimensions d1 <= d2.

    Inputs with d1 > d2 are stored with the subsystems swapped and
    ``swapped`` set, so the convention d1 <= d2 always holds.
    """

    d1: int
    d2: int
    rho: np.ndarray
    swapped: bool = False

    def __post_init__(self):
        rho = qla.as_matrix(self.rho)
        d1, d2 = self.d1, self.d2
        if rho.shape != (d1 * d2, d1 * d2):
            raise ValueError(f"rho shape {rho.shape} does not match d1*d2={d1 * d2}")
        if d1 > d2:
            rho = _swap_subsystems(rho, d1, d2)
            object.__setattr__(self, "d1", d2)
            object.__setattr__(self, "d2", d1)
            object.__setattr__(self, "swapped", True)
        if np.max(np.abs(rho - qla.dagger(rho))) > 1e-10:
            raise ValueError("rho is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValueError(f"rho has trace {np.trace(rho).real}, expected 1")
        if np.linalg.eigvalsh(rho)[0] <= -1e-9:
            raise ValueError("rho is not positive semidefinite")
        object.__setattr__(self, "rho", _freeze(rho))

    def reduced_a(self) -> np.ndarray:
        return np.trace(self.rho.reshape(self.d1, self.d2, self.d1, self.d2), axis1=1, axis2=3)

    def reduced_b(self) -> np.ndarray:
        return np.trace(self.rho.reshape(self.d1, self.d2, self.d1, self.d2), axis1=0, axis2=2)

    def purity(self) -> float:
        return float(np.sum(np.abs(self.rho) ** 2))


def pure_state(vec, d1: int, d2: int) -> BipartiteState:
    """|psi><psi| from a (normalized) joint state vector."""
    v = np.asarray(vec, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return BipartiteState(d1, d2, np.outer(v, v.conj()))


def max_entangled_state(d: int) -> BipartiteState:
    """|phi+> = sum_i |ii> / sqrt(d)."""
    v = np.eye(d, dtype=np.complex128).ravel() / np.sqrt(d)
    return BipartiteState(d, d, np.outer(v, v.conj()))


@dataclass(frozen=True)
class BlochDecomposition:
    alpha: np.ndarray
    beta: np.ndarray
    T: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _freeze(np.asarray(self.alpha, dtype=float)))
        object.__setattr__(self, "beta", _freeze(np.asarray(self.beta, dtype=float)))
        object.__setattr__(self, "T", _freeze(np.asarray(self.T, dtype=float)))
        if self.T.shape != (self.alpha.size, self.beta.size):
            raise ValueError("T shape inconsistent with alpha/beta lengths")

    @property
    def d1(self) -> int:
        return int(round(np.sqrt(self.alpha.size + 1)))

    @property
    def d2(self) -> int:
        return int(round(np.sqrt(self.beta.size + 1)))


@dataclass(frozen=True)
class CorrelationSpectrum:
    """Singular values of T, descending, length d1^2 - 1."""

    sigmas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigmas", _freeze(np.asarray(self.sigmas, dtype=float)))


_IMAG_TOL = 1e-8


def decompose(state: BipartiteState, basis_a: OperatorBasis, basis_b: OperatorBasis) -> BlochDecomposition:
    """Extract alpha_i = Tr(rho lam_i x 1), beta_j, T_ij = Tr(rho lam_i x lamt_j)."""
    if basis_a.d != state.d1 or basis_b.d != state.d2:
        raise ValueError(
            f"basis dimensions ({basis_a.d},{basis_b.d}) do not match state ({state.d1},{state.d2})"
        )
    la = np.stack(basis_a.traceless())
    lb = np.stack(basis_b.traceless())
    alpha = np.einsum("ab,iba->i", state.reduced_a(), la)
    beta = np.einsum("ab,iba->i", state.reduced_b(), lb)
    rho4 = state.rho.reshape(state.d1, state.d2, state.d1, state.d2)
    # T_ij = sum_{abcd} rho[a,b;c,d] lam_i[c,a] lamt_j[d,b]
    half = np.einsum("abcd,ica->ibd", rho4, la)
    tmat = np.einsum("ibd,jdb->ij", half, lb)
    worst = max(np.max(np.abs(alpha.imag)), np.max(np.abs(beta.imag)), np.max(np.abs(tmat.imag)))
    if worst > _IMAG_TOL:
        raise ValueError(f"Bloch coefficients have imaginary part {worst:.2e} (non-Hermitian input?)")
    return BlochDecomposition(alpha.real, beta.real, tmat.real)


def reconstruct(deco: BlochDecomposition, basis_a: OperatorBasis, basis_b: OperatorBasis) -> BipartiteState:
    """Assemble the state back from (alpha, beta, T); fails if non-physical."""
    d1, d2 = basis_a.d, basis_b.d
    if deco.alpha.size != d1 * d1 - 1 or deco.beta.size != d2 * d2 - 1:
        raise ValueError("decomposition sizes inconsistent with bases")
    la = np.stack(basis_a.traceless())
    lb = np.stack(basis_b.traceless())
    eye1, eye2 = np.eye(d1), np.eye(d2)
    rho = np.kron(eye1, eye2).astype(np.complex128)
    rho += np.kron(np.einsum("i,iab->ab", deco.alpha, la), eye2)
    rho += np.kron(eye1, np.einsum("j,jab->ab", deco.beta, lb))
    rho += np.einsum("ij,iab,jcd->acbd", deco.T, la, lb).reshape(d1 * d2, d1 * d2)
    rho /= d1 * d2
    try:
        return BipartiteState(d1, d2, rho)
    except ValueError as exc:
        raise ValueError(f"Bloch data does not describe a physical state: {exc}") from exc


def correlation_spectrum(deco: BlochDecomposition) -> CorrelationSpectrum:
    """svd_values(T), padded/truncated to length d1^2 - 1."""
    n = deco.d1 * deco.d1 - 1
    s = qla.svd_values(deco.T)
    if s.size < n:
        s = np.concatenate([s, np.zeros(n - s.size)])
    return CorrelationSpectrum(s[:n])


# --- state JSON format (CLI interchange) ------------------------------------

_STATE_FIELDS = {"d1", "d2", "rho_re", "rho_im"}


def state_to_json(state: BipartiteState) -> dict:
    return {
        "d1": state.d1,
        "d2": state.d2,
        "rho_re": state.rho.real.tolist(),
        "rho_im": state.rho.imag.tolist(),
    }


def state_from_json(obj: dict) -> BipartiteState:
    if not isinstance(obj, dict):
        raise ValueError("state JSON must be an object")
    missing = _STATE_FIELDS - obj.keys()
    if missing:
        raise ValueError(f"state JSON missing fields: {sorted(missing)}")
    unknown = obj.keys() - _STATE_FIELDS
    if unknown:
        raise ValueError(f"state JSON has unknown fields: {sorted(unknown)}")
    rho = np.asarray(obj["rho_re"], dtype=float) + 1j * np.asarray(obj["rho_im"], dtype=float)
    return BipartiteState(int(obj["d1"]), int(obj["d2"]), rho)
