"""Small dense complex linear algebra used throughout the package.

Everything operates on plain numpy arrays (complex128). Matrices in this
package are at most (d^2-1) x (d^2-1) with d <= 10, so dense LAPACK routines
are always the right tool. All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """A numeric routine failed to reach its accuracy contract."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2D complex128 array, rejecting non-finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def matmul(a, b) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def trace(m) -> complex:
    return complex(np.trace(np.asarray(m)))


def frobenius_sq(m) -> float:
    """Sum of |entry|^2 (squared Frobenius norm)."""
    a = np.asarray(m)
    return float(np.sum(np.abs(a) ** 2))


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    return a.shape[0] == a.shape[1] and np.max(np.abs(a - dagger(a))) <= tol


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    """Positive semidefinite up to -tol on the smallest eigenvalue."""
    a = as_matrix(m)
    if not is_hermitian(a, max(tol, 1e-8)):
        return False
    evals = np.linalg.eigvalsh(a)
    return bool(evals[0] > -tol)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return np.max(np.abs(dagger(a) @ a - np.eye(a.shape[0]))) <= tol


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns) such that
    V diag(w) V^dag reconstructs the input.
    """
    a = as_matrix(m)
    if not is_hermitian(a, 1e-8):
        raise ValueError("hermitian_eig expects a Hermitian matrix")
    w, v = np.linalg.eigh(a)
    return w, v


def svd_values(m) -> np.ndarray:
    """Singular values, sorted descending, length min(rows, cols)."""
    a = as_matrix(m)
    return np.linalg.svd(a, compute_uv=False)


def trace_norm(m) -> float:
    """Sum of the singular values."""
    return float(np.sum(svd_values(m)))


@dataclass(frozen=True)
class PolyRoots:
    """Monic real polynomial (ascending coefficients) and its complex roots."""

    coefficients: tuple[float, ...]
    roots: tuple[complex, ...] = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def poly_roots(coeffs, residual_tol: float = 1e-9) -> PolyRoots:
    """All complex roots of a monic real polynomial via companion matrix.

    `coeffs` is ascending degree with leading coefficient 1, degree <= 16.
    Raises ConvergenceError (carrying the worst residual) if any root fails
    |p(z)| < residual_tol * max(1, max|coeff|).
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("need a polynomial of degree >= 1")
    if abs(c[-1] - 1.0) > 1e-12:
        raise ValueError("polynomial must be monic (leading coefficient 1)")
    if c.size - 1 > 16:
        raise ValueError("degree > 16 not supported")
    roots = np.roots(c[::-1])
    scale = residual_tol * max(1.0, float(np.max(np.abs(c))))
    residuals = np.abs(np.polyval(c[::-1], roots))
    worst = float(np.max(residuals))
    if worst >= scale:
        raise ConvergenceError(
            f"root refinement failed: residual {worst:.3e} >= {scale:.3e}",
            residual=worst,
        )
    order = np.lexsort((roots.imag, roots.real))[::-1]
    return PolyRoots(tuple(map(float, c)), tuple(map(complex, roots[order])))
