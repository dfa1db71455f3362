"""Dense complex matrix helpers: Weyl operators, Hermitian eigensolver, PSD square root.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""

from __future__ import annotations

import numpy as np

_TOLERANCE = 1e-10


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotPSDError(ValueError):
    """Matrix has an eigenvalue clearly below zero."""


def get_tolerance() -> float:
    return _TOLERANCE


def set_tolerance(value: float) -> None:
    """Set the package-wide default absolute tolerance."""
    global _TOLERANCE
    if not value > 0:
        raise ValueError(f"tolerance must be positive, got {value}")
    _TOLERANCE = float(value)


def _tol(tol: float | None) -> float:
    return _TOLERANCE if tol is None else tol


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")


def weyl(n: int, u: int, v: int) -> np.ndarray:
    """Weyl (generalized Pauli) operator of order ``n``.

    ``U[k, (k + v) % n] = exp(2 pi i k u / n)``; all other entries vanish.
    Indices are reduced mod ``n``.
    """
    if n < 1:
        raise ValueError(f"Weyl operator order must be >= 1, got {n}")
    u %= n
    v %= n
    k = np.arange(n)
    out = np.zeros((n, n), dtype=np.complex128)
    out[k, (k + v) % n] = np.exp(2j * np.pi * k * u / n)
    return out


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def basis_projector(n: int, i: int, j: int | None = None) -> np.ndarray:
    """``|i><j|`` in dimension ``n`` (``j`` defaults to ``i``)."""
    out = np.zeros((n, n), dtype=np.complex128)
    out[i, i if j is None else j] = 1.0
    return out


def matmul(a, b) -> np.ndarray:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return _as_matrix(a).conj().T


def add(a, b) -> np.ndarray:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return a + b


def scale(a, c: complex) -> np.ndarray:
    return complex(c) * _as_matrix(a)


def trace(a) -> complex:
    a = _as_matrix(a)
    _require_square(a)
    return complex(np.trace(a))


def kron(a, b) -> np.ndarray:
    return np.kron(_as_matrix(a), _as_matrix(b))


def is_hermitian(a, tol: float | None = None) -> bool:
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= _tol(tol))


def is_unitary(a, tol: float | None = None) -> bool:
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    eye = np.eye(a.shape[0])
    return bool(
        np.max(np.abs(a.conj().T @ a - eye), initial=0.0) <= _tol(tol)
        and np.max(np.abs(a @ a.conj().T - eye), initial=0.0) <= _tol(tol)
    )


def is_psd(a, tol: float | None = None) -> bool:
    if not is_hermitian(a, tol):
        return False
    w, _ = hermitian_eig(a)
    return bool(w.size == 0 or w[-1] >= -_tol(tol))


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    The input is symmetrized as ``(m + m^H) / 2`` first.

    Returns
    -------
    eigenvalues : ndarray of float, sorted descending
    eigenvectors : unitary ndarray whose columns match ``eigenvalues``
    """
    m = _as_matrix(m)
    _require_square(m)
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def psd_sqrt(m, reject: float = 1e-8, rank_tol: float | None = None) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues with magnitude at most ``rank_tol`` are treated as exact
    zeros; the default is the usual numerical-rank cutoff
    ``n * eps * max|lambda|``. Anything below ``-reject`` raises
    :class:`NotPSDError`.
    """
    w, v = hermitian_eig(m)
    if w.size == 0:
        return np.zeros_like(v)
    if w[-1] < -reject:
        raise NotPSDError(f"matrix is not positive semidefinite (min eigenvalue {w[-1]:.3e})")
    if rank_tol is None:
        rank_tol = w.size * np.finfo(float).eps * max(abs(w[0]), abs(w[-1]))
    w = np.where(w <= rank_tol, 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T
