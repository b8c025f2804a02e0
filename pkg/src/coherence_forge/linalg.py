"""Small dense complex-Hermitian linear algebra.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The library only
ever needs dimensions 2 (a qubit) and 4 (qubit pairs), but nothing here is
restricted to those sizes.
"""

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPSD

HERMITIAN_TOL = 1e-10
PSD_CLAMP = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermiticity_error(m):
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def is_hermitian(m, tol=HERMITIAN_TOL):
    return hermiticity_error(np.asarray(m)) <= tol


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def herm_eig(m):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"matrix is not Hermitian (max asymmetry {err:.3e})")
    w, v = np.linalg.eigh(m)
    return HermitianEigen(w, v)


def psd_sqrt(m):
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-PSD_CLAMP, 0)`` are treated as zero, and so are
    positive ones at rounding level, which would otherwise leak ~1e-8 into
    the null space after the square root.
    """
    w, v = herm_eig(m)
    if w[0] < -PSD_CLAMP:
        raise NotPSD(f"matrix has negative eigenvalue {w[0]:.3e}")
    cut = w.shape[-1] * 4 * np.finfo(float).eps * max(float(w[-1]), 0.0)
    root = np.sqrt(np.where(w > cut, w, 0.0))
    r = (v * root) @ v.conj().T
    return (r + r.conj().T) / 2


def tensor(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m, keep, dims):
    """Reduce a bipartite operator to subsystem ``keep`` (0 or 1).

    ``dims`` is ``(dA, dB)``; subsystem 0 is the left tensor factor.
    """
    m = as_matrix(m)
    da, db = dims
    if m.shape[0] != da * db:
        raise DimensionMismatch(f"matrix of dim {m.shape[0]} cannot split as {da}x{db}")
    t = m.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 0 or 1, got {keep!r}")


def ket_to_dm(psi):
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())
