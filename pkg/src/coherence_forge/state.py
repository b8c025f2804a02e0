"""Density matrices, the qubit Bloch parametrization, dephasing and entropy.

The incoherent basis is always the computational basis.
"""

from dataclasses import dataclass

import numpy as np

from .errors import OutsideBlochBall, WrongDimension
from .linalg import I2, PAULI, as_matrix

TRACE_TOL = 1e-9
ENTROPY_FLOOR = 1e-15


@dataclass(frozen=True)
class BlochVector:
    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        if self.norm > 1 + 1e-9:
            raise OutsideBlochBall(f"|r| = {self.norm:.12g} exceeds 1")

    @classmethod
    def of(cls, r):
        if isinstance(r, BlochVector):
            return r
        r1, r2, r3 = (float(x) for x in r)
        return cls(r1, r2, r3)

    @property
    def norm(self):
        return float(np.sqrt(self.r1**2 + self.r2**2 + self.r3**2))

    @property
    def R(self):
        """Complex transverse component r1 + i r2."""
        return complex(self.r1, self.r2)

    def as_array(self):
        return np.array([self.r1, self.r2, self.r3])


def from_bloch(r):
    r = BlochVector.of(r)
    return (I2 + np.tensordot(r.as_array(), PAULI, axes=1)) / 2


def to_bloch(rho):
    rho = as_matrix(rho)
    if rho.shape != (2, 2):
        raise WrongDimension(f"Bloch vectors need a qubit state, got dim {rho.shape[0]}")
    off = rho[0, 1]
    # clip tiny overshoot from rounding so construction does not reject a valid state
    r = np.array([2 * off.real, -2 * off.imag, (rho[0, 0] - rho[1, 1]).real])
    n = np.linalg.norm(r)
    if 1 < n <= 1 + 1e-9:
        r = r / n
    return BlochVector.of(r)


def validate_state(rho, tol=TRACE_TOL):
    """Return ``rho`` as an array after checking it is a density matrix."""
    rho = as_matrix(rho)
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"trace {np.trace(rho).real:.12g} is not 1")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise ValueError("state is not Hermitian")
    if np.linalg.eigvalsh(rho)[0] < -tol:
        raise ValueError("state has a negative eigenvalue")
    return rho


def dephase(rho):
    rho = np.asarray(rho, dtype=complex)
    return np.diag(np.diag(rho))


def binary_entropy(p):
    p = float(np.clip(p, 0.0, 1.0))
    return -sum(x * np.log2(x) for x in (p, 1 - p) if x > ENTROPY_FLOOR)


def _entropy_of_spectrum(w):
    w = w[w > ENTROPY_FLOOR]
    return float(max(-np.sum(w * np.log2(w)), 0.0))


def entropy(rho):
    """Von Neumann entropy in bits."""
    return _entropy_of_spectrum(np.linalg.eigvalsh(np.asarray(rho, dtype=complex)))


def entropy_batch(rhos):
    w = np.linalg.eigvalsh(np.asarray(rhos, dtype=complex))
    w = np.where(w > ENTROPY_FLOOR, w, 1.0)
    return np.maximum(-np.sum(w * np.log2(w), axis=-1), 0.0)


def is_incoherent(rho, tol=1e-9):
    rho = np.asarray(rho)
    off = rho - np.diag(np.diag(rho))
    return bool(np.max(np.abs(off), initial=0.0) <= tol)


def random_bloch_vector(rng):
    """Uniform point in the Bloch ball."""
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return BlochVector.of(v * rng.random() ** (1 / 3))


def random_pure_bloch_vector(rng):
    v = rng.standard_normal(3)
    return BlochVector.of(v / np.linalg.norm(v))
