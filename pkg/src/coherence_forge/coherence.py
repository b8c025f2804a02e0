"""Coherence quantifiers and the raw quantumness of measurement effects."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import SupportMismatch, WrongDimension
from .state import binary_entropy, dephase, entropy

RAW_TOL = 1e-10


@dataclass(frozen=True)
class CoherenceReport:
    c_l1: float
    c_rel_ent: float
    state_dim: int


def _offdiag(m):
    m = np.asarray(m)
    return m - np.diag(np.diag(m))


def c_l1(rho):
    """Sum of the moduli of all off-diagonal entries."""
    return float(np.sum(np.abs(_offdiag(rho))))


def c_rel_ent(rho):
    """Relative entropy of coherence, S(dephased) - S(rho), in bits."""
    return max(entropy(dephase(rho)) - entropy(rho), 0.0)


def _require_qubit(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise WrongDimension(f"qubit state required, got shape {rho.shape}")
    return rho


def c_trace_qubit(rho):
    """Trace-norm distance to the dephased state (equal to c_l1 for qubits)."""
    rho = _require_qubit(rho)
    return float(np.sum(np.abs(np.linalg.eigvalsh(rho - dephase(rho)))))


def c_formation_qubit(rho):
    c = min(c_l1(_require_qubit(rho)), 1.0)
    return binary_entropy((1 + np.sqrt(1 - c * c)) / 2)


def coherence_report(rho):
    rho = np.asarray(rho, dtype=complex)
    return CoherenceReport(c_l1(rho), c_rel_ent(rho), rho.shape[0])


def _diag_entropy(psi):
    p = np.abs(psi) ** 2
    p = np.where(p > 1e-15, p, 1.0)
    return -np.sum(p * np.log2(p), axis=-1)


def rank2_bound_search(rho, e1, e2, grid=(181, 360), refine=True):
    """Minimise the dephased entropy over pure states in span{e1, e2}.

    Returns ``(value, theta, phi)``. The minimum over
    ``cos(theta) e1 + exp(i phi) sin(theta) e2`` lower-bounds the coherence of
    formation of any state supported on that span.
    """
    rho = np.asarray(rho, dtype=complex)
    e1 = np.asarray(e1, dtype=complex).ravel()
    e2 = np.asarray(e2, dtype=complex).ravel()
    e1 = e1 / np.linalg.norm(e1)
    e2 = e2 / np.linalg.norm(e2)
    if abs(np.vdot(e1, e2)) > 1e-9:
        raise SupportMismatch("e1 and e2 are not orthogonal")
    proj = np.outer(e1, e1.conj()) + np.outer(e2, e2.conj())
    if np.max(np.abs(proj @ rho @ proj - rho)) > 1e-8:
        raise SupportMismatch("state is not supported on span{e1, e2}")

    n_theta, n_phi = grid
    thetas = np.linspace(0.0, np.pi / 2, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    psi = (np.cos(thetas)[:, None, None] * e1
           + np.exp(1j * phis)[None, :, None] * np.sin(thetas)[:, None, None] * e2)
    vals = _diag_entropy(psi)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    best = (float(vals[i, j]), float(thetas[i]), float(phis[j]))
    if refine:
        def f(x):
            t = np.clip(x[0], 0.0, np.pi / 2)
            return float(_diag_entropy(np.cos(t) * e1 + np.exp(1j * x[1]) * np.sin(t) * e2))

        res = minimize(f, [best[1], best[2]], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13})
        if res.fun < best[0]:
            best = (float(res.fun), float(np.clip(res.x[0], 0, np.pi / 2)),
                    float(res.x[1] % (2 * np.pi)))
    return best


def c_formation_rank2_bound(rho, e1, e2, grid=(181, 360)):
    return rank2_bound_search(rho, e1, e2, grid)[0]


def raw_quantumness_element(e):
    return float(np.sum(np.abs(_offdiag(e))))


def raw_quantumness(povm):
    return [raw_quantumness_element(e) for e in povm.effects]


def is_free_measurement(povm):
    return all(q <= RAW_TOL for q in raw_quantumness(povm))
