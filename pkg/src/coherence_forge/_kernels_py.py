"""Vectorised numpy implementations of the qubit hot loops.

These are the reference versions; ``_ckernels.pyx`` mirrors them one to one.
"""

import numpy as np


def qubit_sqrt_batch(effects):
    """Square roots of PSD 2x2 matrices, batched over leading axes.

    Uses sqrt(E) = (E + sqrt(det E) I) / sqrt(tr E + 2 sqrt(det E)).
    """
    e = np.asarray(effects, dtype=complex)
    det = (e[..., 0, 0] * e[..., 1, 1] - e[..., 0, 1] * e[..., 1, 0]).real
    s = np.sqrt(np.clip(det, 0.0, None))
    t = np.sqrt(np.clip((e[..., 0, 0] + e[..., 1, 1]).real + 2 * s, 0.0, None))
    r = e.copy()
    r[..., 0, 0] += s
    r[..., 1, 1] += s
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(t[..., None, None] > 0, r / t[..., None, None], 0.0)
    return r


def luders_batch(effects, rho):
    """Non-selective Lueders outputs for a batch of qubit POVMs.

    ``effects`` has shape (N, n, 2, 2); returns (N, 2, 2).
    """
    k = qubit_sqrt_batch(effects)
    rho = np.asarray(rho, dtype=complex)
    return np.einsum("Nnij,jk,Nnkl->Nil", k, rho, k)


def luders_l1_batch(effects, rho):
    out = luders_batch(effects, rho)
    return 2 * np.abs(out[:, 0, 1])


def one_param_grid_max(rho, mags, phases, sharpness):
    """Grid maximum of the one-parameter POVM output coherence.

    Returns ``(c, i_mag, i_phase, i_sharp)``. Ties resolve to the largest
    sharpness, then the smallest magnitude and phase index.
    """
    rho = np.asarray(rho, dtype=complex)
    m = np.asarray(mags, dtype=float)[:, None]
    ph = np.asarray(phases, dtype=float)[None, :]
    alpha = m * np.exp(1j * ph)
    q = np.sqrt(np.clip(1 - m * m, 0.0, None))
    p_plus = (m * m * rho[0, 0].real + q * q * rho[1, 1].real
              + 2 * (np.conj(alpha) * q * rho[0, 1]).real)
    b = (2 * p_plus - 1) * alpha * q
    lam = np.asarray(sharpness, dtype=float)
    order = np.argsort(-lam, kind="stable")
    s = np.sqrt(np.clip(1 - lam[order] ** 2, 0.0, None))[:, None, None]
    vals = 2 * np.abs(s * rho[0, 1] + (1 - s) * b[None])
    flat = int(np.argmax(vals))
    kk, i, j = np.unravel_index(flat, vals.shape)
    return float(vals[kk, i, j]), int(i), int(j), int(order[kk])
