"""POVMs, the non-selective Lueders channel and the parametric qubit families.

The Kraus operators of a POVM are always the positive roots ``sqrt(E_i)``.
"""

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .coherence import raw_quantumness_element
from .errors import (
    DegenerateDirection,
    DimensionMismatch,
    InvalidParams,
    NotComplete,
    NotPSD,
    WrongDimension,
    ZeroProbabilityOutcome,
)
from .linalg import I2, PAULI, dagger, psd_sqrt, tensor
from .state import BlochVector, is_incoherent

COMPLETENESS_TOL = 1e-9
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Povm:
    """A validated POVM; build through :func:`validate_povm`."""

    effects: np.ndarray = field(repr=False)

    @property
    def n(self):
        return self.effects.shape[0]

    @property
    def dim(self):
        return self.effects.shape[1]

    @cached_property
    def kraus(self):
        return np.stack([psd_sqrt(e) for e in self.effects])

    @property
    def raw_quantumness(self):
        return [raw_quantumness_element(e) for e in self.effects]

    def __iter__(self):
        return iter(self.effects)

    def __len__(self):
        return self.n


def validate_povm(effects, tol=COMPLETENESS_TOL, psd_tol=PSD_TOL):
    if isinstance(effects, Povm):
        effects = effects.effects
    mats = [np.asarray(e, dtype=complex) for e in effects]
    if not mats:
        raise ValueError("a POVM needs at least one effect")
    d = mats[0].shape
    for i, m in enumerate(mats):
        if m.ndim != 2 or m.shape != d or d[0] != d[1]:
            raise DimensionMismatch(f"effect {i} has shape {m.shape}, expected {d}")
    e = np.stack(mats)
    asym = np.max(np.abs(e - dagger(e)))
    if asym > 1e-10:
        raise NotPSD(f"effects are not Hermitian (max asymmetry {asym:.3e})")
    e = (e + dagger(e)) / 2
    for i, m in enumerate(e):
        w = np.linalg.eigvalsh(m)[0]
        if w < -psd_tol:
            raise NotPSD(f"effect {i} has eigenvalue {w:.3e}", index=i)
    dev = float(np.max(np.abs(e.sum(axis=0) - np.eye(d[0]))))
    if dev > tol:
        raise NotComplete(f"effects sum to identity only within {dev:.3e}", deviation=dev)
    return Povm(e)


def _check_dims(povm, rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (povm.dim, povm.dim):
        raise DimensionMismatch(f"state of shape {rho.shape} vs POVM dim {povm.dim}")
    return rho


def luders_apply(povm, rho):
    """Non-selective update: sum_i sqrt(E_i) rho sqrt(E_i)."""
    rho = _check_dims(povm, rho)
    k = povm.kraus
    out = np.einsum("nij,jk,nkl->il", k, rho, k)
    return (out + out.conj().T) / 2


def selective_outcome(povm, rho, i):
    rho = _check_dims(povm, rho)
    if not 0 <= i < povm.n:
        raise IndexError(f"outcome {i} out of range for {povm.n}-outcome POVM")
    p = float(np.trace(povm.effects[i] @ rho).real)
    if p <= 1e-12:
        raise ZeroProbabilityOutcome(f"outcome {i} has probability {p:.3e}")
    k = povm.kraus[i]
    return p, k @ rho @ k / p


# one-parameter unsharp family

@dataclass(frozen=True)
class OneParamPovmParams:
    alpha: complex
    lam: float

    def __post_init__(self):
        if abs(self.alpha) > 1 + 1e-12:
            raise InvalidParams(f"|alpha| = {abs(self.alpha):.12g} > 1")
        if not -1e-12 <= self.lam <= 1 + 1e-12:
            raise InvalidParams(f"sharpness {self.lam} outside [0, 1]")


def coherent_basis_vectors(alpha):
    a = complex(alpha)
    q = np.sqrt(max(1 - abs(a) ** 2, 0.0))
    psi = np.array([a, q], dtype=complex)
    psi_t = np.array([q, -np.conj(a)], dtype=complex)
    return psi, psi_t


def coherent_basis_projectors(alpha):
    psi, psi_t = coherent_basis_vectors(alpha)
    return validate_povm([np.outer(psi, psi.conj()), np.outer(psi_t, psi_t.conj())])


def one_param_povm(p):
    proj = coherent_basis_projectors(p.alpha).effects
    return validate_povm([p.lam * P + (1 - p.lam) / 2 * I2 for P in proj])


def one_param_apply_closed(p, rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise WrongDimension("one-parameter POVM acts on qubits")
    p_plus, p_minus = coherent_basis_projectors(p.alpha).effects
    s = np.sqrt(max(1 - p.lam**2, 0.0))
    return s * rho + (1 - s) * (p_plus @ rho @ p_plus + p_minus @ rho @ p_minus)


def projective_coherence_from_ground(alpha):
    """c_l1 after measuring |0><0| in the {psi, psi~} basis."""
    m = abs(alpha)
    return 2 * m * np.sqrt(max(1 - m * m, 0.0)) * abs(2 * m * m - 1)


# general two-outcome family E_pm = a_pm I pm a.sigma

@dataclass(frozen=True)
class TwoOutcomeParams:
    a_plus: float
    a_vec: tuple

    def __post_init__(self):
        object.__setattr__(self, "a_vec", tuple(float(x) for x in self.a_vec))
        if len(self.a_vec) != 3:
            raise InvalidParams("a_vec must have three components")
        if not 0 <= self.a_plus <= 1:
            raise InvalidParams(f"a_plus = {self.a_plus} outside [0, 1]")
        if self.norm > min(self.a_plus, self.a_minus) + 1e-12:
            raise InvalidParams(
                f"|a| = {self.norm:.6g} exceeds min(a+, a-) = {min(self.a_plus, self.a_minus):.6g}"
            )

    @property
    def a_minus(self):
        return 1 - self.a_plus

    @property
    def vec(self):
        return np.array(self.a_vec)

    @property
    def norm(self):
        return float(np.linalg.norm(self.a_vec))

    @property
    def eta_plus(self):
        return float(np.sqrt(max(self.a_plus**2 - self.norm**2, 0.0)))

    @property
    def eta_minus(self):
        return float(np.sqrt(max(self.a_minus**2 - self.norm**2, 0.0)))

    @property
    def beta(self):
        return self.eta_plus + self.eta_minus


def two_outcome_effects(a_plus, a_vec):
    """Raw effect array for batches: a_plus (N,), a_vec (N, 3) -> (N, 2, 2, 2)."""
    a_plus = np.asarray(a_plus, dtype=float)
    av = np.tensordot(np.asarray(a_vec, dtype=float), PAULI, axes=([-1], [0]))
    ep = a_plus[..., None, None] * I2 + av
    em = (1 - a_plus)[..., None, None] * I2 - av
    return np.stack([ep, em], axis=-3)


def two_outcome_povm(p):
    return validate_povm(two_outcome_effects(p.a_plus, p.vec))


def two_outcome_bloch_closed(p, r):
    """Branch Bloch vectors s_pm = theta_pm a pm beta r.

    The non-selective output state is (I + s_plus . sigma) / 2; ``s_minus``
    equals ``-s_plus``.
    """
    r = BlochVector.of(r).as_array()
    n2 = p.norm**2
    if p.norm <= 1e-9:
        raise DegenerateDirection("|a| ~ 0: use luders_apply directly")
    ar = float(p.vec @ r) / n2
    s_plus = ar * (1 - p.beta) * p.vec + p.beta * r
    s_minus = ar * (-1 + p.beta) * p.vec - p.beta * r
    return s_plus, s_minus


def two_outcome_coherence_closed(p, r):
    """|theta (a1 + i a2) + beta R| for the non-selective output."""
    r = BlochVector.of(r)
    if p.norm <= 1e-9:
        raise DegenerateDirection("|a| ~ 0: use luders_apply directly")
    theta = float(p.vec @ r.as_array()) / p.norm**2 * (1 - p.beta)
    a1, a2, _ = p.a_vec
    return abs(theta * complex(a1, a2) + p.beta * r.R)


def ground_state_bloch(p):
    """Bloch vector of the non-selective output for input |0><0|."""
    if p.norm <= 1e-9:
        raise DegenerateDirection("|a| ~ 0: use luders_apply directly")
    a1, a2, a3 = p.a_vec
    n2 = p.norm**2
    gamma0 = a3 / n2 * (1 - p.beta)
    return np.array([gamma0 * a1, gamma0 * a2, (a3**2 + (n2 - a3**2) * p.beta) / n2])


def ground_state_bloch_as_printed(p):
    """Variant whose third component uses (1 - a3^2) in place of (|a|^2 - a3^2)."""
    s = ground_state_bloch(p)
    a3 = p.a_vec[2]
    s[2] = (a3**2 + (1 - a3**2) * p.beta) / p.norm**2
    return s


def ground_state_coherence(p):
    a1, a2, a3 = p.a_vec
    if p.norm <= 1e-9:
        return 0.0
    return abs(a3) / p.norm**2 * abs(1 - p.beta) * np.hypot(a1, a2)


def ground_state_bound_as_printed(p):
    """(|a3| sqrt(a1^2+a2^2)/|a|^2)(1 - sqrt(1 - sqrt(1 - 2|a|)))."""
    a1, a2, a3 = p.a_vec
    if p.norm <= 1e-9:
        return 0.0
    inner = np.sqrt(max(1 - 2 * p.norm, 0.0))
    return abs(a3) * np.hypot(a1, a2) / p.norm**2 * (1 - np.sqrt(1 - inner))


def ground_state_bound_tight(p):
    """(|a3| sqrt(a1^2+a2^2)/|a|^2)(1 - sqrt(1 - 2|a|)), using beta >= sqrt(1 - 2|a|)."""
    a1, a2, a3 = p.a_vec
    if p.norm <= 1e-9:
        return 0.0
    return abs(a3) * np.hypot(a1, a2) / p.norm**2 * (1 - np.sqrt(max(1 - 2 * p.norm, 0.0)))


# n-outcome family E_i = a_i (I + s_i . sigma)

@dataclass(frozen=True)
class NOutcomeParams:
    weights: tuple
    bloch_dirs: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        s = np.asarray(self.bloch_dirs, dtype=float).reshape(len(w), 3)
        object.__setattr__(self, "weights", tuple(w))
        object.__setattr__(self, "bloch_dirs", tuple(map(tuple, s)))
        if np.any(w < 0):
            raise InvalidParams("weights must be non-negative")
        if abs(w.sum() - 1) > 1e-9:
            raise InvalidParams(f"weights sum to {w.sum():.12g}, not 1")
        if np.any(np.linalg.norm(s, axis=1) > 1 + 1e-12):
            raise InvalidParams("a direction has |s_i| > 1")
        if np.max(np.abs(w @ s)) > 1e-9:
            raise InvalidParams("weighted directions sum_i a_i s_i do not vanish")


def n_outcome_povm(p):
    w = np.asarray(p.weights)
    s = np.asarray(p.bloch_dirs)
    eff = w[:, None, None] * (I2 + np.tensordot(s, PAULI, axes=1))
    return validate_povm(eff)


def trine_cnm_povm(t):
    """Three-outcome POVM with off-diagonal effects that still maps
    incoherent qubit states to incoherent states."""
    if not 0 < t < 1:
        raise InvalidParams(f"t = {t} must lie in (0, 1)")
    b = t / (3 - t)
    c = np.sqrt(1 - b * b)
    a1 = t / 3
    a2 = (1 - t / 3) / 2
    return n_outcome_povm(
        NOutcomeParams((a1, a2, a2), ((1, 0, 0), (-b, c, 0), (-b, -c, 0)))
    )


# classification

def is_cnm(povm, tol=1e-9):
    """True when every computational basis state stays incoherent.

    The channel is affine and the incoherent set is the convex hull of the
    basis projectors, so checking the vertices suffices.
    """
    d = povm.dim
    for k in range(d):
        delta = np.zeros((d, d), dtype=complex)
        delta[k, k] = 1
        if not is_incoherent(luders_apply(povm, delta), tol):
            return False
    return True


def is_cnm_qubit(povm, tol=1e-9):
    if povm.dim != 2:
        raise WrongDimension("is_cnm_qubit needs a qubit POVM")
    return is_cnm(povm, tol)


def compose_channels(m1, m2, rho):
    """Lambda_{m1}(Lambda_{m2}(rho))."""
    return luders_apply(m1, luders_apply(m2, rho))


def tensor_channels(m1, m2, rho_ab):
    rho_ab = np.asarray(rho_ab, dtype=complex)
    d = m1.dim * m2.dim
    if rho_ab.shape != (d, d):
        raise DimensionMismatch(f"bipartite state of shape {rho_ab.shape}, expected ({d}, {d})")
    out = np.zeros_like(rho_ab)
    for k1 in m1.kraus:
        for k2 in m2.kraus:
            k = tensor(k1, k2)
            out += k @ rho_ab @ k
    return (out + out.conj().T) / 2


def tensor_povm(m1, m2):
    return validate_povm([tensor(e1, e2) for e1 in m1.effects for e2 in m2.effects])


# JSON I/O: {"dim": d, "effects": [[[re, im], ...], ...]} with rows flattened

def povm_to_json(povm):
    d = povm.dim
    effects = [[[float(z.real), float(z.imag)] for z in e.ravel()] for e in povm.effects]
    return {"dim": d, "effects": effects}


def povm_from_json(obj):
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        d = int(obj["dim"])
        raw = obj["effects"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed POVM document: {exc}") from exc
    mats = []
    for i, e in enumerate(raw):
        arr = np.asarray(e, dtype=float)
        if arr.shape == (d * d, 2):
            arr = arr.reshape(d, d, 2)
        if arr.shape != (d, d, 2):
            raise ValueError(f"effect {i}: expected {d * d} [re, im] pairs")
        mats.append(arr[..., 0] + 1j * arr[..., 1])
    return validate_povm(mats)
