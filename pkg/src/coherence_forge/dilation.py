"""Apparatus-system dilation: global unitary, projective readout on the
apparatus, induced entanglement and the entanglement/coherence/mixedness
trade-off.

Ordering convention: the apparatus A is the left tensor factor, the system S
the right one.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize

from .coherence import c_rel_ent
from .errors import DimensionMismatch
from .linalg import dagger, ket_to_dm, partial_trace, tensor
from .random_povm import STREAM_STATE, STREAM_UNITARY, substream
from .state import entropy, entropy_batch, from_bloch, random_bloch_vector, validate_state

UNITARY_TOL = 1e-9
TRADEOFF_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class DilationSetup:
    rho_a: np.ndarray
    rho_s: np.ndarray
    unitary: np.ndarray

    def __post_init__(self):
        ra = validate_state(self.rho_a)
        rs = validate_state(self.rho_s)
        u = np.asarray(self.unitary, dtype=complex)
        d = ra.shape[0] * rs.shape[0]
        if u.shape != (d, d):
            raise DimensionMismatch(f"unitary of shape {u.shape}, expected ({d}, {d})")
        if np.max(np.abs(dagger(u) @ u - np.eye(d))) > UNITARY_TOL:
            raise ValueError("global operator is not unitary")
        object.__setattr__(self, "rho_a", ra)
        object.__setattr__(self, "rho_s", rs)
        object.__setattr__(self, "unitary", u)

    @property
    def dims(self):
        return self.rho_a.shape[0], self.rho_s.shape[0]

    @property
    def rho_as(self):
        u = self.unitary
        return u @ tensor(self.rho_a, self.rho_s) @ dagger(u)


@dataclass(frozen=True)
class ApparatusProjectors:
    """Rank-1 apparatus basis {|n>, |-n>} with Bloch angles (theta, phi)."""

    theta: float
    phi: float

    @property
    def basis(self):
        """Unitary whose columns are the two measured basis vectors."""
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        e = np.exp(1j * self.phi)
        return np.array([[c, -np.conj(e) * s], [e * s, c]], dtype=complex)

    def projectors(self):
        w = self.basis
        return np.stack([ket_to_dm(w[:, 0]), ket_to_dm(w[:, 1])])


def _dephase_apparatus(rho_as, projectors, ds):
    lifted = np.stack([tensor(p, np.eye(ds)) for p in projectors])
    return np.einsum("nij,jk,nkl->il", lifted, rho_as, lifted)


def dilate_and_measure(setup, proj):
    """sum_i (Pi_i x I) rho_AS (Pi_i x I)."""
    return _dephase_apparatus(setup.rho_as, proj.projectors(), setup.dims[1])


def entanglement_gain(setup, proj):
    return entropy(dilate_and_measure(setup, proj)) - entropy(setup.rho_as)


def _gain_grid(rho_as, ds, thetas, phis):
    """Post-measurement entropies on a (theta, phi) grid, vectorised."""
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    c, s = np.cos(tt / 2), np.sin(tt / 2)
    e = np.exp(1j * pp)
    v0 = np.stack([c, e * s], axis=-1)
    v1 = np.stack([-np.conj(e) * s, c + 0j], axis=-1)
    t = rho_as.reshape(2, ds, 2, ds)
    out = 0
    for v in (v0, v1):
        p = v[..., :, None] * np.conj(v[..., None, :])
        # (P x I) rho (P x I), written as P_ab rho_(b j)(c l) P_cd
        block = np.einsum("...ab,bjcl,...cd->...ajdl", p, t, p)
        out = out + block
    return entropy_batch(out.reshape(*tt.shape, 2 * ds, 2 * ds))


def e_min(setup, grid=(60, 120), refine=True):
    """Minimum entanglement gain over apparatus bases.

    Returns ``(value, ApparatusProjectors)``.
    """
    if setup.dims[0] != 2:
        raise DimensionMismatch("e_min searches qubit apparatus bases only")
    rho_as = setup.rho_as
    base = entropy(rho_as)
    ds = setup.dims[1]
    thetas = np.linspace(0.0, np.pi, grid[0])
    phis = np.linspace(0.0, 2 * np.pi, grid[1], endpoint=False)
    vals = _gain_grid(rho_as, ds, thetas, phis)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    best_val, best = float(vals[i, j]), (float(thetas[i]), float(phis[j]))
    if refine:
        def f(x):
            return entropy(dilate_and_measure(setup, ApparatusProjectors(x[0], x[1])))

        res = minimize(f, best, method="Nelder-Mead", options={"xatol": 1e-9, "fatol": 1e-12})
        if res.fun < best_val:
            best_val = float(res.fun)
            best = (float(res.x[0]), float(res.x[1]))
    theta = best[0] % (2 * np.pi)
    phi = best[1]
    if theta > np.pi:
        theta, phi = 2 * np.pi - theta, phi + np.pi
    return best_val - base, ApparatusProjectors(theta, phi % (2 * np.pi))


@dataclass(frozen=True)
class TradeoffReport:
    e_gain: float
    c_r_system_after: float
    mixedness: float
    lhs: float
    rhs: float
    holds: bool
    intermediate: float
    intermediate_holds: bool
    marginal_bound: float
    marginal_holds: bool


def tradeoff_report(setup, proj, slack=TRADEOFF_SLACK):
    """Evaluate the trade-off inequality for one apparatus basis.

    ``lhs = E(Pi) + C_r(rho_S after) + S(rho_S) <= log2(N M) = rhs``.

    ``intermediate`` is C_r(rho_A in the measured basis) + S(rho_S after) -
    S(rho_S), with rho_A the initial apparatus state. ``marginal_bound`` is
    the subadditivity bound S(Tr_S rho_2) + S(rho_S after) - S(rho_A) -
    S(rho_S), which always dominates E(Pi).
    """
    da, ds = setup.dims
    rho2 = dilate_and_measure(setup, proj)
    gain = entropy(rho2) - entropy(setup.rho_as)
    rho_s_after = partial_trace(rho2, 1, (da, ds))
    rho_a_after = partial_trace(rho2, 0, (da, ds))
    c_after = c_rel_ent(rho_s_after)
    mix = entropy(setup.rho_s)
    lhs = gain + c_after + mix
    rhs = float(np.log2(da * ds))

    w = proj.basis
    c_apparatus = c_rel_ent(dagger(w) @ setup.rho_a @ w)
    s_after = entropy(rho_s_after)
    intermediate = c_apparatus + s_after - mix
    marginal = entropy(rho_a_after) + s_after - entropy(setup.rho_a) - mix
    return TradeoffReport(
        e_gain=gain,
        c_r_system_after=c_after,
        mixedness=mix,
        lhs=lhs,
        rhs=rhs,
        holds=bool(lhs <= rhs + slack),
        intermediate=intermediate,
        intermediate_holds=bool(gain <= intermediate + slack),
        marginal_bound=marginal,
        marginal_holds=bool(gain <= marginal + slack),
    )


def random_unitary(dim, rng):
    """Haar unitary: QR of a Ginibre matrix with the phases of diag(R) removed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unitary_4(master_seed, index):
    return random_unitary(4, substream(master_seed, STREAM_UNITARY, 4, index))


def random_setup(master_seed, index, pure_apparatus=None):
    """Random product input and Haar global unitary for sample ``index``.

    The apparatus state is pure when ``pure_apparatus`` is true, mixed when
    false, and a coin flip when None.
    """
    rng = substream(master_seed, STREAM_STATE, 4, index)
    if pure_apparatus is None:
        pure_apparatus = bool(rng.random() < 0.5)
    ra = random_bloch_vector(rng)
    if pure_apparatus:
        v = ra.as_array()
        n = np.linalg.norm(v)
        v = v / n if n > 0 else np.array([0.0, 0.0, 1.0])
        ra = v
    rs = random_bloch_vector(rng)
    return DilationSetup(from_bloch(ra), from_bloch(rs), random_unitary_4(master_seed, index))


def random_projectors(rng):
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return ApparatusProjectors(float(np.arccos(np.clip(v[2], -1, 1))),
                               float(np.arctan2(v[1], v[0]) % (2 * np.pi)))


def induced_kraus(setup, proj):
    """Kraus operators (<pi_i| x I) U (|a> x I) for a pure apparatus |a>."""
    da, ds = setup.dims
    w, v = np.linalg.eigh(setup.rho_a)
    if w[-1] < 1 - 1e-9:
        raise ValueError("induced Kraus operators need a pure apparatus state")
    a = v[:, -1]
    iso = setup.unitary @ np.kron(a[:, None], np.eye(ds))
    basis = proj.basis
    return np.stack([np.kron(basis[:, i].conj()[None, :], np.eye(ds)) @ iso for i in range(da)])


def system_after(setup, proj):
    return partial_trace(dilate_and_measure(setup, proj), 1, setup.dims)


def neumark_unitary(povm):
    """Unitary U with U(|0> x psi) = sum_i |i> x sqrt(E_i) psi.

    Measuring the apparatus in its computational basis then reproduces the
    Lueders channel of ``povm`` on the system.
    """
    iso = np.concatenate(list(povm.kraus), axis=0)
    return np.concatenate([iso, null_space(dagger(iso))], axis=1)
