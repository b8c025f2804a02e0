"""Reproducible random POVMs and random two-outcome parameters.

Every sample draws from its own generator keyed by
``(master_seed, stream, n, sample_index)``, so a sample can be regenerated in
isolation and batches can be split across workers in any order.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SingularNormalizer
from .linalg import dagger
from .measurement import Povm, TwoOutcomeParams, validate_povm

STREAM_POVM = 1
STREAM_TWO_OUTCOME = 2
STREAM_STATE = 3
STREAM_UNITARY = 4
STREAM_MISC = 5

SINGULAR_TOL = 1e-12
MAX_RESAMPLES = 64


@dataclass(frozen=True)
class SamplerConfig:
    n: int = 2
    dim: int = 2
    master_seed: int = 0
    sample_index: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if not (0 <= self.master_seed < 2**64 and 0 <= self.sample_index < 2**64):
            raise ValueError("seed and index must be unsigned 64-bit integers")


def substream(master_seed, *key):
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def _inv_sqrt_batch(s):
    w, v = np.linalg.eigh(s)
    return (v * (1 / np.sqrt(w))[..., None, :]) @ dagger(v), w[..., 0]


def _draw_wishart(rng, n, dim):
    g = rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))
    return g @ dagger(g)


def _normalise(a):
    """E_i = S^{-1/2} A_i S^{-1/2} with S = sum_i A_i, batched over axis 0."""
    s = a.sum(axis=1)
    s = (s + dagger(s)) / 2
    inv, wmin = _inv_sqrt_batch(s)
    e = inv[:, None] @ a @ inv[:, None]
    return (e + dagger(e)) / 2, wmin


def _sample_effects(n, dim, master_seed, index):
    if n == 1:
        return np.eye(dim, dtype=complex)[None]
    for attempt in range(MAX_RESAMPLES):
        rng = substream(master_seed, STREAM_POVM, n, index, attempt)
        a = _draw_wishart(rng, n, dim)
        e, wmin = _normalise(a[None])
        if wmin[0] >= SINGULAR_TOL:
            return e[0]
    raise SingularNormalizer(f"normaliser singular after {MAX_RESAMPLES} draws")


def sample_povm(cfg):
    """Random n-outcome POVM from normalised complex Wishart matrices."""
    return validate_povm(_sample_effects(cfg.n, cfg.dim, cfg.master_seed, cfg.sample_index),
                         tol=1e-10)


def sample_effects_batch(n, master_seed, indices, dim=2):
    """Effects for many sample indices at once, shape (len(indices), n, dim, dim).

    Bit-identical to calling :func:`sample_povm` index by index.
    """
    indices = list(indices)
    if n == 1:
        return np.broadcast_to(np.eye(dim, dtype=complex), (len(indices), 1, dim, dim)).copy()
    a = np.empty((len(indices), n, dim, dim), dtype=complex)
    for k, idx in enumerate(indices):
        a[k] = _draw_wishart(substream(master_seed, STREAM_POVM, n, idx, 0), n, dim)
    e, wmin = _normalise(a)
    for k in np.flatnonzero(wmin < SINGULAR_TOL):
        e[k] = _sample_effects(n, dim, master_seed, indices[k])
    return e


def _two_outcome_draw(rng):
    a_plus = rng.random()
    radius = min(a_plus, 1 - a_plus)
    while True:
        v = rng.uniform(-1.0, 1.0, 3)
        if v @ v <= 1.0:
            return a_plus, v * radius


def sample_two_outcome_params(cfg):
    """a+ uniform on [0, 1], a uniform in the ball of radius min(a+, a-)."""
    a_plus, v = _two_outcome_draw(substream(cfg.master_seed, STREAM_TWO_OUTCOME, 2, cfg.sample_index))
    return TwoOutcomeParams(a_plus, tuple(v))


def two_outcome_params_batch(master_seed, indices):
    indices = list(indices)
    a_plus = np.empty(len(indices))
    vecs = np.empty((len(indices), 3))
    for k, idx in enumerate(indices):
        a_plus[k], vecs[k] = _two_outcome_draw(substream(master_seed, STREAM_TWO_OUTCOME, 2, idx))
    return a_plus, vecs


def trivial_povm(dim=2):
    return Povm(np.eye(dim, dtype=complex)[None])
