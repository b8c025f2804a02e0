import numpy as np
import pytest

from coherence_forge import _kernels_py as pyk
from coherence_forge import kernels
from coherence_forge.linalg import psd_sqrt
from coherence_forge.random_povm import sample_effects_batch
from coherence_forge.state import from_bloch

try:
    from coherence_forge import _ckernels as ck
except ImportError:
    ck = None

needs_ext = pytest.mark.skipif(ck is None, reason="compiled extension not built")
RHO = from_bloch((0.3, -0.4, 0.5))


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_python_sqrt_matches_eig():
    eff = sample_effects_batch(3, 1, range(50))
    got = pyk.qubit_sqrt_batch(eff)
    for k in range(50):
        for i in range(3):
            assert np.allclose(got[k, i], psd_sqrt(eff[k, i]), atol=1e-12)


def test_python_sqrt_handles_rank_one():
    p = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    assert np.allclose(pyk.qubit_sqrt_batch(p[None, None])[0, 0], p)
    assert np.allclose(pyk.qubit_sqrt_batch(np.zeros((1, 1, 2, 2), complex)), 0)


@needs_ext
def test_cython_matches_python():
    eff = sample_effects_batch(4, 2, range(300))
    assert np.allclose(ck.qubit_sqrt_batch(eff), pyk.qubit_sqrt_batch(eff), atol=1e-13)
    assert np.allclose(ck.luders_batch(eff, RHO), pyk.luders_batch(eff, RHO), atol=1e-13)
    assert np.allclose(ck.luders_l1_batch(eff, RHO), pyk.luders_l1_batch(eff, RHO), atol=1e-13)


@needs_ext
def test_cython_grid_matches_python():
    mags = np.linspace(0, 1, 41)
    phases = np.linspace(0, 2 * np.pi, 12, endpoint=False)
    lams = np.linspace(0, 1, 11)
    a = ck.one_param_grid_max(RHO, mags, phases, lams)
    b = pyk.one_param_grid_max(RHO, mags, phases, lams)
    assert a[0] == pytest.approx(b[0], abs=1e-13)
    assert tuple(a[1:]) == tuple(b[1:])
