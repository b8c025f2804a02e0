"""Backend selection for the qubit hot loops.

The compiled extension is used when it imports; otherwise the numpy
implementation is used. Set ``COHERENCE_FORGE_PURE=1`` to force numpy.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("COHERENCE_FORGE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

qubit_sqrt_batch = _impl.qubit_sqrt_batch
luders_batch = _impl.luders_batch
luders_l1_batch = _impl.luders_l1_batch
one_param_grid_max = _impl.one_param_grid_max

__all__ = ["BACKEND", "qubit_sqrt_batch", "luders_batch", "luders_l1_batch", "one_param_grid_max"]
