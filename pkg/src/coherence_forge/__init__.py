"""Coherence created and destroyed by non-selective qubit measurements."""

from .coherence import (
    c_formation_qubit,
    c_formation_rank2_bound,
    c_l1,
    c_rel_ent,
    c_trace_qubit,
    is_free_measurement,
    raw_quantumness_element,
)
from .kernels import BACKEND
from .measurement import (
    Povm,
    luders_apply,
    one_param_povm,
    trine_cnm_povm,
    two_outcome_povm,
    validate_povm,
)
from .state import dephase, entropy, from_bloch, to_bloch

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Povm",
    "c_formation_qubit",
    "c_formation_rank2_bound",
    "c_l1",
    "c_rel_ent",
    "c_trace_qubit",
    "dephase",
    "entropy",
    "from_bloch",
    "is_free_measurement",
    "luders_apply",
    "one_param_povm",
    "raw_quantumness_element",
    "to_bloch",
    "trine_cnm_povm",
    "two_outcome_povm",
    "validate_povm",
]
