import math

import numpy as np
import pytest
from hypothesis import given

from coherence_forge.coherence import (
    c_formation_qubit,
    c_formation_rank2_bound,
    c_l1,
    c_rel_ent,
    c_trace_qubit,
    coherence_report,
    is_free_measurement,
    rank2_bound_search,
    raw_quantumness_element,
)
from coherence_forge.errors import SupportMismatch, WrongDimension
from coherence_forge.linalg import ket_to_dm
from coherence_forge.measurement import validate_povm
from coherence_forge.state import binary_entropy, from_bloch

from conftest import qubit_states

PLUS = ket_to_dm(np.array([1, 1]) / math.sqrt(2))


def test_maximally_coherent_qubit():
    assert c_l1(PLUS) == pytest.approx(1.0)
    assert c_rel_ent(PLUS) == pytest.approx(1.0)
    assert c_formation_qubit(PLUS) == pytest.approx(1.0)


def test_maximally_coherent_qutrit():
    psi = np.ones(3) / math.sqrt(3)
    rho = ket_to_dm(psi)
    assert c_l1(rho) == pytest.approx(2.0)
    assert c_rel_ent(rho) == pytest.approx(math.log2(3))


def test_partially_coherent_oracle():
    # r = (0.5, 0, 0): eigenvalues 3/4, 1/4, dephased state I/2
    rho = from_bloch((0.5, 0, 0))
    assert c_l1(rho) == pytest.approx(0.5)
    assert c_rel_ent(rho) == pytest.approx(1 - 0.811278124459, abs=1e-9)
    assert c_formation_qubit(rho) == pytest.approx(binary_entropy((1 + math.sqrt(0.75)) / 2))


def test_trace_coherence_needs_qubit():
    with pytest.raises(WrongDimension):
        c_trace_qubit(np.eye(3) / 3)


@given(qubit_states())
def test_qubit_measure_relations(rho):
    c = c_l1(rho)
    assert 0 <= c <= 1 + 1e-12
    assert c_trace_qubit(rho) == pytest.approx(c, abs=1e-12)
    assert 0 <= c_rel_ent(rho) <= 1 + 1e-12
    # C_f is an upper bound on C_r for any state
    assert c_formation_qubit(rho) >= c_rel_ent(rho) - 1e-9


@given(qubit_states(pure=True))
def test_pure_state_formation_equals_rel_ent(rho):
    assert c_formation_qubit(rho) == pytest.approx(c_rel_ent(rho), abs=1e-7)


def test_report():
    rep = coherence_report(PLUS)
    assert rep.c_l1 == pytest.approx(1.0)


def test_rank2_bound_product_support():
    e1 = np.array([1, 0, 0, 0], dtype=complex)
    e2 = np.array([0, 0, 0, 1], dtype=complex)
    rho = (ket_to_dm(e1) + ket_to_dm(e2)) / 2
    assert c_formation_rank2_bound(rho, e1, e2) == pytest.approx(0.0, abs=1e-9)


def test_rank2_bound_uniform_support():
    # span of (|00>+|11>)/sqrt2 and (|01>+|10>)/sqrt2 contains |++>, diag entropy 2
    # and (|00>+|11>)/sqrt2 with entropy 1; the minimum is 1
    e1 = np.array([1, 0, 0, 1]) / math.sqrt(2)
    e2 = np.array([0, 1, 1, 0]) / math.sqrt(2)
    rho = (ket_to_dm(e1) + ket_to_dm(e2)) / 2
    val, theta, phi = rank2_bound_search(rho, e1, e2)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_rank2_bound_errors():
    e1 = np.array([1, 0, 0, 0], dtype=complex)
    with pytest.raises(SupportMismatch):
        rank2_bound_search(ket_to_dm(e1), e1, e1)
    e2 = np.array([0, 1, 0, 0], dtype=complex)
    with pytest.raises(SupportMismatch):
        rank2_bound_search(np.eye(4) / 4, e1, e2)


def test_raw_quantumness_and_free():
    assert raw_quantumness_element(np.array([[0.5, 0.2j], [-0.2j, 0.5]])) == pytest.approx(0.4)
    assert is_free_measurement(validate_povm([np.diag([0.3, 0.6]), np.diag([0.7, 0.4])]))
    assert not is_free_measurement(validate_povm([PLUS, np.eye(2) - PLUS]))
