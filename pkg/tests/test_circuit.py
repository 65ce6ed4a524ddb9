import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PAULI_X, PAULI_Y, PAULI_Z, expm_series
from tiasmc.circuit import (
    MAX_ORACLE_QUBITS,
    RX,
    RXX,
    RY,
    Circuit,
    Gate,
    Measure,
    R,
    equal_up_to_global_phase,
    gate_matrix,
    global_phase_between,
    is_unitary,
    normalize_angle,
    simulate_state,
    unitary_of_circuit,
    unitary_of_gate,
)
from tiasmc.errors import (
    ContainsMeasurement,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidCircuit,
    UnknownGate,
)

angles = st.floats(-4 * math.pi, 4 * math.pi, allow_nan=False)


def test_rx_zero_is_identity():
    assert np.allclose(unitary_of_gate(RX(0.0, 0), 1), np.eye(2))


def test_rx_pi_is_i_sigma_x():
    u = unitary_of_gate(RX(math.pi, 0), 1)
    assert np.allclose(u, 1j * PAULI_X)
    assert equal_up_to_global_phase(u, PAULI_X)


@pytest.mark.parametrize("theta", [0.3, 1.1, -2.5, math.pi])
def test_rxx_on_00_matches_power_series(theta):
    xx = np.kron(PAULI_X, PAULI_X)
    oracle = expm_series(0.5j * theta * xx)
    u = unitary_of_gate(RXX(theta, 0, 1), 2)
    assert np.allclose(u, oracle, atol=1e-12)
    psi = u @ np.array([1, 0, 0, 0])
    assert np.allclose(psi, [math.cos(theta / 2), 0, 0, 1j * math.sin(theta / 2)])


@given(phi=angles, theta=angles)
def test_r_matches_exponential(phi, theta):
    gen = math.cos(phi) * PAULI_X + math.sin(phi) * PAULI_Y
    assert np.allclose(gate_matrix(R(phi, theta, 0)), expm_series(0.5j * theta * gen), atol=1e-10)


@given(theta=angles)
def test_rx_ry_are_special_cases_of_r(theta):
    assert np.allclose(gate_matrix(R(0.0, theta, 0)), gate_matrix(RX(theta, 0)))
    assert np.allclose(gate_matrix(R(math.pi / 2, theta, 0)), gate_matrix(RY(theta, 0)))


@pytest.mark.parametrize("name,params", [
    ("rx", (0.7,)), ("ry", (-1.3,)), ("rz", (2.2,)),
])
def test_builtin_rotations_use_negative_exponent(name, params):
    pauli = {"rx": PAULI_X, "ry": PAULI_Y, "rz": PAULI_Z}[name]
    oracle = expm_series(-0.5j * params[0] * pauli)
    assert np.allclose(gate_matrix(Gate(name, (0,), params)), oracle, atol=1e-12)


def test_embedding_respects_qubit_order():
    # X on qubit 0 (most significant) maps |00> to |10>
    u = unitary_of_gate(Gate("x", (0,)), 2)
    assert np.allclose(u @ np.eye(4)[0], np.eye(4)[2])
    cx = unitary_of_gate(Gate("cx", (1, 0)), 2)  # control q1, target q0
    assert np.allclose(cx @ np.eye(4)[1], np.eye(4)[3])


def test_empty_circuit_is_identity():
    assert np.allclose(unitary_of_circuit(Circuit(2)), np.eye(4))


@given(a=angles, b=angles)
def test_same_axis_rotations_add(a, b):
    c = Circuit(1, 0, (RX(a, 0), RX(b, 0)))
    assert np.allclose(unitary_of_circuit(c), gate_matrix(RX(a + b, 0)), atol=1e-10)


def test_later_gates_apply_after_earlier_ones():
    c = Circuit(1, 0, (Gate("h", (0,)), Gate("s", (0,))))
    assert np.allclose(unitary_of_circuit(c), gate_matrix(c.gates[1]) @ gate_matrix(c.gates[0]))


def test_unitary_of_circuit_rejects_measurement():
    with pytest.raises(ContainsMeasurement):
        unitary_of_circuit(Circuit(1, 1, (Measure(0, 0),)))


def test_dimension_limit():
    with pytest.raises(DimensionTooLarge):
        unitary_of_gate(RX(0.1, 0), MAX_ORACLE_QUBITS + 1)


def test_unknown_gate_has_no_matrix():
    with pytest.raises(UnknownGate):
        gate_matrix(Gate("foo", (0,)))


def test_global_phase_equality():
    u = unitary_of_gate(RY(0.4, 0), 1)
    assert equal_up_to_global_phase(np.exp(0.9j) * u, u)
    assert not equal_up_to_global_phase(u, unitary_of_gate(RY(0.5, 0), 1))
    lam = global_phase_between(np.exp(0.9j) * u, u)
    assert abs(lam - np.exp(0.9j)) < 1e-12


def test_global_phase_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        equal_up_to_global_phase(np.eye(2), np.eye(4))


@settings(max_examples=30)
@given(st.lists(st.tuples(st.sampled_from(["RX", "RY", "RXX"]), angles), max_size=8))
def test_native_circuits_are_unitary(ops):
    gates = [RXX(t, 0, 2) if name == "RXX" else Gate(name, (1,), (t,)) for name, t in ops]
    assert is_unitary(unitary_of_circuit(Circuit(3, 0, tuple(gates))))


def test_state_matches_unitary_first_column(rng):
    c = Circuit(3, 0, (RY(0.3, 0), RXX(1.2, 0, 2), Gate("cx", (2, 1))))
    assert np.allclose(simulate_state(c), unitary_of_circuit(c)[:, 0])


@given(theta=st.floats(-100, 100, allow_nan=False))
def test_normalize_angle_range_and_period(theta):
    r = normalize_angle(theta)
    assert 0 <= r < 4 * math.pi
    assert math.isclose(math.remainder(r - theta, 4 * math.pi), 0, abs_tol=1e-9)


@pytest.mark.parametrize("make", [
    lambda: Gate("RXX", (0, 0), (1.0,)),
    lambda: Gate("RX", (0,), ()),
    lambda: Gate("R", (0,), (1.0,)),
    lambda: Gate("cx", (0, 1, 2)),
    lambda: Gate("RX", (0,), (math.inf,)),
    lambda: Circuit(1, 0, (RX(0.1, 3),)),
    lambda: Circuit(1, 1, (Measure(0, 2),)),
])
def test_invalid_operations_rejected(make):
    with pytest.raises(InvalidCircuit):
        make()
