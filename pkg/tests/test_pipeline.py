import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_std_circuit
from tiasmc.circuit import equal_up_to_global_phase, simulate_state
from tiasmc.orchestrator import Heuristics, Mode, StrategyConfig
from tiasmc.pipeline import compile_circuit, compile_qasm
from tiasmc.qasm import ParseError
from tiasmc.tiasm import emit_text, parse_text
from tiasmc.vm import execute, state_in_qubit_order

BELL_QASM = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
creg c[2];
h q[0];
cx q[0],q[1];
measure q -> c;
"""


def compiled_state(result):
    n = result.source.num_qubits
    res = execute(result.program, capture_state=True)
    assert res.ok
    return state_in_qubit_order(res.state, result.program.layout, n)


def test_bell_pair_end_to_end():
    result = compile_qasm(BELL_QASM)
    state = compiled_state(result)
    assert equal_up_to_global_phase(state, np.array([1, 0, 0, 1]) / math.sqrt(2), 1e-9)
    shots = execute(result.program, seed=4, shots=100).shots
    assert all(a == b for a, b in shots) and 0 < sum(a for a, _ in shots) < 100


def test_parse_errors_propagate():
    with pytest.raises(ParseError):
        compile_qasm("OPENQASM 2.0; qreg q[1]; foo q[0];")


@pytest.mark.parametrize("strat", [
    StrategyConfig(),
    StrategyConfig(heuristics=Heuristics.none()),
    StrategyConfig(Mode.RANDOM_GATE, rng_seed=5),
    StrategyConfig(Mode.RANDOM_PATH, n_g=3, rng_seed=5),
])
def test_random_four_qubit_circuits_match_reference(strat):
    rng = np.random.default_rng(99)
    for _ in range(10):
        c = random_std_circuit(rng, max_qubits=4, max_gates=25, measure=True)
        result = compile_circuit(c, strat=strat)
        ref = simulate_state(c, ignore_measurements=True)
        assert equal_up_to_global_phase(compiled_state(result), ref, 1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_text_round_trip_preserves_execution(seed):
    c = random_std_circuit(np.random.default_rng(seed), max_qubits=5, max_gates=30, measure=True)
    program = compile_circuit(c).program
    direct = execute(program, seed=seed % 1000, capture_state=True)
    reparsed = parse_text(emit_text(program))
    via_text = execute(reparsed, seed=seed % 1000, capture_state=True)
    assert reparsed.layout == program.layout
    assert direct.bits == via_text.bits and direct.moves == via_text.moves
    assert np.allclose(direct.state, via_text.state, atol=1e-9)
