import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_std_circuit
from tiasmc.circuit import RX, RXX, Circuit, Gate, R
from tiasmc.qasm import ParseError, parse_qasm, to_qasm

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def test_minimal_program():
    c = parse_qasm("OPENQASM 2.0; qreg q[1];")
    assert (c.num_qubits, c.num_clbits, c.gates) == (1, 0, ())


def test_cx_and_measure():
    c = parse_qasm("OPENQASM 2.0; qreg q[2]; creg c[2]; cx q[0],q[1]; measure q[0] -> c[0];")
    assert c.gates == (Gate("cx", (0, 1)), Gate("measure", (0,), cbit=0))


@pytest.mark.parametrize("source,category", [
    ("OPENQASM 2.0; qreg q[1]; rx(pi/2) q[3];", "IndexOutOfRange"),
    ("OPENQASM 2.0; qreg q[1]; foo q[0];", "UnknownGate"),
    ("OPENQASM 2.0; qreg q[1]; x r[0];", "UndeclaredRegister"),
    ("OPENQASM 2.0; qreg q[1]; creg c[1]; measure q[0] -> d[0];", "UndeclaredRegister"),
    ("OPENQASM 2.0; qreg q[1]; gate g a { x a; }", "Unsupported"),
    ("OPENQASM 2.0; qreg q[1]; reset q[0];", "Unsupported"),
    ("OPENQASM 2.0; qreg q[1]; creg c[1]; if (c==1) x q[0];", "Unsupported"),
    ("OPENQASM 2.0; qreg q[1]; opaque g a;", "Unsupported"),
    ('OPENQASM 2.0; include "other.inc";', "Unsupported"),
    ("OPENQASM 3.0; qreg q[1];", "Unsupported"),
    ("qreg q[1];", "Syntax"),
    ("OPENQASM 2.0; qreg q[1]; x q[0]", "Syntax"),
    ("OPENQASM 2.0; qreg q[2]; cx q[0];", "Syntax"),
    ("OPENQASM 2.0; qreg q[2]; cx q[0],q[0];", "Syntax"),
    ("OPENQASM 2.0; qreg q[1]; rx q[0];", "Syntax"),
    ("OPENQASM 2.0; qreg q[1]; rx(1/0) q[0];", "Syntax"),
    ("OPENQASM 2.0; qreg q[1]; qreg q[2];", "Syntax"),
])
def test_error_categories(source, category):
    with pytest.raises(ParseError) as info:
        parse_qasm(source)
    assert info.value.category == category
    assert info.value.message
    assert info.value.span.line >= 1 and info.value.span.column >= 1


def test_error_span_points_at_offending_token():
    with pytest.raises(ParseError) as info:
        parse_qasm("OPENQASM 2.0;\nqreg q[1];\n  rx(0.1) q[7];\n")
    assert (info.value.span.line, info.value.span.column) == (3, 13)


def test_registers_flatten_in_declaration_order():
    c = parse_qasm(HEADER + "qreg a[2]; qreg b[3]; creg x[1]; creg y[2];"
                   "cx a[1],b[0]; measure b[2] -> y[1];")
    assert c.num_qubits == 5 and c.num_clbits == 3
    assert c.gates[0].qubits == (1, 2)
    assert c.gates[1] == Gate("measure", (4,), cbit=2)
    assert c.qregs == {"a": (0, 2), "b": (2, 3)}


def test_broadcast_over_registers():
    c = parse_qasm(HEADER + "qreg a[2]; qreg b[2]; creg c[2]; h a; cx a,b; measure b -> c;")
    assert [g.qubits for g in c.gates] == [(0,), (1,), (0, 2), (1, 3), (2,), (3,)]
    assert [g.cbit for g in c.gates[-2:]] == [0, 1]


def test_expressions_and_comments():
    src = HEADER + """
    // line comment
    qreg q[1]; /* block
    comment */
    rx(-pi/2 + 2*pi/4) q[0];
    ry(3*(1+1)) q[0];
    u3(pi, -pi/2, 0.5e1) q[0];
    rz(sqrt(4)^2 - cos(0)) q[0];
    """
    angles = [g.params for g in parse_qasm(src).gates]
    assert angles[0] == pytest.approx((0.0,))
    assert angles[1] == pytest.approx((6.0,))
    assert angles[2] == pytest.approx((math.pi, -math.pi / 2, 5.0))
    assert angles[3] == pytest.approx((3.0,))


def test_barrier_is_recorded():
    c = parse_qasm(HEADER + "qreg q[3]; barrier q[0],q[2]; barrier q;")
    assert c.gates == (Gate("barrier", (0, 2)), Gate("barrier", (0, 1, 2)))


def test_r_takes_phi_then_theta():
    c = parse_qasm(HEADER + "qreg q[1]; r(0.25, 1.5) q[0];")
    assert c.gates[0] == Gate("r", (0,), (0.25, 1.5))


def test_gate_order_matches_statement_order():
    c = parse_qasm(HEADER + "qreg q[2]; x q[1]; h q[0]; cz q[0],q[1]; s q[1];")
    assert [g.name for g in c.gates] == ["x", "h", "cz", "s"]


def test_native_gates_print_as_builtins_with_sign_flip():
    c = Circuit(2, 0, (RX(0.5, 0), R(0.25, 1.5, 1), RXX(0.75, 0, 1)))
    text = to_qasm(c)
    assert "rx(-0.5) q[0];" in text and "r(0.25,-1.5) q[1];" in text and "rxx(-0.75)" in text


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_print_parse_round_trip(seed):
    c = random_std_circuit(np.random.default_rng(seed), measure=seed % 2 == 0)
    again = parse_qasm(to_qasm(c))
    assert again == c


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="OPENQASM2.0;qreg[]cx,()->measure pi+-*/^e9 \n", max_size=60))
def test_parser_is_total(text):
    try:
        parse_qasm(text)
    except ParseError as exc:
        assert exc.category in {"Syntax", "UnknownGate", "UndeclaredRegister",
                                "IndexOutOfRange", "Unsupported"}


@pytest.mark.parametrize("expr", ["9^9^9", "1e400", "(-8)^(1/3)", "exp(1000)", "0^-1", "ln(0)"])
def test_out_of_range_angles_are_syntax_errors(expr):
    with pytest.raises(ParseError) as info:
        parse_qasm(f"OPENQASM 2.0; qreg q[1]; rx({expr}) q[0];")
    assert info.value.category == "Syntax"
