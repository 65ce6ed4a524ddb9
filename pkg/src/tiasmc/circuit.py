"""Circuit IR, gate matrices and the dense-unitary equivalence oracle.

Native gates follow the hardware sign convention (positive exponent)::

    RX(t)     = exp(+i t X / 2)
    RY(t)     = exp(+i t Y / 2)
    R(p, t)   = exp(+i t (cos p X + sin p Y) / 2)
    RXX(t)    = exp(+i t X (x) X / 2)

Named gates (the lowercase OpenQASM builtins) use the usual qelib1 convention,
e.g. ``rx(t) = exp(-i t X / 2)``. Matrices act on their operands with the
first operand as the most significant bit; circuit states use qubit 0 as the
most significant bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ContainsMeasurement,
    DimensionMismatch,
    DimensionTooLarge,
    InvalidCircuit,
    UnknownGate,
)

MAX_ORACLE_QUBITS = 12
TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

NATIVE_GATES = frozenset({"RX", "RY", "R", "RXX"})
MEASURE = "measure"
BARRIER = "barrier"

# name -> (number of parameters, number of qubits)
BUILTIN_GATES: dict[str, tuple[int, int]] = {
    "id": (0, 1),
    "x": (0, 1),
    "y": (0, 1),
    "z": (0, 1),
    "h": (0, 1),
    "s": (0, 1),
    "sdg": (0, 1),
    "t": (0, 1),
    "tdg": (0, 1),
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "u1": (1, 1),
    "u2": (2, 1),
    "u3": (3, 1),
    "r": (2, 1),
    "rxx": (1, 2),
    "cx": (0, 2),
    "cz": (0, 2),
    "swap": (0, 2),
    "ccx": (0, 3),
}

_NATIVE_SIGNATURES: dict[str, tuple[int, int]] = {
    "RX": (1, 1),
    "RY": (1, 1),
    "R": (2, 1),
    "RXX": (1, 2),
}


@dataclass(frozen=True)
class Gate:
    """One operation of a circuit.

    ``name`` is a native gate (``RX``, ``RY``, ``R``, ``RXX``), a lowercase
    builtin, ``measure`` or ``barrier``. ``R`` stores ``(phi, theta)``.
    """

    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    cbit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidCircuit(f"{self.name}: repeated operand in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidCircuit(f"{self.name}: negative qubit index")
        sig = _NATIVE_SIGNATURES.get(self.name) or BUILTIN_GATES.get(self.name)
        if sig is not None:
            n_params, n_qubits = sig
            if len(self.params) != n_params or len(self.qubits) != n_qubits:
                raise InvalidCircuit(
                    f"{self.name} takes {n_params} parameter(s) and {n_qubits} qubit(s)"
                )
        elif self.name == MEASURE:
            if len(self.qubits) != 1 or self.cbit is None or self.cbit < 0:
                raise InvalidCircuit("measure needs one qubit and a classical bit")
        if self.name != MEASURE and self.cbit is not None:
            raise InvalidCircuit(f"{self.name} does not write a classical bit")
        if not all(math.isfinite(p) for p in self.params):
            raise InvalidCircuit(f"{self.name}: non-finite angle")

    @property
    def is_native(self) -> bool:
        return self.name in NATIVE_GATES

    def __str__(self) -> str:
        args = ",".join(f"{p:.6g}" for p in self.params)
        head = f"{self.name}({args})" if args else self.name
        tail = f" -> c{self.cbit}" if self.cbit is not None else ""
        return f"{head} {' '.join(f'q{q}' for q in self.qubits)}{tail}"


def RX(theta: float, q: int) -> Gate:
    return Gate("RX", (q,), (theta,))


def RY(theta: float, q: int) -> Gate:
    return Gate("RY", (q,), (theta,))


def R(phi: float, theta: float, q: int) -> Gate:
    return Gate("R", (q,), (phi, theta))


def RXX(theta: float, q0: int, q1: int) -> Gate:
    return Gate("RXX", (q0, q1), (theta,))


def Measure(q: int, cbit: int) -> Gate:
    return Gate(MEASURE, (q,), cbit=cbit)


def Barrier(*qubits: int) -> Gate:
    return Gate(BARRIER, tuple(qubits))


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    num_clbits: int = 0
    gates: tuple[Gate, ...] = ()
    # register name -> (offset, size); diagnostics only
    qregs: dict = field(default_factory=dict, compare=False, repr=False)
    cregs: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 0 or self.num_clbits < 0:
            raise InvalidCircuit("register sizes must be non-negative")
        for pos, g in enumerate(self.gates):
            if any(q >= self.num_qubits for q in g.qubits):
                raise InvalidCircuit(f"gate {pos} ({g}) addresses a qubit out of range")
            if g.cbit is not None and g.cbit >= self.num_clbits:
                raise InvalidCircuit(f"gate {pos} ({g}) writes a classical bit out of range")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.num_qubits, self.num_clbits, tuple(gates), self.qregs, self.cregs)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(
            max(self.num_qubits, other.num_qubits),
            max(self.num_clbits, other.num_clbits),
            self.gates + other.gates,
        )

    @property
    def is_native(self) -> bool:
        return all(g.is_native or g.name in (MEASURE, BARRIER) for g in self.gates)

    def count(self, name: str) -> int:
        return sum(1 for g in self.gates if g.name == name)

    def without_measurements(self) -> "Circuit":
        return self.with_gates(g for g in self.gates if g.name not in (MEASURE, BARRIER))


def normalize_angle(theta: float) -> float:
    """Canonical representative of ``theta`` in [0, 4*pi)."""
    r = math.fmod(theta, FOUR_PI)
    if r < 0:
        r += FOUR_PI
    return 0.0 if r >= FOUR_PI else r


def normalize_circuit_angles(c: Circuit) -> Circuit:
    out = []
    for g in c.gates:
        if g.name == "R":
            out.append(Gate("R", g.qubits, (g.params[0], normalize_angle(g.params[1]))))
        elif g.is_native:
            out.append(Gate(g.name, g.qubits, (normalize_angle(g.params[0]),)))
        else:
            out.append(g)
    return c.with_gates(out)


# --------------------------------------------------------------------------
# matrices

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _r_matrix(phi: float, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, 1j * s * np.exp(-1j * phi)], [1j * s * np.exp(1j * phi), c]], dtype=complex
    )


def _rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


def _ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def _rxx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return c * np.eye(4, dtype=complex) + 1j * s * np.kron(_X, _X)


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


def _controlled(u: np.ndarray, controls: int = 1) -> np.ndarray:
    dim = u.shape[0] * 2**controls
    m = np.eye(dim, dtype=complex)
    m[-u.shape[0]:, -u.shape[0]:] = u
    return m


_FIXED = {
    "id": _I2,
    "x": _X,
    "y": _Y,
    "z": _Z,
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * math.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * math.pi / 4)]),
    "cx": _controlled(_X),
    "cz": _controlled(_Z),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "ccx": _controlled(_X, 2),
}


def gate_matrix(g: Gate) -> np.ndarray:
    """Matrix of ``g`` on its own operands (first operand most significant)."""
    p = g.params
    name = g.name
    if name == "RX":
        return _rx_matrix(p[0])
    if name == "RY":
        return _ry_matrix(p[0])
    if name == "R":
        return _r_matrix(p[0], p[1])
    if name == "RXX":
        return _rxx_matrix(p[0])
    if name in _FIXED:
        return _FIXED[name]
    if name == "rx":
        return _rx_matrix(-p[0])
    if name == "ry":
        return _ry_matrix(-p[0])
    if name == "r":
        return _r_matrix(p[0], -p[1])
    if name == "rxx":
        return _rxx_matrix(-p[0])
    if name == "rz":
        return np.diag([np.exp(-0.5j * p[0]), np.exp(0.5j * p[0])])
    if name == "u1":
        return np.diag([1, np.exp(1j * p[0])]).astype(complex)
    if name == "u2":
        return _u3(math.pi / 2, p[0], p[1])
    if name == "u3":
        return _u3(*p)
    raise UnknownGate(f"no matrix for gate {name!r}")


def apply_matrix(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply a k-qubit ``matrix`` to the given axes of a (2,)*n (+ extra) tensor."""
    k = len(axes)
    m = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(m, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def unitary_of_gate(g: Gate, n: int) -> np.ndarray:
    if n > MAX_ORACLE_QUBITS:
        raise DimensionTooLarge(f"{n} qubits exceeds the oracle limit of {MAX_ORACLE_QUBITS}")
    if g.name in (MEASURE, BARRIER):
        raise UnknownGate(f"{g.name} has no unitary")
    if any(q >= n for q in g.qubits):
        raise DimensionMismatch(f"{g} does not fit on {n} qubits")
    m = gate_matrix(g)
    dim = 2**n
    ident = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    return apply_matrix(ident, m, g.qubits).reshape(dim, dim)


def unitary_of_circuit(c: Circuit) -> np.ndarray:
    """Product of all gate matrices; later gates multiply from the left."""
    n = c.num_qubits
    if n > MAX_ORACLE_QUBITS:
        raise DimensionTooLarge(f"{n} qubits exceeds the oracle limit of {MAX_ORACLE_QUBITS}")
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        if g.name == MEASURE:
            raise ContainsMeasurement("circuit contains a measurement")
        if g.name == BARRIER:
            continue
        u = apply_matrix(u, gate_matrix(g), g.qubits)
    return u.reshape(dim, dim)


def simulate_state(c: Circuit, *, ignore_measurements: bool = False) -> np.ndarray:
    """State vector of ``c`` applied to |0...0>, qubit 0 most significant."""
    n = c.num_qubits
    if n > MAX_ORACLE_QUBITS:
        raise DimensionTooLarge(f"{n} qubits exceeds the oracle limit of {MAX_ORACLE_QUBITS}")
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    for g in c.gates:
        if g.name == MEASURE:
            if ignore_measurements:
                continue
            raise ContainsMeasurement("circuit contains a measurement")
        if g.name == BARRIER:
            continue
        psi = apply_matrix(psi, gate_matrix(g), g.qubits)
    return psi.reshape(-1)


def global_phase_between(u: np.ndarray, v: np.ndarray) -> complex | None:
    """Unit-modulus ``lam`` with u ~ lam * v, estimated at the largest entry of v."""
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) == 0 or abs(u[idx]) == 0:
        return None
    lam = u[idx] / v[idx]
    return lam / abs(lam)


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"shapes {u.shape} and {v.shape} differ")
    if not np.any(v):
        return bool(np.max(np.abs(u), initial=0.0) <= tol)
    lam = global_phase_between(u, v)
    if lam is None:
        return False
    return bool(np.max(np.abs(u - lam * v)) <= tol)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)
