"""TIASM virtual machine: legality checking plus optional state-vector simulation.

Ion ``k`` is state-vector axis ``k`` (ion 0 is the most significant bit).
Execution halts at the first illegal instruction without applying any part of
it; the error records the instruction index and a category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .chip import COMPUTE, SPAM, STORAGE, ChipConfig, ChipState, Register, load_ions
from .circuit import MAX_ORACLE_QUBITS, _r_matrix, _rx_matrix, _ry_matrix, _rxx_matrix, apply_matrix
from .errors import CapacityExceeded, EmptySource, SameRegister
from .tiasm import (
    ClassicalRegister,
    Measure,
    Move,
    Prepare,
    QuantumRegister,
    Rphi,
    Rx,
    Rxx,
    Ry,
    TiasmProgram,
)

_X = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass
class VmError:
    category: str
    message: str
    index: int  # position in the instruction list

    def to_dict(self) -> dict:
        return {"category": self.category, "message": self.message, "index": self.index}


@dataclass
class VmResult:
    bits: list[int]
    moves: int
    error: VmError | None = None
    state: np.ndarray | None = None
    simulated: bool = True
    shots: list[list[int]] = field(default_factory=list)
    # register name -> ions, top first, after the last executed instruction
    occupancy: dict[str, list[int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        d = {"bits": self.bits, "moves": self.moves}
        if self.occupancy:
            d["occupancy"] = self.occupancy
        if self.shots:
            d["shots"] = self.shots
        if self.error is not None:
            d["error"] = self.error.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class _Halt(Exception):
    def __init__(self, category: str, message: str):
        super().__init__(message)
        self.category = category


class _Machine:
    def __init__(self, program: TiasmProgram, cfg: ChipConfig, simulate: bool,
                 rng: np.random.Generator):
        self.n = program.num_qubits
        self.ncl = program.num_clbits
        self.chip = load_ions(cfg, self.n) if self.n else ChipState(cfg)
        self.simulate = simulate and self.n > 0
        self.rng = rng
        self.bits = [0] * self.ncl
        self.moves = 0
        self.psi = None
        if self.simulate:
            self.psi = np.zeros((2,) * self.n, dtype=complex)
            self.psi[(0,) * self.n] = 1.0
        self.captured = None

    def _compute_ion(self, i_stack: int) -> int:
        comp = self.chip.stacks[COMPUTE]
        if not 0 <= i_stack < len(comp):
            raise _Halt("GateOutsideCompute",
                        f"no ion at COMPUTE position {i_stack} ({len(comp)} present)")
        return comp[-1 - i_stack]

    def _apply(self, matrix: np.ndarray, ions):
        if self.simulate:
            self.psi = apply_matrix(self.psi, matrix, ions)

    def _measure_ion(self, ion: int) -> int:
        if not self.simulate:
            return 0
        probs = np.abs(self.psi) ** 2
        p1 = float(np.take(probs, 1, axis=ion).sum())
        bit = int(self.rng.random() < p1)
        idx = [slice(None)] * self.n
        idx[ion] = 1 - bit
        self.psi[tuple(idx)] = 0
        norm = np.linalg.norm(self.psi)
        self.psi = self.psi / norm
        return bit

    def step(self, ins):
        chip = self.chip
        if isinstance(ins, (QuantumRegister, ClassicalRegister)):
            return
        if isinstance(ins, Move):
            try:
                chip.move(ins.src, ins.dst)
            except (SameRegister, EmptySource, CapacityExceeded) as exc:
                raise _Halt("IllegalMove", str(exc)) from None
            self.moves += 1
        elif isinstance(ins, Prepare):
            stack = chip.stacks[ins.reg]
            if not stack:
                raise _Halt("PrepareEmpty", f"PREPARE {ins.reg.name} on an empty register")
            if ins.reg == COMPUTE:
                ion = stack[-1]
                if self._measure_ion(ion):
                    self._apply(_X, (ion,))
        elif isinstance(ins, Measure):
            if not chip.stacks[SPAM]:
                raise _Halt("MeasureEmptySpam", "MEASURE with no ion in SPAM")
            if not 0 <= ins.cbit < self.ncl:
                raise _Halt("ClassicalIndexOutOfRange", f"c{ins.cbit} is not declared")
            if self.captured is None and self.simulate:
                self.captured = self.psi.reshape(-1).copy()
            self.bits[ins.cbit] = self._measure_ion(chip.stacks[SPAM][-1])
        elif isinstance(ins, Rx):
            self._apply(_rx_matrix(ins.theta), (self._compute_ion(ins.i_stack),))
        elif isinstance(ins, Ry):
            self._apply(_ry_matrix(ins.theta), (self._compute_ion(ins.i_stack),))
        elif isinstance(ins, Rphi):
            self._apply(_r_matrix(ins.phi, ins.theta), (self._compute_ion(ins.i_stack),))
        elif isinstance(ins, Rxx):
            comp = chip.stacks[COMPUTE]
            if len(comp) != 2:
                raise _Halt("RxxArity", f"RXX needs two ions in COMPUTE, found {len(comp)}")
            self._apply(_rxx_matrix(ins.theta), (comp[-1], comp[-2]))
        else:
            raise _Halt("Syntax", f"not a TIASM instruction: {ins!r}")


def execute(program: TiasmProgram, cfg: ChipConfig | None = None, *, seed: int | None = 0,
            shots: int = 1, capture_state: bool = False,
            simulate: bool | None = None) -> VmResult:
    """Run ``program``; ``simulate=None`` simulates only when the ion count is small."""
    cfg = cfg or ChipConfig()
    if simulate is None:
        simulate = program.num_qubits <= MAX_ORACLE_QUBITS
    rng = np.random.default_rng(seed)
    all_bits = []
    result = None
    if program.num_qubits > min(cfg.max_total_ions, cfg.capacity(STORAGE)):
        err = VmError("TooManyIons", f"{program.num_qubits} ions exceed the chip limit", 0)
        return VmResult([0] * program.num_clbits, 0, err, None, False)
    for _ in range(max(1, shots)):
        m = _Machine(program, cfg, simulate, rng)
        error = None
        for k, ins in enumerate(program.instructions):
            try:
                m.step(ins)
            except _Halt as exc:
                error = VmError(exc.category, str(exc), k)
                break
        state = None
        if capture_state and m.simulate:
            state = m.captured if m.captured is not None else m.psi.reshape(-1).copy()
        all_bits.append(m.bits)
        occupancy = {r.name: m.chip.stack(r) for r in Register}
        result = VmResult(m.bits, m.moves, error, state, m.simulate, occupancy=occupancy)
        if error is not None:
            break
    if shots > 1:
        result.shots = all_bits
    return result


def check_legality(program: TiasmProgram, cfg: ChipConfig | None = None) -> VmError | None:
    """First violation of the chip rules, or ``None``; no simulation."""
    return execute(program, cfg, simulate=False).error


def count_moves(program: TiasmProgram) -> int:
    return sum(1 for i in program.instructions if isinstance(i, Move))


def state_in_qubit_order(state: np.ndarray, layout: dict[int, int], num_qubits: int) -> np.ndarray:
    """Reorder an ion-indexed state vector into logical-qubit order via ``layout``."""
    t = state.reshape((2,) * num_qubits)
    perm = [layout[q] for q in range(num_qubits)]
    return np.transpose(t, perm).reshape(-1)
