"""TIASM instructions, text emitter and parser.

Grammar, one instruction per line::

    QUANTUM_REGISTER <n>
    CLASSICAL_REGISTER <n>
    MOVE <reg> <reg>
    PREPARE <reg>
    MEASURE -> c<k>
    RX <theta> <i_stack>
    RY <theta> <i_stack>
    R <phi> <theta> <i_stack>
    RXX <theta>

``#`` starts a comment. A ``# layout q:ion ...`` comment records the
compiler's qubit-to-ion assignment and is preserved by the parser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Union

from .chip import COMPUTE, SPAM, Register
from .errors import TiasmSyntaxError


@dataclass(frozen=True, slots=True)
class QuantumRegister:
    n: int


@dataclass(frozen=True, slots=True)
class ClassicalRegister:
    n: int


@dataclass(frozen=True, slots=True)
class Move:
    src: Register
    dst: Register


@dataclass(frozen=True, slots=True)
class Prepare:
    reg: Register


@dataclass(frozen=True, slots=True)
class Measure:
    cbit: int


@dataclass(frozen=True, slots=True)
class Rx:
    theta: float
    i_stack: int


@dataclass(frozen=True, slots=True)
class Ry:
    theta: float
    i_stack: int


@dataclass(frozen=True, slots=True)
class Rphi:
    phi: float
    theta: float
    i_stack: int


@dataclass(frozen=True, slots=True)
class Rxx:
    theta: float


Instruction = Union[
    QuantumRegister, ClassicalRegister, Move, Prepare, Measure, Rx, Ry, Rphi, Rxx
]


@dataclass(frozen=True)
class TiasmProgram:
    instructions: tuple = ()
    # qubit -> ion; metadata written as a comment
    layout: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    @property
    def num_qubits(self) -> int:
        head = self.instructions[0] if self.instructions else None
        return head.n if isinstance(head, QuantumRegister) else 0

    @property
    def num_clbits(self) -> int:
        for ins in self.instructions[1:2]:
            if isinstance(ins, ClassicalRegister):
                return ins.n
        return 0

    def validate(self):
        """Raise ``TiasmSyntaxError`` if the program breaks a structural invariant."""
        ins = self.instructions
        if not ins or not isinstance(ins[0], QuantumRegister):
            raise TiasmSyntaxError("program must start with QUANTUM_REGISTER", 1, "Header")
        ncl = self.num_clbits
        for k, i in enumerate(ins):
            line = k + 1
            if k > 0 and isinstance(i, QuantumRegister):
                raise TiasmSyntaxError("duplicate QUANTUM_REGISTER", line, "Header")
            if isinstance(i, ClassicalRegister) and k != 1:
                raise TiasmSyntaxError("CLASSICAL_REGISTER must directly follow QUANTUM_REGISTER",
                                       line, "Header")
            if isinstance(i, (QuantumRegister, ClassicalRegister)) and i.n < 0:
                raise TiasmSyntaxError("negative register size", line)
            if isinstance(i, Move) and i.src == i.dst:
                raise TiasmSyntaxError("MOVE within one register", line, "SameRegister")
            if isinstance(i, Prepare) and i.reg not in (SPAM, COMPUTE):
                raise TiasmSyntaxError("PREPARE takes SPAM or COMPUTE", line)
            if isinstance(i, Measure) and not 0 <= i.cbit < ncl:
                raise TiasmSyntaxError(f"classical bit c{i.cbit} is not declared", line,
                                       "ClassicalIndexOutOfRange")
            if isinstance(i, (Rx, Ry, Rphi)) and i.i_stack not in (0, 1):
                raise TiasmSyntaxError(f"i_stack {i.i_stack} out of range", line)
            for attr in ("theta", "phi"):
                v = getattr(i, attr, None)
                if v is not None and not math.isfinite(v):
                    raise TiasmSyntaxError("non-finite angle", line)


def _f(x: float) -> str:
    return f"{x:.12g}"


def format_instruction(i: Instruction) -> str:
    if isinstance(i, Move):
        return f"MOVE {i.src.name} {i.dst.name}"
    if isinstance(i, Rx):
        return f"RX {_f(i.theta)} {i.i_stack}"
    if isinstance(i, Ry):
        return f"RY {_f(i.theta)} {i.i_stack}"
    if isinstance(i, Rphi):
        return f"R {_f(i.phi)} {_f(i.theta)} {i.i_stack}"
    if isinstance(i, Rxx):
        return f"RXX {_f(i.theta)}"
    if isinstance(i, Prepare):
        return f"PREPARE {i.reg.name}"
    if isinstance(i, Measure):
        return f"MEASURE -> c{i.cbit}"
    if isinstance(i, QuantumRegister):
        return f"QUANTUM_REGISTER {i.n}"
    if isinstance(i, ClassicalRegister):
        return f"CLASSICAL_REGISTER {i.n}"
    raise TypeError(f"not a TIASM instruction: {i!r}")


def emit_text(p: TiasmProgram) -> str:
    lines = [format_instruction(i) for i in p.instructions]
    if p.layout is not None:
        pairs = " ".join(f"{q}:{ion}" for q, ion in sorted(p.layout.items()))
        lines.insert(1 if lines else 0, f"# layout {pairs}".rstrip())
    return "".join(line + "\n" for line in lines)


def _int(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise TiasmSyntaxError(f"expected an integer, found {tok!r}", line) from None


def _float(tok: str, line: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise TiasmSyntaxError(f"expected a number, found {tok!r}", line) from None
    if not math.isfinite(v):
        raise TiasmSyntaxError("non-finite angle", line)
    return v


def _reg(tok: str, line: int) -> Register:
    try:
        return Register[tok]
    except KeyError:
        raise TiasmSyntaxError(f"unknown register {tok!r}", line) from None


_ARITY = {
    "QUANTUM_REGISTER": 1, "CLASSICAL_REGISTER": 1, "MOVE": 2, "PREPARE": 1,
    "MEASURE": 2, "RX": 2, "RY": 2, "R": 3, "RXX": 1,
}


def parse_instruction(text: str, line: int = 1) -> Instruction:
    toks = text.split()
    op, args = toks[0], toks[1:]
    if op not in _ARITY:
        raise TiasmSyntaxError(f"unknown instruction {op!r}", line)
    if op == "MEASURE" and len(args) == 1 and args[0].startswith("->"):
        args = ["->", args[0][2:]]
    if len(args) != _ARITY[op]:
        raise TiasmSyntaxError(f"{op} takes {_ARITY[op]} operand(s)", line)
    if op == "QUANTUM_REGISTER":
        return QuantumRegister(_int(args[0], line))
    if op == "CLASSICAL_REGISTER":
        return ClassicalRegister(_int(args[0], line))
    if op == "MOVE":
        src, dst = _reg(args[0], line), _reg(args[1], line)
        if src == dst:
            raise TiasmSyntaxError(f"MOVE {src.name} {dst.name} within one register", line,
                                   "SameRegister")
        return Move(src, dst)
    if op == "PREPARE":
        reg = _reg(args[0], line)
        if reg not in (SPAM, COMPUTE):
            raise TiasmSyntaxError("PREPARE takes SPAM or COMPUTE", line)
        return Prepare(reg)
    if op == "MEASURE":
        if args[0] != "->" or not args[1].startswith("c"):
            raise TiasmSyntaxError("expected 'MEASURE -> c<k>'", line)
        return Measure(_int(args[1][1:], line))
    if op == "RXX":
        return Rxx(_float(args[0], line))
    if op == "R":
        ins = Rphi(_float(args[0], line), _float(args[1], line), _int(args[2], line))
    elif op == "RX":
        ins = Rx(_float(args[0], line), _int(args[1], line))
    else:
        ins = Ry(_float(args[0], line), _int(args[1], line))
    if ins.i_stack not in (0, 1):
        raise TiasmSyntaxError(f"i_stack {ins.i_stack} out of range (0 or 1)", line)
    return ins


def parse_text(text: str) -> TiasmProgram:
    instructions: list[Instruction] = []
    lines: list[int] = []
    layout = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body, _, comment = raw.partition("#")
        words = comment.split()
        if words[:1] == ["layout"]:
            layout = {}
            for pair in words[1:]:
                q, _, ion = pair.partition(":")
                layout[_int(q, lineno)] = _int(ion, lineno)
        if not body.strip():
            continue
        instructions.append(parse_instruction(body, lineno))
        lines.append(lineno)
    prog = TiasmProgram(tuple(instructions), layout)
    try:
        prog.validate()
    except TiasmSyntaxError as exc:
        # report the source line rather than the instruction index
        src_line = lines[exc.line - 1] if 0 < exc.line <= len(lines) else exc.line
        raise TiasmSyntaxError(str(exc).split(": ", 1)[-1], src_line, exc.category) from None
    return prog


def programs_match(a: TiasmProgram, b: TiasmProgram, rel_tol: float = 1e-11,
                   abs_tol: float = 1e-11) -> bool:
    """Structural identity with angle comparison tolerant of 12-digit printing."""
    if len(a.instructions) != len(b.instructions):
        return False
    for x, y in zip(a.instructions, b.instructions):
        if type(x) is not type(y):
            return False
        for name in x.__slots__:
            u, v = getattr(x, name), getattr(y, name)
            if isinstance(u, float):
                if not math.isclose(u, v, rel_tol=rel_tol, abs_tol=abs_tol):
                    return False
            elif u != v:
                return False
    return True


def count_moves(p: TiasmProgram | Iterable[Instruction]) -> int:
    seq = p.instructions if isinstance(p, TiasmProgram) else p
    return sum(1 for i in seq if isinstance(i, Move))
