"""QCCD chip model: four register stacks joined by one X-junction.

Stacks are stored bottom-to-top, so the ion closest to the junction is the
last list element. Every pair of registers is one MOVE apart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

from .errors import (
    CapacityExceeded,
    ChipError,
    EmptySource,
    SameRegister,
    TooManyIons,
    UnknownIon,
)


class Register(IntEnum):
    STORAGE = 0
    TEMPSTORAGE = 1
    SPAM = 2
    COMPUTE = 3


STORAGE = Register.STORAGE
TEMPSTORAGE = Register.TEMPSTORAGE
SPAM = Register.SPAM
COMPUTE = Register.COMPUTE
STORAGE_REGISTERS = (STORAGE, TEMPSTORAGE)

DEFAULT_CAPACITIES = {STORAGE: 50, TEMPSTORAGE: 50, SPAM: 1, COMPUTE: 2}


@dataclass(frozen=True)
class ChipConfig:
    """Register capacities; defaults describe the QVLS-Q1 chip."""

    capacities: dict = field(default_factory=lambda: dict(DEFAULT_CAPACITIES))
    max_total_ions: int = 50

    def __post_init__(self):
        caps = {Register[k] if isinstance(k, str) else Register(k): int(v)
                for k, v in self.capacities.items()}
        missing = set(Register) - set(caps)
        if missing:
            raise ChipError(f"missing capacity for {sorted(r.name for r in missing)}")
        if any(v < 1 for v in caps.values()) or self.max_total_ions < 1:
            raise ChipError("capacities must be positive")
        if caps[COMPUTE] < 2:
            raise ChipError("COMPUTE must hold two ions for RXX")
        object.__setattr__(self, "capacities", caps)

    def capacity(self, reg: Register) -> int:
        return self.capacities[reg]

    @classmethod
    def from_file(cls, path: str | Path) -> "ChipConfig":
        """Load a JSON object mapping register names to capacities.

        An optional ``max_total_ions`` key overrides the ion limit; absent
        registers keep their default capacity.
        """
        data = json.loads(Path(path).read_text())
        max_ions = int(data.pop("max_total_ions", 50))
        caps = dict(DEFAULT_CAPACITIES)
        for name, cap in data.items():
            try:
                caps[Register[name.upper()]] = int(cap)
            except KeyError:
                raise ChipError(f"unknown register {name!r} in {path}") from None
        return cls(caps, max_ions)


class ChipState:
    """Ion placement plus the qubit <-> ion assignment.

    ``move`` mutates in place (the router clones states for hypothetical
    runs); :func:`apply_move` is the value-returning wrapper.
    """

    __slots__ = ("config", "stacks", "where", "qubit_to_ion", "ion_to_qubit", "prepared")

    def __init__(self, config: ChipConfig):
        self.config = config
        self.stacks: list[list[int]] = [[], [], [], []]
        self.where: dict[int, Register] = {}
        self.qubit_to_ion: dict[int, int] = {}
        self.ion_to_qubit: dict[int, int] = {}
        self.prepared: set[int] = set()

    def copy(self) -> "ChipState":
        other = ChipState.__new__(ChipState)
        other.config = self.config
        other.stacks = [list(s) for s in self.stacks]
        other.where = dict(self.where)
        other.qubit_to_ion = dict(self.qubit_to_ion)
        other.ion_to_qubit = dict(self.ion_to_qubit)
        other.prepared = set(self.prepared)
        return other

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChipState):
            return NotImplemented
        return (self.stacks == other.stacks and self.qubit_to_ion == other.qubit_to_ion
                and self.prepared == other.prepared)

    def __repr__(self) -> str:
        regs = ", ".join(f"{r.name}={self.stack(r)}" for r in Register)
        return f"ChipState({regs})"

    @property
    def num_ions(self) -> int:
        return len(self.where)

    def stack(self, reg: Register) -> list[int]:
        """Ions of ``reg`` listed top (junction side) first."""
        return self.stacks[reg][::-1]

    def size(self, reg: Register) -> int:
        return len(self.stacks[reg])

    def top(self, reg: Register) -> int | None:
        s = self.stacks[reg]
        return s[-1] if s else None

    def is_full(self, reg: Register) -> bool:
        return len(self.stacks[reg]) >= self.config.capacities[reg]

    def move(self, src: Register, dst: Register) -> int:
        if src == dst:
            raise SameRegister(f"MOVE {src.name} {dst.name}")
        if not self.stacks[src]:
            raise EmptySource(f"MOVE {src.name} {dst.name}: {src.name} is empty")
        if len(self.stacks[dst]) >= self.config.capacities[dst]:
            raise CapacityExceeded(f"MOVE {src.name} {dst.name}: {dst.name} is full")
        ion = self.stacks[src].pop()
        self.stacks[dst].append(ion)
        self.where[ion] = dst
        return ion

    def junction_distance(self, ion: int) -> int:
        reg = self.where.get(ion)
        if reg is None:
            raise UnknownIon(f"ion {ion} is not on the chip")
        s = self.stacks[reg]
        return len(s) - 1 - s.index(ion)

    def assign(self, qubit: int, ion: int):
        if qubit in self.qubit_to_ion or ion in self.ion_to_qubit:
            raise ChipError(f"qubit {qubit} or ion {ion} already assigned")
        self.qubit_to_ion[qubit] = ion
        self.ion_to_qubit[ion] = qubit


def apply_move(s: ChipState, src: Register, dst: Register) -> ChipState:
    nxt = s.copy()
    nxt.move(src, dst)
    return nxt


def junction_distance(s: ChipState, ion: int) -> int:
    return s.junction_distance(ion)


def load_ions(cfg: ChipConfig, n: int) -> ChipState:
    """STORAGE holds ions 0..n-1 with ion 0 on top."""
    if n > cfg.max_total_ions or n > cfg.capacity(STORAGE):
        raise TooManyIons(f"{n} ions exceed the chip limit of {cfg.max_total_ions}")
    if n < 1:
        raise TooManyIons("at least one ion must be loaded")
    s = ChipState(cfg)
    s.stacks[STORAGE] = list(range(n - 1, -1, -1))
    for ion in range(n):
        s.where[ion] = STORAGE
    return s
