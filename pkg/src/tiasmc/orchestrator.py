"""Serialize the gate DAG into circuit paths and route ions to emit TIASM.

The driver repeatedly enumerates circuit paths, picks one according to the
strategy mode (random gate, random path, or best simulated path), executes it
on the chip, and commits it to the DAG. Routing a gate brings both ions into
COMPUTE using four optional heuristics:

``junction_distance``
    fetch the ion closer to the junction first.
``compute_order``
    on equal distance, fetch first the ion used by more of the immediately
    following gates, so it sits at the bottom of COMPUTE and stays.
``spam_storage``
    park an ion that is needed within the next ``spam_lookahead`` gates of
    the path in the free SPAM trap instead of a storage register.
``partner_sorting``
    evict an ion onto the storage register whose top ion is its next RXX
    partner, and postpone COMPUTE evictions until the incoming ion has been
    dug out whenever that uncovers an evicted ion's partner, so the evicted
    ion lands right on top of it.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

from .chip import (
    COMPUTE,
    SPAM,
    STORAGE,
    TEMPSTORAGE,
    ChipConfig,
    ChipState,
    Register,
    load_ions,
)
from .circuit import MEASURE, Circuit
from .depgraph import DagNode, GateDag, build_dag, enumerate_paths
from .errors import ChipError, InvalidCircuit, TooManyQubits
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

_OTHER_STORAGE = {STORAGE: TEMPSTORAGE, TEMPSTORAGE: STORAGE}


class Mode(str, enum.Enum):
    RANDOM_GATE = "random-gate"
    RANDOM_PATH = "random-path"
    SIMULATE = "simulate"


@dataclass(frozen=True)
class Heuristics:
    junction_distance: bool = False
    compute_order: bool = False
    spam_storage: bool = False
    partner_sorting: bool = False

    _CODES = {"jd": "junction_distance", "co": "compute_order",
              "ss": "spam_storage", "ps": "partner_sorting"}

    @classmethod
    def all(cls) -> "Heuristics":
        return cls(True, True, True, True)

    @classmethod
    def none(cls) -> "Heuristics":
        return cls()

    @classmethod
    def parse(cls, text: str) -> "Heuristics":
        """Parse ``"all"``, ``"none"`` or a comma list of ``jd,co,ss,ps``."""
        text = text.strip().lower()
        if text == "all":
            return cls.all()
        if text in ("none", ""):
            return cls.none()
        flags = {}
        for code in text.split(","):
            code = code.strip()
            if code not in cls._CODES:
                raise ValueError(f"unknown heuristic {code!r}; expected jd, co, ss or ps")
            flags[cls._CODES[code]] = True
        return cls(**flags)

    @property
    def label(self) -> str:
        on = [c for c, name in self._CODES.items() if getattr(self, name)]
        return ",".join(on) if on else "none"


@dataclass(frozen=True)
class StrategyConfig:
    mode: Mode = Mode.SIMULATE
    n_g: int = 7
    n_p: int = 64
    heuristics: Heuristics = field(default_factory=Heuristics.all)
    spam_lookahead: int | None = None  # None: the whole path (n_g gates)
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.n_g < 1 or self.n_p < 1:
            raise ValueError("n_g and n_p must be >= 1")
        if self.spam_lookahead is not None and self.spam_lookahead < 1:
            raise ValueError("spam_lookahead must be >= 1")

    @property
    def lookahead(self) -> int:
        return self.n_g if self.spam_lookahead is None else self.spam_lookahead

    @property
    def label(self) -> str:
        if self.mode is Mode.RANDOM_GATE:
            return f"random-gate[{self.heuristics.label}]"
        return f"{self.mode.value}(n_g={self.n_g})[{self.heuristics.label}]"


@dataclass
class CompileStats:
    move_count: int
    rxx_count: int
    gate_count: int
    paths_simulated: int
    wall_time: float
    layout: dict = field(default_factory=dict)

    @property
    def moves_per_rxx(self) -> float | None:
        return self.move_count / self.rxx_count if self.rxx_count else None


def native_instruction(gate, i_stack: int):
    if gate.name == "RX":
        return Rx(gate.params[0], i_stack)
    if gate.name == "RY":
        return Ry(gate.params[0], i_stack)
    if gate.name == "R":
        return Rphi(gate.params[0], gate.params[1], i_stack)
    raise InvalidCircuit(f"{gate.name} is not a native single-qubit gate")


class Router:
    """Executes circuit paths on a chip state, recording MOVEs and gates.

    ``clone()`` gives an independent router for scoring a hypothetical path;
    the DAG is shared read-only and progress is tracked in ``done``.
    """

    def __init__(self, dag: GateDag, state: ChipState, strat: StrategyConfig,
                 record: bool = True):
        self.dag = dag
        self.state = state
        self.strat = strat
        h = strat.heuristics
        self.jd = h.junction_distance
        self.co = h.compute_order
        self.ss = h.spam_storage
        self.ps = h.partner_sorting
        self.lookahead = strat.lookahead
        self.done: set[int] = set(dag.executed)
        self.out: list | None = [] if record else None
        self.moves = 0

    def clone(self, record: bool = False) -> "Router":
        other = Router.__new__(Router)
        other.__dict__.update(self.__dict__)
        other.state = self.state.copy()
        other.done = set(self.done)
        other.out = [] if record else None
        other.moves = 0
        return other

    # ------------------------------------------------------------------ basics
    def _move(self, src: Register, dst: Register) -> int:
        ion = self.state.move(src, dst)
        self.moves += 1
        if self.out is not None:
            self.out.append(Move(src, dst))
        if dst == COMPUTE and ion not in self.state.prepared:
            self.state.prepared.add(ion)
            if self.out is not None:
                self.out.append(Prepare(COMPUTE))
        return ion

    def _free_ion(self) -> tuple[int, int]:
        """Nearest unassigned ion and its junction distance (ties: STORAGE)."""
        best = None
        owners = self.state.ion_to_qubit
        for reg in (STORAGE, TEMPSTORAGE):
            stack = self.state.stacks[reg]
            for depth in range(len(stack)):
                ion = stack[-1 - depth]
                if ion not in owners:
                    if best is None or depth < best[1]:
                        best = (ion, depth)
                    break
        if best is None:
            raise TooManyQubits("no unassigned ion left on the chip")
        return best

    def _ion(self, q: int) -> int:
        ion = self.state.qubit_to_ion.get(q)
        if ion is None:
            ion = self._free_ion()[0]
            self.state.assign(q, ion)
        return ion

    def _distance(self, q: int) -> int:
        ion = self.state.qubit_to_ion.get(q)
        if ion is None:
            return self._free_ion()[1]
        return self.state.junction_distance(ion)

    def _emptier_storage(self, avoid: Sequence[int] = ()) -> Register:
        st = self.state
        order = sorted((STORAGE, TEMPSTORAGE), key=lambda r: (st.size(r), r))
        for reg in order:
            if not st.is_full(reg) and st.top(reg) not in avoid:
                return reg
        for reg in order:
            if not st.is_full(reg):
                return reg
        raise ChipError("both storage registers are full")

    def _next_partner(self, q: int, current: int | None) -> int | None:
        for v in self.dag.chains.get(q, ()):
            if v not in self.done and v != current:
                a, b = self.dag.nodes[v].qubits
                return b if a == q else a
        return None

    # ------------------------------------------------------------------ moves
    def _park_dest(self, ion: int, src: Register, window: set[int], current: int | None,
                   avoid: Sequence[int], blocker: bool) -> Register:
        """Where to put ``ion`` (the top of ``src``) to get it out of the way."""
        st = self.state
        q = st.ion_to_qubit.get(ion)
        if self.ss and q in window and not st.stacks[SPAM] and src != SPAM:
            return SPAM
        if blocker and src in _OTHER_STORAGE:
            dst = _OTHER_STORAGE[src]
            if not st.is_full(dst):
                return dst
            if not st.stacks[SPAM]:
                return SPAM
            raise ChipError("no room to move a blocking ion")
        if self.ps and q is not None:
            partner = self._next_partner(q, current)
            pion = st.qubit_to_ion.get(partner) if partner is not None else None
            if pion is not None and pion not in avoid:
                for reg in (STORAGE, TEMPSTORAGE):
                    if reg != src and st.top(reg) == pion and not st.is_full(reg):
                        return reg
        return self._emptier_storage(avoid)

    def _park(self, ion: int, src: Register, window: set[int], current: int | None,
              avoid: Sequence[int], blocker: bool):
        self._move(src, self._park_dest(ion, src, window, current, avoid, blocker))

    def _dig(self, ion: int, window: set[int], current: int | None, avoid: Sequence[int],
             protect: int | None = None) -> bool:
        """Move blockers off ``ion`` until it is the top of its register.

        With ``protect`` set, stop (returning False) instead of burying that ion.
        """
        st = self.state
        reg = st.where[ion]
        stack = st.stacks[reg]
        blocker = reg != COMPUTE
        while stack[-1] != ion:
            dst = self._park_dest(stack[-1], reg, window, current, avoid, blocker)
            if protect is not None and st.top(dst) == protect:
                return False
            self._move(reg, dst)
        return True

    def _evict(self, targets: set, window: set[int], current: int | None, avoid: Sequence[int]):
        """Park every COMPUTE ion that is not a target."""
        comp = self.state.stacks[COMPUTE]
        while any(i not in targets for i in comp):
            self._park(comp[-1], COMPUTE, window, current, avoid, blocker=False)

    def _partner_uncovered(self, evictees: Sequence[int], fetch: Sequence[int],
                           current: int | None) -> bool:
        """True if some evictee's next partner is a blocker of an incoming ion,
        so that digging first puts the partner on top for the evictee to join."""
        st = self.state
        blockers: set[int] = set()
        for q in fetch:
            ion = st.qubit_to_ion.get(q)
            if ion is None:
                continue
            stack = st.stacks[st.where[ion]]
            blockers.update(stack[stack.index(ion) + 1:])
        for e in evictees:
            partner = self._next_partner(st.ion_to_qubit[e], current)
            if partner is not None and st.qubit_to_ion.get(partner) in blockers:
                return True
        return False

    def _next_use(self, q: int | None, upcoming: Sequence[tuple[int, ...]],
                  current: int | None) -> tuple[int, int]:
        """Sort key for how soon qubit ``q`` is needed again (smaller is sooner)."""
        if q is None:
            return (3, 0)
        for k, qs in enumerate(upcoming):
            if q in qs:
                return (0, k)
        for v in self.dag.chains.get(q, ()):
            if v not in self.done and v != current:
                return (1, v)
        return (2, 0)

    def _blockers(self, fetch: Sequence[int]) -> list[int]:
        st = self.state
        out: list[int] = []
        for q in fetch:
            ion = st.qubit_to_ion.get(q)
            if ion is None or st.where[ion] == COMPUTE:
                continue
            stack = st.stacks[st.where[ion]]
            out.extend(stack[stack.index(ion) + 1:])
        return out

    def _delay_eviction(self, evictees: Sequence[int], fetch: Sequence[int],
                        upcoming: Sequence[tuple[int, ...]], current: int | None) -> bool:
        """Whether to dig the incoming ions out before evicting ``evictees``.

        Digging first leaves the evicted ions on top of the blockers, which pays
        off when they are needed before the blockers: always at the end of a
        path (the ions just used are kept near the junction), when an evictee's
        next partner is among the blockers, or when an evictee's next use comes
        before every blocker's.
        """
        if not upcoming or self._partner_uncovered(evictees, fetch, current):
            return True
        blockers = self._blockers(fetch)
        if not blockers:
            return False
        q_of = self.state.ion_to_qubit.get
        soonest = lambda ions: min(self._next_use(q_of(i), upcoming, current) for i in ions)
        return soonest(evictees) < soonest(blockers)

    def _window(self, qubits: Sequence[int], upcoming: Sequence[tuple[int, ...]]) -> set[int]:
        window = set(qubits)
        for qs in upcoming[: self.lookahead]:
            window.update(qs)
        return window

    def _stay(self, q: int, upcoming: Sequence[tuple[int, ...]]) -> int:
        run = 0
        for qs in upcoming:
            if q not in qs:
                break
            run += 1
        return run

    def route_rxx(self, qa: int, qb: int, upcoming: Sequence[tuple[int, ...]] = (),
                  current: int | None = None):
        """Bring the ions of ``qa`` and ``qb`` into COMPUTE."""
        st = self.state
        comp = st.stacks[COMPUTE]
        ia = st.qubit_to_ion.get(qa)
        ib = st.qubit_to_ion.get(qb)
        if len(comp) == 2 and {ia, ib} == set(comp):
            return
        window = self._window((qa, qb), upcoming)
        targets = {ia, ib}
        bad = next((k for k, ion in enumerate(comp) if ion not in targets), None)
        leaving = comp[bad:] if bad is not None else []
        target_leaves = any(ion in targets for ion in leaving)
        fetch = [q for q in (qa, qb)
                 if st.qubit_to_ion.get(q) is None
                 or st.where[st.qubit_to_ion[q]] != COMPUTE
                 or st.qubit_to_ion[q] in leaving]

        delay = False
        if self.ps and not target_leaves:
            evictees = [i for i in comp if i not in targets]
            delay = bool(evictees) and self._delay_eviction(evictees, fetch, upcoming, current)
        if not delay:
            pending = [i for i in (ia, ib) if i is not None]
            self._evict(targets, window, current, pending)

        if len(fetch) == 2:
            def key(item):
                k, q = item
                d = self._distance(q) if self.jd else 0
                s = -self._stay(q, upcoming) if self.co else 0
                return (d, s, k)
            fetch = [q for _, q in sorted(enumerate(fetch), key=key)]

        ions = [self._ion(q) for q in fetch]
        if delay:
            # dig the incoming ions out first, so evicted ions land on top of
            # the blockers that were just moved
            self._dig(ions[0], window, current, ions[1:])
            if len(ions) == 2:
                self._dig(ions[1], window, current, ions[:1], protect=ions[0])
            self._evict(targets, window, current, ions)
        for k, ion in enumerate(ions):
            self._dig(ion, window, current, ions[k + 1:])
            self._move(st.where[ion], COMPUTE)

    def route_single(self, q: int, upcoming: Sequence[tuple[int, ...]] = (),
                     current: int | None = None):
        """Bring the ion of ``q`` into COMPUTE, evicting the top ion if full."""
        st = self.state
        ion = self._ion(q)
        if st.where[ion] == COMPUTE:
            return
        window = self._window((q,), upcoming)
        self._dig(ion, window, current, ())
        if st.is_full(COMPUTE):
            self._park(st.stacks[COMPUTE][-1], COMPUTE, window, current, [ion], blocker=False)
        self._move(st.where[ion], COMPUTE)

    def flush(self, node: DagNode):
        """Emit the node's single-qubit gates on the COMPUTE ions."""
        if self.out is None:
            return
        comp = self.state.stacks[COMPUTE]
        for q, gates in node.pre_ops.items():
            ion = self.state.qubit_to_ion[q]
            i_stack = len(comp) - 1 - comp.index(ion)
            for g in gates:
                self.out.append(native_instruction(g, i_stack))

    def run_path(self, path: Sequence[int]):
        nodes = self.dag.nodes
        pairs = [nodes[v].qubits for v in path if not nodes[v].is_terminal]
        k = 0
        for v in path:
            node = nodes[v]
            if node.is_terminal:
                self.route_single(node.qubits[0], pairs[k:], v)
                self.flush(node)
            else:
                k += 1
                self.route_rxx(node.qubits[0], node.qubits[1], pairs[k:], v)
                self.flush(node)
                if self.out is not None:
                    self.out.append(Rxx(node.gate.params[0]))
            self.done.add(v)
        return self.moves

    def score(self, path: Sequence[int]) -> int:
        return self.clone(record=False).run_path(path)

    # ------------------------------------------------------------ measurement
    def route_measure(self, q: int, cbit: int, avoid: Sequence[int] = ()):
        """Measure ``q`` in SPAM; ``avoid`` lists ions not to bury on the way back."""
        st = self.state
        ion = self._ion(q)
        if st.where[ion] != SPAM:
            if st.stacks[SPAM]:
                self._move(SPAM, self._emptier_storage())
            reg = st.where[ion]
            stack = st.stacks[reg]
            while stack[-1] != ion:
                other = _OTHER_STORAGE.get(reg)
                if other is None or st.is_full(other):
                    other = self._emptier_storage()
                dst = other
                self._move(reg, dst)
            self._move(reg, SPAM)
        if self.out is not None:
            self.out.append(Prepare(SPAM))
            self.out.append(Measure(cbit))
        self._move(SPAM, self._emptier_storage(avoid))

    def measure_all(self, measurements: Sequence):
        """Route pending measurements, cheapest (closest to the junction) first."""
        pending = list(enumerate(measurements))
        for g in measurements:
            self._ion(g.qubits[0])
        while pending:
            def cost(item):
                idx, g = item
                ion = self.state.qubit_to_ion.get(g.qubits[0])
                if ion is None:
                    return (self._free_ion()[1], idx)
                reg = self.state.where[ion]
                return (-1 if reg == SPAM else self.state.junction_distance(ion), idx)
            best = min(pending, key=cost)
            pending.remove(best)
            g = best[1]
            avoid = [self.state.qubit_to_ion.get(h.qubits[0]) for _, h in pending]
            self.route_measure(g.qubits[0], g.cbit, avoid)


def score_path(state: ChipState, dag: GateDag, path: Sequence[int],
               strat: StrategyConfig) -> int:
    """MOVE count of executing ``path`` on a copy of ``state``."""
    router = Router(dag, state.copy(), strat, record=False)
    return router.run_path(path)


def route_rxx(state: ChipState, qa: int, qb: int, dag: GateDag | None = None,
              upcoming: Sequence[tuple[int, ...]] = (), strat: StrategyConfig | None = None,
              current: int | None = None) -> tuple[list, ChipState]:
    """Instructions that bring ``qa`` and ``qb`` into COMPUTE, and the new state."""
    strat = strat or StrategyConfig()
    dag = dag or GateDag(state.config.max_total_ions, [], [])
    router = Router(dag, state.copy(), strat, record=True)
    router.route_rxx(qa, qb, upcoming, current)
    return router.out, router.state


def compile_program(c: Circuit, cfg: ChipConfig | None = None,
                    strat: StrategyConfig | None = None) -> tuple[TiasmProgram, CompileStats]:
    """Orchestrate a native circuit into a TIASM program."""
    cfg = cfg or ChipConfig()
    strat = strat or StrategyConfig()
    t0 = time.perf_counter()
    if not c.is_native:
        raise InvalidCircuit("circuit must be lowered to native gates before orchestration")
    if c.num_qubits > min(cfg.max_total_ions, cfg.capacity(STORAGE)):
        raise TooManyQubits(f"{c.num_qubits} qubits but the chip holds {cfg.max_total_ions} ions")
    dag = build_dag(c)
    header: list = [QuantumRegister(c.num_qubits)]
    if c.num_clbits:
        header.append(ClassicalRegister(c.num_clbits))
    if c.num_qubits == 0:
        return TiasmProgram(header, {}), CompileStats(0, 0, 0, 0, time.perf_counter() - t0)

    rng = random.Random(strat.rng_seed)
    router = Router(dag, load_ions(cfg, c.num_qubits), strat, record=True)
    simulated = 0
    while not dag.is_exhausted():
        if strat.mode is Mode.RANDOM_GATE:
            paths = enumerate_paths(dag, 1, len(dag.nodes))
            path = paths[rng.randrange(len(paths))]
        else:
            paths = enumerate_paths(dag, strat.n_g, strat.n_p)
            if strat.mode is Mode.RANDOM_PATH or len(paths) == 1:
                path = paths[rng.randrange(len(paths))] if len(paths) > 1 else paths[0]
            else:
                scores = [router.score(p) for p in paths]
                simulated += len(paths)
                path = paths[scores.index(min(scores))]
        router.run_path(path)
        dag.commit(path)
    router.measure_all(dag.measurements)

    layout = dict(router.state.qubit_to_ion)
    spare = iter(sorted(set(range(c.num_qubits)) - set(layout.values())))
    for q in range(c.num_qubits):
        if q not in layout:
            layout[q] = next(spare)
    program = TiasmProgram(header + router.out, layout)
    rxx = sum(1 for i in router.out if isinstance(i, Rxx))
    gates = sum(1 for i in router.out if isinstance(i, (Rx, Ry, Rphi, Rxx)))
    stats = CompileStats(router.moves, rxx, gates, simulated, time.perf_counter() - t0, layout)
    return program, stats


def with_heuristics(strat: StrategyConfig, **flags) -> StrategyConfig:
    return replace(strat, heuristics=replace(strat.heuristics, **flags))
