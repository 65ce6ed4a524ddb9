"""Gate-dependency DAG over RXX gates and circuit-path enumeration.

Single-qubit gates are not nodes: each one rides along as a ``pre_op`` of the
next RXX on its qubit. Gates after a qubit's last RXX form a terminal cluster
node for that qubit. Measurements are kept aside as end-of-circuit
obligations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .circuit import BARRIER, MEASURE, Circuit, Gate
from .errors import EmptyDag, InvalidCircuit, InvalidPath


@dataclass
class DagNode:
    node_id: int
    qubits: tuple[int, ...]
    gate: Gate | None  # None for a terminal cluster
    pre_ops: dict[int, list[Gate]] = field(default_factory=dict)

    @property
    def is_terminal(self) -> bool:
        return self.gate is None

    @property
    def label(self) -> str:
        if self.gate is None:
            return f"T(q{self.qubits[0]})"
        return f"RXX(q{self.qubits[0]},q{self.qubits[1]})"


class GateDag:
    def __init__(self, num_qubits: int, nodes: list[DagNode], parents: list[tuple[int, ...]],
                 measurements: Sequence[Gate] = ()):
        self.num_qubits = num_qubits
        self.nodes = nodes
        self.parents = parents
        children: list[list[int]] = [[] for _ in nodes]
        for v, ps in enumerate(parents):
            for u in ps:
                children[u].append(v)
        self.children = [tuple(sorted(cs)) for cs in children]
        self.measurements = list(measurements)
        self.executed: set[int] = set()
        # RXX node ids touching each qubit, in circuit order
        self.chains: dict[int, list[int]] = {}
        for node in nodes:
            if not node.is_terminal:
                for q in node.qubits:
                    self.chains.setdefault(q, []).append(node.node_id)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {(u, v) for v, ps in enumerate(self.parents) for u in ps}

    @property
    def remaining(self) -> int:
        return len(self.nodes) - len(self.executed)

    def is_exhausted(self) -> bool:
        return len(self.executed) == len(self.nodes)

    def front(self, done: set[int] | None = None) -> list[int]:
        """Unexecuted nodes whose parents are all in ``done``, by node id."""
        done = self.executed if done is None else done
        return [
            v for v in range(len(self.nodes))
            if v not in done and all(p in done for p in self.parents[v])
        ]

    def check_path(self, path: Sequence[int], n_g: int | None = None) -> str | None:
        """Return a reason string if ``path`` is not valid, else ``None``."""
        seen: set[int] = set()
        rxx = 0
        for v in path:
            if not 0 <= v < len(self.nodes):
                return f"unknown node {v}"
            if v in self.executed or v in seen:
                return f"node {v} already executed"
            missing = [p for p in self.parents[v] if p not in self.executed and p not in seen]
            if missing:
                return f"node {v} runs before its parent(s) {missing}"
            seen.add(v)
            if not self.nodes[v].is_terminal:
                rxx += 1
        if n_g is not None and rxx > n_g:
            return f"path holds {rxx} RXX gates, more than {n_g}"
        return None

    def commit(self, path: Iterable[int]) -> "GateDag":
        path = list(path)
        reason = self.check_path(path)
        if reason is not None:
            raise InvalidPath(reason)
        self.executed.update(path)
        return self

    def next_rxx(self, q: int, done) -> int | None:
        """Earliest RXX node on qubit ``q`` that is not in ``done``."""
        for v in self.chains.get(q, ()):
            if v not in done:
                return v
        return None

    def to_dot(self) -> str:
        lines = ["digraph gates {"]
        for node in self.nodes:
            style = ", style=filled" if node.node_id in self.executed else ""
            lines.append(f'  n{node.node_id} [label="{node.node_id}: {node.label}"{style}];')
        for u, v in sorted(self.edges):
            lines.append(f"  n{u} -> n{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_dag(c: Circuit) -> GateDag:
    nodes: list[DagNode] = []
    parents: list[tuple[int, ...]] = []
    pending: dict[int, list[Gate]] = {}
    last: dict[int, int] = {}
    measured: set[int] = set()
    measurements: list[Gate] = []

    for pos, g in enumerate(c.gates):
        if g.name == BARRIER:
            continue
        if g.name == MEASURE:
            measured.add(g.qubits[0])
            measurements.append(g)
            continue
        if not g.is_native:
            raise InvalidCircuit(f"gate {pos} ({g.name}) is not native; lower the circuit first")
        if measured.intersection(g.qubits):
            raise InvalidCircuit(f"gate {pos} acts on a qubit after its measurement")
        if g.name == "RXX":
            nid = len(nodes)
            pre = {q: pending.pop(q) for q in g.qubits if pending.get(q)}
            nodes.append(DagNode(nid, g.qubits, g, pre))
            parents.append(tuple(sorted({last[q] for q in g.qubits if q in last})))
            for q in g.qubits:
                last[q] = nid
        else:
            pending.setdefault(g.qubits[0], []).append(g)

    for q in sorted(pending):
        if not pending[q]:
            continue
        nid = len(nodes)
        nodes.append(DagNode(nid, (q,), None, {q: pending[q]}))
        parents.append((last[q],) if q in last else ())
    return GateDag(c.num_qubits, nodes, parents, measurements)


def enumerate_paths(dag: GateDag, n_g: int, n_p: int) -> list[list[int]]:
    """Depth-first enumeration of up to ``n_p`` circuit paths with at most ``n_g`` RXX nodes.

    A partial path grows by an executable, unvisited child of a node already
    on the path; only when there is none does it fall back to any executable
    node. Candidates are tried in node-id order, and the path budget is split
    evenly among the candidates of each step so that a truncated enumeration
    still starts from every executable gate it can afford. A terminal cluster is
    appended right after its parent RXX and does not count toward ``n_g``;
    clusters of qubits without any RXX are appended together once no RXX node
    is executable.
    """
    if n_g < 1 or n_p < 1:
        raise ValueError("n_g and n_p must be >= 1")
    if dag.is_exhausted():
        raise EmptyDag("every node has been executed")

    nodes = dag.nodes
    parents = dag.parents
    children = dag.children
    done = dag.executed
    front = dag.front()
    path: list[int] = []
    in_path: set[int] = set()
    paths: list[list[int]] = []

    def ready(v: int) -> bool:
        return all(p in done or p in in_path for p in parents[v])

    def push(v: int) -> int:
        path.append(v)
        in_path.add(v)
        added = 1
        for ch in children[v]:
            if nodes[ch].is_terminal and ch not in done and ready(ch):
                path.append(ch)
                in_path.add(ch)
                added += 1
        return added

    def pop(k: int):
        for _ in range(k):
            in_path.discard(path.pop())

    def dfs(count: int, budget: int) -> int:
        if count == n_g:
            paths.append(list(path))
            return 1
        cands = sorted({
            ch for u in path for ch in children[u]
            if ch not in in_path and ch not in done and not nodes[ch].is_terminal and ready(ch)
        })
        if not cands:
            cands = [v for v in front if v not in in_path and not nodes[v].is_terminal]
        if not cands:
            loose = [v for v in front if v not in in_path]
            paths.append(path + loose)
            return 1
        produced = 0
        for i, v in enumerate(cands):
            left = budget - produced
            if left <= 0:
                break
            k = push(v)
            produced += dfs(count + 1, max(1, left // (len(cands) - i)))
            pop(k)
        return produced

    dfs(0, n_p)
    return paths[:n_p]


def commit_path(dag: GateDag, path: Sequence[int]) -> GateDag:
    return dag.commit(path)
