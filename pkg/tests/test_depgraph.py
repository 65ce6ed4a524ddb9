import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiasmc.circuit import RX, RXX, RY, Circuit, Measure
from tiasmc.depgraph import build_dag, commit_path, enumerate_paths
from tiasmc.errors import EmptyDag, InvalidCircuit, InvalidPath

# two-qubit gates A..F over six qubits; F acts on qubits 2 and 4
LETTERS = "ABCDEF"
FIXTURE_GATES = {"A": (1, 2), "B": (4, 5), "C": (0, 1), "D": (2, 3), "E": (1, 2), "F": (2, 4)}


def fixture_dag():
    return build_dag(Circuit(6, 0, tuple(RXX(0.5, *FIXTURE_GATES[k]) for k in LETTERS)))


def named(paths):
    return {"".join(LETTERS[v] for v in p) for p in paths}


def test_fixture_edges():
    edges = {(LETTERS[u], LETTERS[v]) for u, v in fixture_dag().edges}
    assert edges == {("A", "C"), ("A", "D"), ("C", "E"), ("D", "E"), ("E", "F"), ("B", "F")}


@pytest.mark.parametrize("n_g,n_p,expected", [
    (3, 4, {"ACD", "ADC", "BAC", "BAD"}),
    (3, 64, {"ACD", "ADC", "BAC", "BAD"}),
    (6, 4, {"ACDEBF", "ADCEBF", "BACDEF", "BADCEF"}),
    (6, 64, {"ACDEBF", "ADCEBF", "BACDEF", "BADCEF"}),
])
def test_fixture_paths(n_g, n_p, expected):
    paths = enumerate_paths(fixture_dag(), n_g, n_p)
    assert len(paths) == 4
    assert named(paths) == expected


def test_budget_reaches_every_source():
    paths = enumerate_paths(fixture_dag(), 3, 2)
    assert len(paths) == 2
    assert {p[0] for p in paths} == {0, 1}


def test_commit_exposes_next_sources():
    dag = fixture_dag()
    commit_path(dag, [0, 2, 3])
    assert {LETTERS[v] for v in dag.front()} == {"B", "E"}


def test_commit_everything_then_enumerate():
    dag = fixture_dag()
    commit_path(dag, range(6))
    with pytest.raises(EmptyDag):
        enumerate_paths(dag, 3, 4)


def test_commit_empty_is_noop():
    dag = fixture_dag()
    commit_path(dag, [])
    assert dag.executed == set()


@pytest.mark.parametrize("path", [[2], [0, 0], [9], [1, 5]])
def test_commit_rejects_invalid_paths(path):
    with pytest.raises(InvalidPath):
        commit_path(fixture_dag(), path)


def test_single_node_dag():
    dag = build_dag(Circuit(2, 0, (RXX(0.1, 0, 1),)))
    assert len(dag) == 1 and dag.edges == set()
    assert enumerate_paths(dag, 5, 4) == [[0]]


def test_pre_ops_and_terminal_cluster():
    dag = build_dag(Circuit(2, 0, (RX(0.1, 0), RXX(0.2, 0, 1), RY(0.3, 0))))
    rxx, term = dag.nodes
    assert rxx.pre_ops == {0: [RX(0.1, 0)]}
    assert term.is_terminal and term.qubits == (0,) and term.pre_ops == {0: [RY(0.3, 0)]}
    assert dag.edges == {(0, 1)}
    # the cluster rides along with its parent and does not count toward n_g
    assert enumerate_paths(dag, 1, 4) == [[0, 1]]


def test_qubit_without_rxx_becomes_loose_cluster():
    dag = build_dag(Circuit(3, 0, (RXX(0.2, 0, 1), RX(0.4, 2))))
    assert dag.nodes[1].is_terminal and dag.parents[1] == ()
    assert enumerate_paths(dag, 3, 4) == [[0, 1]]


def test_measurements_kept_aside():
    dag = build_dag(Circuit(2, 2, (RXX(0.2, 0, 1), Measure(1, 0), Measure(0, 1))))
    assert len(dag) == 1 and [m.qubits for m in dag.measurements] == [(1,), (0,)]


def test_gate_after_measurement_rejected():
    with pytest.raises(InvalidCircuit):
        build_dag(Circuit(2, 1, (Measure(0, 0), RXX(0.2, 0, 1))))


def test_enumerate_rejects_bad_limits():
    with pytest.raises(ValueError):
        enumerate_paths(fixture_dag(), 0, 4)


def _random_native(seed: int) -> Circuit:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    gates = []
    for _ in range(int(rng.integers(1, 25))):
        if rng.random() < 0.6:
            a, b = rng.choice(n, 2, replace=False)
            gates.append(RXX(0.3, int(a), int(b)))
        else:
            gates.append(RX(0.2, int(rng.integers(n))))
    return Circuit(n, 0, tuple(gates))


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), n_g=st.integers(1, 6), n_p=st.integers(1, 16))
def test_enumerated_paths_are_valid_and_drain_the_dag(seed, n_g, n_p):
    dag = build_dag(_random_native(seed))
    for u, v in dag.edges:
        assert set(dag.nodes[u].qubits) & set(dag.nodes[v].qubits)
    while not dag.is_exhausted():
        paths = enumerate_paths(dag, n_g, n_p)
        assert 1 <= len(paths) <= n_p
        for p in paths:
            assert p and dag.check_path(p, n_g) is None
        commit_path(dag, paths[-1])
