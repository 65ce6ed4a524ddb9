import math

import numpy as np
import pytest

from tiasmc.bench import ONE_QUBIT_STD, THREE_QUBIT_STD, TWO_QUBIT_STD
from tiasmc.circuit import BUILTIN_GATES, Circuit, Gate

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.diag([1, -1]).astype(complex)


def expm_series(a: np.ndarray, terms: int = 60) -> np.ndarray:
    """Matrix exponential by truncated power series (independent of scipy/numpy)."""
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


def random_std_circuit(rng: np.random.Generator, max_qubits: int = 6, max_gates: int = 40,
                       measure: bool = False) -> Circuit:
    """Random circuit over the OpenQASM builtins (mixed arities)."""
    n = int(rng.integers(1, max_qubits + 1))
    gates = []
    for _ in range(int(rng.integers(0, max_gates + 1))):
        k = int(rng.choice([1, 1, 2, 2, 3])) if n >= 3 else int(rng.integers(1, min(n, 2) + 1))
        pool = {1: ONE_QUBIT_STD + ("r",), 2: TWO_QUBIT_STD, 3: THREE_QUBIT_STD}[k]
        name = pool[int(rng.integers(len(pool)))]
        qs = tuple(int(q) for q in rng.choice(n, size=k, replace=False))
        params = tuple(float(x) for x in rng.uniform(-2 * math.pi, 2 * math.pi, BUILTIN_GATES[name][0]))
        gates.append(Gate(name, qs, params))
    ncl = 0
    if measure:
        ncl = n
        gates += [Gate("measure", (q,), (), q) for q in range(n)]
    return Circuit(n, ncl, tuple(gates))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_force_min_moves(num_qubits: int, pairs, compute_capacity: int = 2) -> int:
    """Fewest MOVEs that execute the RXX gates ``pairs`` on a fresh chip.

    Breadth-first search over chip configurations with ions named by the qubit
    they carry; every initial STORAGE order is a source (any qubit-to-ion
    assignment is allowed). A gate runs, at no cost, once its two qubits are
    exactly the COMPUTE occupants and every earlier gate sharing a qubit ran.
    Storage capacity never binds for four ions, so only SPAM (1) and COMPUTE
    are bounded.
    """
    from collections import deque
    from itertools import permutations

    caps = (num_qubits, num_qubits, 1, compute_capacity)
    full = (1 << len(pairs)) - 1
    deps = [[j for j in range(i) if set(pairs[j]) & set(pairs[i])] for i in range(len(pairs))]

    def settle(stacks, done):
        progress = True
        while progress:
            progress = False
            for i, (a, b) in enumerate(pairs):
                if not done >> i & 1 and all(done >> j & 1 for j in deps[i]) \
                        and set(stacks[3]) == {a, b}:
                    done |= 1 << i
                    progress = True
        return done

    queue = deque()
    seen = set()
    for perm in permutations(range(num_qubits)):
        stacks = (perm, (), (), ())
        state = (stacks, settle(stacks, 0))
        if state not in seen:
            seen.add(state)
            queue.append((state, 0))
    while queue:
        (stacks, done), cost = queue.popleft()
        if done == full:
            return cost
        for src in range(4):
            if not stacks[src]:
                continue
            for dst in range(4):
                if dst == src or len(stacks[dst]) >= caps[dst]:
                    continue
                nxt = list(stacks)
                nxt[dst] = stacks[dst] + (stacks[src][-1],)
                nxt[src] = stacks[src][:-1]
                nxt = tuple(nxt)
                state = (nxt, settle(nxt, done))
                if state not in seen:
                    seen.add(state)
                    queue.append((state, cost + 1))
    raise AssertionError("gates cannot be scheduled")
