"""Rewrite builtin gates into the native set {RX, RY, R, RXX}.

The sign patterns of the two non-trivial rules (rz and cx) were fixed by
:func:`search_signs` against the unitary oracle and are frozen below; a
regression test re-runs the search.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Sequence

from .circuit import (
    BARRIER,
    MEASURE,
    Circuit,
    Gate,
    R,
    RX,
    RXX,
    RY,
    equal_up_to_global_phase,
    unitary_of_circuit,
    unitary_of_gate,
)
from .errors import UnknownGate

PI = math.pi
HALF_PI = math.pi / 2

# rz(t) ~ RY(a*pi/2) RX(b*t) RY(c*pi/2)
RZ_SIGNS = (1, 1, -1)
# cx(c, t) ~ RY(a*pi/2) c; RXX(b*pi/2) c,t; RX(d*pi/2) c; RX(e*pi/2) t; RY(f*pi/2) c
CX_SIGNS = (1, 1, -1, 1, -1)


def rz_template(signs: Sequence[int], theta: float, q: int) -> list[Gate]:
    a, b, c = signs
    return [RY(a * HALF_PI, q), RX(b * theta, q), RY(c * HALF_PI, q)]


def cx_template(signs: Sequence[int], ctrl: int, tgt: int) -> list[Gate]:
    a, b, c, d, e = signs
    return [
        RY(a * HALF_PI, ctrl),
        RXX(b * HALF_PI, ctrl, tgt),
        RX(c * HALF_PI, ctrl),
        RX(d * HALF_PI, tgt),
        RY(e * HALF_PI, ctrl),
    ]


def search_signs(
    template: Callable[..., list[Gate]],
    target: Callable[..., Gate],
    n_signs: int,
    n_qubits: int,
    trial_params: Sequence[tuple] = ((),),
) -> list[tuple[int, ...]]:
    """All +-1 sign patterns for ``template`` matching ``target`` up to phase.

    Patterns are yielded in ``itertools.product((1, -1))`` order, so the first
    entry is the canonical choice.
    """
    matches = []
    for signs in itertools.product((1, -1), repeat=n_signs):
        ok = True
        for params in trial_params:
            lhs = Circuit(n_qubits, 0, template(signs, *params))
            rhs = target(*params)
            if not equal_up_to_global_phase(
                unitary_of_circuit(lhs), unitary_of_gate(rhs, n_qubits), 1e-9
            ):
                ok = False
                break
        if ok:
            matches.append(signs)
    return matches


def _rz(theta: float, q: int) -> list[Gate]:
    return rz_template(RZ_SIGNS, theta, q)


def _cx(c: int, t: int) -> list[Gate]:
    return cx_template(CX_SIGNS, c, t)


def _h(q: int) -> list[Gate]:
    return [RY(-HALF_PI, q), RX(PI, q)]


def _u3(theta: float, phi: float, lam: float, q: int) -> list[Gate]:
    # U3 = Rz(phi) Ry(theta) Rz(lam) up to phase
    return _rz(lam, q) + [RY(-theta, q)] + _rz(phi, q)


def _ccx(a: int, b: int, c: int) -> list[Gate]:
    return (
        _h(c) + _cx(b, c) + _rz(-PI / 4, c) + _cx(a, c) + _rz(PI / 4, c)
        + _cx(b, c) + _rz(-PI / 4, c) + _cx(a, c) + _rz(PI / 4, b) + _rz(PI / 4, c)
        + _h(c) + _cx(a, b) + _rz(PI / 4, a) + _rz(-PI / 4, b) + _cx(a, b)
    )


_RULES: dict[str, Callable[..., list[Gate]]] = {
    "id": lambda q: [],
    "x": lambda q: [RX(PI, q)],
    "y": lambda q: [RY(PI, q)],
    "z": lambda q: _rz(PI, q),
    "h": _h,
    "s": lambda q: _rz(HALF_PI, q),
    "sdg": lambda q: _rz(-HALF_PI, q),
    "t": lambda q: _rz(PI / 4, q),
    "tdg": lambda q: _rz(-PI / 4, q),
    "rx": lambda t, q: [RX(-t, q)],
    "ry": lambda t, q: [RY(-t, q)],
    "rz": _rz,
    "r": lambda p, t, q: [R(p, -t, q)],
    "u1": _rz,
    "u2": lambda p, lam, q: _u3(HALF_PI, p, lam, q),
    "u3": _u3,
    "rxx": lambda t, a, b: [RXX(-t, a, b)],
    "cx": _cx,
    "cz": lambda a, b: _h(b) + _cx(a, b) + _h(b),
    "swap": lambda a, b: _cx(a, b) + _cx(b, a) + _cx(a, b),
    "ccx": _ccx,
}


def lower_gate(g: Gate) -> list[Gate]:
    if g.is_native or g.name in (MEASURE, BARRIER):
        return [g]
    rule = _RULES.get(g.name)
    if rule is None:
        raise UnknownGate(f"no lowering rule for {g.name!r}")
    return rule(*g.params, *g.qubits)


def lower_circuit(c: Circuit) -> Circuit:
    out: list[Gate] = []
    for pos, g in enumerate(c.gates):
        try:
            out.extend(lower_gate(g))
        except UnknownGate as exc:
            raise UnknownGate(f"gate {pos}: {exc}") from None
    return c.with_gates(out)
