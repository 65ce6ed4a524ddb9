"""Gate-count reduction for native circuits.

Passes:

* :func:`merge_and_cancel` merges same-axis rotations that meet on a qubit and
  drops rotations equal to the identity up to global phase.
* :func:`apply_template` replaces ``RX(a) RY(b) RX(a)`` on one qubit with a
  single ``R`` gate.

The only commutation rules used are: gates on disjoint qubits commute, and
``RX`` on qubit q commutes with any ``RXX`` acting on q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import BARRIER, MEASURE, Circuit, Gate, R, RX, RY

ANGLE_TOL = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PassConfig:
    enable_merge: bool = True
    enable_commute_cancel: bool = True
    enable_template: bool = True
    max_fixpoint_iters: int = 20
    # also rewrite RX(a) RY(b) RX(c), c != a, as R(fuse_xyx(a, b)) RX(c - a)
    template_residual: bool = True

    def __post_init__(self):
        if self.max_fixpoint_iters < 1:
            raise ValueError("max_fixpoint_iters must be >= 1")


def wrap_angle(theta: float) -> float:
    """Reduce modulo 2*pi into [-pi, pi]; a 2*pi shift is a global phase of -1."""
    r = math.remainder(theta, TWO_PI)
    return 0.0 if abs(r) <= ANGLE_TOL else r


def same_angle(a: float, b: float) -> bool:
    return abs(math.remainder(a - b, TWO_PI)) <= ANGLE_TOL


def fuse_xyx(theta1: float, theta2: float) -> tuple[float, float]:
    """Return ``(phi, theta)`` with ``R(phi, theta) = RX(theta1) RY(theta2) RX(theta1)``.

    The product of the three rotations is
    ``w + i (x X + y Y)`` with ``w = cos(theta1) cos(theta2/2)``,
    ``x = sin(theta1) cos(theta2/2)`` and ``y = sin(theta2/2)``, which is an
    equatorial rotation; read off its axis angle and rotation angle.
    """
    c2 = math.cos(theta2 / 2)
    w = math.cos(theta1) * c2
    x = math.sin(theta1) * c2
    y = math.sin(theta2 / 2)
    if x == 0.0 and y == 0.0:
        return 0.0, 0.0
    return math.atan2(y, x), 2.0 * math.atan2(math.hypot(x, y), w)


def _canonical(g: Gate) -> Gate | None:
    """Wrap angles, turn axis-aligned R into RX/RY, and drop identities."""
    if g.name == "R":
        phi, theta = g.params
        theta = wrap_angle(theta)
        if theta == 0.0:
            return None
        q = g.qubits[0]
        if same_angle(phi, 0.0):
            return RX(theta, q)
        if same_angle(phi, math.pi):
            return RX(wrap_angle(-theta), q)
        if same_angle(phi, math.pi / 2):
            return RY(theta, q)
        if same_angle(phi, -math.pi / 2):
            return RY(wrap_angle(-theta), q)
        return R(wrap_angle(phi), theta, q)
    if g.is_native:
        theta = wrap_angle(g.params[0])
        if theta == 0.0:
            return None
        return Gate(g.name, g.qubits, (theta,))
    return g


def _mergeable(h: Gate, g: Gate) -> bool:
    if h.name != g.name:
        return False
    if g.name == "RXX":
        return set(h.qubits) == set(g.qubits)
    if g.name == "R":
        return h.qubits == g.qubits and same_angle(h.params[0], g.params[0])
    return g.name in ("RX", "RY") and h.qubits == g.qubits


def _merged(h: Gate, g: Gate) -> Gate | None:
    if g.name == "R":
        return _canonical(Gate("R", h.qubits, (h.params[0], h.params[1] + g.params[1])))
    return _canonical(Gate(g.name, h.qubits, (h.params[0] + g.params[0],)))


def commutes(h: Gate, g: Gate) -> bool:
    if not set(h.qubits) & set(g.qubits):
        return True
    if h.name == "RX" and g.name == "RXX":
        return h.qubits[0] in g.qubits
    if h.name == "RXX" and g.name == "RX":
        return g.qubits[0] in h.qubits
    return False


def merge_and_cancel(c: Circuit, *, use_commutation: bool = True) -> Circuit:
    out: list[Gate | None] = []
    for g in c.gates:
        if not g.is_native:
            out.append(g)
            continue
        g = _canonical(g)
        if g is None:
            continue
        qs = set(g.qubits)
        placed = False
        j = len(out) - 1
        while j >= 0:
            h = out[j]
            if h is None or not qs & set(h.qubits):
                j -= 1
                continue
            if _mergeable(h, g):
                out[j] = _merged(h, g)
                placed = True
                break
            if use_commutation and commutes(h, g):
                j -= 1
                continue
            break
        if not placed:
            out.append(g)
    return c.with_gates(g for g in out if g is not None)


def apply_template(c: Circuit, *, residual: bool = False) -> Circuit:
    """Replace ``RX(a) RY(b) RX(a)`` on a qubit by ``R(fuse_xyx(a, b))``.

    The outer ``RX`` gates may be separated from the ``RY`` by ``RXX`` gates on
    the same qubit, since ``RX`` commutes with them; any other gate on the
    qubit blocks the match. The ``R`` gate takes the place of the ``RY``.

    With ``residual=True`` a closing ``RX(c)`` with ``c != a`` is split as
    ``RX(a) RX(c - a)``, so the triple becomes ``R(fuse_xyx(a, b)) RX(c - a)``.
    """
    gates = list(c.gates)
    per_qubit: dict[int, list[int]] = {}
    for pos, g in enumerate(gates):
        for q in g.qubits:
            per_qubit.setdefault(q, []).append(pos)

    replace: dict[int, Gate | None] = {}
    for q in sorted(per_qubit):
        seq = per_qubit[q]
        k = 0
        while k < len(seq):
            if gates[seq[k]].name != "RX":
                k += 1
                continue
            m = k + 1
            while m < len(seq) and gates[seq[m]].name == "RXX":
                m += 1
            if m >= len(seq) or gates[seq[m]].name != "RY":
                k += 1
                continue
            n = m + 1
            while n < len(seq) and gates[seq[n]].name == "RXX":
                n += 1
            if n >= len(seq) or gates[seq[n]].name != "RX":
                k += 1
                continue
            a = gates[seq[k]].params[0]
            closing = gates[seq[n]].params[0]
            symmetric = same_angle(a, closing)
            if not (symmetric or residual):
                k += 1
                continue
            phi, theta = fuse_xyx(a, gates[seq[m]].params[0])
            replace[seq[k]] = None
            replace[seq[m]] = _canonical(R(phi, theta, q))
            replace[seq[n]] = None if symmetric else RX(wrap_angle(closing - a), q)
            k = n + 1

    out = []
    for pos, g in enumerate(gates):
        g = replace.get(pos, g)
        if g is not None:
            out.append(g)
    return c.with_gates(out)


def optimize(c: Circuit, cfg: PassConfig | None = None) -> Circuit:
    """Run the enabled passes until nothing changes or the iteration cap is hit."""
    cfg = cfg or PassConfig()
    current = c
    for _ in range(cfg.max_fixpoint_iters):
        nxt = current
        if cfg.enable_merge or cfg.enable_commute_cancel:
            nxt = merge_and_cancel(nxt, use_commutation=cfg.enable_commute_cancel)
        if cfg.enable_template:
            nxt = apply_template(nxt, residual=cfg.template_residual)
        if nxt == current:
            break
        current = nxt
    return current


def native_gate_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.name not in (MEASURE, BARRIER))
