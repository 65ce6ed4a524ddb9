"""Benchmark dataset generation, strategy matrices and report aggregation."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .chip import ChipConfig
from .circuit import BUILTIN_GATES, RX, RXX, RY, Circuit, Gate
from .errors import CompilerError
from .orchestrator import Heuristics, Mode, StrategyConfig, compile_program
from .vm import check_legality

ONE_QUBIT_STD = ("x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz",
                 "u1", "u2", "u3", "id")
TWO_QUBIT_STD = ("cx", "cz", "swap", "rxx")
THREE_QUBIT_STD = ("ccx",)


@dataclass(frozen=True)
class DatasetConfig:
    num_circuits: int = 500
    qubit_range: tuple[int, int] = (1, 50)
    target_mean_rxx: float = 52.0
    target_mean_rxx_depth: float = 20.0
    single_qubit_density: float = 1.0
    seed: int = 2023
    # expected RXX count of an n-qubit circuit is proportional to n**exponent;
    # -1/3 puts the mean RXX depth near 20 for uniform endpoints and 1..50 qubits
    count_exponent: float = -1.0 / 3.0

    def __post_init__(self):
        lo, hi = self.qubit_range
        object.__setattr__(self, "qubit_range", (int(lo), int(hi)))
        if not 1 <= lo <= hi <= 50:
            raise ValueError("qubit_range must satisfy 1 <= min <= max <= 50")
        if self.num_circuits < 0 or self.target_mean_rxx <= 0 or self.target_mean_rxx_depth <= 0:
            raise ValueError("dataset targets must be positive")
        if self.single_qubit_density < 0:
            raise ValueError("single_qubit_density must be >= 0")

    @classmethod
    def from_file(cls, path: str | Path) -> "DatasetConfig":
        data = json.loads(Path(path).read_text())
        if "qubit_range" in data:
            data["qubit_range"] = tuple(data["qubit_range"])
        return cls(**data)

    def rxx_rate(self, n: int) -> float:
        """Poisson mean of the RXX count for an ``n``-qubit circuit."""
        if n < 2:
            return 0.0
        lo, hi = max(self.qubit_range[0], 2), self.qubit_range[1]
        if lo > hi:
            return 0.0
        norm = np.mean(np.arange(lo, hi + 1, dtype=float) ** self.count_exponent)
        return self.target_mean_rxx * n ** self.count_exponent / norm


def _circuit_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def gen_random_circuit(cfg: DatasetConfig, index: int) -> Circuit:
    """Native RX/RY/RXX circuit number ``index`` of the dataset."""
    rng = _circuit_rng(cfg.seed, index)
    lo, hi = cfg.qubit_range
    n = int(rng.integers(lo, hi + 1))
    gates: list[Gate] = []

    def sprinkle():
        for _ in range(int(rng.poisson(cfg.single_qubit_density))):
            q = int(rng.integers(n))
            theta = float(rng.uniform(-math.pi, math.pi))
            gates.append(RX(theta, q) if rng.random() < 0.5 else RY(theta, q))

    m = int(rng.poisson(cfg.rxx_rate(n)))
    for _ in range(m):
        sprinkle()
        a, b = rng.choice(n, size=2, replace=False)
        gates.append(RXX(float(rng.uniform(-math.pi, math.pi)), int(a), int(b)))
    if n == 1 or m > 0:
        sprinkle()
    return Circuit(n, 0, tuple(gates))


def dataset(cfg: DatasetConfig) -> list[Circuit]:
    return [gen_random_circuit(cfg, i) for i in range(cfg.num_circuits)]


def rxx_depth(c: Circuit) -> int:
    level = [0] * c.num_qubits
    for g in c.gates:
        if g.name == "RXX":
            a, b = g.qubits
            level[a] = level[b] = max(level[a], level[b]) + 1
    return max(level, default=0)


def gen_std_gate_circuit(qubits: int = 5, depth: int = 40, seed: int = 0) -> Circuit:
    """Layers of random standard gates; each layer covers every qubit once.

    Qubits of a layer are split into groups of 1-3 (uniform, clipped to what
    is left); a group gets a random builtin gate of matching arity.
    """
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    pools = {1: ONE_QUBIT_STD, 2: TWO_QUBIT_STD, 3: THREE_QUBIT_STD}
    for _ in range(depth):
        free = [int(q) for q in rng.permutation(qubits)]
        while free:
            k = min(int(rng.integers(1, 4)), len(free))
            qs = tuple(free.pop() for _ in range(k))
            pool = pools[k]
            name = pool[int(rng.integers(len(pool)))]
            params = tuple(float(x) for x in rng.uniform(0, 2 * math.pi, BUILTIN_GATES[name][0]))
            gates.append(Gate(name, qs, params))
    return Circuit(qubits, 0, tuple(gates))


# ---------------------------------------------------------------- strategies

def ablation_strategies(seed: int = 0) -> list[StrategyConfig]:
    """Random gate, random path, simulated paths, then heuristics added one by one."""
    none = Heuristics()
    return [
        StrategyConfig(Mode.RANDOM_GATE, 1, 64, none, rng_seed=seed),
        StrategyConfig(Mode.RANDOM_PATH, 7, 64, none, rng_seed=seed),
        StrategyConfig(Mode.SIMULATE, 7, 64, none, rng_seed=seed),
        StrategyConfig(Mode.SIMULATE, 7, 64, Heuristics(True), rng_seed=seed),
        StrategyConfig(Mode.SIMULATE, 7, 64, Heuristics(True, True), rng_seed=seed),
        StrategyConfig(Mode.SIMULATE, 7, 64, Heuristics(True, True, True), rng_seed=seed),
        StrategyConfig(Mode.SIMULATE, 7, 64, Heuristics.all(), rng_seed=seed),
    ]


def ng_sweep_strategies(values: Sequence[int] = (1, 3, 5, 7, 10), seed: int = 0) -> list[StrategyConfig]:
    return [StrategyConfig(Mode.SIMULATE, g, 64, Heuristics.all(), rng_seed=seed) for g in values]


def strategies_from_file(path: str | Path) -> list[StrategyConfig]:
    """A JSON list of objects with keys mode, n_g, n_p, heuristics, spam_lookahead, rng_seed."""
    out = []
    for item in json.loads(Path(path).read_text()):
        item = dict(item)
        item["heuristics"] = Heuristics.parse(item.get("heuristics", "none"))
        out.append(StrategyConfig(**item))
    return out


MATRICES = {"ablation": ablation_strategies, "ng-sweep": ng_sweep_strategies}


# ------------------------------------------------------------------- running

@dataclass
class ReportRow:
    circuit_id: int
    strategy: str
    n_g: int
    heuristics: str
    move_count: int | None
    rxx_count: int | None
    moves_per_rxx: float | None
    compile_time: float | None
    error: str = ""


def run_matrix(cfg: DatasetConfig, strategies: Sequence[StrategyConfig],
               chip: ChipConfig | None = None, circuits: Iterable[Circuit] | None = None,
               progress=None) -> list[ReportRow]:
    """Compile every circuit under every strategy and legality-check each program."""
    rows: list[ReportRow] = []
    if not strategies:
        return rows
    chip = chip or ChipConfig()
    circuits = dataset(cfg) if circuits is None else list(circuits)
    for cid, c in enumerate(circuits):
        for strat in strategies:
            rows.append(_run_cell(cid, c, strat, chip))
        if progress is not None:
            progress(cid + 1, len(circuits))
    return rows


def _run_cell(cid: int, c: Circuit, strat: StrategyConfig, chip: ChipConfig) -> ReportRow:
    base = dict(circuit_id=cid, strategy=strat.label, n_g=strat.n_g,
                heuristics=strat.heuristics.label)
    t0 = time.perf_counter()
    try:
        program, stats = compile_program(c, chip, strat)
    except CompilerError as exc:
        return ReportRow(**base, move_count=None, rxx_count=None, moves_per_rxx=None,
                         compile_time=None, error=f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - t0
    violation = check_legality(program, chip)
    error = "" if violation is None else f"{violation.category} at {violation.index}: {violation.message}"
    return ReportRow(**base, move_count=stats.move_count, rxx_count=stats.rxx_count,
                     moves_per_rxx=stats.moves_per_rxx, compile_time=elapsed, error=error)


@dataclass
class StrategySummary:
    strategy: str
    circuits: int
    failures: int
    mean_moves_per_rxx: float
    totals_ratio: float
    mean_compile_time: float
    total_moves: int = 0
    total_rxx: int = 0
    extra: dict = field(default_factory=dict)


def summarize(rows: Sequence[ReportRow]) -> list[StrategySummary]:
    """Per-strategy mean of per-circuit moves/RXX (circuits without RXX skipped)
    and the totals ratio, in first-appearance order."""
    groups: dict[str, list[ReportRow]] = {}
    for r in rows:
        groups.setdefault(r.strategy, []).append(r)
    out = []
    for label, rs in groups.items():
        ok = [r for r in rs if not r.error]
        ratios = [r.moves_per_rxx for r in ok if r.moves_per_rxx is not None]
        moves = sum(r.move_count for r in ok)
        rxx = sum(r.rxx_count for r in ok)
        times = [r.compile_time for r in ok if r.compile_time is not None]
        out.append(StrategySummary(
            strategy=label, circuits=len(rs), failures=len(rs) - len(ok),
            mean_moves_per_rxx=float(np.mean(ratios)) if ratios else math.nan,
            totals_ratio=moves / rxx if rxx else math.nan,
            mean_compile_time=float(np.mean(times)) if times else math.nan,
            total_moves=moves, total_rxx=rxx,
        ))
    return out


def _cell(value, digits: int = 6) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def rows_to_csv(rows: Sequence[ReportRow], timing: bool = False) -> str:
    """CSV with the ReportRow columns; compile_time is left blank unless ``timing``
    so that reruns produce identical bytes."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(ReportRow)]
    w.writerow(names)
    for r in rows:
        d = asdict(r)
        if not timing:
            d["compile_time"] = None
        w.writerow([_cell(d[k]) for k in names])
    return buf.getvalue()


def rows_to_json(rows: Sequence[ReportRow], timing: bool = False) -> str:
    data = []
    for r in rows:
        d = asdict(r)
        if not timing:
            d["compile_time"] = None
        data.append(d)
    summary = []
    for s in summarize(rows):
        d = {k: (None if isinstance(v, float) and math.isnan(v) else v)
             for k, v in asdict(s).items()}
        if not timing:
            d["mean_compile_time"] = None
        summary.append(d)
    return json.dumps({"rows": data, "summary": summary}, indent=2, allow_nan=False,
                      default=str)


def summary_table(rows: Sequence[ReportRow], timing: bool = False) -> str:
    lines = [f"{'strategy':48s} {'moves/rxx':>10s} {'totals':>8s} {'fail':>5s}"
             + (f" {'time[s]':>9s}" if timing else "")]
    for s in summarize(rows):
        line = (f"{s.strategy:48s} {s.mean_moves_per_rxx:10.3f} {s.totals_ratio:8.3f} "
                f"{s.failures:5d}")
        if timing:
            line += f" {s.mean_compile_time:9.4f}"
        lines.append(line)
    return "\n".join(lines)
