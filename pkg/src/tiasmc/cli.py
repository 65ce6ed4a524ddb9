"""Command-line entry point: ``tiasmc compile|run|verify|bench|opt-stats``.

Exit codes: 0 success, 1 verification or execution failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from .bench import (
    MATRICES,
    DatasetConfig,
    gen_std_gate_circuit,
    rows_to_csv,
    rows_to_json,
    run_matrix,
    strategies_from_file,
    summary_table,
)
from .chip import ChipConfig
from .circuit import equal_up_to_global_phase, simulate_state
from .errors import CompilerError, TiasmSyntaxError
from .lowering import lower_circuit
from .optimizer import PassConfig, native_gate_count, optimize
from .orchestrator import Heuristics, Mode, StrategyConfig
from .pipeline import compile_circuit
from .qasm import ParseError, parse_qasm
from .tiasm import emit_text, parse_text
from .vm import execute, state_in_qubit_order

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def _chip(args) -> ChipConfig:
    if getattr(args, "chip", None):
        return ChipConfig.from_file(args.chip)
    return ChipConfig()


def _parse_qasm_file(path: str):
    try:
        return parse_qasm(_read(path))
    except ParseError as exc:
        raise _UsageError(f"{path}:{exc}") from None


def _parse_tiasm_file(path: str):
    try:
        return parse_text(_read(path))
    except TiasmSyntaxError as exc:
        raise _UsageError(f"{path}:{exc}") from None


def cmd_compile(args) -> int:
    circuit = _parse_qasm_file(args.input)
    try:
        heur = Heuristics.parse(args.heuristics)
        strat = StrategyConfig(Mode(args.mode), args.ng, args.np, heur, rng_seed=args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    result = compile_circuit(circuit, _chip(args), strat)
    Path(args.output).write_text(emit_text(result.program))
    stats = result.stats
    if args.stats:
        d = asdict(stats)
        d["layout"] = {str(q): ion for q, ion in stats.layout.items()}
        d["moves_per_rxx"] = stats.moves_per_rxx
        d["strategy"] = strat.label
        Path(args.stats).write_text(json.dumps(d, indent=2) + "\n")
    print(f"{args.output}: {stats.move_count} moves, {stats.rxx_count} RXX, "
          f"{stats.gate_count} gates")
    return EXIT_OK


def _format_state(state: np.ndarray, n: int, tol: float = 1e-12) -> str:
    lines = []
    for k, amp in enumerate(state):
        if abs(amp) > tol:
            lines.append(f"|{k:0{n}b}> {amp.real:+.10f}{amp.imag:+.10f}j")
    return "\n".join(lines)


def cmd_run(args) -> int:
    program = _parse_tiasm_file(args.input)
    res = execute(program, _chip(args), seed=args.seed, shots=args.shots,
                  capture_state=args.capture_state)
    shots = res.shots or [res.bits]
    for bits in shots:
        print("".join(str(b) for b in bits) if bits else "(no classical bits)")
    print(f"moves: {res.moves}")
    if args.capture_state and res.state is not None:
        print(_format_state(res.state, program.num_qubits))
    if args.json:
        Path(args.json).write_text(res.to_json() + "\n")
    if res.error is not None:
        e = res.error
        print(f"error: {e.category} at instruction {e.index}: {e.message}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = _parse_qasm_file(args.source)
    program = _parse_tiasm_file(args.program)
    n = circuit.num_qubits
    if program.num_qubits != n:
        print(f"qubit count differs: source {n}, program {program.num_qubits}")
        return EXIT_FAIL
    try:
        ref = simulate_state(circuit, ignore_measurements=True)
    except CompilerError as exc:
        raise _UsageError(str(exc)) from None
    res = execute(program, _chip(args), capture_state=True, simulate=True)
    if res.error is not None:
        print(f"illegal program: {res.error.category} at instruction {res.error.index}")
        return EXIT_FAIL
    layout = program.layout or {q: q for q in range(n)}
    state = state_in_qubit_order(res.state, layout, n) if n else res.state
    if equal_up_to_global_phase(ref, state, args.tol):
        print("equivalent")
        return EXIT_OK
    print("NOT equivalent")
    return EXIT_FAIL


def cmd_bench(args) -> int:
    cfg = DatasetConfig.from_file(args.dataset) if args.dataset else DatasetConfig()
    if args.circuits is not None:
        cfg = replace(cfg, num_circuits=args.circuits)
    if args.matrix in MATRICES:
        strategies = MATRICES[args.matrix](seed=args.seed)
    else:
        strategies = strategies_from_file(args.matrix)
    rows = run_matrix(cfg, strategies, _chip(args))
    if args.csv:
        Path(args.csv).write_text(rows_to_csv(rows, timing=args.timing))
    if args.json:
        Path(args.json).write_text(rows_to_json(rows, timing=args.timing) + "\n")
    print(summary_table(rows, timing=args.timing))
    failures = sum(1 for r in rows if r.error)
    if failures:
        print(f"{failures} failed cell(s)", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def template_reduction(seeds: int, qubits: int = 5, depth: int = 40) -> dict:
    """Mean native gate counts with the template pass off, strict and residual."""
    off, strict, residual = [], [], []
    for seed in range(seeds):
        c = lower_circuit(gen_std_gate_circuit(qubits, depth, seed))
        off.append(native_gate_count(optimize(c, PassConfig(enable_template=False))))
        strict.append(native_gate_count(optimize(c, PassConfig(template_residual=False))))
        residual.append(native_gate_count(optimize(c, PassConfig())))
    base = float(np.mean(off))
    return {
        "circuits": seeds,
        "template_off": base,
        "template_strict": float(np.mean(strict)),
        "template_residual": float(np.mean(residual)),
        "reduction_strict": 1 - float(np.mean(strict)) / base,
        "reduction_residual": 1 - float(np.mean(residual)) / base,
    }


def cmd_opt_stats(args) -> int:
    r = template_reduction(args.seeds)
    print(f"{r['circuits']} circuits, {5} qubits, depth 40")
    print(f"template off       : {r['template_off']:.2f} native gates")
    print(f"template (strict)  : {r['template_strict']:.2f}  ({100 * r['reduction_strict']:.1f}% fewer)")
    print(f"template (residual): {r['template_residual']:.2f}  ({100 * r['reduction_residual']:.1f}% fewer)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tiasmc", description="OpenQASM to TIASM compiler for a single-junction trapped-ion chip")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile OpenQASM 2.0 to TIASM")
    c.add_argument("input")
    c.add_argument("-o", "--output", required=True)
    c.add_argument("--ng", type=int, default=7)
    c.add_argument("--np", type=int, default=64)
    c.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.SIMULATE.value)
    c.add_argument("--heuristics", default="all", help="all, none or a comma list of jd,co,ss,ps")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--stats")
    c.add_argument("--chip", help="JSON register-capacity file")
    c.set_defaults(func=cmd_compile)

    r = sub.add_parser("run", help="execute a TIASM program on the VM")
    r.add_argument("input")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--shots", type=int, default=1)
    r.add_argument("--capture-state", action="store_true")
    r.add_argument("--json")
    r.add_argument("--chip")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check a TIASM program against its OpenQASM source")
    v.add_argument("source")
    v.add_argument("program")
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--chip")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a strategy matrix over the random dataset")
    b.add_argument("--dataset", help="JSON DatasetConfig file")
    b.add_argument("--matrix", default="ablation", help="ablation, ng-sweep or a JSON strategy list")
    b.add_argument("--csv")
    b.add_argument("--json")
    b.add_argument("--circuits", type=int)
    b.add_argument("--seed", type=int, default=0, help="strategy rng seed")
    b.add_argument("--timing", action="store_true", help="include compile times in reports")
    b.add_argument("--chip")
    b.set_defaults(func=cmd_bench)

    o = sub.add_parser("opt-stats", help="template-pass gate reduction on random standard-gate circuits")
    o.add_argument("--seeds", type=int, default=100)
    o.set_defaults(func=cmd_opt_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CompilerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
