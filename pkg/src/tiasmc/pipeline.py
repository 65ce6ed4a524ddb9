"""End-to-end compilation: OpenQASM text to a TIASM program."""

from __future__ import annotations

from dataclasses import dataclass

from .chip import ChipConfig
from .circuit import Circuit
from .lowering import lower_circuit
from .optimizer import PassConfig, optimize
from .orchestrator import CompileStats, StrategyConfig, compile_program
from .qasm import parse_qasm
from .tiasm import TiasmProgram


@dataclass
class CompileResult:
    program: TiasmProgram
    stats: CompileStats
    source: Circuit
    native: Circuit


def compile_circuit(c: Circuit, cfg: ChipConfig | None = None,
                    strat: StrategyConfig | None = None,
                    passes: PassConfig | None = None) -> CompileResult:
    """Lower, optimize and orchestrate ``c``."""
    native = optimize(lower_circuit(c), passes or PassConfig())
    program, stats = compile_program(native, cfg, strat)
    return CompileResult(program, stats, c, native)


def compile_qasm(source: str, cfg: ChipConfig | None = None,
                 strat: StrategyConfig | None = None,
                 passes: PassConfig | None = None) -> CompileResult:
    return compile_circuit(parse_qasm(source), cfg, strat, passes)
