"""OpenQASM 2.0 to TIASM compiler for a single-junction QCCD trapped-ion chip."""

from .chip import COMPUTE, SPAM, STORAGE, TEMPSTORAGE, ChipConfig, ChipState, Register, load_ions
from .circuit import RX, RXX, RY, Barrier, Circuit, Gate, Measure, R, equal_up_to_global_phase
from .depgraph import GateDag, build_dag, enumerate_paths
from .lowering import lower_circuit
from .optimizer import PassConfig, fuse_xyx, optimize
from .orchestrator import CompileStats, Heuristics, Mode, StrategyConfig, compile_program
from .pipeline import CompileResult, compile_circuit, compile_qasm
from .qasm import ParseError, parse_qasm, to_qasm
from .tiasm import TiasmProgram, emit_text, parse_text
from .vm import VmResult, check_legality, execute

__all__ = [
    "COMPUTE", "SPAM", "STORAGE", "TEMPSTORAGE", "ChipConfig", "ChipState", "Register",
    "load_ions", "RX", "RXX", "RY", "R", "Barrier", "Circuit", "Gate", "Measure",
    "equal_up_to_global_phase", "GateDag", "build_dag", "enumerate_paths", "lower_circuit",
    "PassConfig", "fuse_xyx", "optimize", "CompileStats", "Heuristics", "Mode",
    "StrategyConfig", "compile_program", "CompileResult", "compile_circuit", "compile_qasm",
    "ParseError", "parse_qasm", "to_qasm", "TiasmProgram", "emit_text", "parse_text",
    "VmResult", "check_legality", "execute",
]
