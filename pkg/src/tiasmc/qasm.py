"""OpenQASM 2.0 subset frontend and pretty-printer.

Registers are flattened into one qubit and one classical index space in
declaration order. ``qelib1.inc`` is never read from disk; its gates (plus
``r`` and ``rxx``) are builtins.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import (
    BARRIER,
    BUILTIN_GATES,
    MEASURE,
    Circuit,
    Gate,
)
from .errors import CompilerError

_CATEGORIES = ("Syntax", "UnknownGate", "UndeclaredRegister", "IndexOutOfRange", "Unsupported")


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int


class ParseError(CompilerError):
    def __init__(self, category: str, message: str, span: SourceSpan):
        assert category in _CATEGORIES and message
        super().__init__(f"{span.line}:{span.column}: {category}: {message}")
        self.category = category
        self.message = message
        self.span = span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<newline>\n)
  | (?P<linecomment>//[^\n]*)
  | (?P<blockcomment>/\*.*?\*/)
  | (?P<real>(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<eq>==)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[;,\[\](){}+\-*/^])
    """,
    re.VERBOSE | re.DOTALL,
)

_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


@dataclass
class _Tok:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(source: str) -> list[_Tok]:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        span = SourceSpan(line, col)
        if m is None:
            raise ParseError("Syntax", f"unexpected character {source[pos]!r}", span)
        kind = m.lastgroup
        text = m.group()
        if kind not in ("ws", "newline", "linecomment", "blockcomment"):
            toks.append(_Tok(kind, text, span))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    if source.startswith("/*", pos):
        raise ParseError("Syntax", "unterminated block comment", SourceSpan(line, col))
    toks.append(_Tok("eof", "", SourceSpan(line, col)))
    return toks


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0
        self.qregs: dict[str, tuple[int, int]] = {}
        self.cregs: dict[str, tuple[int, int]] = {}
        self.nq = 0
        self.nc = 0
        self.gates: list[Gate] = []

    # -- token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, category: str, message: str, tok: _Tok | None = None):
        raise ParseError(category, message, (tok or self.tok).span)

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "string":
            shown = self.tok.text or "end of input"
            self.error("Syntax", f"expected {text!r}, found {shown!r}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> _Tok:
        if self.tok.kind != kind:
            shown = self.tok.text or "end of input"
            self.error("Syntax", f"expected {what}, found {shown!r}")
        return self.advance()

    # -- grammar
    def parse(self) -> Circuit:
        t = self.tok
        if t.text != "OPENQASM":
            self.error("Syntax", "program must start with 'OPENQASM 2.0;'")
        self.advance()
        version = self.advance()
        if version.kind not in ("real", "int") or float(version.text) != 2.0:
            self.error("Unsupported", f"OpenQASM version {version.text!r}", version)
        self.expect(";")
        while self.tok.kind != "eof":
            self.statement()
        return Circuit(self.nq, self.nc, self.gates, dict(self.qregs), dict(self.cregs))

    def statement(self):
        t = self.tok
        if t.kind != "id":
            self.error("Syntax", f"unexpected {t.text!r}")
        word = t.text
        if word == "include":
            self.advance()
            name = self.expect_kind("string", "file name")
            if name.text.strip('"') != "qelib1.inc":
                self.error("Unsupported", f"include of {name.text}", name)
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.declaration(word)
        elif word in ("gate", "opaque", "if", "reset"):
            self.error("Unsupported", f"'{word}' statements are not supported")
        elif word == "OPENQASM":
            self.error("Syntax", "duplicate version header")
        elif word == MEASURE:
            self.measure()
        elif word == BARRIER:
            self.advance()
            args = self.arglist(quantum=True)
            qubits = []
            for group in args:
                qubits.extend(q for q in group if q not in qubits)
            self.gates.append(Gate(BARRIER, tuple(qubits)))
            self.expect(";")
        else:
            self.application()

    def declaration(self, kind: str):
        self.advance()
        name = self.expect_kind("id", "register name")
        self.expect("[")
        size = self.expect_kind("int", "register size")
        self.expect("]")
        self.expect(";")
        if name.text in self.qregs or name.text in self.cregs:
            self.error("Syntax", f"register {name.text!r} declared twice", name)
        n = int(size.text)
        if n < 1:
            self.error("Syntax", "register size must be positive", size)
        if kind == "qreg":
            self.qregs[name.text] = (self.nq, n)
            self.nq += n
        else:
            self.cregs[name.text] = (self.nc, n)
            self.nc += n

    def argument(self, quantum: bool) -> list[int]:
        name = self.expect_kind("id", "register")
        regs = self.qregs if quantum else self.cregs
        if name.text not in regs:
            kind = "quantum" if quantum else "classical"
            self.error("UndeclaredRegister", f"{kind} register {name.text!r} is not declared", name)
        offset, size = regs[name.text]
        if self.tok.text == "[":
            self.advance()
            idx = self.expect_kind("int", "index")
            self.expect("]")
            k = int(idx.text)
            if k >= size:
                self.error("IndexOutOfRange", f"{name.text}[{k}] but size is {size}", idx)
            return [offset + k]
        return list(range(offset, offset + size))

    def arglist(self, quantum: bool) -> list[list[int]]:
        args = [self.argument(quantum)]
        while self.tok.text == ",":
            self.advance()
            args.append(self.argument(quantum))
        return args

    def measure(self):
        start = self.advance()
        q = self.argument(quantum=True)
        self.expect("->")
        c = self.argument(quantum=False)
        self.expect(";")
        if len(q) != len(c):
            self.error("Syntax", "measure register sizes differ", start)
        for qi, ci in zip(q, c):
            self.gates.append(Gate(MEASURE, (qi,), cbit=ci))

    def application(self):
        name_tok = self.advance()
        name = name_tok.text
        if name not in BUILTIN_GATES:
            self.error("UnknownGate", f"unknown gate {name!r}", name_tok)
        n_params, n_qubits = BUILTIN_GATES[name]
        params: list[float] = []
        if self.tok.text == "(":
            self.advance()
            if self.tok.text != ")":
                params.append(self.expr())
                while self.tok.text == ",":
                    self.advance()
                    params.append(self.expr())
            self.expect(")")
        if not all(math.isfinite(p) for p in params):
            self.error("Syntax", f"{name}: angle is not a finite number", name_tok)
        if len(params) != n_params:
            self.error("Syntax", f"{name} takes {n_params} parameter(s), got {len(params)}", name_tok)
        args = self.arglist(quantum=True)
        self.expect(";")
        if len(args) != n_qubits:
            self.error("Syntax", f"{name} takes {n_qubits} qubit(s), got {len(args)}", name_tok)
        widths = {len(a) for a in args if len(a) > 1}
        if len(widths) > 1:
            self.error("Syntax", "broadcast over registers of different sizes", name_tok)
        width = widths.pop() if widths else 1
        for k in range(width):
            qubits = tuple(a[k] if len(a) > 1 else a[0] for a in args)
            if len(set(qubits)) != len(qubits):
                self.error("Syntax", f"{name} applied to repeated qubit", name_tok)
            self.gates.append(Gate(name, qubits, tuple(params)))

    # -- expressions: sum := term (('+'|'-') term)*, term := unary (('*'|'/') unary)*,
    # unary := '-' unary | power, power := atom ('^' unary)?
    def expr(self) -> float:
        value = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "/":
                if rhs == 0:
                    self.error("Syntax", "division by zero", op)
                value /= rhs
            else:
                value *= rhs
        return value

    def unary(self) -> float:
        if self.tok.text == "-":
            self.advance()
            return -self.unary()
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> float:
        base = self.atom()
        if self.tok.text == "^":
            op = self.advance()
            exponent = self.unary()
            try:
                value = base ** exponent
            except (OverflowError, ZeroDivisionError):
                self.error("Syntax", f"{base}^{exponent} is out of range", op)
            if isinstance(value, complex):
                self.error("Syntax", f"{base}^{exponent} is not real", op)
            return value
        return base

    def atom(self) -> float:
        t = self.tok
        if t.kind in ("real", "int"):
            self.advance()
            return float(t.text)
        if t.kind == "id":
            if t.text == "pi":
                self.advance()
                return math.pi
            if t.text in _FUNCS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                try:
                    return _FUNCS[t.text](arg)
                except (ValueError, OverflowError):
                    self.error("Syntax", f"{t.text}({arg}) is undefined", t)
            self.error("Syntax", f"unknown identifier {t.text!r} in expression", t)
        if t.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        self.error("Syntax", f"expected an expression, found {t.text or 'end of input'!r}")


def parse_qasm(source: str) -> Circuit:
    """Parse OpenQASM 2.0 text; raises ``ParseError`` on any problem."""
    return _Parser(source).parse()


def _fmt(x: float) -> str:
    return repr(float(x))


def to_qasm(c: Circuit) -> str:
    """Print a circuit as OpenQASM 2.0 over flat registers ``q`` and ``c``.

    Native gates are printed as the equivalent builtin (the sign flip between
    the two rotation conventions is applied), so the output re-parses into
    builtin gates.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if c.num_qubits:
        lines.append(f"qreg q[{c.num_qubits}];")
    if c.num_clbits:
        lines.append(f"creg c[{c.num_clbits}];")
    for g in c.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.name == MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> c[{g.cbit}];")
        elif g.name == BARRIER:
            lines.append(f"barrier {args};")
        elif g.is_native:
            if g.name == "R":
                name, params = "r", (g.params[0], -g.params[1])
            else:
                name, params = g.name.lower(), (-g.params[0],)
            lines.append(f"{name}({','.join(map(_fmt, params))}) {args};")
        elif g.params:
            lines.append(f"{g.name}({','.join(map(_fmt, g.params))}) {args};")
        else:
            lines.append(f"{g.name} {args};")
    return "\n".join(lines) + "\n"
