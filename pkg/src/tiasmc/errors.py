"""Exception hierarchy shared by all compiler phases."""


class CompilerError(Exception):
    """Base class for every error raised by tiasmc."""


class UnknownGate(CompilerError):
    pass


class DimensionTooLarge(CompilerError):
    pass


class DimensionMismatch(CompilerError):
    pass


class ContainsMeasurement(CompilerError):
    pass


class InvalidCircuit(CompilerError):
    pass


class EmptyDag(CompilerError):
    pass


class InvalidPath(CompilerError):
    pass


class TooManyQubits(CompilerError):
    pass


class ChipError(CompilerError):
    pass


class IllegalMove(ChipError):
    pass


class EmptySource(IllegalMove):
    pass


class CapacityExceeded(IllegalMove):
    pass


class SameRegister(IllegalMove):
    pass


class UnknownIon(ChipError):
    pass


class TooManyIons(ChipError):
    pass


class TiasmSyntaxError(CompilerError):
    """Malformed TIASM text; ``line`` is 1-based."""

    def __init__(self, message: str, line: int, category: str = "Syntax"):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.category = category
