"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GeometryError(Exception):
    """Base class for all errors raised by fingeo."""


class NotAPrimePower(GeometryError, ValueError):
    pass


class Unsupported(GeometryError, ValueError):
    pass


class UnsupportedOrder(Unsupported):
    pass


class OddOrder(Unsupported):
    pass


class FieldDivisionByZero(GeometryError, ZeroDivisionError):
    pass


class DuplicateBlock(GeometryError, ValueError):
    def __init__(self, block, message: str | None = None):
        self.block = tuple(block)
        super().__init__(message or f"repeated block {list(self.block)}")


class IndexOutOfRange(GeometryError, IndexError):
    pass


class NotUniform(GeometryError):
    """Blocks of unequal size; ``witness`` holds two block indices."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotBalanced(GeometryError):
    """A t-subset lies in a deviant number of blocks."""

    def __init__(self, message: str, witness=None, count: int | None = None, expected: int | None = None):
        self.witness = witness
        self.count = count
        self.expected = expected
        super().__init__(message)


class NoCommonBlock(GeometryError):
    pass


class NotPartialLinear(GeometryError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class AxiomFailure(GeometryError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class CollinearPair(GeometryError, ValueError):
    pass


class NonIntegralCount(GeometryError):
    pass


class BadPointCount(GeometryError):
    pass


class NotAffine(GeometryError):
    pass


class NotAnOval(GeometryError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NoNucleus(GeometryError):
    pass


class NotFound(GeometryError):
    pass


class NotUnique(GeometryError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class BudgetExceeded(GeometryError):
    """A search ran past its node budget."""


class ParseError(GeometryError, ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")
