"""
Exception hierarchy for the workbench.

Library code raises these; cli.py maps them to exit codes and api.py to
HTTP 400 responses.
"""

from typing import Optional


class KlaError(Exception):
    """Base class for every error raised by the workbench"""


class UsageError(KlaError):
    """Bad arguments, mixed fields, name clashes, unknown strategies"""


class ParseError(UsageError):
    """Presentation DSL or graph file could not be read"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class UnknownGeneratorError(ParseError):
    pass


class InhomogeneousRelationError(ParseError):
    def __init__(self, degrees: tuple, line: int = 0, column: int = 0):
        self.degrees = degrees
        super().__init__(
            f"inhomogeneous relation: degrees {degrees[0]} and {degrees[1]} are mixed",
            line,
            column,
        )


class CharacteristicTwoError(ParseError):
    pass


class DuplicateGeneratorError(ParseError):
    pass


class BracketSyntaxError(ParseError):
    pass


class LoopEdgeError(ParseError):
    pass


class UndeclaredVertexError(ParseError):
    pass


class DuplicateEdgeError(ParseError):
    pass


class FieldMismatchError(UsageError):
    """Two objects over different fields were combined"""


class DomainError(KlaError):
    """Input lies outside the domain of an operation"""


class NonQuadraticError(DomainError):
    pass


class RelationCountError(DomainError):
    pass


class InvalidDerivationError(DomainError):
    def __init__(self, message: str, witness: Optional[dict] = None):
        self.witness = witness
        super().__init__(message)


class EigenvalueError(DomainError):
    def __init__(self, message: str, best_residual: float):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")
