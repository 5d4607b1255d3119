"""Exception hierarchy.

Every error carries a short ``code`` (the class name) so the command line
front end can print ``error: CODE message`` lines.
"""


class BncutError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


# -- network construction -------------------------------------------------

class InvalidNetwork(BncutError):
    """The network description violates a structural invariant."""


class CycleDetected(InvalidNetwork):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("directed cycle: " + " -> ".join(map(str, self.cycle + self.cycle[:1])))


class CptShapeMismatch(InvalidNetwork):
    pass


class CptRowNotNormalized(InvalidNetwork):
    def __init__(self, node, row, total):
        self.node, self.row, self.total = node, row, total
        super().__init__(f"cpt of {node!r}, row {row}: entries sum to {total!r}")


class DuplicateName(InvalidNetwork):
    pass


class DanglingArc(InvalidNetwork):
    pass


class UnknownNode(BncutError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


# -- text formats ---------------------------------------------------------

class ParseError(BncutError):
    """Error in a network or graph document, located by line and column."""

    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class NetworkSyntaxError(ParseError):
    @property
    def code(self) -> str:
        return "SyntaxError"


class UnknownNodeReference(ParseError):
    pass


class DuplicateDeclaration(ParseError):
    pass


# -- inference ------------------------------------------------------------

class InferenceError(BncutError):
    pass


class AlreadyInstantiated(InferenceError):
    pass


class ZeroProbabilityEvidence(InferenceError):
    pass


class NonConvergence(InferenceError):
    pass


class ImpossibleEvidence(InferenceError):
    pass


class InstantiationBudgetExceeded(InferenceError):
    pass


class InvalidCutset(InferenceError):
    pass


class NoEligibleCandidate(InferenceError):
    pass


class StateSpaceTooLarge(InferenceError):
    pass
