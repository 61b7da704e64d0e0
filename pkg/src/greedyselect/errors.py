"""Exception types shared across the package."""


class GreedySelectError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMatrixError(GreedySelectError):
    """Matrix input is not finite/square/symmetric where required."""


class DimensionError(GreedySelectError):
    """Operands have incompatible dimensions."""


class ModelValidationError(GreedySelectError):
    """A covariance model violates a structural invariant.

    The message names the violated invariant (diagonal, entry range,
    positive semidefiniteness, ...).
    """


class ZeroVarianceError(GreedySelectError):
    """A sample column is constant and cannot be normalized."""

    def __init__(self, column):
        super().__init__(f"column {column!r} has zero variance")
        self.column = column


class ParseError(GreedySelectError):
    """A CSV cell could not be parsed as a number.

    Row/column are 1-based positions in the input file (header is row 1).
    """

    def __init__(self, row, col, detail=""):
        msg = f"cannot parse cell at row {row}, column {col}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.row = row
        self.col = col


class TargetExplainedError(GreedySelectError):
    """The conditioning set already explains the target completely."""


class BudgetError(GreedySelectError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, count, cap, what="subsets"):
        super().__init__(f"enumerating {count} {what} exceeds cap {cap}")
        self.count = count
        self.cap = cap
        self.what = what
