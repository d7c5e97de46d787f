"""Exception types shared across the package."""


class LyapcycleError(Exception):
    """Base class for every package-specific error."""


class NonPositiveEntryError(LyapcycleError, ValueError):
    """A model matrix entry is zero, negative, or NaN."""

    def __init__(self, row, col, value=None):
        self.row = row
        self.col = col
        self.value = value
        detail = f" (value {value})" if value is not None else ""
        super().__init__(f"entry ({row}, {col}) is not strictly positive{detail}")


class SingularMatrixError(LyapcycleError, ValueError):
    """Elimination produced a zero determinant."""


class NoConvergenceError(LyapcycleError, ArithmeticError):
    """An iteration hit its budget before meeting its tolerance."""

    def __init__(self, max_iter, what="power iteration"):
        self.max_iter = max_iter
        super().__init__(f"{what} did not converge within {max_iter} iterations")


class IndexOutOfRangeError(LyapcycleError, IndexError):
    """A word refers to a symbol outside the ensemble."""

    def __init__(self, index, bound):
        self.index = index
        self.bound = bound
        super().__init__(f"symbol index {index} outside range [0, {bound})")


class BudgetExceededError(LyapcycleError, RuntimeError):
    """An enumeration would touch more items than the configured cap."""

    def __init__(self, requested, budget):
        self.requested = requested
        self.budget = budget
        super().__init__(f"enumeration of {requested} items exceeds budget {budget}")


class NonDominantRootError(LyapcycleError, ArithmeticError):
    """The determinant factor came out non-positive: the top eigenvalue is
    not strictly dominant within working precision."""


class DegenerateDenominatorError(LyapcycleError, ArithmeticError):
    """The truncation denominator vanished at some order."""

    def __init__(self, order):
        self.order = order
        super().__init__(f"estimate denominator vanished at truncation order {order}")


class NoSignChangeError(LyapcycleError, ArithmeticError):
    """The truncated determinant never changed sign on the scanned interval."""


class NonStochasticRowError(LyapcycleError, ValueError):
    """A transition-matrix row does not sum to one."""

    def __init__(self, row, total):
        self.row = row
        self.total = total
        super().__init__(f"transition row {row} sums to {total!r}, expected 1")


class NonPositiveTransitionError(LyapcycleError, ValueError):
    """A transition probability is zero, negative, or NaN."""

    def __init__(self, row, col, value=None):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"transition ({row}, {col}) is not strictly positive")


class BadInitialVectorError(LyapcycleError, ValueError):
    """The initial symbol distribution is not a probability vector."""


class EnsembleShapeError(LyapcycleError, ValueError):
    """Ensemble arrays have inconsistent shapes."""


class ParseError(LyapcycleError, ValueError):
    """An ensemble file could not be read or decoded."""


class EnsembleValidationError(LyapcycleError, ValueError):
    """One or more ensemble invariants failed; carries the full list."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = []
        for err in self.errors:
            where = getattr(err, "matrix_index", None)
            prefix = f"matrix {where}: " if where is not None else ""
            lines.append(prefix + str(err))
        super().__init__("invalid ensemble: " + "; ".join(lines))
