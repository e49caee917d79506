"""Exception hierarchy shared by the library and the command line."""


class QModularError(Exception):
    """Base class for every error raised by this package."""


class ComputationError(QModularError):
    """A computation could not be carried out (precision, budget, ...)."""


class ZeroSeries(ComputationError, ZeroDivisionError):
    pass


class OutOfWindow(ComputationError, ValueError):
    """A coefficient was requested at or beyond the known truncation."""


class NormalizationNotExact(QModularError, ValueError):
    pass


class InsufficientOrder(ComputationError):
    pass


class NotModular(QModularError):
    pass


class NotQuasiModular(NotModular):
    pass


class DepthZero(QModularError, ValueError):
    pass


class SingularMatrix(QModularError, ValueError):
    pass


class NotPositiveDefinite(QModularError, ValueError):
    pass


class UnknownLattice(QModularError, KeyError):
    pass


class BudgetExceeded(ComputationError):
    def __init__(self, cost, budget):
        super().__init__(f"estimated cost {cost} exceeds budget {budget}")
        self.cost = cost
        self.budget = budget
