"""Exception hierarchy shared by all trireg modules."""


class TriregError(Exception):
    """Base class for every error raised by this package."""


class GraphError(TriregError, ValueError):
    pass


class DegreeViolation(GraphError):
    pass


class NonSimple(GraphError):
    pass


class ParityViolation(GraphError):
    pass


class InvalidEdge(GraphError):
    """Malformed edge or edge-list line (node out of range, bad token, u >= v)."""


class LabelViolation(GraphError):
    pass


class NotAPermutation(TriregError, ValueError):
    pass


class RejectionBudgetExceeded(TriregError, RuntimeError):
    pass


class InfeasibleSpec(TriregError, ValueError):
    pass


class BadK(TriregError, ValueError):
    pass


class CapExceeded(TriregError, ValueError):
    pass


class ConstraintUnmet(TriregError, ValueError):
    pass


class PreconditionD2N(TriregError, ValueError):
    """The bound is only certified when d**2 <= n."""


class NotAGoodEdge(TriregError, ValueError):
    pass


class BudgetExceeded(TriregError, RuntimeError):
    pass


class Timeout(TriregError, RuntimeError):
    """The conditioned chain did not reach the constraint set in time.

    The partial trace is attached for diagnosis.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
