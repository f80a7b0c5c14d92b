"""Exception hierarchy shared by every module."""


class RigidityError(Exception):
    """Base class for all library errors."""


class UnboundWordError(RigidityError):
    """A formal word was evaluated without a representation to resolve it."""


class IncompatibleBackendError(RigidityError):
    """Two line elements with incompatible backends were composed."""


class ValidationError(RigidityError):
    """A representation or element failed validation.

    ``word`` carries the offending word when there is one.
    """

    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


class NotHyperbolicLikeError(RigidityError):
    """An operation required a hyperbolic-like element."""


class PreconditionError(RigidityError):
    """Inputs violate a documented precondition."""


class BudgetExhaustedError(RigidityError):
    """A bounded search ran out of budget.

    ``best`` is the closest candidate found and ``distance`` its error.
    """

    def __init__(self, message, best=None, distance=None):
        super().__init__(message)
        self.best = best
        self.distance = distance


class InconsistencyError(RigidityError):
    """Two independent routes to the same answer disagreed."""
