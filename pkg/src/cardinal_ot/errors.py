"""Exception hierarchy shared by every module."""


class CardinalOTError(Exception):
    """Base class for all errors raised by the package."""


class EmptyMeasure(CardinalOTError, ValueError):
    pass


class UnbalancedMass(CardinalOTError, ValueError):
    pass


class LengthMismatch(CardinalOTError, ValueError):
    pass


class DomainError(CardinalOTError, ValueError):
    pass


class GlueMismatch(CardinalOTError, ValueError):
    """The two halves of a cardinal flow disagree on their (y1, x2) marginal."""


class NotIntermedium(CardinalOTError, ValueError):
    """A candidate pivot does not have marginals (nu_1, mu_2)."""


class NotOnLine(CardinalOTError, ValueError):
    pass


class TooLarge(CardinalOTError, ValueError):
    pass


class Infeasible(CardinalOTError, RuntimeError):
    pass


class NumericalBreakdown(CardinalOTError, RuntimeError):
    pass
