"""Exception hierarchy.

Exit-code classes used by the CLI: ``ConfigError`` -> 1, ``BudgetError`` -> 2,
``VerificationError`` -> 3.
"""


class WaldError(Exception):
    pass


class ConfigError(WaldError, ValueError):
    pass


class BudgetError(WaldError):
    pass


class VerificationError(WaldError):
    pass


class InverseOfZero(WaldError, ZeroDivisionError):
    pass


class PrecisionLoss(WaldError):
    pass


class NotASquare(WaldError, ValueError):
    pass


class BudgetExceeded(BudgetError):
    pass


class OrderBudgetExceeded(BudgetError):
    pass


class NotRational(WaldError, ValueError):
    pass


class NoSolution(WaldError):
    """No alpha satisfies the defining identity: the character table is inconsistent."""


class OddConductor(ConfigError):
    pass


class InconsistentTable(ConfigError):
    pass


class UnsupportedCase(ConfigError):
    pass


class UnramifiedUnsupported(UnsupportedCase):
    pass


class IncompatibleCentralCharacter(ConfigError):
    pass


class BadResidue(ConfigError):
    pass


class UnstableSum(VerificationError):
    pass


class NotOnSupport(VerificationError):
    pass


class HypothesisViolation(WaldError):
    """Raised (or recorded) when a closed form's hypotheses do not hold."""
