"""Exception hierarchy shared by all npce modules."""


class NPCEError(Exception):
    """Base class for every error raised by npce."""


class DimensionMismatch(NPCEError, ValueError):
    pass


class NegativeEntry(NPCEError, ValueError):
    pass


class ZeroRowOrColumn(NPCEError, ValueError):
    pass


class NotProductive(NPCEError, ValueError):
    pass


class PowerIterationStall(NPCEError, RuntimeError):
    pass


class WrongSign(NPCEError, ValueError):
    """Operator violates its monotonicity class (increasing/decreasing)."""


class NotInOmega(NPCEError, ValueError):
    pass


class NonpositiveStep(NPCEError, ValueError):
    pass


class ZeroDelta(NPCEError, ValueError):
    """Strong monotonicity modulus is zero where a positive one is required."""


class StepInadmissible(NPCEError, ValueError):
    pass


class TooLarge(NPCEError, ValueError):
    pass


class BadModuli(NPCEError, ValueError):
    pass
