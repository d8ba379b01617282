"""Exception hierarchy shared by every module."""


class PstError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PstError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class MalformedRotation(InputError):
    pass


class EulerViolation(InputError):
    pass


class SelfLoop(InputError):
    pass


class NotSubset(InputError):
    pass


class Disconnected(InputError):
    pass


class TerminalNotOnFace(InputError):
    pass


class TerminalOffFace(InputError):
    pass


class BadParameters(InputError):
    pass


class BadRoot(InputError):
    pass


class NonIntegralWeight(InputError):
    pass


class NotASolution(PstError):
    pass


class Unreachable(PstError):
    """Some required vertices lie in different components."""


class Infeasible(PstError):
    """No feasible forest exists (CLI exit code 3)."""


class TooLarge(PstError):
    """Instance exceeds the tractable budget of a brute-force routine."""


class TerminalCapExceeded(TooLarge):
    pass


class BudgetExceeded(TooLarge):
    pass


class WindowTooSmall(TooLarge):
    pass
