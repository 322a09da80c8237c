"""Exception hierarchy shared by all ellsplit modules."""


class EllsplitError(Exception):
    """Base class for all package errors."""


class PointNotOnCurve(EllsplitError):
    pass


class DimensionMismatch(EllsplitError):
    pass


class UnsupportedCMAction(EllsplitError):
    """Raised when a CM scalar is applied on a curve without the matching model."""


class RankDeficient(EllsplitError):
    pass


class NotSurjective(EllsplitError):
    pass


class BudgetExceeded(EllsplitError):
    """A configured work budget (S-pairs, coordinate size, ...) was exhausted."""


class PrecisionUnreachable(EllsplitError):
    """Exact doubling exceeded its coordinate-size budget before certifying."""


class TorsionBase(EllsplitError):
    pass


class NoBasePointFound(EllsplitError):
    pass


class FiberSolveUnsupported(EllsplitError):
    pass


class UnsupportedMap(EllsplitError):
    pass


class VerificationError(EllsplitError):
    """A certificate or report failed its from-scratch re-verification."""


class ConfigError(EllsplitError):
    pass
