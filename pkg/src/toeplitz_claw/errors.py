"""Exception hierarchy shared by every module."""


class ToeplitzError(Exception):
    """Base class for all package errors."""


class InvalidParams(ToeplitzError, ValueError):
    """Toeplitz parameters violate a structural constraint."""


class EmptyOffsets(InvalidParams):
    pass


class NonIncreasingOffsets(InvalidParams):
    pass


class OffsetOutOfRange(InvalidParams):
    pass


class VertexOutOfRange(ToeplitzError, IndexError):
    pass


class OracleBoundExceeded(ToeplitzError):
    """A brute-force routine was asked to work beyond its configured bound."""


class GraphTooLarge(OracleBoundExceeded):
    pass


class TooManyCliques(OracleBoundExceeded):
    pass


class Undecided(GraphTooLarge):
    """No closed-form rule applies and the graph is too large for the oracle."""


class MapNotBijective(ToeplitzError, ValueError):
    pass


class NotACocoonery(ToeplitzError, ValueError):
    pass


class PremiseNotMet(ToeplitzError, ValueError):
    pass


class UnknownFormat(ToeplitzError, ValueError):
    pass
