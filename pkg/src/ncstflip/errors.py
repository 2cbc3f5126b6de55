"""Exception hierarchy.

Every validation failure derives from :class:`NcstFlipError` (itself a
``ValueError``) so callers and the CLI can catch one type; the subclass name
is the violated invariant.
"""


class NcstFlipError(ValueError):
    pass


class RejectNegativePrefix(NcstFlipError):
    pass


class RejectNonzeroTotal(NcstFlipError):
    pass


class RejectLength(NcstFlipError):
    pass


class BadCharacter(NcstFlipError):
    pass


class EmptyPath(NcstFlipError):
    pass


class CapExceeded(NcstFlipError):
    pass


class NotSpanning(NcstFlipError):
    pass


class Crossing(NcstFlipError):
    def __init__(self, first, second):
        super().__init__(f"edges {first} and {second} cross")
        self.pair = (first, second)


class EmptyTree(NcstFlipError):
    pass


class EdgeNotInTree(NcstFlipError):
    pass


class SizeMismatch(NcstFlipError):
    pass


class NotAdjacent(NcstFlipError):
    pass


class DominanceViolated(NcstFlipError):
    pass


class NotAdjacentMove(NcstFlipError):
    pass


class ShiftPreconditionViolated(NcstFlipError):
    pass


class IndexOutOfRange(NcstFlipError):
    pass


class NoPreimage(NcstFlipError):
    pass


class DimensionMismatch(NcstFlipError):
    pass
