"""Exception types raised by the library."""


class QuantizationError(ValueError):
    """Base class for all library errors."""


class InvalidRatio(QuantizationError):
    pass


class InvalidWord(QuantizationError):
    pass


class OverlappingWords(QuantizationError):
    pass


class InvalidN(QuantizationError):
    pass


class CountOutOfRange(QuantizationError):
    pass


class IndexSetMismatch(QuantizationError):
    pass


class EmptyQuantizer(QuantizationError):
    pass


class InvalidRange(QuantizationError):
    pass


class BracketNotFound(QuantizationError):
    pass


class MultipleRoots(QuantizationError):
    pass


class DepthOutOfRange(QuantizationError):
    pass


class NTooLarge(QuantizationError):
    pass


class EmptyCellEncountered(QuantizationError):
    """A Voronoi cell carried zero mass during a Lloyd step."""

    def __init__(self, point: float, index: int):
        super().__init__(f"Voronoi cell of point {point!r} (index {index}) has zero mass")
        self.point = point
        self.index = index
