"""Exception types raised across the package."""


class AtlasError(Exception):
    """Base class for every error raised by this package."""


# group machinery
class NonInvertibleGenerator(AtlasError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NotADivisor(AtlasError):
    pass


class BadGluing(AtlasError):
    pass


class ModulusMismatch(AtlasError):
    pass


class UnsupportedModulus(AtlasError):
    pass


# entanglement classification
class NonSurjectiveDeterminant(AtlasError):
    pass


class BadPair(AtlasError):
    pass


class TooLarge(AtlasError):
    pass


class NotBorel(AtlasError):
    pass


# siegel units and q-series
class PrecisionTooSmall(AtlasError):
    pass


class NotGenusZero(AtlasError):
    pass


class NoRelation(AtlasError):
    pass


class InsufficientPrecision(AtlasError):
    pass


class DegeneratePoints(AtlasError):
    pass


# symbolic layer
class SingularModel(AtlasError):
    pass


class ZeroInput(AtlasError):
    pass


class SingularQuartic(AtlasError):
    pass


class DegreeMismatch(AtlasError):
    pass


# catalog and pipeline
class SchemaError(AtlasError):
    pass


class CatalogIoError(AtlasError):
    pass


class UnsupportedLevel(AtlasError):
    pass


class MissingRankFact(AtlasError):
    pass
