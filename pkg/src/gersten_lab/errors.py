"""Exception hierarchy.  Every error raised on purpose derives from GerstenLabError."""


class GerstenLabError(Exception):
    pass


# rings and matrices
class NotPrime(GerstenLabError):
    pass


class UnknownRingKind(GerstenLabError):
    pass


class NotInRing(GerstenLabError):
    """A value does not lie in the local ring (denominator divisible by g)."""


class DimensionMismatch(GerstenLabError):
    pass


class NotInvertible(GerstenLabError):
    pass


class ParseError(GerstenLabError):
    pass


# chain complexes
class ShapeMismatch(GerstenLabError):
    pass


class NotAComplex(GerstenLabError):
    pass


class NotAChainMap(GerstenLabError):
    pass


class NotAHomotopy(GerstenLabError):
    pass


class BlockMismatch(GerstenLabError):
    pass


# the category of standard two-term complexes
class NotAMorphismOfC(GerstenLabError):
    pass


class BlockNotInvertible(GerstenLabError):
    pass


class NotInC(GerstenLabError):
    pass


class NotInjective(GerstenLabError):
    pass


class RankMismatch(GerstenLabError):
    pass


class NotAComplexPair(GerstenLabError):
    pass


class ResidueNotExact(GerstenLabError):
    pass


# zero map engine
class NotTriangular(GerstenLabError):
    pass


class PreconditionViolated(GerstenLabError):
    pass


class ObjectsNotEqual(GerstenLabError):
    pass


# homotopy natural transformations
class NotFunctorial(GerstenLabError):
    pass


class CoherenceFailure(GerstenLabError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotFree(GerstenLabError):
    pass


class ComponentNotEquivalence(GerstenLabError):
    pass


class LevelIncompatible(GerstenLabError):
    def __init__(self, message, phi=None):
        super().__init__(message)
        self.phi = phi


# K_0
class UnitElement(GerstenLabError):
    pass


class ZeroElement(GerstenLabError):
    pass


class NotTorsion(GerstenLabError):
    pass


class NotExact(GerstenLabError):
    pass


# cli
class ConfigInvalid(GerstenLabError):
    pass
