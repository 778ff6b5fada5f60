"""Exception hierarchy shared by all modules."""


class MotherBodyError(Exception):
    """Base class for every error raised by the package."""


class GeometryError(MotherBodyError, ValueError):
    pass


class TooFewVertices(GeometryError):
    pass


class NonConvex(GeometryError):
    pass


class DegenerateArea(GeometryError):
    pass


class OutsidePolygon(GeometryError):
    pass


class NumericCollapse(GeometryError):
    """Wavefront event times could not be separated reliably."""


class ZeroMass(MotherBodyError, ValueError):
    pass


class SingularPoint(MotherBodyError, ValueError):
    pass


class OnSupport(MotherBodyError, ValueError):
    """Evaluation point lies on the support of a singular atom."""


class OnBoundary(MotherBodyError, ValueError):
    pass


class NonConvergent(MotherBodyError, ArithmeticError):
    pass


class InsideShell(MotherBodyError, ValueError):
    pass


class InvalidRadius(MotherBodyError, ValueError):
    pass


class UnsupportedBody(MotherBodyError, TypeError):
    pass


class CollocationInsideBody(MotherBodyError, ValueError):
    pass


class RankDeficient(MotherBodyError, ArithmeticError):
    pass


class NoConvergence(MotherBodyError, ArithmeticError):
    pass


class SampleInsideBody(MotherBodyError, ValueError):
    pass


class UnsupportedDimension(MotherBodyError, ValueError):
    pass


class UnknownCase(MotherBodyError, KeyError):
    pass
