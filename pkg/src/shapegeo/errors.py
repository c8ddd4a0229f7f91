"""Exception types raised across the library."""


class ShapeGeoError(Exception):
    """Base class for all shapegeo errors."""


class DegenerateSpeed(ShapeGeoError):
    """A curve sample has (numerically) vanishing velocity: not an immersion."""


class UnwrapAmbiguous(ShapeGeoError):
    """Adjacent tangent angles differ by nearly pi; resample finer first."""


class NonZeroMean(ShapeGeoError):
    """Antiderivative requested for a periodic field with non-negligible ds-mean."""


class GridMismatch(ShapeGeoError):
    """Operands are sampled on different parameter grids."""


class ParityMismatch(ShapeGeoError):
    """Operands have incompatible periodicity/parity."""


class AntipodalPair(ShapeGeoError):
    """Endpoints are antipodal; the connecting great circle is not unique."""


class DegenerateAlignment(ShapeGeoError):
    """Rotation alignment is indeterminate for the minus channel."""


class NotTangent(ShapeGeoError):
    """Direction is not tangent to the constraint manifold at the base point."""


class NotOrthonormal(ShapeGeoError):
    """Tangent vectors are expected to be orthonormal and are not."""


class NotHorizontal(ShapeGeoError):
    """Tangent vectors are expected to be horizontal and are not."""


class TooCoarse(ShapeGeoError):
    """Segment grid too coarse for dynamic-programming alignment."""


class DegeneratePlane(ShapeGeoError):
    """Spanning vectors are (numerically) collinear; no 2-plane."""


class CircleSingular(ShapeGeoError):
    """Operation undefined at (near-)constant curvature: the round circle."""


class BadSetReached(ShapeGeoError):
    """Trajectory left the immersions: a sample speed dropped below threshold.

    Not a failure mode: integrators report it as an event together with the
    partial trajectory.
    """

    def __init__(self, message, states=None):
        super().__init__(message)
        self.states = states if states is not None else []
