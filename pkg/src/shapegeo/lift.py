"""The square-root lift of plane curves and its inverse.

A normalized curve c (unit length, c(0) = 0) with c' = r * exp(i*alpha)
lifts to the function pair

    e = sqrt(2 r) cos(alpha / 2),   f = sqrt(2 r) sin(alpha / 2),

and is recovered by c(theta) = 1/2 * integral_0^theta (e + i f)^2.  Open
curves land on the sphere ||e||^2 + ||f||^2 = 2; closed curves land on the
orthonormal pairs (||e|| = ||f|| = 1, <e, f> = 0), with (e, f) periodic or
antiperiodic according to the parity of the rotation index.
"""

from dataclasses import dataclass

import numpy as np

from .curves import (
    CLOSED,
    OPEN,
    ArcData,
    PlaneCurve,
    build_arc_data,
    cumint_dtheta,
    dtheta_fd,
    integrate_dtheta,
)
from .errors import DegenerateSpeed, GridMismatch

OPEN_FREE = "open"
EVEN_PERIODIC = "even"
ODD_ANTIPERIODIC = "odd"

_PARITIES = (OPEN_FREE, EVEN_PERIODIC, ODD_ANTIPERIODIC)


@dataclass(frozen=True)
class LiftPair:
    """Sampled pair (e, f) on the parameter grid, with periodicity tag."""

    e: np.ndarray
    f: np.ndarray
    parity: str

    def __post_init__(self):
        object.__setattr__(self, "e", np.asarray(self.e, dtype=float))
        object.__setattr__(self, "f", np.asarray(self.f, dtype=float))
        if self.e.shape != self.f.shape or self.e.ndim != 1:
            raise GridMismatch("e and f must share a 1-d grid")
        if self.parity not in _PARITIES:
            raise ValueError(f"parity must be one of {_PARITIES}")

    @property
    def n(self) -> int:
        return self.e.size

    @property
    def topology(self) -> str:
        return OPEN if self.parity == OPEN_FREE else CLOSED

    @property
    def wrap_sign(self) -> float:
        """Factor relating samples at theta + 2*pi to samples at theta."""
        return -1.0 if self.parity == ODD_ANTIPERIODIC else 1.0

    @property
    def z(self) -> np.ndarray:
        return self.e + 1j * self.f

    def norms(self) -> tuple[float, float, float]:
        """(||e||^2, ||f||^2, <e,f>) in L2(dtheta) over one period."""
        topo = self.topology
        return (
            float(integrate_dtheta(self.e**2, topo)),
            float(integrate_dtheta(self.f**2, topo)),
            float(integrate_dtheta(self.e * self.f, topo)),
        )

    def inner(self, other: "LiftPair") -> float:
        """Full inner product <e0,e1> + <f0,f1>."""
        _check_compatible(self, other)
        return float(
            integrate_dtheta(self.e * other.e + self.f * other.f, self.topology)
        )

    def scaled(self, a: float) -> "LiftPair":
        return LiftPair(a * self.e, a * self.f, self.parity)

    def combine(self, a: float, other: "LiftPair", b: float) -> "LiftPair":
        _check_compatible(self, other)
        return LiftPair(a * self.e + b * other.e, a * self.f + b * other.f, self.parity)


def _check_compatible(p0: LiftPair, p1: LiftPair):
    if p0.n != p1.n:
        raise GridMismatch(f"grids of size {p0.n} and {p1.n}")
    if p0.parity != p1.parity:
        from .errors import ParityMismatch

        raise ParityMismatch(f"parities {p0.parity!r} and {p1.parity!r}")


@dataclass(frozen=True)
class ZeroSetReport:
    """Nodes where e and f vanish together (the image curve degenerates)."""

    zero_nodes: np.ndarray
    min_value: float
    crosses_bad_set: bool


def pair_from_arc(arc: ArcData, parity: str | None = None) -> LiftPair:
    """Lift from precomputed arc data; resolves the sign so e(0) >= 0."""
    amp = np.sqrt(2.0 * arc.speed)
    half = 0.5 * arc.tangent_angle
    e = amp * np.cos(half)
    f = amp * np.sin(half)
    if e[0] < 0.0 or (e[0] == 0.0 and f[0] < 0.0):
        e, f = -e, -f
    if parity is None:
        if arc.topology == OPEN:
            parity = OPEN_FREE
        else:
            parity = EVEN_PERIODIC if arc.rotation_index % 2 == 0 else ODD_ANTIPERIODIC
    return LiftPair(e, f, parity)


def lift_curve(curve: PlaneCurve, eps_speed: float | None = None) -> LiftPair:
    """Lift a normalized immersed curve to its square-root pair.

    The two-fold ambiguity is resolved by e(0) >= 0 (f(0) > 0 when e(0) = 0).
    Raises DegenerateSpeed if the curve is not an immersion at the grid
    resolution.
    """
    arc = build_arc_data(curve, eps_speed=eps_speed)
    return pair_from_arc(arc)


def apply_phi(pair: LiftPair) -> PlaneCurve:
    """Map a pair back to the curve c = 1/2 * cumulative integral of (e+if)^2.

    Defined on the whole sphere/Stiefel manifold, including pairs whose image
    fails to be an immersion.  The result has c(0) = 0.  A periodic-parity
    pair whose velocity integral does not vanish yields a non-closing image:
    the returned curve is then open, with the wrap node appended.
    """
    sq = pair.z**2  # periodic for both parities
    topo = pair.topology
    c = 0.5 * cumint_dtheta(sq, topo)
    if topo == CLOSED:
        defect = 0.5 * integrate_dtheta(sq, CLOSED)
        scale = 0.5 * float(integrate_dtheta(np.abs(sq), CLOSED))  # image length
        if abs(defect) > 1e-6 * max(scale, 1e-30):
            step = 0.25 * (sq[-1] + sq[0]) * (2.0 * np.pi / pair.n)
            return PlaneCurve(np.append(c, c[-1] + step), OPEN, True)
    return PlaneCurve(c, topo, True)


def zero_set(pair: LiftPair, eps: float | None = None) -> ZeroSetReport:
    """Grid nodes where e^2 + f^2 < eps (default 1e-6 * max(e^2 + f^2))."""
    mag = pair.e**2 + pair.f**2
    if eps is None:
        eps = 1e-6 * float(mag.max())
    nodes = np.flatnonzero(mag < eps)
    return ZeroSetReport(nodes, float(mag.min()), bool(nodes.size))


def sphere_defect(pair: LiftPair) -> float:
    """|  ||e||^2 + ||f||^2 - 2 |, the sphere constraint residual."""
    ne, nf, _ = pair.norms()
    return abs(ne + nf - 2.0)


def stiefel_defect(pair: LiftPair) -> float:
    """max deviation from ||e||^2 = ||f||^2 = 1, <e,f> = 0."""
    ne, nf, ef = pair.norms()
    return max(abs(ne - 1.0), abs(nf - 1.0), abs(ef))


def closure_integrals(pair: LiftPair) -> tuple[float, float]:
    """(||e||^2 - ||f||^2, 2<e,f>): twice the real/imag parts of the total
    velocity integral; both vanish exactly when the image curve closes."""
    ne, nf, ef = pair.norms()
    return ne - nf, 2.0 * ef


def pushforward(curve: PlaneCurve, pair: LiftPair, perturbation: np.ndarray) -> np.ndarray:
    """Tangent (delta_e + i delta_f) corresponding to a curve perturbation.

    Inverts the differential of the lift: D_s(delta c) * conj(e + i f) / 2.
    """
    arc = build_arc_data(curve)
    dc = dtheta_fd(np.asarray(perturbation, dtype=complex), curve.topology) / arc.speed
    return 0.5 * np.conj(pair.z) * dc


def verify_isometry(
    curve: PlaneCurve,
    perturbation: np.ndarray,
    eps: float = 1e-5,
) -> tuple[float, float]:
    """Compare the curve-side metric energy of a perturbation with the
    squared L2 norm of the finite-difference lift displacement.

    The left value is the intrinsic metric energy; the right value pushes the
    perturbed curves through the lift independently (central difference with
    step ``eps``), so agreement quantifies how isometric the implemented lift
    actually is.
    """
    from .curves import metric_norm2

    arc = build_arc_data(curve)
    h = np.asarray(perturbation, dtype=complex)
    lhs = metric_norm2(arc, h)

    plus = lift_curve(curve.with_points(curve.points + eps * h))
    minus = lift_curve(curve.with_points(curve.points - eps * h))
    de = (plus.e - minus.e) / (2.0 * eps)
    df = (plus.f - minus.f) / (2.0 * eps)
    rhs = float(integrate_dtheta(de**2 + df**2, curve.topology))
    return lhs, rhs


def speed_from_pair(pair: LiftPair) -> np.ndarray:
    """|c_theta| of the image curve: (e^2 + f^2) / 2."""
    return 0.5 * (pair.e**2 + pair.f**2)


def wronskian_theta(pair: LiftPair) -> np.ndarray:
    """W_theta(e, f) = e f_theta - f e_theta, with parity-aware wrap."""
    de = _dtheta_parity(pair.e, pair)
    df = _dtheta_parity(pair.f, pair)
    return pair.e * df - pair.f * de


def curvature_from_pair(pair: LiftPair) -> np.ndarray:
    """Image-curve curvature read off the pair: 4 W_theta(e, f) / (e^2 + f^2)^2.

    The Wronskian equals r^2 kappa under the dictionary and the image speed
    is (e^2 + f^2)/2; on the unit-length circle lift this evaluates to 2 pi
    as it must.
    """
    mag = pair.e**2 + pair.f**2
    if np.any(mag <= 0):
        raise DegenerateSpeed("pair touches the zero set; curvature undefined")
    return 4.0 * wronskian_theta(pair) / mag**2


def _dtheta_parity(values: np.ndarray, pair: LiftPair) -> np.ndarray:
    """Centered parameter derivative honoring the (anti)periodic extension."""
    if pair.topology == OPEN:
        return dtheta_fd(values, OPEN)
    n = values.size
    h = 2.0 * np.pi / n
    s = pair.wrap_sign
    fwd = np.empty(n)
    fwd[:-1] = values[1:]
    fwd[-1] = s * values[0]
    bwd = np.empty(n)
    bwd[1:] = values[:-1]
    bwd[0] = s * values[-1]
    return (fwd - bwd) / (2.0 * h)


def dtheta_parity(values: np.ndarray, pair: LiftPair) -> np.ndarray:
    return _dtheta_parity(np.asarray(values, dtype=float), pair)
