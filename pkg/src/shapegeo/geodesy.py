"""Explicit geodesics and distances between lifted curves.

Open curves live on the sphere ||e||^2 + ||f||^2 = 2, whose geodesics are
great circles.  Closed curves live on the orthonormal 2-frames; modulo
rotations they become 2-planes, where distances and geodesics come from the
principal angles between the planes (read off a 2x2 projection matrix) and
the sin-interpolated frame geodesic.
"""

from dataclasses import dataclass

import numpy as np

from .curves import PlaneCurve, build_arc_data, integrate_dtheta, theta_grid
from .errors import (
    AntipodalPair,
    DegenerateAlignment,
    NotTangent,
    ParityMismatch,
)
from .lift import (
    CLOSED,
    ODD_ANTIPERIODIC,
    LiftPair,
    apply_phi,
    dtheta_parity,
    lift_curve,
    zero_set,
)

_DEGENERATE_CHANNEL = 1e-10


def _clamp(x: float) -> float:
    return float(min(1.0, max(-1.0, x)))


def rotate_pair(pair: LiftPair, phi: float) -> LiftPair:
    """Rotate the pair by angle phi: (e + i f) -> exp(i phi) (e + i f).

    The image curve rotates by 2 phi.
    """
    c, s = np.cos(phi), np.sin(phi)
    return LiftPair(c * pair.e - s * pair.f, c * pair.f + s * pair.e, pair.parity)


# ---------------------------------------------------------------------------
# great circles (open curves, and closed ones ignoring the closure constraint)


@dataclass(frozen=True)
class GreatCirclePath:
    """Arc of the great circle from p0 to p1 on the sqrt(2)-sphere."""

    p0: LiftPair
    p1: LiftPair
    angle: float

    def evaluate(self, t: float) -> LiftPair:
        d = self.angle
        if d < 1e-8:
            return self.p0
        a = np.sin((1.0 - t) * d) / np.sin(d)
        b = np.sin(t * d) / np.sin(d)
        return self.p0.combine(a, self.p1, b)

    def velocity(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """d/dt of (e, f) along the arc."""
        d = self.angle
        if d < 1e-8:
            return np.zeros(self.p0.n), np.zeros(self.p0.n)
        a = -d * np.cos((1.0 - t) * d) / np.sin(d)
        b = d * np.cos(t * d) / np.sin(d)
        return (
            a * self.p0.e + b * self.p1.e,
            a * self.p0.f + b * self.p1.f,
        )


def great_circle(p0: LiftPair, p1: LiftPair) -> GreatCirclePath:
    """Connecting great circle; the sphere angle is in [0, pi].

    Raises AntipodalPair when the endpoints are antipodal (no unique arc).
    """
    d = float(np.arccos(_clamp(p0.inner(p1) / 2.0)))
    if d > np.pi - 1e-8:
        raise AntipodalPair("endpoints are antipodal; great circle not unique")
    return GreatCirclePath(p0, p1, d)


def distance_open(c0: PlaneCurve, c1: PlaneCurve, mod_rotation: bool = False) -> float:
    """Parametrized distance between open curves, optionally modulo rotation.

    Equals arccos of the cosine alignment integral; the rotation quotient
    replaces it by the modulus of the complex alignment integral.
    """
    a0 = build_arc_data(c0)
    a1 = build_arc_data(c1)
    if a0.n != a1.n or a0.topology != a1.topology:
        from .errors import GridMismatch

        raise GridMismatch("curves sampled on different grids")
    amp = np.sqrt(a0.speed * a1.speed)
    half = 0.5 * (a1.tangent_angle - a0.tangent_angle)
    cval = float(integrate_dtheta(amp * np.cos(half), a0.topology))
    if not mod_rotation:
        return float(np.arccos(_clamp(cval)))
    sval = float(integrate_dtheta(amp * np.sin(half), a0.topology))
    return float(np.arccos(_clamp(np.hypot(cval, sval))))


# ---------------------------------------------------------------------------
# projections between lifted closed curves, principal angles, alignment


@dataclass(frozen=True)
class ProjectionData:
    """2x2 matrix of inner products between two lifted frames.

    ``matrix[a, b]`` pairs basis vector a of the source frame with basis
    vector b of the target frame; c_plus/c_minus/s_plus/s_minus are the
    half-sum/half-difference combinations used by the singular-value
    closed form and the rotation alignment.
    """

    matrix: np.ndarray
    c_plus: float
    c_minus: float
    s_plus: float
    s_minus: float


def projection_pairs(p0: LiftPair, p1: LiftPair) -> ProjectionData:
    """Projection data from two lifted pairs on the same grid and parity."""
    if p0.parity != p1.parity:
        raise ParityMismatch(f"parities {p0.parity!r} and {p1.parity!r}")
    topo = p0.topology
    m = np.array(
        [
            [integrate_dtheta(p0.e * p1.e, topo), integrate_dtheta(p0.e * p1.f, topo)],
            [integrate_dtheta(p0.f * p1.e, topo), integrate_dtheta(p0.f * p1.f, topo)],
        ]
    )
    return ProjectionData(
        matrix=m,
        c_plus=0.5 * (m[0, 0] - m[1, 1]),
        c_minus=0.5 * (m[0, 0] + m[1, 1]),
        s_plus=0.5 * (m[1, 0] + m[0, 1]),
        s_minus=0.5 * (m[1, 0] - m[0, 1]),
    )


def projection_matrix(c0: PlaneCurve, c1: PlaneCurve) -> ProjectionData:
    """Projection data between two closed normalized curves."""
    return projection_pairs(lift_curve(c0), lift_curve(c1))


def jordan_angles(m: np.ndarray) -> tuple[float, float]:
    """Closed-form singular values of a 2x2 matrix: sqrt(C-^2 + S-^2) +/-
    sqrt(C+^2 + S+^2).

    The smaller value carries the sign of det(m): it is negative when the
    frames differ by a reflection, which is what the rotation-only quotient
    must see.  Absolute values reproduce the usual SVD.
    """
    m = np.asarray(m, dtype=float)
    c_plus = 0.5 * (m[0, 0] - m[1, 1])
    c_minus = 0.5 * (m[0, 0] + m[1, 1])
    s_plus = 0.5 * (m[1, 0] + m[0, 1])
    s_minus = 0.5 * (m[1, 0] - m[0, 1])
    lo = np.hypot(c_minus, s_minus)
    hi = np.hypot(c_plus, s_plus)
    return float(lo + hi), float(lo - hi)


def distance_closed_mod_rot(c0: PlaneCurve, c1: PlaneCurve) -> float:
    """Distance between closed curves modulo translation/rotation/scaling,
    at fixed parametrization: root-sum-square of the two principal angles."""
    proj = projection_matrix(c0, c1)
    sv_big, sv_small = jordan_angles(proj.matrix)
    return float(np.hypot(np.arccos(_clamp(sv_big)), np.arccos(_clamp(sv_small))))


@dataclass(frozen=True)
class JordanFrame:
    """Rotation-aligned bases of two lifted planes with principal angles.

    After rotating the pairs by beta0/2 and beta1/2 the cross inner products
    vanish and <e0~, e1~> = cos(psi_e) <= <f0~, f1~> = cos(psi_f); the
    ordering convention is psi_e >= psi_f.
    """

    aligned0: LiftPair
    aligned1: LiftPair
    psi_e: float
    psi_f: float
    beta0: float
    beta1: float

    @property
    def lambda_e(self) -> float:
        return float(np.cos(self.psi_e))

    @property
    def lambda_f(self) -> float:
        return float(np.cos(self.psi_f))

    @property
    def distance(self) -> float:
        return float(np.hypot(self.psi_e, self.psi_f))


def _wrap_angle(b: float) -> float:
    w = np.remainder(b + np.pi, 2.0 * np.pi) - np.pi
    return float(np.pi if w == -np.pi else w)


def align_pairs(p0: LiftPair, p1: LiftPair) -> JordanFrame:
    """Jordan frame of two lifted pairs.

    The plus channel degenerates exactly when the principal angles coincide
    (any common rotation aligns); its rotation is then fixed to zero.  A
    degenerate minus channel leaves the alignment genuinely indeterminate
    and raises DegenerateAlignment.
    """
    proj = projection_pairs(p0, p1)
    mag_minus = np.hypot(proj.c_minus, proj.s_minus)
    mag_plus = np.hypot(proj.c_plus, proj.s_plus)
    if mag_minus < _DEGENERATE_CHANNEL:
        raise DegenerateAlignment("minus-channel alignment indeterminate")
    x_minus = 2.0 * np.arctan2(proj.s_minus, proj.c_minus)
    if mag_plus < _DEGENERATE_CHANNEL:
        # equal principal angles: the plus rotation is free and no diagonal
        # swap is needed
        x_plus, swap = 0.0, 0.0
    else:
        # rotating both bases by an extra pi/2 swaps the diagonal so that
        # psi_e >= psi_f
        x_plus, swap = 2.0 * np.arctan2(proj.s_plus, proj.c_plus), np.pi
    beta0 = 0.5 * (x_plus + x_minus) + swap
    beta1 = 0.5 * (x_plus - x_minus) + swap
    aligned0 = rotate_pair(p0, -0.5 * beta0)
    aligned1 = rotate_pair(p1, -0.5 * beta1)
    sv_big = mag_minus + mag_plus
    sv_small = mag_minus - mag_plus
    return JordanFrame(
        aligned0=aligned0,
        aligned1=aligned1,
        psi_e=float(np.arccos(_clamp(sv_small))),
        psi_f=float(np.arccos(_clamp(sv_big))),
        beta0=_wrap_angle(beta0),
        beta1=_wrap_angle(beta1),
    )


def align_rotations(c0: PlaneCurve, c1: PlaneCurve) -> JordanFrame:
    """Jordan frame of two closed normalized curves."""
    return align_pairs(lift_curve(c0), lift_curve(c1))


# ---------------------------------------------------------------------------
# frame geodesics on the planes


@dataclass(frozen=True)
class NeretinPath:
    """Geodesic of 2-planes through sin-interpolation of an aligned frame."""

    frame: JordanFrame

    def _interp(self, a0: np.ndarray, a1: np.ndarray, psi: float, t: float) -> np.ndarray:
        if psi < 1e-6:
            return (1.0 - t) * a0 + t * a1
        return (np.sin((1.0 - t) * psi) * a0 + np.sin(t * psi) * a1) / np.sin(psi)

    def evaluate(self, t: float) -> LiftPair:
        fr = self.frame
        e = self._interp(fr.aligned0.e, fr.aligned1.e, fr.psi_e, t)
        f = self._interp(fr.aligned0.f, fr.aligned1.f, fr.psi_f, t)
        return LiftPair(e, f, fr.aligned0.parity)

    def initial_velocity(self) -> tuple[np.ndarray, np.ndarray]:
        fr = self.frame
        de = _sin_velocity(fr.aligned0.e, fr.aligned1.e, fr.psi_e)
        df = _sin_velocity(fr.aligned0.f, fr.aligned1.f, fr.psi_f)
        return de, df

    @property
    def length(self) -> float:
        return self.frame.distance

    def gram_defect(self, t: float) -> float:
        """Deviation of the frame at time t from orthonormality."""
        p = self.evaluate(t)
        ne, nf, ef = p.norms()
        return max(abs(ne - 1.0), abs(nf - 1.0), abs(ef))


def _sin_velocity(a0: np.ndarray, a1: np.ndarray, psi: float) -> np.ndarray:
    if psi < 1e-6:
        return a1 - a0
    return psi * (a1 - np.cos(psi) * a0) / np.sin(psi)


def neretin_path(frame: JordanFrame) -> NeretinPath:
    return NeretinPath(frame)


# ---------------------------------------------------------------------------
# horizontality diagnostics


def tangency_defect(pair: LiftPair, de: np.ndarray, df: np.ndarray) -> float:
    """Deviation of (de, df) from the tangent space of the orthonormal pairs."""
    topo = pair.topology
    ee = integrate_dtheta(pair.e * de, topo)
    ff = integrate_dtheta(pair.f * df, topo)
    mix = integrate_dtheta(pair.e * df + pair.f * de, topo)
    return float(max(abs(ee), abs(ff), abs(mix)))


def rotation_horizontality(pair: LiftPair, de: np.ndarray, df: np.ndarray) -> float:
    """Pairing against the rotation orbit direction (-f, e)."""
    topo = pair.topology
    return float(integrate_dtheta(-pair.f * de + pair.e * df, topo))


def horizontality_residual(
    pair: LiftPair, de: np.ndarray, df: np.ndarray, check_tangent: bool = True
) -> np.ndarray:
    """Pointwise reparametrization-horizontality defect of a direction.

    Returns W_theta(e, de) + W_theta(f, df); a horizontal direction makes it
    vanish identically.
    """
    de = np.asarray(de, dtype=float)
    df = np.asarray(df, dtype=float)
    if check_tangent:
        scale = max(1.0, float(integrate_dtheta(de**2 + df**2, pair.topology)))
        if tangency_defect(pair, de, df) > 1e-6 * scale:
            raise NotTangent("direction is not tangent to the orthonormal pairs")
    w_e = pair.e * dtheta_parity(de, pair) - de * dtheta_parity(pair.e, pair)
    w_f = pair.f * dtheta_parity(df, pair) - df * dtheta_parity(pair.f, pair)
    return w_e + w_f


def path_horizontality_residual(path: NeretinPath) -> np.ndarray:
    """Residual evaluated on the initial velocity of a frame geodesic."""
    de, df = path.initial_velocity()
    return horizontality_residual(path.frame.aligned0, de, df, check_tangent=False)


def reparametrization_direction(pair: LiftPair, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Infinitesimal action of a parameter vector field X on the pair.

    X itself is always periodic; only the pair components carry the
    antiperiodic wrap.
    """
    from .curves import dtheta_fd

    x = np.asarray(x, dtype=float)
    dx = dtheta_fd(x, pair.topology)
    de = 0.5 * dx * pair.e + x * dtheta_parity(pair.e, pair)
    df = 0.5 * dx * pair.f + x * dtheta_parity(pair.f, pair)
    return de, df


# ---------------------------------------------------------------------------
# worked path families


def circle_pair(n: int) -> LiftPair:
    """Lift of the unit-length circle with tangent angle alpha = theta."""
    th = theta_grid(n, CLOSED)
    amp = 1.0 / np.sqrt(np.pi)
    return LiftPair(amp * np.cos(0.5 * th), amp * np.sin(0.5 * th), ODD_ANTIPERIODIC)


def circle_horizontal_target(n: int) -> LiftPair:
    """The simplest direction at the circle lift that is horizontal for both
    rotations and reparametrizations: exp(i theta/2)(cos(2 theta)/2
    - i sin(2 theta)) / sqrt(pi)."""
    th = theta_grid(n, CLOSED)
    z = np.exp(0.5j * th) * (0.5 * np.cos(2.0 * th) - 1j * np.sin(2.0 * th)) / np.sqrt(np.pi)
    return LiftPair(z.real, z.imag, ODD_ANTIPERIODIC)


@dataclass(frozen=True)
class SweepCrossing:
    tau: float
    zero_nodes: np.ndarray
    min_value: float


@dataclass(frozen=True)
class GreatCircleSweep:
    """Full sweep of the great circle through the circle lift along the
    standard horizontal direction, with bad-set crossings located."""

    taus: np.ndarray
    pairs: list
    curves: list
    indices: list
    crossings: list


def _pair_min_magnitude(p0: LiftPair, q: LiftPair, tau: float) -> float:
    p = p0.combine(np.cos(tau), q, np.sin(tau))
    return float(np.min(p.e**2 + p.f**2))


def _winding_index(pair: LiftPair) -> int | None:
    """Rotation index of the image curve: twice the winding of e + i f over
    one period of the (anti)periodic extension.

    Returns None when the pair passes too close to the zero set for a
    reliable count.
    """
    z = pair.z
    mag = np.abs(z) ** 2
    if mag.min() < 1e-3 * mag.max():
        return None
    ang = np.angle(np.concatenate([z, [pair.wrap_sign * z[0]]]))
    steps = np.angle(np.exp(1j * np.diff(ang)))
    turns = np.sum(steps) / (2.0 * np.pi)
    return int(np.rint(2.0 * turns))


def example_great_circle_sweep(n: int = 512, num_frames: int = 33) -> GreatCircleSweep:
    """Curves along one full period of the standard horizontal great circle.

    The image family has period pi in the sweep angle (antipodal pairs give
    the same curve), so tau runs over [0, pi).  The sweep starts at the
    unit-length circle; the rotation index jumps where the path crosses the
    set of non-immersions, which happens twice per period.
    """
    from scipy.optimize import minimize_scalar

    p0 = circle_pair(n)
    target = circle_horizontal_target(n)
    nrm = np.sqrt(integrate_dtheta(target.e**2 + target.f**2, CLOSED))
    q = target.scaled(np.sqrt(2.0) / nrm)

    taus = np.linspace(0.0, np.pi, num_frames, endpoint=False)
    pairs = [p0.combine(np.cos(t), q, np.sin(t)) for t in taus]
    curves = [apply_phi(p) for p in pairs]
    indices = [_winding_index(p) for p in pairs]

    # locate interior minima of the worst node magnitude, then polish
    coarse = np.array([_pair_min_magnitude(p0, q, t) for t in taus])
    scale = max(coarse.max(), 1e-30)
    crossings = []
    for i in range(1, num_frames - 1):
        if coarse[i] <= coarse[i - 1] and coarse[i] <= coarse[i + 1]:
            res = minimize_scalar(
                lambda t: _pair_min_magnitude(p0, q, t),
                bounds=(taus[i - 1], taus[i + 1]),
                method="bounded",
                options={"xatol": 1e-12},
            )
            if res.fun < 1e-8 * scale:
                at = p0.combine(np.cos(res.x), q, np.sin(res.x))
                report = zero_set(at)
                crossings.append(SweepCrossing(float(res.x), report.zero_nodes, report.min_value))
    return GreatCircleSweep(taus, pairs, curves, indices, crossings)


def example_bifurcation_family(
    n: int = 257, s_values: np.ndarray | None = None
) -> tuple[list, list]:
    """Family of open curves crossing the non-immersion hypersurface.

    The pair e + i f = (x + i s)/sqrt(C) on x in [-pi, pi] with
    C = 2 pi^3 / 3 + 2 pi s^2 degenerates exactly at s = 0, where the image
    velocity has a double zero in the middle of the parameter interval.
    Returns (pairs, curves) over the given s values (default 9 values in
    [-1, 1] including 0).
    """
    if s_values is None:
        s_values = np.linspace(-1.0, 1.0, 9)
    x = np.linspace(-np.pi, np.pi, n)
    pairs = []
    curves = []
    for s in s_values:
        c_norm = 2.0 * np.pi**3 / 3.0 + 2.0 * np.pi * s**2
        z = (x + 1j * s) / np.sqrt(c_norm)
        pair = LiftPair(z.real, z.imag, "open")
        pairs.append(pair)
        curves.append(apply_phi(pair))
    return pairs, curves
