"""Discrete plane curves with arc-length geometry.

Curves are sampled on a uniform parameter grid over one period.  Closed
curves use theta_i = 2*pi*i/N and are treated periodically; open curves
include both endpoints, theta_i = 2*pi*i/(N-1).  All quadrature is
trapezoidal (which coincides with the spectrally accurate rectangle rule in
the periodic case); parameter derivatives are spectral for closed curves and
second-order finite differences for open ones, except where noted.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateSpeed, GridMismatch, NonZeroMean, UnwrapAmbiguous

OPEN = "open"
CLOSED = "closed"

TWO_PI = 2.0 * np.pi

# wrapped tangent-angle increments within this margin of pi are ambiguous
UNWRAP_MARGIN = 1e-3


def theta_grid(n: int, topology: str) -> np.ndarray:
    if topology == CLOSED:
        return np.arange(n) * (TWO_PI / n)
    return np.linspace(0.0, TWO_PI, n)


@dataclass(frozen=True)
class PlaneCurve:
    """Immersed plane curve given by complex samples on the uniform grid."""

    points: np.ndarray
    topology: str = CLOSED
    base_point_fixed: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 8:
            raise ValueError("need at least 8 complex samples on a 1-d grid")
        if self.topology not in (OPEN, CLOSED):
            raise ValueError(f"topology must be {OPEN!r} or {CLOSED!r}")

    @property
    def n(self) -> int:
        return self.points.size

    @property
    def theta(self) -> np.ndarray:
        return theta_grid(self.n, self.topology)

    def with_points(self, points: np.ndarray) -> "PlaneCurve":
        return replace(self, points=np.asarray(points, dtype=complex))


@dataclass(frozen=True)
class ArcData:
    """Arc-length data of a curve: speed, length, tangent angle, curvature.

    ``tangent_angle`` is a continuous unwrapped lift of arg(c_theta); for
    closed curves it gains 2*pi*rotation_index over one period.  ``r`` is an
    alias for ``speed`` (the radial factor in c' = r * exp(i*alpha)).
    """

    theta: np.ndarray
    topology: str
    speed: np.ndarray
    length: float
    tangent_angle: np.ndarray
    curvature: np.ndarray
    rotation_index: int | None = None
    _dsinv2_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def r(self) -> np.ndarray:
        return self.speed

    @property
    def n(self) -> int:
        return self.theta.size

    @property
    def dtheta_spacing(self) -> float:
        return TWO_PI / self.n if self.topology == CLOSED else TWO_PI / (self.n - 1)


# ---------------------------------------------------------------------------
# grid derivatives and quadrature


def dtheta(fieldvals: np.ndarray, topology: str, order: int = 1) -> np.ndarray:
    """Parameter derivative: spectral for closed grids, FD for open ones."""
    f = np.asarray(fieldvals)
    n = f.size
    if topology == CLOSED:
        k = np.fft.fftfreq(n, d=1.0 / n) * 1j
        if n % 2 == 0:
            k[n // 2] = 0.0  # drop the Nyquist mode: keeps D exactly skew
        out = np.fft.ifft(np.fft.fft(f) * k**order)
        return out if np.iscomplexobj(f) else out.real
    h = TWO_PI / (n - 1)
    if order == 1:
        return np.gradient(f, h, edge_order=2)
    out = f
    for _ in range(order):
        out = np.gradient(out, h, edge_order=2)
    return out


def dtheta_fd(fieldvals: np.ndarray, topology: str) -> np.ndarray:
    """Centered second-order first derivative (periodic wrap when closed)."""
    f = np.asarray(fieldvals)
    n = f.size
    if topology == CLOSED:
        h = TWO_PI / n
        return (np.roll(f, -1) - np.roll(f, 1)) / (2.0 * h)
    return np.gradient(f, TWO_PI / (n - 1), edge_order=2)


def d2theta_fd(fieldvals: np.ndarray, topology: str) -> np.ndarray:
    """Centered second-order second derivative."""
    f = np.asarray(fieldvals)
    n = f.size
    if topology == CLOSED:
        h = TWO_PI / n
        return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / h**2
    h = TWO_PI / (n - 1)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h**2
    out[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h**2
    out[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h**2
    return out


def integrate_dtheta(fieldvals: np.ndarray, topology: str) -> float | complex:
    """Trapezoid integral over one parameter period."""
    f = np.asarray(fieldvals)
    n = f.size
    if topology == CLOSED:
        return f.sum() * (TWO_PI / n)
    return np.trapezoid(f, dx=TWO_PI / (n - 1))


def cumint_dtheta(fieldvals: np.ndarray, topology: str) -> np.ndarray:
    """Cumulative trapezoid antiderivative from theta = 0.

    For closed grids the increment from the last node back to the first is
    included implicitly through the periodic extension; the result has the
    same length as the input and starts at 0.
    """
    f = np.asarray(fieldvals)
    n = f.size
    if topology == CLOSED:
        h = TWO_PI / n
        mid = 0.5 * (f + np.roll(f, -1)) * h
        out = np.concatenate(([0.0], np.cumsum(mid[:-1])))
        return out.astype(f.dtype) if np.iscomplexobj(f) else out
    h = TWO_PI / (n - 1)
    mid = 0.5 * (f[1:] + f[:-1]) * h
    out = np.concatenate(([0.0], np.cumsum(mid)))
    return out.astype(f.dtype) if np.iscomplexobj(f) else out


def integrate_ds(arc: ArcData, fieldvals: np.ndarray) -> float | complex:
    return integrate_dtheta(np.asarray(fieldvals) * arc.speed, arc.topology)


def ds_average(arc: ArcData, fieldvals: np.ndarray) -> float | complex:
    return integrate_ds(arc, fieldvals) / arc.length


def cdot(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Real inner product of plane vectors stored as complex numbers."""
    return (np.conj(x) * y).real


def cdet(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """2x2 determinant of plane vectors stored as complex numbers."""
    return (np.conj(x) * y).imag


# ---------------------------------------------------------------------------
# arc-length data


def default_eps_speed(length: float, n: int) -> float:
    return 1e-12 * length / n


def build_arc_data(curve: PlaneCurve, eps_speed: float | None = None) -> ArcData:
    """Speed, length, continuous tangent angle and curvature of a curve.

    Velocity and acceleration use centered second-order differences (periodic
    wrap for closed curves, one-sided stencils at open ends); the length is
    the trapezoid rule applied to the speed.
    """
    c = curve.points
    ctheta = dtheta_fd(c, curve.topology)
    cthth = d2theta_fd(c, curve.topology)
    speed = np.abs(ctheta)
    length = float(integrate_dtheta(speed, curve.topology))
    eps = default_eps_speed(length, curve.n) if eps_speed is None else eps_speed
    if np.any(speed < eps):
        bad = np.flatnonzero(speed < eps)
        raise DegenerateSpeed(f"speed below {eps:.3e} at {bad.size} node(s), first at index {bad[0]}")

    alpha = np.unwrap(np.angle(ctheta))
    steps = np.diff(alpha)
    if np.any(np.abs(steps) > np.pi - UNWRAP_MARGIN):
        raise UnwrapAmbiguous("tangent angle jumps by nearly pi between samples; resample finer")

    rotation_index = None
    if curve.topology == CLOSED:
        gap = np.angle(np.exp(1j * (np.angle(ctheta[0]) - alpha[-1])))
        if abs(gap) > np.pi - UNWRAP_MARGIN:
            raise UnwrapAmbiguous("tangent angle wrap increment is ambiguous; resample finer")
        rotation_index = int(np.rint((alpha[-1] + gap - alpha[0]) / TWO_PI))

    kappa = cdet(ctheta, cthth) / speed**3
    return ArcData(
        theta=curve.theta,
        topology=curve.topology,
        speed=speed,
        length=length,
        tangent_angle=alpha,
        curvature=kappa,
        rotation_index=rotation_index,
    )


def resample_by_arclength(curve: PlaneCurve, n: int | None = None) -> PlaneCurve:
    """Resample so the parameter is proportional to arc length.

    The geometric image is preserved (cubic-spline interpolation through the
    input samples); the base point c(theta=0) is kept.
    """
    n_out = curve.n if n is None else int(n)
    theta = curve.theta
    if curve.topology == CLOSED:
        th_ext = np.append(theta, TWO_PI)
        pts_ext = np.append(curve.points, curve.points[0])
        spline = CubicSpline(th_ext, pts_ext, bc_type="periodic")
    else:
        spline = CubicSpline(theta, curve.points)

    dense = np.linspace(0.0, TWO_PI, 16 * curve.n + 1)
    speed_dense = np.abs(spline(dense, 1))
    if np.any(speed_dense <= 0):
        raise DegenerateSpeed("zero interpolated speed during arclength resampling")
    seg = 0.5 * (speed_dense[1:] + speed_dense[:-1]) * np.diff(dense)
    s_dense = np.concatenate(([0.0], np.cumsum(seg)))
    total = s_dense[-1]

    if curve.topology == CLOSED:
        s_targets = total * np.arange(n_out) / n_out
    else:
        s_targets = total * np.arange(n_out) / (n_out - 1)
    theta_new = np.interp(s_targets, s_dense, dense)
    return PlaneCurve(spline(theta_new), curve.topology, curve.base_point_fixed)


def normalize(curve: PlaneCurve, fix: str = "both") -> PlaneCurve:
    """Pin translation (c(0) = 0) and/or scale (unit length)."""
    if fix not in ("translation", "scale", "both"):
        raise ValueError("fix must be translation|scale|both")
    pts = curve.points
    if fix in ("scale", "both"):
        pts = pts / build_arc_data(curve).length
    fixed = curve.base_point_fixed
    if fix in ("translation", "both"):
        pts = pts - pts[0]
        fixed = True
    return PlaneCurve(pts, curve.topology, fixed)


# ---------------------------------------------------------------------------
# arc-length differential operators


def _dsinv2_closed(arc: ArcData, f: np.ndarray) -> np.ndarray:
    """Solve the compact cyclic SPD discretization of -D_s^2 u = f, zero ds-mean.

    The constant kernel mode is handled by a symmetric bordered system so the
    solve is restricted to the zero-ds-mean subspace.
    """
    n = arc.n
    h = arc.dtheta_spacing
    key = "dsinv2_lu"
    if key not in arc._dsinv2_cache:
        w = arc.speed
        wh = 0.5 * (w + np.roll(w, -1))  # midpoint speeds
        lower = -1.0 / (wh * h)  # coupling of node i to node i+1
        diag = 1.0 / (wh * h) + 1.0 / (np.roll(wh, 1) * h)
        m = np.zeros((n + 1, n + 1))
        idx = np.arange(n)
        m[idx, idx] = diag
        m[idx, (idx + 1) % n] = lower
        m[(idx + 1) % n, idx] = lower
        m[:n, n] = w * h
        m[n, :n] = w * h
        from scipy.linalg import lu_factor

        arc._dsinv2_cache[key] = lu_factor(m)
    from scipy.linalg import lu_solve

    lu = arc._dsinv2_cache[key]
    rhs = np.zeros(n + 1, dtype=complex if np.iscomplexobj(f) else float)
    rhs[:n] = f * arc.speed * h  # weak form against the ds weights
    if np.iscomplexobj(f):
        sol = lu_solve(lu, rhs.real) + 1j * lu_solve(lu, rhs.imag)
    else:
        sol = lu_solve(lu, rhs)
    return sol[:n]


def ds_operator(arc: ArcData, fieldvals: np.ndarray, order: int) -> np.ndarray:
    """Apply D_s (order +1), D_s^2 (+2), or invert: -D_s^{-1} is not offered,
    order -1 returns the ds-antiderivative with zero ds-mean (from the left
    endpoint for open curves) and order -2 inverts the positive operator
    -D_s^2 on the zero-ds-mean subspace (double antiderivative for open).
    """
    f = np.asarray(fieldvals)
    if f.size != arc.n:
        raise GridMismatch("field and arc data sampled on different grids")
    if order == 1:
        return dtheta(f, arc.topology) / arc.speed
    if order == 2:
        return ds_operator(arc, ds_operator(arc, f, 1), 1)
    if order in (-1, -2):
        if arc.topology == CLOSED:
            mean = integrate_ds(arc, f)
            if np.abs(mean) > 1e-8 * np.sqrt(np.abs(integrate_ds(arc, np.abs(f) ** 2))):
                raise NonZeroMean(f"ds-mean {np.abs(mean):.3e} too large for periodic antiderivative")
            f = f - mean / arc.length
        if order == -1:
            if arc.topology == CLOSED:
                g = f * arc.speed
                n = g.size
                k = np.fft.fftfreq(n, d=1.0 / n) * 1j
                coef = np.fft.fft(g)
                coef[0] = 0.0
                with np.errstate(divide="ignore", invalid="ignore"):
                    coef[1:] = coef[1:] / k[1:]
                if n % 2 == 0:
                    coef[n // 2] = 0.0
                out = np.fft.ifft(coef)
                g = out if np.iscomplexobj(f) else out.real
                return g - ds_average(arc, g)
            return cumint_dtheta(f * arc.speed, OPEN)
        if arc.topology == CLOSED:
            return _dsinv2_closed(arc, f)
        return -cumint_dtheta(cumint_dtheta(f * arc.speed, OPEN) * arc.speed, OPEN)
    raise ValueError("order must be one of +1, +2, -1, -2")


def metric_inner(arc: ArcData, h: np.ndarray, k: np.ndarray) -> float:
    """Scale-invariant first-order inner product of tangent fields.

    Normalized so the square-root lift is an exact isometry onto the sphere
    and Stiefel manifolds carrying their plain L2 metric.
    """
    dh = ds_operator(arc, h, 1)
    dk = ds_operator(arc, k, 1)
    return float(integrate_ds(arc, cdot(dh, dk))) / (2.0 * arc.length)


def metric_norm2(arc: ArcData, h: np.ndarray) -> float:
    return metric_inner(arc, h, h)
