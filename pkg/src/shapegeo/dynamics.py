"""Direct integration of the geodesic equation on curves modulo translation.

The acceleration splits into four terms built from arc-length derivatives of
the velocity field:

    c_tt = -1/2 |c_t|_G^2 * Dsinv2(kappa n) - 1/2 Dsinv(|D_s c_t|^2 v)
           - avg(kappa <c_t, n>) c_t + Dsinv(<D_s c_t, v> D_s c_t)

with |c_t|_G^2 = (1/len) * integral |D_s c_t|^2 ds, Dsinv the arc-length
antiderivative and Dsinv2 = -D_s^{-2} the inverse of the positive second
derivative.  The four terms come from the two gradient forms of the metric's
derivative; the signs are pinned by the dilation orbit (c_t = c must give
c_tt = c) and validated against the explicit lifted geodesics (see tests).
For closed curves the antiderivatives act on the ds-mean-free projection,
which is part of the equation (the projected constant makes the
antiderivative periodic); the projection residual is monitored.  Open curves
integrate from the left endpoint, with the natural boundary condition on the
second-order solve.
"""

from dataclasses import dataclass

import numpy as np

from .curves import (
    CLOSED,
    OPEN,
    ArcData,
    PlaneCurve,
    build_arc_data,
    cdet,
    cdot,
    cumint_dtheta,
    default_eps_speed,
    ds_average,
    ds_operator,
    integrate_ds,
    integrate_dtheta,
)
from .errors import BadSetReached, NonZeroMean


def spectral_arc_data(curve: PlaneCurve, eps_speed: float | None = None) -> ArcData:
    """Arc data with spectral derivatives (closed curves).

    The geodesic flow conserves its momenta only to the accuracy of the
    spatial operators; the second-order differences of the general-purpose
    arc builder cap the conservation at O(N^-2), so the integrator uses
    spectral speed and curvature instead.  Falls back to the standard
    builder on open grids.
    """
    from .curves import dtheta
    from .errors import DegenerateSpeed

    if curve.topology != CLOSED:
        return build_arc_data(curve, eps_speed=eps_speed)
    c = curve.points
    ctheta = dtheta(c, CLOSED)
    cthth = dtheta(c, CLOSED, order=2)
    speed = np.abs(ctheta)
    length = float(integrate_dtheta(speed, CLOSED))
    eps = default_eps_speed(length, curve.n) if eps_speed is None else eps_speed
    if np.any(speed < eps):
        raise DegenerateSpeed("speed below threshold")
    alpha = np.unwrap(np.angle(ctheta))
    kappa = cdet(ctheta, cthth) / speed**3
    return ArcData(
        theta=curve.theta,
        topology=CLOSED,
        speed=speed,
        length=length,
        tangent_angle=alpha,
        curvature=kappa,
        rotation_index=None,
    )


@dataclass(frozen=True)
class GeodesicState:
    """Curve, velocity field and time along an integrated geodesic."""

    curve: PlaneCurve
    velocity: np.ndarray
    t: float

    def arc(self) -> ArcData:
        return spectral_arc_data(self.curve)

    def energy(self) -> float:
        """(1/len) integral |D_s c_t|^2 ds (constant along geodesics)."""
        arc = self.arc()
        dv = ds_operator(arc, self.velocity, 1)
        return float(integrate_ds(arc, np.abs(dv) ** 2)) / arc.length


def _project_mean(arc: ArcData, field: np.ndarray) -> tuple[np.ndarray, float]:
    """Remove the ds-mean; return the projected field and relative residual."""
    mean = integrate_ds(arc, field)
    norm = np.sqrt(np.abs(integrate_ds(arc, np.abs(field) ** 2)))
    rel = 0.0 if norm < 1e-300 else float(np.abs(mean) / (norm * np.sqrt(arc.length)))
    return field - mean / arc.length, rel


def _dsinv_closed(arc: ArcData, field: np.ndarray) -> tuple[np.ndarray, float]:
    proj, rel = _project_mean(arc, field)
    return ds_operator(arc, proj, -1), rel


def _inv2_closed(arc: ArcData, field: np.ndarray) -> tuple[np.ndarray, float]:
    proj, rel = _project_mean(arc, field)
    return ds_operator(arc, proj, -2), rel


def _dsinv_open(arc: ArcData, field: np.ndarray) -> np.ndarray:
    return cumint_dtheta(field * arc.speed, OPEN)


def _inv2_open_natural(arc: ArcData, field: np.ndarray) -> np.ndarray:
    """(-D_s^2)^{-1} with the free-boundary conditions of the variational
    problem on open curves: no flux at the far end, zero at the base point."""
    tail = cumint_dtheta(field * arc.speed, OPEN)
    tail = tail[-1] - tail
    return cumint_dtheta(tail * arc.speed, OPEN)


def geodesic_rhs(
    state: GeodesicState, mean_tol: float | None = 1e-6, arc: ArcData | None = None
) -> np.ndarray:
    """Acceleration of the geodesic flow at the given state.

    ``mean_tol`` bounds the tolerated relative ds-mean of the fields handed
    to the antiderivatives on closed curves (they vanish analytically;
    discretization leaves a residual that shrinks with resolution).
    """
    if arc is None:
        arc = spectral_arc_data(state.curve)
    ct = np.asarray(state.velocity, dtype=complex)
    v = ds_operator(arc, state.curve.points, 1)
    nvec = 1j * v
    kap = arc.curvature
    dct = ds_operator(arc, ct, 1)
    speed2 = np.abs(dct) ** 2
    tangential = cdot(dct, v)
    energy = float(integrate_ds(arc, speed2)) / arc.length
    avg_kn = float(ds_average(arc, kap * cdot(ct, nvec)))

    if state.curve.topology == CLOSED:
        sol_kn, r1 = _inv2_closed(arc, kap * nvec)
        term2, r2 = _dsinv_closed(arc, speed2 * v)
        term4, r3 = _dsinv_closed(arc, tangential * dct)
        resid = max(r1, r2, r3)
        if mean_tol is not None and resid > mean_tol:
            raise NonZeroMean(f"projection residual {resid:.3e} exceeds {mean_tol:.1e}")
    else:
        sol_kn = _inv2_open_natural(arc, kap * nvec)
        term2 = _dsinv_open(arc, speed2 * v)
        term4 = _dsinv_open(arc, tangential * dct)

    return 0.5 * energy * sol_kn - 0.5 * term2 - avg_kn * ct + term4


def momenta(state: GeodesicState) -> dict:
    """Conserved quantities: pointwise reparametrization momentum, angular
    and scaling momenta, plus the velocity energy."""
    arc = spectral_arc_data(state.curve)
    ct = np.asarray(state.velocity, dtype=complex)
    v = ds_operator(arc, state.curve.points, 1)
    d2ct = ds_operator(arc, ct, 2)
    reparam = -cdot(arc.speed * v, d2ct) * arc.speed / arc.length
    angular = float(integrate_ds(arc, arc.curvature * cdot(v, ct))) / arc.length
    scaling = -float(integrate_ds(arc, cdot(state.curve.points, d2ct))) / arc.length
    return {
        "reparam_field": reparam,
        "angular": angular,
        "scaling": scaling,
        "energy": state.energy(),
    }


def momentum_rhs(state: GeodesicState) -> np.ndarray:
    """Time derivative of the momentum u = -D_s^2 c_t in compact form.

    The curvature term enters with a plus sign: differentiating u along the
    four-term flow and checking the dilation orbit both force it.
    """
    arc = spectral_arc_data(state.curve)
    ct = np.asarray(state.velocity, dtype=complex)
    v = ds_operator(arc, state.curve.points, 1)
    u = -ds_operator(arc, ct, 2)
    dct = ds_operator(arc, ct, 1)
    phi = cdot(dct, v)
    speed2 = np.abs(dct) ** 2
    avg_phi = float(ds_average(arc, phi))
    avg_sp = float(ds_average(arc, speed2))
    kap_n = arc.curvature * (1j * v)
    return -cdot(u, dct) * v - (phi - avg_phi) * u + 0.5 * (speed2 + avg_sp) * kap_n


def integrate_geodesic(
    c0: PlaneCurve,
    v0: np.ndarray,
    t_final: float = 1.0,
    steps: int = 200,
    eps_speed: float | None = None,
    mean_tol: float | None = 1e-6,
) -> list:
    """Classical fixed-step RK4 for the geodesic flow.

    Returns the list of states at every step.  If a sample speed drops below
    ``eps_speed`` the metric has led the curve out of the immersions: the
    partial trajectory is attached to the BadSetReached exception.
    """
    from .errors import DegenerateSpeed

    c0 = PlaneCurve(c0.points, c0.topology, c0.base_point_fixed)
    v0 = np.asarray(v0, dtype=complex)
    states = [GeodesicState(c0, v0, 0.0)]
    dt = t_final / steps

    def rhs_pair(pts, vel, t):
        curve = PlaneCurve(pts, c0.topology, c0.base_point_fixed)
        arc = spectral_arc_data(curve, eps_speed=eps_speed)
        state = GeodesicState(curve, vel, t)
        return vel, geodesic_rhs(state, mean_tol=mean_tol, arc=arc)

    pts, vel = c0.points, v0
    for step in range(steps):
        t = step * dt
        try:
            k1p, k1v = rhs_pair(pts, vel, t)
            k2p, k2v = rhs_pair(pts + 0.5 * dt * k1p, vel + 0.5 * dt * k1v, t + 0.5 * dt)
            k3p, k3v = rhs_pair(pts + 0.5 * dt * k2p, vel + 0.5 * dt * k2v, t + 0.5 * dt)
            k4p, k4v = rhs_pair(pts + dt * k3p, vel + dt * k3v, t + dt)
            pts = pts + (dt / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
            vel = vel + (dt / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
            curve = PlaneCurve(pts, c0.topology, c0.base_point_fixed)
            spectral_arc_data(curve, eps_speed=eps_speed)  # immersion gate
        except DegenerateSpeed as ex:
            raise BadSetReached(f"left the immersions near t = {t:.6f}", states) from ex
        states.append(GeodesicState(curve, vel, (step + 1) * dt))
    return states


def horizontal_geodesic_rhs_scalar(state: GeodesicState, a: np.ndarray) -> np.ndarray:
    """Scalar evolution of the normal momentum density a (u = a n) along a
    horizontal geodesic."""
    arc = spectral_arc_data(state.curve)
    ct = np.asarray(state.velocity, dtype=complex)
    v = ds_operator(arc, state.curve.points, 1)
    dct = ds_operator(arc, ct, 1)
    phi = cdot(dct, v)
    speed2 = np.abs(dct) ** 2
    return -np.asarray(a, float) * (phi - float(ds_average(arc, phi))) + 0.5 * arc.curvature * (
        speed2 + float(ds_average(arc, speed2))
    )


def velocity_from_normal_momentum(curve: PlaneCurve, a: np.ndarray) -> np.ndarray:
    """Recover c_t from u = a n by inverting the positive second derivative
    (closed curves; the momentum is ds-mean-free up to discretization)."""
    arc = spectral_arc_data(curve)
    v = ds_operator(arc, curve.points, 1)
    u = np.asarray(a, float) * (1j * v)
    proj, _ = _project_mean(arc, u)
    return ds_operator(arc, proj, -2)


def integrate_horizontal(
    c0: PlaneCurve, a0: np.ndarray, t_final: float = 1.0, steps: int = 200
) -> list:
    """RK4 in the (curve, normal momentum density) variables; an alternative
    scheme for horizontal geodesics on closed curves."""
    pts = c0.points
    a = np.asarray(a0, dtype=float)
    out = []

    def rhs(pts, a):
        curve = PlaneCurve(pts, c0.topology, c0.base_point_fixed)
        ct = velocity_from_normal_momentum(curve, a)
        state = GeodesicState(curve, ct, 0.0)
        return ct, horizontal_geodesic_rhs_scalar(state, a)

    dt = t_final / steps
    for step in range(steps):
        curve = PlaneCurve(pts, c0.topology, c0.base_point_fixed)
        ct = velocity_from_normal_momentum(curve, a)
        out.append(GeodesicState(curve, ct, step * dt))
        k1p, k1a = rhs(pts, a)
        k2p, k2a = rhs(pts + 0.5 * dt * k1p, a + 0.5 * dt * k1a)
        k3p, k3a = rhs(pts + 0.5 * dt * k2p, a + 0.5 * dt * k2a)
        k4p, k4a = rhs(pts + dt * k3p, a + dt * k3a)
        pts = pts + (dt / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        a = a + (dt / 6.0) * (k1a + 2 * k2a + 2 * k3a + k4a)
    curve = PlaneCurve(pts, c0.topology, c0.base_point_fixed)
    out.append(GeodesicState(curve, velocity_from_normal_momentum(curve, a), t_final))
    return out
