import numpy as np
import pytest
from scipy.special import ellipe

from conftest import TWO_PI, blob_curve, circle_curve, ellipse_curve, kink_curve, segment_curve

from shapegeo import CLOSED, OPEN, PlaneCurve, build_arc_data, ds_operator, normalize, resample_by_arclength
from shapegeo.curves import integrate_ds, theta_grid
from shapegeo.errors import DegenerateSpeed, NonZeroMean, UnwrapAmbiguous


def test_circle_arc_data():
    n = 256
    th = theta_grid(n, CLOSED)
    curve = PlaneCurve(np.exp(1j * th) / TWO_PI, CLOSED)
    arc = build_arc_data(curve)
    assert abs(arc.length - 1.0) < 1e-3
    assert np.max(np.abs(arc.curvature - TWO_PI)) / TWO_PI < 1e-3
    assert np.max(np.abs(arc.tangent_angle - (th + np.pi / 2))) < 1e-3
    assert arc.rotation_index == 1


def test_segment_arc_data():
    curve = segment_curve(256)
    arc = build_arc_data(curve)
    assert np.max(np.abs(arc.curvature)) < 1e-8
    assert np.max(np.abs(arc.tangent_angle)) < 1e-10
    assert arc.rotation_index is None


def test_ellipse_curvature_extrema():
    a, b = 2.0, 1.0
    curve = ellipse_curve(512, a, b)
    arc = build_arc_data(curve)
    perim = 4.0 * a * ellipe(1.0 - b**2 / a**2)
    # unit-length scaling multiplies curvature by the original perimeter
    kmax_true = a / b**2 * perim
    kmin_true = b / a**2 * perim
    assert abs(arc.curvature.max() - kmax_true) / kmax_true < 1e-2
    assert abs(arc.curvature.min() - kmin_true) / kmin_true < 1e-2


def test_resample_circle_fixed_point():
    curve = circle_curve(256)
    out = resample_by_arclength(curve)
    assert np.max(np.abs(out.points - curve.points)) < 1e-9


def test_resample_flattens_speed():
    n = 256
    th = theta_grid(n, CLOSED)
    warped = th + 0.4 * np.sin(th)  # nonuniform sampling of the circle
    curve = PlaneCurve(np.exp(1j * warped) / TWO_PI, CLOSED)
    out = resample_by_arclength(curve)
    arc = build_arc_data(out)
    mean = arc.length / TWO_PI
    assert np.max(np.abs(arc.speed - mean)) / mean < 1e-3


def test_resample_preserves_length():
    curve = blob_curve(200, seed=7)
    # dense polyline oracle for the length of the geometric image
    from scipy.interpolate import CubicSpline

    th = np.append(curve.theta, TWO_PI)
    pts = np.append(curve.points, curve.points[0])
    dense = CubicSpline(th, pts, bc_type="periodic")(np.linspace(0, TWO_PI, 20001))
    oracle = np.sum(np.abs(np.diff(dense)))
    out = resample_by_arclength(curve, 400)
    assert abs(build_arc_data(out).length - oracle) / oracle < 1e-4


def test_normalize():
    n = 256
    th = theta_grid(n, CLOSED)
    curve = PlaneCurve(np.exp(1j * th) + (2.0 + 1.0j), CLOSED)
    out = normalize(curve)
    assert abs(build_arc_data(out).length - 1.0) < 1e-9
    assert out.points[0] == 0.0
    again = normalize(out)
    assert np.max(np.abs(again.points - out.points)) < 1e-12
    blob = blob_curve(256, seed=3)
    moved = PlaneCurve(blob.points * 3.0 + (1 - 2j), CLOSED)
    out = normalize(moved)
    assert abs(build_arc_data(out).length - 1.0) < 1e-9
    assert out.points[0] == 0.0


def test_ds_operator_unit_tangent():
    curve = blob_curve(256, seed=1)
    arc = build_arc_data(curve)
    v = ds_operator(arc, curve.points, 1)
    assert np.max(np.abs(np.abs(v) - 1.0)) < 1e-3


def test_ds_operator_inverse_pair():
    curve = blob_curve(256, seed=2)
    arc = build_arc_data(curve)
    th = curve.theta
    f = np.sin(3 * th) + 0.2 * np.cos(5 * th)
    f = f - integrate_ds(arc, f) / arc.length
    back = ds_operator(arc, ds_operator(arc, f, 1), -1)
    assert np.max(np.abs(back - f)) < 1e-6


def test_ds_operator_eigenvalues():
    curve = circle_curve(512)
    arc = build_arc_data(resample_by_arclength(curve))
    th = curve.theta
    for k in (1, 2, 3, 4, 5):
        u = np.exp(1j * k * th)
        lam = -ds_operator(arc, ds_operator(arc, u, 1), 1) / u
        assert np.max(np.abs(lam.real - (TWO_PI * k) ** 2)) / (TWO_PI * k) ** 2 < 1e-3


def test_ds_operator_self_adjoint():
    curve = blob_curve(256, seed=5)
    arc = build_arc_data(curve)
    rng = np.random.default_rng(0)
    u = rng.standard_normal(curve.n)
    w = rng.standard_normal(curve.n)
    lhs = integrate_ds(arc, -ds_operator(arc, u, 2) * w)
    rhs = integrate_ds(arc, ds_operator(arc, u, 1) * ds_operator(arc, w, 1))
    assert abs(lhs - rhs) / abs(rhs) < 1e-8


def test_ds_operator_inv2_solves():
    curve = blob_curve(256, seed=6)
    arc = build_arc_data(curve)
    th = curve.theta
    u = np.cos(2 * th) + 0.5 * np.sin(3 * th)
    u = u - integrate_ds(arc, u) / arc.length
    # manufactured right-hand side from the compact forward map is recovered
    f = -ds_operator(arc, ds_operator(arc, u, 1), 1)
    f = f - integrate_ds(arc, f) / arc.length
    sol = ds_operator(arc, f, -2)
    assert np.max(np.abs(sol - u)) / np.max(np.abs(u)) < 5e-3


def test_quadrature_length_convergence():
    lengths = {}
    for n in (128, 256, 512):
        lengths[n] = build_arc_data(blob_curve(n, seed=11)).length
    ref = build_arc_data(blob_curve(2048, seed=11)).length
    e1 = abs(lengths[128] - ref)
    e2 = abs(lengths[256] - ref)
    e3 = abs(lengths[512] - ref)
    order = np.log(e1 / e3) / np.log(4.0)
    assert order > 2.0 or e3 < 1e-10


def test_rotation_index_stability():
    curve = blob_curve(256, seed=4)
    idx = build_arc_data(curve).rotation_index
    assert idx == 1
    assert build_arc_data(resample_by_arclength(curve, 384)).rotation_index == idx
    rotated = PlaneCurve(np.exp(1j * 1.1) * curve.points, CLOSED)
    assert build_arc_data(rotated).rotation_index == idx


def test_degenerate_speed_raises():
    n = 256
    th = theta_grid(n, CLOSED)
    pts = np.cos(th) + 0j  # flat segment: velocity vanishes at the turning points
    with pytest.raises((DegenerateSpeed, UnwrapAmbiguous)):
        build_arc_data(PlaneCurve(pts, CLOSED))


def test_unwrap_ambiguous_raises():
    # craft samples whose centered differences reverse direction by ~pi
    # between adjacent nodes
    n = 64
    h = TWO_PI / (n - 1)
    alpha = np.where(np.arange(n) < n // 2, 0.0, np.pi * 0.9999)
    d = np.exp(1j * alpha)
    pts = np.zeros(n, dtype=complex)
    pts[1] = h * d[0]
    for i in range(1, n - 1):
        pts[i + 1] = pts[i - 1] + 2 * h * d[i]
    with pytest.raises(UnwrapAmbiguous):
        build_arc_data(PlaneCurve(pts, OPEN))


def test_nonzero_mean_raises():
    curve = blob_curve(256, seed=8)
    arc = build_arc_data(curve)
    with pytest.raises(NonZeroMean):
        ds_operator(arc, np.ones(curve.n), -1)


def test_kink_distance_geometry():
    curve = kink_curve(0.0, np.pi / 3)
    arc = build_arc_data(curve)
    # away from the kink the curvature vanishes
    quarter = curve.n // 4
    assert np.max(np.abs(arc.curvature[:quarter])) < 1e-6
    assert np.max(np.abs(arc.curvature[-quarter:])) < 1e-6
