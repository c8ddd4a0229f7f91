import numpy as np
import pytest

from shapegeo import CLOSED, OPEN, PlaneCurve, normalize, resample_by_arclength
from shapegeo.curves import integrate_dtheta, theta_grid

TWO_PI = 2.0 * np.pi


def circle_curve(n=256, alpha_is_theta=True):
    """Unit-length circle, normalized.  With ``alpha_is_theta`` the velocity
    direction is exp(i theta) (tangent angle = theta); otherwise the plain
    exp(i theta)/2pi circle (tangent angle theta + pi/2)."""
    th = theta_grid(n, CLOSED)
    if alpha_is_theta:
        pts = -1j * (np.exp(1j * th) - 1.0) / TWO_PI
    else:
        pts = np.exp(1j * th) / TWO_PI
    return normalize(PlaneCurve(pts, CLOSED))


def ellipse_curve(n=256, a=2.0, b=1.0):
    th = theta_grid(n, CLOSED)
    return normalize(resample_by_arclength(PlaneCurve(a * np.cos(th) + 1j * b * np.sin(th), CLOSED)))


def blob_curve(n=256, seed=0, modes=3, amp=0.25):
    """Smooth random star-shaped closed curve, arc length, unit length."""
    rng = np.random.default_rng(seed)
    th = theta_grid(n, CLOSED)
    r = np.ones(n)
    for k in range(2, 2 + modes):
        r += amp / k * (rng.standard_normal() * np.cos(k * th) + rng.standard_normal() * np.sin(k * th))
    return normalize(resample_by_arclength(PlaneCurve(r * np.exp(1j * th), CLOSED)))


def segment_curve(n=256):
    th = np.linspace(0.0, TWO_PI, n)
    return normalize(PlaneCurve(th / TWO_PI + 0j, OPEN))


def kink_curve(angle0, angle1, n=257):
    """Two straight arms of equal parameter length with tangent angles
    angle0 and angle1, unit speed, unit length."""
    th = np.linspace(0.0, TWO_PI, n)
    alpha = np.where(th < np.pi, angle0, angle1)
    z = np.exp(1j * alpha) / TWO_PI
    pts = np.concatenate([[0.0], np.cumsum(0.5 * (z[1:] + z[:-1]) * np.diff(th))])
    return normalize(PlaneCurve(pts, OPEN))


def bandlimited_field(n, seed, kmax=5, topology=CLOSED, zero_base=True):
    """Smooth complex perturbation field on the grid, vanishing at theta=0."""
    rng = np.random.default_rng(seed)
    th = theta_grid(n, topology)
    h = np.zeros(n, dtype=complex)
    for k in range(1, kmax + 1):
        coef = (rng.standard_normal(4) / k).astype(float)
        h += (coef[0] + 1j * coef[1]) * np.exp(1j * k * th) + (coef[2] + 1j * coef[3]) * np.exp(-1j * k * th)
    if zero_base:
        h = h - h[0]
    return h


def antiperiodic_modes(n, seed, kmax=6):
    """Random band-limited function with half-integer frequencies (the odd
    parity function space)."""
    rng = np.random.default_rng(seed)
    th = theta_grid(n, CLOSED)
    out = np.zeros(n)
    for k in range(kmax):
        out += rng.standard_normal() * np.cos((k + 0.5) * th) + rng.standard_normal() * np.sin((k + 0.5) * th)
    return out


def project_off(x, basis, topology=CLOSED):
    for b in basis:
        x = x - integrate_dtheta(x * b, topology) / integrate_dtheta(b * b, topology) * b
    return x


def orthonormal_tangent_pair(pair, seed, kmax=6):
    """Two orthonormal lift tangents orthogonal to the base pair (hence
    tangent to the frames and horizontal for rotations)."""
    fields = []
    s = seed
    while len(fields) < 4:
        g = project_off(antiperiodic_modes(pair.n, s, kmax), [pair.e, pair.f])
        s += 1
        if integrate_dtheta(g * g, CLOSED) > 1e-6:
            fields.append(g)
    a, b, c, d = fields
    n1 = np.sqrt(integrate_dtheta(a * a + b * b, CLOSED))
    a, b = a / n1, b / n1
    ip = integrate_dtheta(a * c + b * d, CLOSED)
    c, d = c - ip * a, d - ip * b
    n2 = np.sqrt(integrate_dtheta(c * c + d * d, CLOSED))
    return a, b, c / n2, d / n2


@pytest.fixture(scope="session")
def circle256():
    return circle_curve(256)


@pytest.fixture(scope="session")
def circle512():
    return circle_curve(512)


@pytest.fixture(scope="session")
def ellipse256():
    return ellipse_curve(256)


@pytest.fixture(scope="session")
def ellipse512():
    return ellipse_curve(512)
