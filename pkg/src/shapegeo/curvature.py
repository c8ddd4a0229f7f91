"""Sectional curvature of the lifted shape spaces and its descent corrections.

Everything uses the inner-product normalization under which the square-root
lift is an exact isometry (see ``curves.metric_inner``): on that scale the
plane-space curvature lies in [0, 2], the frame-space curvature differs from
it by the rotation-descent term, and the correction for dividing out
reparametrizations is (3/4) times a quadratic form in the inverse of the
order-two operator b -> -D_s^2 b + kappa^2 b.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh

from .backend import njit, prange, using_numba
from .curves import (
    CLOSED,
    ArcData,
    PlaneCurve,
    build_arc_data,
    cdet,
    cdot,
    ds_average,
    ds_operator,
    integrate_ds,
    integrate_dtheta,
    metric_inner,
)
from .errors import CircleSingular, DegeneratePlane, NotHorizontal, NotOrthonormal
from .lift import LiftPair

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# lift-side tangent pairs


@dataclass(frozen=True)
class TangentPair:
    """Two tangent vectors Y_i = (de_i, df_i) at a lifted pair."""

    base: LiftPair
    de1: np.ndarray
    df1: np.ndarray
    de2: np.ndarray
    df2: np.ndarray

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(integrate_dtheta(x * y, self.base.topology))

    def gram(self) -> np.ndarray:
        g11 = self.inner(self.de1, self.de1) + self.inner(self.df1, self.df1)
        g22 = self.inner(self.de2, self.de2) + self.inner(self.df2, self.df2)
        g12 = self.inner(self.de1, self.de2) + self.inner(self.df1, self.df2)
        return np.array([[g11, g12], [g12, g22]])

    def orthonormal_defect(self) -> float:
        return float(np.max(np.abs(self.gram() - np.eye(2))))

    def rotation_horizontal_defect(self) -> float:
        e, f = self.base.e, self.base.f
        vals = [
            self.inner(d, b)
            for d in (self.de1, self.df1, self.de2, self.df2)
            for b in (e, f)
        ]
        return float(np.max(np.abs(vals)))


def _check_orthonormal(tp: TangentPair, tol: float = 1e-6):
    if tp.orthonormal_defect() > tol:
        raise NotOrthonormal(f"tangent pair Gram defect {tp.orthonormal_defect():.2e}")


def _quad_weights(n: int, topology: str) -> np.ndarray:
    if topology == CLOSED:
        return np.full(n, TWO_PI / n)
    w = np.full(n, TWO_PI / (n - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


# ---------------------------------------------------------------------------
# O(N^2) kernels: numba loops with a vectorized numpy fallback


@njit(cache=True, parallel=True)
def _wedge_norm2_loops(a1, a2, b1, b2, w):
    n = a1.shape[0]
    total = 0.0
    for i in prange(n):
        acc = 0.0
        for j in range(n):
            t = a1[i] * a2[j] - a2[i] * a1[j] + b1[i] * b2[j] - b2[i] * b1[j]
            acc += t * t * w[j]
        total += acc * w[i]
    return total


def _wedge_norm2_numpy(a1, a2, b1, b2, w):
    t = np.outer(a1, a2) - np.outer(a2, a1) + np.outer(b1, b2) - np.outer(b2, b1)
    return float(np.einsum("ij,i,j->", t * t, w, w))


def wedge_norm2(a1, a2, b1, b2, w):
    """|| a1 ^ a2 + b1 ^ b2 ||^2 as a double quadrature sum."""
    if using_numba():
        return float(_wedge_norm2_loops(a1, a2, b1, b2, w))
    return _wedge_norm2_numpy(a1, a2, b1, b2, w)


@njit(cache=True, parallel=True)
def _immersion_terms_loops(a_re, a_im, b_re, b_im, alpha, w):
    n = a_re.shape[0]
    term1 = 0.0
    term2 = 0.0
    cross = 0.0
    for i in prange(n):
        acc1 = 0.0
        acc2 = 0.0
        accx = 0.0
        for j in range(n):
            dot_ij = a_re[i] * b_re[j] + a_im[i] * b_im[j]
            dot_ji = b_re[i] * a_re[j] + b_im[i] * a_im[j]
            det_ij = a_re[i] * b_im[j] - a_im[i] * b_re[j]
            det_ji = b_re[i] * a_im[j] - b_im[i] * a_re[j]
            da = alpha[i] - alpha[j]
            ker = np.cos(da)
            p = dot_ij - dot_ji
            q = det_ij - det_ji
            acc1 += 0.5 * (1.0 + ker) * p * p * w[j]
            acc2 += 0.5 * (1.0 - ker) * q * q * w[j]
            accx += np.sin(da) * p * q * w[j]
        term1 += acc1 * w[i]
        term2 += acc2 * w[i]
        cross += accx * w[i]
    return term1, term2, cross


def _immersion_terms_numpy(a_re, a_im, b_re, b_im, alpha, w):
    dot = np.outer(a_re, b_re) + np.outer(a_im, b_im)
    det = np.outer(a_re, b_im) - np.outer(a_im, b_re)
    p = dot - dot.T
    q = det + det.T  # det(Dh2(x), Dh1(y)) = -det(Dh1(y), Dh2(x))
    da = np.subtract.outer(alpha, alpha)
    ker = np.cos(da)
    term1 = float(np.einsum("ij,i,j->", 0.5 * (1.0 + ker) * p * p, w, w))
    term2 = float(np.einsum("ij,i,j->", 0.5 * (1.0 - ker) * q * q, w, w))
    cross = float(np.einsum("ij,i,j->", np.sin(da) * p * q, w, w))
    return term1, term2, cross


def immersion_double_terms(dh1: np.ndarray, dh2: np.ndarray, alpha: np.ndarray, w: np.ndarray):
    """Double quadratures of the transported wedge norm over the curve
    squared: the two half-angle-cosine kernel terms plus the mixed term.

    The mixed term (even, not odd, under swapping the two curve points) is
    part of the exact expansion of the single squared kernel; the three
    together equal the lift-side wedge norm under the dictionary.
    """
    args = (dh1.real, dh1.imag, dh2.real, dh2.imag, np.asarray(alpha, float), np.asarray(w, float))
    if using_numba():
        t1, t2, cx = _immersion_terms_loops(*args)
        return float(t1), float(t2), float(cx)
    return _immersion_terms_numpy(*args)


# ---------------------------------------------------------------------------
# lift-side sectional curvatures


def curvature_grassmann(tp: TangentPair, check: bool = True) -> float:
    """Sectional curvature of the plane space at the spanned 2-plane.

    Equals (<de1,df2> - <de2,df1>)^2 plus half the squared norm of
    de1 ^ de2 + df1 ^ df2; the inputs must be orthonormal and orthogonal to
    the base pair (horizontal for rotations).
    """
    if check:
        _check_orthonormal(tp)
        if tp.rotation_horizontal_defect() > 1e-6:
            raise NotHorizontal("pair is not horizontal for the rotation action")
    skew = tp.inner(tp.de1, tp.df2) - tp.inner(tp.de2, tp.df1)
    w = _quad_weights(tp.base.n, tp.base.topology)
    return float(skew**2 + 0.5 * wedge_norm2(tp.de1, tp.de2, tp.df1, tp.df2, w))


def curvature_stiefel(tp: TangentPair, check: bool = True) -> float:
    """Sectional curvature of the orthonormal-pair space (inner-product
    closed form)."""
    if check:
        _check_orthonormal(tp)
    ip = tp.inner
    a = ip(tp.de1, tp.df2)
    b = ip(tp.df1, tp.de2)
    return float(
        ip(tp.de1, tp.de1) * ip(tp.de2, tp.de2)
        + ip(tp.df1, tp.df1) * ip(tp.df2, tp.df2)
        + 2.0 * ip(tp.de1, tp.df1) * ip(tp.de2, tp.df2)
        - ip(tp.de1, tp.de2) ** 2
        - ip(tp.df1, tp.df2) ** 2
        - 0.5 * (a + b) ** 2
    )


def curvature_stiefel_tensor_form(tp: TangentPair) -> float:
    """Same quantity through the wedge double sum (the second closed form)."""
    w = _quad_weights(tp.base.n, tp.base.topology)
    skew = tp.inner(tp.de1, tp.df2) - tp.inner(tp.de2, tp.df1)
    return float(0.5 * wedge_norm2(tp.de1, tp.de2, tp.df1, tp.df2, w) - 0.5 * skew**2)


def oneill_rotation_term(tp: TangentPair) -> float:
    """Descent term linking the frame-space and plane-space curvatures:
    (3/2) (<de1,df2> - <df1,de2>)^2 on rotation-horizontal pairs."""
    a = tp.inner(tp.de1, tp.df2)
    b = tp.inner(tp.df1, tp.de2)
    return float(1.5 * (a - b) ** 2)


def unscaled_stiefel_curvature(
    tp: TangentPair, scale_components: tuple[float, float], scale: float = 1.0
) -> float:
    """Curvature of the unscaled frame space (product of scalings and frames).

    ``scale_components`` are the scaling parts (lambda_1, lambda_2) of the
    two tangent vectors whose frame parts sit in ``tp``; ``scale`` is the
    base length.  The scaling factor is flat, so the curvature tensor acts
    through the frame parts alone and the Gram determinant of the combined
    vectors normalizes the plane.
    """
    l1, l2 = scale_components
    quad = curvature_stiefel(tp, check=False)  # unnormalized Gauss quadriform
    g = tp.gram()
    n1 = l1**2 / (2.0 * scale**2) + g[0, 0]
    n2 = l2**2 / (2.0 * scale**2) + g[1, 1]
    cross = l1 * l2 / (2.0 * scale**2) + g[0, 1]
    denom = n1 * n2 - cross**2
    if denom < 1e-12:
        raise DegeneratePlane("combined vectors are collinear")
    return float(quad / denom)


# ---------------------------------------------------------------------------
# curve-side curvature (plane-space formula transported through the lift)


def curvature_immersion(
    curve: PlaneCurve,
    h1: np.ndarray,
    h2: np.ndarray,
    quotient: str = "sim",
    check: bool = True,
) -> float:
    """Sectional curvature at a curve for the similarity quotient ("sim")
    or the translation-scaling quotient ("transl_scale").

    ``h1``, ``h2`` are tangent fields, orthonormal in the curve metric; the
    three terms combine a determinant integral with two double quadratures
    weighted by (1 +/- cos(alpha(x) - alpha(y)))/2.
    """
    if quotient not in ("sim", "transl_scale"):
        raise ValueError("quotient must be sim|transl_scale")
    arc = build_arc_data(curve)
    if check:
        g = np.array(
            [
                [metric_inner(arc, h1, h1), metric_inner(arc, h1, h2)],
                [metric_inner(arc, h1, h2), metric_inner(arc, h2, h2)],
            ]
        )
        if np.max(np.abs(g - np.eye(2))) > 1e-6:
            raise NotOrthonormal(f"field Gram defect {np.max(np.abs(g - np.eye(2))):.2e}")
    dh1 = ds_operator(arc, np.asarray(h1, complex), 1)
    dh2 = ds_operator(arc, np.asarray(h2, complex), 1)
    det_int = float(integrate_ds(arc, cdet(dh1, dh2)))
    w = _quad_weights(curve.n, curve.topology) * arc.speed
    term1, term2, cross = immersion_double_terms(dh1, dh2, arc.tangent_angle, w)
    doubles = term1 + term2 - cross
    # on the isometric scale the transported plane-space terms read
    # (det/2)^2 + (1/2) * (doubles/4); the translation-scaling variant halves
    # the double terms and flips the determinant square
    if quotient == "sim":
        return float(0.25 * det_int**2 + 0.125 * doubles)
    return float(0.125 * (-det_int**2 + doubles))


# ---------------------------------------------------------------------------
# the order-two vertical operator and its inversion


def _spectral_dtheta_matrix(n: int) -> np.ndarray:
    eye = np.eye(n)
    cols = [None] * n
    for j in range(n):
        k = np.fft.fftfreq(n, d=1.0 / n) * 1j
        if n % 2 == 0:
            k[n // 2] = 0.0
        cols[j] = np.fft.ifft(np.fft.fft(eye[:, j]) * k).real
    return np.column_stack(cols)


@dataclass(frozen=True)
class LTopOperator:
    """b -> -D_s^2 b + kappa^2 b on a closed curve, with cached factorization.

    Solves use the symmetric form against the ds-weights; the rank-one
    extension handles the coupled system from the vertical projection and is
    defined away from constant-curvature curves.
    """

    arc: ArcData
    matrix: np.ndarray
    weights: np.ndarray
    _cho: tuple
    kappa_sol: np.ndarray
    kappa_quad: float

    def solve(self, psi: np.ndarray) -> np.ndarray:
        """x with -D_s^2 x + kappa^2 x = psi."""
        return cho_solve(self._cho, self.weights * np.asarray(psi, float))

    def solve_extended(self, psi: np.ndarray) -> np.ndarray:
        """x with L x - <x kappa> kappa = psi (rank-one corrected inverse)."""
        base = self.solve(psi)
        arc = self.arc
        coef = ds_average(arc, base * arc.curvature) / (1.0 - self.kappa_quad)
        return base + coef * self.kappa_sol

    def quadratic_form(self, psi: np.ndarray, extended: bool = True) -> float:
        x = self.solve_extended(psi) if extended else self.solve(psi)
        return float(integrate_ds(self.arc, np.asarray(psi, float) * x))


def build_ltop(curve: PlaneCurve, tol_circle: float = 1e-6) -> LTopOperator:
    """Assemble and factor the operator; raises CircleSingular for
    (near-)constant curvature, where the extension is undefined."""
    if curve.topology != CLOSED:
        raise ValueError("operator defined on closed curves")
    arc = build_arc_data(curve)
    kap = arc.curvature
    if np.max(np.abs(kap - ds_average(arc, kap))) <= tol_circle * np.max(np.abs(kap)):
        raise CircleSingular("constant curvature: rank-one extension undefined")
    n = curve.n
    dmat = _spectral_dtheta_matrix(n)
    ds_mat = dmat / arc.speed[:, None]
    weights = arc.speed * (TWO_PI / n)
    lmat = -ds_mat @ ds_mat + np.diag(kap**2)
    sym = weights[:, None] * lmat
    sym = 0.5 * (sym + sym.T)
    cho = cho_factor(sym)
    kappa_sol = cho_solve(cho, weights * kap)
    q = float(integrate_ds(arc, kap * kappa_sol)) / arc.length
    if 1.0 - q < 1e-8:
        raise CircleSingular("kappa quadratic average reaches 1: circle-like input")
    return LTopOperator(arc, lmat, weights, cho, kappa_sol, q)


def ltop_eigen_floor(op: LTopOperator) -> float:
    """Smallest eigenvalue of the operator in the ds inner product."""
    sym = op.weights[:, None] * op.matrix
    sym = 0.5 * (sym + sym.T)
    vals = eigh(sym, np.diag(op.weights), eigvals_only=True, subset_by_index=(0, 0))
    return float(vals[0])


def l0_smallest_eigenvalue(curve: PlaneCurve) -> float:
    """Smallest eigenvalue of -D_s^2 + 1 (used by the Sobolev norms)."""
    arc = build_arc_data(curve)
    n = curve.n
    dmat = _spectral_dtheta_matrix(n)
    ds_mat = dmat / arc.speed[:, None]
    lmat = -ds_mat @ ds_mat + np.eye(n)
    weights = arc.speed * (TWO_PI / n)
    sym = weights[:, None] * lmat
    sym = 0.5 * (sym + sym.T)
    vals = eigh(sym, np.diag(weights), eigvals_only=True, subset_by_index=(0, 0))
    return float(vals[0])


# ---------------------------------------------------------------------------
# vertical projection, descent correction, bound


def vertical_data(curve: PlaneCurve, arc: ArcData, h: np.ndarray):
    """Averages entering the vertical projection of a tangent field."""
    dh = ds_operator(arc, np.asarray(h, complex), 1)
    v = ds_operator(arc, curve.points, 1)
    nvec = 1j * v
    return dh, v, nvec, float(ds_average(arc, cdot(dh, nvec))), float(ds_average(arc, cdot(dh, v)))


def horizontal_project(curve: PlaneCurve, h: np.ndarray, op: LTopOperator | None = None) -> np.ndarray:
    """Remove the vertical part (reparametrization + rotation + scaling) of a
    tangent field at a normalized closed curve.

    The residual horizontality defect sits at the discretization mismatch
    between the assembled operator and the composed arc-length derivatives,
    a fraction of a percent at typical resolutions.
    """
    if op is None:
        op = build_ltop(curve)
    arc = op.arc
    h = np.asarray(h, dtype=complex)
    dh, v, nvec, avg_n, avg_v = vertical_data(curve, arc, h)
    lh = -ds_operator(arc, h, 2)
    psi = cdot(v, lh) - avg_n * arc.curvature
    b = op.solve_extended(psi)
    alpha = avg_n - float(ds_average(arc, b * arc.curvature))
    beta = avg_v
    return h - (b * v + 1j * alpha * curve.points + beta * curve.points)


def horizontality_defect_curve(curve: PlaneCurve, h: np.ndarray) -> float:
    """sup |<v, D_s^2 h>| : zero for reparametrization-horizontal fields."""
    arc = build_arc_data(curve)
    v = ds_operator(arc, curve.points, 1)
    return float(np.max(np.abs(cdot(v, ds_operator(arc, np.asarray(h, complex), 2)))))


def bracket_source(curve: PlaneCurve, h1: np.ndarray, h2: np.ndarray, quotient: str = "sim") -> np.ndarray:
    """The scalar field fed to the inverted operator in the descent term:
    the arc-length Wronskian of the normal derivative components, minus (for
    the similarity quotient) the averaged determinant times curvature."""
    arc = build_arc_data(curve)
    v = ds_operator(arc, curve.points, 1)
    nvec = 1j * v
    dh1 = ds_operator(arc, np.asarray(h1, complex), 1)
    dh2 = ds_operator(arc, np.asarray(h2, complex), 1)
    a1 = cdot(dh1, nvec)
    a2 = cdot(dh2, nvec)
    w_s = a1 * ds_operator(arc, a2, 1) - a2 * ds_operator(arc, a1, 1)
    if quotient == "transl_scale":
        return w_s
    det_avg = float(ds_average(arc, cdet(dh1, dh2)))
    return w_s - det_avg * arc.curvature


def oneill_correction(
    curve: PlaneCurve,
    h1: np.ndarray,
    h2: np.ndarray,
    quotient: str = "sim",
    op: LTopOperator | None = None,
) -> float:
    """Nonnegative curvature correction for dividing out reparametrizations
    (plus rotation/scaling in the "sim" case), for orthonormal horizontal
    fields."""
    if quotient not in ("sim", "transl_scale"):
        raise ValueError("quotient must be sim|transl_scale")
    if op is None:
        op = build_ltop(curve)
    psi = bracket_source(curve, h1, h2, quotient)
    quad = op.quadratic_form(psi, extended=(quotient == "sim"))
    return float(0.75 * quad / (2.0 * op.arc.length))


def curvature_upper_bound(
    curve: PlaneCurve, h2: np.ndarray, op: LTopOperator | None = None
) -> float:
    """Explicit upper bound for the quotient curvature in any plane
    containing the direction h2 (unit norm), at the length-2*pi scale.

    Combines the plane-space ceiling of 2 with sup-norm estimates of the
    descent term; constants follow the isometric inner-product normalization.
    """
    arc0 = build_arc_data(curve)
    lam = TWO_PI / arc0.length
    scaled = PlaneCurve(lam * curve.points, CLOSED, curve.base_point_fixed)
    if op is None or abs(arc0.length - TWO_PI) > 1e-12:
        op = build_ltop(scaled)
    arc = op.arc
    h = np.asarray(h2, dtype=complex) * lam
    nrm = np.sqrt(metric_inner(arc, h, h))
    if nrm < 1e-12:
        raise ValueError("h2 must be a nonzero direction")
    h = h / nrm
    v = ds_operator(arc, scaled.points, 1)
    a2 = cdot(ds_operator(arc, h, 1), 1j * v)
    sup_a = float(np.max(np.abs(a2)))
    sup_da = float(np.max(np.abs(ds_operator(arc, a2, 1))))
    kap = arc.curvature
    kq = float(ds_average(arc, kap**2))
    m_inf = float(np.max(np.abs(1.0 - kap**2)))
    denom = 1.0 - op.kappa_quad
    extra = 0.75 * (1.0 + 3.0 * m_inf) * (sup_a + sup_da + 2.0 * np.sqrt(2.0 * kq)) ** 2 / denom
    return float(2.0 + extra)
