"""Elastic matching of curves over monotone reparametrizations.

The alignment functional integrates sqrt(phi') against the half-angle cosine
of the tangent-angle mismatch.  With piecewise-constant angles on segment
grids the optimizer is found by dynamic programming on the grid of segment
boundaries: a transition advancing p rows and q columns crosses its cells
linearly and scores sum_cells F * sqrt(slope) * overlap, where
F = max(0, cos(mismatch / 2)).  Flat and jump moves cost nothing, so the
optimal relation may legitimately collapse or skip parameter stretches.

For closed curves the search wraps the column index (with the antiperiodic
sign of odd-index lifts) and is repeated over cyclic offsets and an
exhaustive rotation grid; each (offset, rotation) run is independent and the
search kernel parallelizes over offsets.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .backend import njit, prange
from .curves import CLOSED, PlaneCurve, build_arc_data, normalize, resample_by_arclength
from .errors import TooCoarse
from .geodesy import JordanFrame, NeretinPath, neretin_path
from .lift import EVEN_PERIODIC, ODD_ANTIPERIODIC, LiftPair

TWO_PI = 2.0 * np.pi

# moves used for the big closed-curve searches: cheap but slope-rich enough
FAST_MOVES = ((1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (2, 3), (3, 2))


def coprime_moves(max_step: int) -> tuple:
    """(1,0), (0,1) and all coprime (p, q) with 1 <= p, q <= max_step."""
    moves = [(1, 0), (0, 1)]
    for p in range(1, max_step + 1):
        for q in range(1, max_step + 1):
            if math.gcd(p, q) == 1:
                moves.append((p, q))
    return tuple(moves)


def _move_tables(moves, d0: float, d1: float):
    """Flatten per-move cell-overlap tables for the kernels.

    For a straight segment spanning p rows and q columns, row j overlaps
    column c on a parameter stretch of length ``frac`` (in row units); the
    score contribution is F[row, col] * frac * sqrt(q d1 / (p d0)) * d0.
    """
    mp, mq, starts, counts = [], [], [], []
    pj, pc, pw = [], [], []
    # most-balanced moves last: with >= updates, ties break toward the diagonal
    moves = sorted(set(moves), key=lambda m: (-abs(m[0] - m[1]), m[0] + m[1]))
    for p, q in moves:
        mp.append(p)
        mq.append(q)
        starts.append(len(pj))
        if p == 0 or q == 0:
            counts.append(0)
            continue
        fac = math.sqrt(q * d1 / (p * d0)) * d0
        cnt = 0
        for j in range(p):
            c_lo = int(math.floor(j * q / p))
            c_hi = int(math.ceil((j + 1) * q / p))
            for c in range(c_lo, c_hi):
                frac = min((c + 1) * p / q, j + 1.0) - max(c * p / q, float(j))
                if frac <= 1e-15:
                    continue
                pj.append(j)
                pc.append(c)
                pw.append(frac * fac)
                cnt += 1
        counts.append(cnt)
    return (
        np.asarray(mp, dtype=np.int64),
        np.asarray(mq, dtype=np.int64),
        np.asarray(starts, dtype=np.int64),
        np.asarray(counts, dtype=np.int64),
        np.asarray(pj, dtype=np.int64),
        np.asarray(pc, dtype=np.int64),
        np.asarray(pw, dtype=np.float64),
    )


@njit(cache=True)
def _dp_core(fmat, mp, mq, starts, counts, pj, pc, pw, v, bp, track):
    """One DP sweep over the node grid given the clipped score table.

    ``fmat[k, l]`` is the per-cell score density (already >= 0, with any
    column shift, wrap sign and rotation folded in).  ``v`` is a reusable
    (n0+1)*(n1+1) value buffer; ``bp`` records the argmax move per node when
    ``track`` is set.  Ties prefer later moves in the table, so listing the
    diagonal move last makes ties break toward balanced advancement.
    """
    n0 = fmat.shape[0]
    n1 = fmat.shape[1]
    neg = -1e300
    v[0, 0] = 0.0
    nmoves = mp.shape[0]
    for k in range(n0 + 1):
        for l in range(n1 + 1):
            if k == 0 and l == 0:
                continue
            best = neg
            arg = -1
            for m in range(nmoves):
                k0 = k - mp[m]
                l0 = l - mq[m]
                if k0 < 0 or l0 < 0:
                    continue
                base = v[k0, l0]
                w = 0.0
                s0 = starts[m]
                for t in range(counts[m]):
                    w += fmat[k0 + pj[s0 + t], l0 + pc[s0 + t]] * pw[s0 + t]
                val = base + w
                if val >= best:
                    best = val
                    arg = m
            v[k, l] = best
            if track:
                bp[k, l] = arg
    return v[n0, n1]


@njit(cache=True)
def _fill_scores(cc_s, ss_s, cosb, sinb, fmat):
    n0 = cc_s.shape[0]
    n1 = cc_s.shape[1]
    for k in range(n0):
        for l in range(n1):
            x = cc_s[k, l] * cosb + ss_s[k, l] * sinb
            fmat[k, l] = x if x > 0.0 else 0.0


@njit(cache=True)
def _shifted_tables(cc, ss, shift, flip, cc_s, ss_s):
    """Cyclically shift the mismatch tables by ``shift`` columns, folding in
    the antiperiodic sign where the unrolled column wraps."""
    n0 = cc.shape[0]
    n1 = cc.shape[1]
    for l in range(n1):
        lt = l + shift
        wr = lt // n1
        col = lt - wr * n1
        sgn = -1.0 if (flip < 0 and (wr & 1) == 1) else 1.0
        for k in range(n0):
            cc_s[k, l] = sgn * cc[k, col]
            ss_s[k, l] = sgn * ss[k, col]


@njit(cache=True, parallel=True)
def _dp_search(cc, ss, cosb, sinb, shifts, flip, mp, mq, starts, counts, pj, pc, pw):
    """Exhaustive (offset, rotation) search; returns per-offset best value
    and rotation index."""
    nrot = cosb.shape[0]
    nshift = shifts.shape[0]
    n0 = cc.shape[0]
    n1 = cc.shape[1]
    best_val = np.full(nshift, -1e300)
    best_rot = np.zeros(nshift, dtype=np.int64)
    dummy = np.zeros((1, 1), dtype=np.int64)
    for i in prange(nshift):
        cc_s = np.empty((n0, n1))
        ss_s = np.empty((n0, n1))
        fmat = np.empty((n0, n1))
        v = np.empty((n0 + 1, n1 + 1))
        _shifted_tables(cc, ss, shifts[i], flip, cc_s, ss_s)
        loc_best = -1e300
        loc_rot = 0
        for r in range(nrot):
            _fill_scores(cc_s, ss_s, cosb[r], sinb[r], fmat)
            val = _dp_core(fmat, mp, mq, starts, counts, pj, pc, pw, v, dummy, False)
            if val > loc_best:
                loc_best = val
                loc_rot = r
        best_val[i] = loc_best
        best_rot[i] = loc_rot
    return best_val, best_rot


def _dp_value(cc, ss, cosb, sinb, shift, flip, mp, mq, starts, counts, pj, pc, pw, bp):
    """Single DP evaluation with shift/rotation folded in (python driver)."""
    n0, n1 = cc.shape
    cc_s = np.empty_like(cc)
    ss_s = np.empty_like(ss)
    _shifted_tables(cc, ss, max(shift, 0), flip, cc_s, ss_s)
    fmat = np.empty_like(cc)
    _fill_scores(cc_s, ss_s, cosb, sinb, fmat)
    v = np.empty((n0 + 1, n1 + 1))
    track = bp.shape[0] == n0 + 1
    return _dp_core(fmat, mp, mq, starts, counts, pj, pc, pw, v, bp, track)


# ---------------------------------------------------------------------------
# segment discretization


@dataclass(frozen=True)
class SegmentedCurve:
    """Arc-length curve reduced to piecewise-constant tangent angles."""

    alpha: np.ndarray  # one continuous-lift angle value per segment
    topology: str
    rotation_index: int
    parity_flip: int  # -1 when the half-angle flips sign across the wrap

    @property
    def n(self) -> int:
        return self.alpha.size


def segment_curve(curve: PlaneCurve, n_segments: int) -> SegmentedCurve:
    """Resample to arc length if needed and average the tangent angle over
    n_segments equal parameter intervals."""
    if n_segments < 3:
        raise TooCoarse("need at least 3 segments per curve")
    arc = build_arc_data(curve)
    mean_speed = arc.length / TWO_PI
    if np.max(np.abs(arc.speed - mean_speed)) > 1e-3 * mean_speed:
        curve = resample_by_arclength(normalize(curve))
        arc = build_arc_data(curve)
    alpha = arc.tangent_angle
    if curve.topology == CLOSED:
        edges = np.linspace(0.0, curve.n, n_segments + 1).astype(int)
    else:
        edges = np.linspace(0.0, curve.n - 1, n_segments + 1).astype(int)
    seg = np.array([alpha[a : max(b, a + 1)].mean() for a, b in zip(edges[:-1], edges[1:])])
    idx = arc.rotation_index if arc.rotation_index is not None else 0
    flip = -1 if (curve.topology == CLOSED and idx % 2 == 1) else 1
    return SegmentedCurve(seg, curve.topology, idx, flip)


def _mismatch_tables(s0: SegmentedCurve, s1: SegmentedCurve):
    half = 0.5 * (s0.alpha[:, None] - s1.alpha[None, :])
    return np.cos(half), np.sin(half)


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class MonotoneMap:
    """Discrete monotone relation between two parameter circles/intervals.

    ``breakpoints`` is a (2, P) array of corner points (u, phi(u)); both
    rows are nondecreasing, flats and jumps allowed.  For closed matches the
    second row lives on the unrolled target parameter starting at ``offset``.
    """

    breakpoints: np.ndarray
    offset: float = 0.0

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        return np.interp(u, self.breakpoints[0], self.breakpoints[1])

    @property
    def total_rise(self) -> float:
        return float(self.breakpoints[1, -1] - self.breakpoints[1, 0])

    def is_monotone(self) -> bool:
        return bool(
            np.all(np.diff(self.breakpoints[0]) >= -1e-12)
            and np.all(np.diff(self.breakpoints[1]) >= -1e-12)
        )


@dataclass(frozen=True)
class MatchResult:
    map: MonotoneMap
    rotation: float
    u_value: float
    lower_bound_distance: float
    grid: tuple
    c_minus: float
    s_minus: float
    c_plus: float
    s_plus: float
    mod_rotation: bool
    pieces: np.ndarray = field(repr=False)  # rows: (row-seg, unrolled col-seg, a, b)
    segments: tuple = field(repr=False, default=None)

    @property
    def U_value(self) -> float:
        return self.u_value


def _reconstruct(bp, n0, n1, mp, mq):
    nodes = [(n0, n1)]
    k, l = n0, n1
    while (k, l) != (0, 0):
        m = bp[k, l]
        if m < 0:
            raise RuntimeError("broken backtracking table")
        k, l = k - mp[m], l - mq[m]
        nodes.append((k, l))
    nodes.reverse()
    return nodes


def _pieces_from_nodes(nodes, d0, d1):
    """Expand the corner path into per-cell (row, col, a, b) quadrature
    pieces; a is the source-parameter width, b the target-parameter height."""
    rows = []
    for (k0, l0), (k1, l1) in zip(nodes[:-1], nodes[1:]):
        p, q = k1 - k0, l1 - l0
        if p == 0 or q == 0:
            continue
        for j in range(p):
            c_lo = int(math.floor(j * q / p))
            c_hi = int(math.ceil((j + 1) * q / p))
            for c in range(c_lo, c_hi):
                frac = min((c + 1) * p / q, j + 1.0) - max(c * p / q, float(j))
                if frac <= 1e-15:
                    continue
                rows.append((k0 + j, l0 + c, frac * d0, frac * d0 * (q * d1) / (p * d0)))
    return np.asarray(rows, dtype=float).reshape(-1, 4)


def _alignment_sums(pieces, s0: SegmentedCurve, s1: SegmentedCurve, shift: int):
    """C/S integrals of both half-angle channels over the relation."""
    if pieces.size == 0:
        return 0.0, 0.0, 0.0, 0.0
    rows = pieces[:, 0].astype(int)
    cols = pieces[:, 1].astype(int)
    n1 = s1.n
    colt = cols + shift
    wr = colt // n1
    a1 = s1.alpha[colt - wr * n1] + TWO_PI * s1.rotation_index * wr
    a0 = s0.alpha[rows]
    weight = np.sqrt(pieces[:, 2] * pieces[:, 3]) / TWO_PI
    minus = 0.5 * (a0 - a1)
    plus = 0.5 * (a0 + a1)
    return (
        float(np.sum(weight * np.cos(minus))),
        float(np.sum(weight * np.sin(minus))),
        float(np.sum(weight * np.cos(plus))),
        float(np.sum(weight * np.sin(plus))),
    )


def _clamp(x: float) -> float:
    return float(min(1.0, max(-1.0, x)))


def _finish(
    s0, s1, tables, move_tables, shift, beta, d0, d1, mod_rotation, n0, n1
):
    """Re-run the winning configuration with backtracking and assemble the
    result object."""
    cc, ss = tables
    bp = np.full((n0 + 1, n1 + 1), -1, dtype=np.int64)
    total = _dp_value(
        cc, ss, math.cos(0.5 * beta), math.sin(0.5 * beta),
        shift if s1.topology == CLOSED else -1, s1.parity_flip,
        *move_tables, bp,
    )
    nodes = _reconstruct(bp, n0, n1, move_tables[0], move_tables[1])
    pieces = _pieces_from_nodes(nodes, d0, d1)
    cm, sm, cp, sp = _alignment_sums(pieces, s0, s1, shift)
    u_val = total / TWO_PI
    if mod_rotation:
        lower = float(np.arccos(_clamp(np.hypot(cm, sm))))
    else:
        lower = float(np.arccos(_clamp(u_val)))
    offset = shift * d1
    bps = np.array(
        [[k * d0 for k, _ in nodes], [offset + l * d1 for _, l in nodes]]
    )
    return MatchResult(
        map=MonotoneMap(bps, offset=offset),
        rotation=float(np.remainder(beta, TWO_PI)),
        u_value=u_val,
        lower_bound_distance=lower,
        grid=(n0, n1),
        c_minus=cm,
        s_minus=sm,
        c_plus=cp,
        s_plus=sp,
        mod_rotation=mod_rotation,
        pieces=pieces,
        segments=(s0, s1, shift),
    )


def _golden_rotation(eval_fn, lo, hi, iters=28):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = eval_fn(c), eval_fn(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = eval_fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = eval_fn(d)
    return (a + b) / 2.0


def dp_match(
    c0: PlaneCurve,
    c1: PlaneCurve,
    mod_rotation: bool = False,
    n_rot: int = 64,
    n_segments: int = 128,
    max_step: int = 6,
    refine: bool = True,
) -> MatchResult:
    """Optimal monotone alignment of two curves at fixed endpoints.

    Curves are reduced to ``n_segments`` piecewise-constant angle segments
    (resampling to arc length first when needed); transitions use all
    coprime slope moves up to ``max_step`` plus flats and jumps.  With
    ``mod_rotation`` an exhaustive grid of ``n_rot`` rotations of the second
    curve is searched (on the lift's double cover), refined once by a
    golden-section pass.
    """
    s0 = segment_curve(c0, n_segments)
    s1 = segment_curve(c1, n_segments)
    n0, n1 = s0.n, s1.n
    moves = coprime_moves(max_step)
    moves = tuple((p, q) for p, q in moves if p <= n0 and q <= n1)
    d0, d1 = TWO_PI / n0, TWO_PI / n1
    tables = _mismatch_tables(s0, s1)
    mt = _move_tables(moves, d0, d1)
    shift_flag = 0 if s1.topology == CLOSED else -1

    if not mod_rotation:
        return _finish(s0, s1, tables, mt, 0, 0.0, d0, d1, False, n0, n1)

    betas = np.arange(n_rot) * (2.0 * TWO_PI / n_rot)
    cc, ss = tables
    vals = np.array(
        [
            _dp_value(
                cc, ss, math.cos(0.5 * b), math.sin(0.5 * b), shift_flag,
                s1.parity_flip, *mt, np.zeros((1, 1), dtype=np.int64)
            )
            for b in betas
        ]
    )
    best = int(np.argmax(vals))
    beta = betas[best]
    if refine:
        span = 2.0 * TWO_PI / n_rot

        def eval_beta(b):
            return _dp_value(
                cc, ss, math.cos(0.5 * b), math.sin(0.5 * b), shift_flag,
                s1.parity_flip, *mt, np.zeros((1, 1), dtype=np.int64)
            )

        beta = _golden_rotation(eval_beta, beta - span, beta + span)
    return _finish(s0, s1, tables, mt, 0, float(beta), d0, d1, True, n0, n1)


def dp_match_closed(
    c0: PlaneCurve,
    c1: PlaneCurve,
    n_offsets: int | None = None,
    n_rot: int = 64,
    n_segments: int = 128,
    moves: tuple = FAST_MOVES,
    refine: bool = True,
) -> MatchResult:
    """Elastic alignment of closed curves: joint search over cyclic offsets
    of the second curve's segments and an exhaustive rotation grid.

    The returned lower_bound_distance evaluates the rotation-invariant
    alignment modulus on the winning relation, so it underestimates the
    quotient distance regardless of search granularity.
    """
    from .errors import ParityMismatch

    if c0.topology != CLOSED or c1.topology != CLOSED:
        raise ValueError("dp_match_closed needs closed curves")
    s0 = segment_curve(c0, n_segments)
    s1 = segment_curve(c1, n_segments)
    if s0.rotation_index % 2 != s1.rotation_index % 2:
        raise ParityMismatch("rotation indices of different parity")
    n0, n1 = s0.n, s1.n
    if n_offsets is None:
        n_offsets = n1
    moves = tuple((p, q) for p, q in moves if p <= n0 and q <= n1)
    d0, d1 = TWO_PI / n0, TWO_PI / n1
    cc, ss = _mismatch_tables(s0, s1)
    mt = _move_tables(moves, d0, d1)

    shifts = np.unique((np.arange(n_offsets) * n1) // n_offsets).astype(np.int64)
    betas = np.arange(n_rot) * (2.0 * TWO_PI / n_rot)
    cosb = np.cos(0.5 * betas)
    sinb = np.sin(0.5 * betas)
    best_val, best_rot = _dp_search(
        cc, ss, cosb, sinb, shifts, s1.parity_flip, *mt
    )
    order = np.argsort(best_val)[::-1]
    shift = int(shifts[order[0]])
    beta = float(betas[int(best_rot[order[0]])])
    if refine:
        # polish the rotation for the leading offsets: the grid winner can sit
        # at a slightly wrong offset whose optimal rotation happens to fall on
        # the rotation grid
        span = 2.0 * TWO_PI / n_rot
        dummy = np.zeros((1, 1), dtype=np.int64)
        best = -np.inf
        for idx in order[: min(8, order.size)]:
            sh = int(shifts[idx])

            def eval_beta(b, sh=sh):
                return _dp_value(
                    cc, ss, math.cos(0.5 * b), math.sin(0.5 * b), sh,
                    s1.parity_flip, *mt, dummy
                )

            b0 = float(betas[int(best_rot[idx])])
            b_ref = _golden_rotation(eval_beta, b0 - span, b0 + span)
            val = eval_beta(b_ref)
            if val > best:
                best, shift, beta = val, sh, float(b_ref)
    return _finish(s0, s1, (cc, ss), mt, shift, beta, d0, d1, True, n0, n1)


# ---------------------------------------------------------------------------
# closed upper bound via the frame geodesic of the reparametrized pair


@dataclass(frozen=True)
class BoundPair:
    path: NeretinPath
    upper: float
    lower: float
    degenerate: bool

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def _grid_alignment(c0: PlaneCurve, c1: PlaneCurve, match: MatchResult):
    """Alignment data of (c0 composed with the relation, c1) on c1's grid.

    The weights use the measured speeds, so for the identity relation the
    plus-channel integral telescopes to the (exactly vanishing) discrete
    closure integral rather than a quadrature residue.
    """
    c1n = resample_by_arclength(normalize(c1))
    arc1 = build_arc_data(c1n)
    theta = c1n.theta
    n = c1n.n
    # phi: c1-parameter -> c0-parameter, from the transposed relation graph
    phi_vals = np.interp(theta + match.map.offset, match.map.breakpoints[1], match.map.breakpoints[0])
    phi_ext = np.interp(
        np.append(theta, TWO_PI) + match.map.offset,
        match.map.breakpoints[1],
        match.map.breakpoints[0],
    )
    phi_prime = np.maximum(np.diff(phi_ext), 0.0) / (TWO_PI / n)

    c0n = resample_by_arclength(normalize(c0))
    arc0 = build_arc_data(c0n)
    wrap0 = TWO_PI * (arc0.rotation_index or 0)
    grid0 = np.concatenate([arc0.theta, [TWO_PI]])
    alpha0 = np.interp(phi_vals, grid0, np.concatenate([arc0.tangent_angle, [arc0.tangent_angle[0] + wrap0]]))
    r0 = np.interp(phi_vals, grid0, np.concatenate([arc0.speed, [arc0.speed[0]]])) * phi_prime
    alpha1 = arc1.tangent_angle
    r1 = arc1.speed

    # normalize by the measured lengths so both lifted frames are exactly
    # unit vectors in the discrete inner product
    h = TWO_PI / n
    len0 = float(np.sum(r0) * h)
    len1 = float(np.sum(r1) * h)
    amp = np.sqrt(np.maximum(r0 * r1, 0.0)) / np.sqrt(len0 * len1)
    minus = 0.5 * (alpha0 - alpha1)
    plus = 0.5 * (alpha0 + alpha1)
    cm = float(np.sum(amp * np.cos(minus)) * h)
    sm = float(np.sum(amp * np.sin(minus)) * h)
    cp = float(np.sum(amp * np.cos(plus)) * h)
    sp = float(np.sum(amp * np.sin(plus)) * h)
    return dict(
        alpha0=alpha0, r0=r0, alpha1=alpha1, r1=r1, length0=len0, length1=len1,
        cm=cm, sm=sm, cp=cp, sp=sp,
    )


def upper_bound_pipeline(c0: PlaneCurve, c1: PlaneCurve, match: MatchResult) -> BoundPair:
    """Frame geodesic between the optimally reparametrized curves.

    The relation found by the closed match reparametrizes the first curve;
    the principal angles of the reparametrized pair give an upper bound for
    the quotient distance (any path length does), while the alignment
    modulus on the same relation is the lower bound; the ordering holds
    pointwise in the computed integrals.  A relation that collapses more
    than half of the source parameter is flagged degenerate but still
    returned.
    """
    data = _grid_alignment(c0, c1, match)
    cm, sm, cp, sp = data["cm"], data["sm"], data["cp"], data["sp"]
    mag_minus = float(np.hypot(cm, sm))
    mag_plus = float(np.hypot(cp, sp))
    upper = float(
        np.hypot(
            np.arccos(_clamp(mag_minus + mag_plus)),
            np.arccos(_clamp(mag_minus - mag_plus)),
        )
    )
    lower = float(np.arccos(_clamp(mag_minus)))

    frame = _frame_from_alignment(data, match)
    path = neretin_path(frame)

    bps = match.map.breakpoints
    du = np.diff(bps[0])
    dphi = np.diff(bps[1])
    collapsed = float(np.sum(du[dphi <= 1e-12]))
    return BoundPair(path=path, upper=upper, lower=lower, degenerate=collapsed > 0.5 * TWO_PI)


def _frame_from_alignment(data: dict, match: MatchResult) -> JordanFrame:
    """Aligned lifted frame built from grid-level alignment data.

    Flats of the relation give zero-speed stretches of the reparametrized
    curve; the corresponding lift samples vanish there, which is the
    expected contact with the degenerate set.
    """
    s0, s1, shift = match.segments
    cm, sm, cp, sp = data["cm"], data["sm"], data["cp"], data["sp"]
    mag_minus = np.hypot(cm, sm)
    mag_plus = np.hypot(cp, sp)
    x_minus = 2.0 * np.arctan2(sm, cm)
    if mag_plus < 1e-10:
        x_plus, swap = 0.0, 0.0
    else:
        x_plus, swap = 2.0 * np.arctan2(sp, cp), np.pi
    beta0 = 0.5 * (x_plus + x_minus) + swap
    beta1 = 0.5 * (x_plus - x_minus) + swap

    parity = ODD_ANTIPERIODIC if s1.rotation_index % 2 else EVEN_PERIODIC
    amp0 = np.sqrt(2.0 * np.maximum(data["r0"], 0.0) / data["length0"])
    a0 = data["alpha0"]
    p0 = LiftPair(amp0 * np.cos(0.5 * (a0 - beta0)), amp0 * np.sin(0.5 * (a0 - beta0)), parity)
    amp1 = np.sqrt(2.0 * data["r1"] / data["length1"])
    a1 = data["alpha1"]
    p1 = LiftPair(amp1 * np.cos(0.5 * (a1 - beta1)), amp1 * np.sin(0.5 * (a1 - beta1)), parity)

    sv_big = mag_minus + mag_plus
    sv_small = mag_minus - mag_plus
    return JordanFrame(
        aligned0=p0,
        aligned1=p1,
        psi_e=float(np.arccos(_clamp(sv_small))),
        psi_f=float(np.arccos(_clamp(sv_big))),
        beta0=float(np.angle(np.exp(1j * beta0))),
        beta1=float(np.angle(np.exp(1j * beta1))),
    )
