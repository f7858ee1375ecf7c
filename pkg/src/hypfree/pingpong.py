"""Two ping-pong constructions that certify freeness of an isometry pair.

Case 1 (translation length >= eps/10): project the second axis onto the
first, take half-spaces behind the four points g^{+-N} x, h^{+-N} y, and
verify the four half-spaces are pairwise disjoint.  The classical
ping-pong lemma then makes <g^N, h^N> free, and N only needs
N tau >= L_alpha + 5 + 2 delta.

Case 2 (translation length <= eps/10, or parabolic): conjugate the first
generator by powers of the second until the Margulis tubes of the pair
have convex hulls more than L apart, where L is the local-to-global
threshold for broken geodesic paths.  Every alternating word then follows
a broken path with long middle arcs and right angles, so it moves a base
point and cannot be trivial.

broken_path / word_power_growth rebuild those paths numerically for
explicit words and check every claimed inequality (arc lengths, corner
angles, endpoint growth), which is the evidence recorded in a Case 2
certificate; verify_orbit_qi sweeps all reduced words of the certified
pair and reports the orbit growth rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import mpmath
import numpy as np

from .constants import MARGIN_FACTOR, PipelineConstants
from .errors import (
    DisjointnessUnverified,
    DomainError,
    Elementary,
    InvalidPoint,
    MonotonicityViolation,
    NotAlternating,
    NotCase1,
    NotCase2,
    NumericallyAmbiguous,
    SearchExhausted,
    SharedEndpoint,
    SharedFixedPoint,
)
from .geometry import (
    GeodesicLine,
    HalfSpace,
    IdealPoint,
    SpacePoint,
    distance,
    distance_raw,
    exp_map,
    lines_share_endpoint,
    mdot,
    unit_tangent,
)
from .isometry import Isometry
from .tubes import (
    TubeDescriptor,
    _horoball_gap,
    make_tube,
    transport_horoball,
)

# Wall offset in the half-space construction; the classical disjointness
# lemma for the outer half-spaces needs at least 5.
_T_OFFSET = 5.0


@dataclass(frozen=True)
class ProjectionData:
    """Projection of axis beta onto axis alpha and back."""

    alpha: GeodesicLine
    beta: GeodesicLine
    x_minus: SpacePoint
    x_plus: SpacePoint
    y_minus: SpacePoint
    y_plus: SpacePoint
    x_mid: SpacePoint
    y_mid: SpacePoint
    L_alpha: float
    L_beta: float
    t_minus: float = 0.0
    t_plus: float = 0.0


@dataclass(frozen=True)
class Case1Data:
    """Half-space certificate for a pair of equal-length hyperbolic isometries."""

    f: Isometry
    h: Isometry
    projection: ProjectionData
    tau: float
    N_direct: int
    N_uniform: int
    N_used: int
    walls: tuple
    margins: dict
    samples_per_wall: int

    def to_json(self):
        return {
            "tau": self.tau,
            "L_alpha": self.projection.L_alpha,
            "L_beta": self.projection.L_beta,
            "N_direct": self.N_direct,
            "N_uniform": self.N_uniform,
            "N_used": self.N_used,
            "margins": dict(self.margins),
            "samples_per_wall": self.samples_per_wall,
        }


@dataclass(frozen=True)
class Case2Data:
    """Conjugate-and-separate certificate for short or parabolic isometries."""

    f: Isometry
    h: Isometry
    conjugator: Isometry
    delta_shift: int
    tube_f: TubeDescriptor
    tube_h: TubeDescriptor
    hull_gap: float
    certified: bool
    iterations: int

    def to_json(self):
        return {
            "delta_shift": self.delta_shift,
            "hull_gap": self.hull_gap,
            "certified": self.certified,
            "iterations": self.iterations,
            "kind": self.tube_f.kind,
        }


def axis_projection_data(f: Isometry, h: Isometry,
                         consts: PipelineConstants,
                         conjugator: Isometry | None = None) -> ProjectionData:
    """Project the axis of h onto the axis of f and back.

    The endpoints of the projected segment are the images of the ideal
    endpoints of beta; projecting that segment back to beta can only
    shrink it, so L_beta <= L_alpha without any case split.

    When h = U f U^-1 pass U as conjugator: transport preserves the axis
    parametrization, so the feet on beta are measured as feet on alpha of
    the pulled-back points and pushed forward, which stays accurate after
    the direct products on beta have degenerated.
    """
    cf, ch = f.classify(), h.classify()
    if cf.kind != "hyperbolic" or ch.kind != "hyperbolic":
        raise NotCase1(
            f"half-space construction needs hyperbolic isometries, got "
            f"{cf.kind} and {ch.kind}"
        )
    alpha, beta = cf.axis, ch.axis
    if lines_share_endpoint(alpha, beta):
        raise Elementary("axes share an ideal endpoint")
    s_m = alpha.param_of(beta.neg)
    s_p = alpha.param_of(beta.pos)
    if s_m > s_p:
        s_m, s_p = s_p, s_m
    x_minus, x_plus = alpha.point_at(s_m), alpha.point_at(s_p)
    if conjugator is None:
        param = beta.param_of
        def at(t):
            return beta.point_at(t)
    else:
        inv = conjugator.inverse()

        def param(x):
            return alpha.param_of(inv.apply(x))

        def at(t):
            return SpacePoint(conjugator.apply_raw(alpha.point_at(t).coords))
    t_m = param(x_minus)
    t_p = param(x_plus)
    if t_m > t_p:
        t_m, t_p = t_p, t_m
    y_minus, y_plus = at(t_m), at(t_p)
    L_alpha = s_p - s_m
    L_beta = t_p - t_m
    if L_beta > L_alpha + consts.tol_point:
        raise MonotonicityViolation(
            f"projection expanded a segment: {L_beta!r} > {L_alpha!r}"
        )
    return ProjectionData(
        alpha=alpha,
        beta=beta,
        x_minus=x_minus,
        x_plus=x_plus,
        y_minus=y_minus,
        y_plus=y_plus,
        x_mid=alpha.point_at(0.5 * (s_m + s_p)),
        y_mid=at(0.5 * (t_m + t_p)),
        L_alpha=L_alpha,
        L_beta=L_beta,
        t_minus=t_m,
        t_plus=t_p,
    )


def _points_margin(pts, outer: HalfSpace) -> float:
    """Largest margin of `outer` over the given wall points (negative when
    every point lies strictly outside)."""
    d_near = distance_raw(pts, outer.nearer.coords)
    d_far = distance_raw(pts, outer.farther.coords)
    return float(np.max(d_far - d_near))


def _wall_margin(inner: HalfSpace, outer: HalfSpace, rng, count: int,
                 radius: float) -> float:
    """Largest margin of `outer` over points sampled on the wall of `inner`."""
    return _points_margin(inner.sample_wall(rng, count, radius), outer)


def case1_certificate(f: Isometry, h: Isometry, consts: PipelineConstants,
                      rng=None, samples: int = 10_000,
                      sample_radius: float | None = None,
                      conjugator: Isometry | None = None) -> Case1Data:
    """Build and verify the four-half-space certificate for <f^N, h^N>.

    N is the smaller of the direct bound ceil((L_alpha + 5 + 2 delta)/tau)
    and the uniform bound N(eps); both are recorded.  Pairwise wall
    disjointness is verified by sampling, each sampled point of one wall
    must sit outside the other half-space by at least
    MARGIN_FACTOR * tol_point.

    When h = U f U^-1 pass U as conjugator: the h-side wall geometry is
    then built in the frame of f's axis and pushed forward by U, and the
    h-wall pair is compared in that frame, because a distant conjugate's
    wall pair is a deep close pair whose separation floating point cannot
    measure directly.
    """
    cf, ch = f.classify(), h.classify()
    proj = axis_projection_data(f, h, consts, conjugator=conjugator)
    tau = cf.tau
    if abs(ch.tau - tau) > 1e-9 * max(1.0, tau):
        raise NotCase1(
            f"translation lengths differ: {tau!r} vs {ch.tau!r}; "
            "reduce the pair first"
        )
    if tau < consts.lambda_threshold - consts.tol_classify:
        raise NotCase1(
            f"translation length {tau!r} is below the case threshold "
            f"{consts.lambda_threshold!r}"
        )
    with mpmath.workdps(40):
        need = (mpmath.mpf(proj.L_alpha) + _T_OFFSET
                + 2 * mpmath.acosh(mpmath.sqrt(2)))
        N_direct = int(mpmath.ceil(need / mpmath.mpf(tau)))
    N_uniform = consts.N_case1
    N = min(N_direct, N_uniform)

    fN, fNi = f.power(N), f.power(-N)
    x = proj.x_mid
    f_walls = (
        HalfSpace(nearer=fN.apply(x), farther=x),
        HalfSpace(nearer=fNi.apply(x), farther=x),
    )
    if conjugator is None:
        hN = h.power(N)
        y = proj.y_mid
        base_walls = (
            HalfSpace(nearer=hN.apply(y), farther=y),
            HalfSpace(nearer=hN.inverse().apply(y), farther=y),
        )
        h_walls = base_walls
        push = None
    else:
        # Pullback of y_mid, computed in the base frame: transport
        # preserves axis parameters, so this is the same foot y_mid was
        # pushed from.
        y0 = proj.alpha.point_at(0.5 * (proj.t_minus + proj.t_plus))
        base_walls = (
            HalfSpace(nearer=fN.apply(y0), farther=y0),
            HalfSpace(nearer=fNi.apply(y0), farther=y0),
        )

        def push(coords):
            return conjugator.apply_raw(coords)

        h_walls = tuple(
            HalfSpace(
                nearer=SpacePoint(push(w.nearer.coords)),
                farther=SpacePoint(push(w.farther.coords)),
            )
            for w in base_walls
        )
    walls = f_walls + h_walls
    names = ("f+", "f-", "h+", "h-")

    rng = np.random.default_rng(0) if rng is None else rng
    if sample_radius is None:
        sample_radius = max(20.0, proj.L_alpha + N * tau + 10.0)
    required = -MARGIN_FACTOR * consts.tol_point
    # Wall points are sampled in each wall's own safe frame and pushed
    # forward for cross-frame comparisons; the h+|h- pair is measured
    # entirely in the base frame, where the conjugator is an isometry.
    pts = [w.sample_wall(rng, samples, sample_radius) for w in f_walls]
    pts += [w.sample_wall(rng, samples, sample_radius) for w in base_walls]
    pushed = list(pts)
    if push is not None:
        pushed[2] = push(pts[2])
        pushed[3] = push(pts[3])
    against = [walls[0], walls[1], walls[2], walls[3]]
    against_base = [None, None, base_walls[0], base_walls[1]]

    def pair_margin(i, j):
        if push is not None and i >= 2 and j >= 2:
            return max(
                _points_margin(pts[i], against_base[j]),
                _points_margin(pts[j], against_base[i]),
            )
        return max(
            _points_margin(pushed[i], against[j]),
            _points_margin(pushed[j], against[i]),
        )

    margins = {}
    for i in range(4):
        for j in range(i + 1, 4):
            m = pair_margin(i, j)
            margins[f"{names[i]}|{names[j]}"] = m
            if m > required:
                raise DisjointnessUnverified(
                    f"walls {names[i]} and {names[j]} come within margin "
                    f"{m!r} (need <= {required!r})"
                )
    return Case1Data(
        f=f,
        h=h,
        projection=proj,
        tau=tau,
        N_direct=N_direct,
        N_uniform=N_uniform,
        N_used=N,
        walls=walls,
        margins=margins,
        samples_per_wall=samples,
    )


def schottky_domain_contains(data: Case1Data, p: SpacePoint,
                             tol: float = 0.0) -> bool:
    """Membership in the common exterior of the four half-spaces."""
    return all(w.margin(p) <= tol for w in data.walls)


def _perp_from_products(A: float, B: float, C: float, D: float):
    """Common perpendicular between two unit-speed lines, from the four
    scaled endpoint products of -<gamma_1(s), gamma_2(t)>.

    That product expands as A e^{s+t} + B e^{s-t} + C e^{-s+t} + D e^{-s-t};
    minimizing gives the foot parameters in closed form and
    cosh d = 2 (sqrt(AD) + sqrt(BC)).  A vanishing coefficient means the
    lines share an ideal endpoint.
    """
    if min(A, B, C, D) <= 0.0:
        raise SharedEndpoint("lines share an ideal endpoint")
    s = 0.25 * math.log((C * D) / (A * B))
    t = 0.25 * math.log((B * D) / (A * C))
    return s, t, 2.0 * (math.sqrt(A * D) + math.sqrt(B * C))


def _perp_line_line(l1: GeodesicLine, l2: GeodesicLine):
    """Foot parameters on l1 and l2 plus cosh of the gap between them."""
    k = l1._scale * l2._scale
    A = -float(mdot(l1.pos.coords, l2.pos.coords)) / k
    B = -float(mdot(l1.pos.coords, l2.neg.coords)) / k
    C = -float(mdot(l1.neg.coords, l2.pos.coords)) / k
    D = -float(mdot(l1.neg.coords, l2.neg.coords)) / k
    return _perp_from_products(A, B, C, D)


def _perp_conjugate(line: GeodesicLine, U: Isometry):
    """Common perpendicular between `line` and its image U(line).

    Works with the raw endpoint images, which parametrize the image line
    at unit speed with the same normalizer, so the products stay accurate
    even when U carries the line so far away that its image endpoints are
    indistinguishable in floating point.
    """
    rp = U.apply_raw(line.pos.coords)
    rn = U.apply_raw(line.neg.coords)
    k = line._scale * line._scale
    A = -float(mdot(line.pos.coords, rp)) / k
    B = -float(mdot(line.pos.coords, rn)) / k
    C = -float(mdot(line.neg.coords, rp)) / k
    D = -float(mdot(line.neg.coords, rn)) / k
    return _perp_from_products(A, B, C, D)


def case2_pair_search(f: Isometry, g: Isometry, consts: PipelineConstants,
                      budget: int = 1_000_000):
    """Scan conjugates g^i f g^-i for one whose tube hull clears L.

    Conjugation invariance collapses the search over pairs (i, j) to a
    scan over the difference j - i, so the first shift whose hull gap
    certifiably exceeds L by MARGIN_FACTOR * tol_point is returned as
    (shift, conjugate, tube_f, tube_conjugate, hull_gap, iterations).

    The candidate tube is the transport of the tube of f by g^shift (the
    two are equal as sets), so the scan never classifies the conjugate
    matrices, whose fixed-point data degrades quickly in floating point
    as the conjugates move away.
    """
    tube_f = make_tube(f, consts)
    required = consts.ltg.L + MARGIN_FACTOR * consts.tol_point
    conj = g
    for shift in range(1, budget + 1):
        gap, moved_ball = conjugate_tube_gap(tube_f, conj, consts)
        if tube_f.certified and gap >= required:
            cand = f.conjugated_by(conj)
            if tube_f.kind == "parabolic":
                tube_c = replace(tube_f, generator=cand, horoball=moved_ball)
            else:
                tube_c = replace(
                    tube_f, generator=cand, axis=_moved_axis(tube_f.axis, conj)
                )
            return shift, cand, tube_f, tube_c, gap, shift
        conj = g @ conj
    raise SearchExhausted(
        f"no conjugate within {budget} shifts reached hull gap {required!r}"
    )


def conjugate_tube_gap(tube_f: TubeDescriptor, conj: Isometry,
                       consts: PipelineConstants):
    """Hull gap between a tube and its image under conj.

    Returns (gap, transported horoball or None).  Works entirely by
    transporting tube_f's own data, so it stays accurate however far the
    image has moved; a shared fixed point reads as gap zero.
    """
    moved_ball = None
    if tube_f.kind == "parabolic":
        moved_ball = transport_horoball(tube_f.horoball, conj)
        try:
            sep = _horoball_gap(tube_f.horoball, moved_ball)
        except SharedFixedPoint:
            sep = 0.0
    else:
        try:
            _, _, chd = _perp_conjugate(tube_f.axis, conj)
            sep = max(
                0.0,
                math.acosh(max(1.0, chd)) - 2.0 * tube_f.radius_bound,
            )
        except SharedEndpoint:
            sep = 0.0
    return max(0.0, sep - 2.0 * consts.q_hull), moved_ball


def _moved_axis(axis: GeodesicLine, U: Isometry):
    """Image line of an axis, from raw endpoint images and the preserved
    endpoint product; None once an image leaves the float range."""
    try:
        return GeodesicLine.with_scale(
            IdealPoint.raw(U.apply_raw(axis.neg.coords)),
            IdealPoint.raw(U.apply_raw(axis.pos.coords)),
            axis._scale,
        )
    except InvalidPoint:
        return None


def case2_certificate(f: Isometry, g: Isometry, consts: PipelineConstants,
                      budget: int = 1_000_000) -> Case2Data:
    shift, cand, tube_f, tube_c, gap, iters = case2_pair_search(
        f, g, consts, budget=budget
    )
    return Case2Data(
        f=f,
        h=cand,
        conjugator=g.power(shift),
        delta_shift=shift,
        tube_f=tube_f,
        tube_h=tube_c,
        hull_gap=gap,
        certified=True,
        iterations=iters,
    )


# ---------------------------------------------------------------------------
# broken paths


def _hyperbolic_feet(t1: TubeDescriptor, t2: TubeDescriptor):
    """Tube boundary points on the common perpendicular between the axes."""
    s, t, chd = _perp_line_line(t1.axis, t2.axis)
    D = math.acosh(max(1.0, chd))
    if D <= t1.radius_bound + t2.radius_bound:
        raise DomainError("tubes overlap; no connecting segment")
    p = t1.axis.point_at(s)
    q = t2.axis.point_at(t)
    y = exp_map(p, unit_tangent(p, q), t1.radius_bound)
    z = exp_map(q, unit_tangent(q, p), t2.radius_bound)
    return y, z


def _parabolic_feet(t1: TubeDescriptor, t2: TubeDescriptor):
    """Horoball boundary points on the geodesic joining the ideal centers."""
    h1, h2 = t1.horoball, t2.horoball
    line = GeodesicLine(neg=h1.xi, pos=h2.xi)
    prod = -float(mdot(h1.xi.coords, h2.xi.coords))
    k = math.sqrt(2.0 * prod)
    s_y = math.log(h1.c * k / prod)
    s_z = math.log(prod / (k * h2.c))
    if s_y >= s_z:
        raise DomainError("horoballs overlap; no connecting segment")
    return line.point_at(s_y), line.point_at(s_z)


def tube_feet(t1: TubeDescriptor, t2: TubeDescriptor,
              consts: PipelineConstants):
    """Endpoints of the shortest segment between the two tubes.

    The segment leaves each tube orthogonally, so it meets every geodesic
    into its tube at an angle >= pi/2: exactly the corner condition the
    broken-path argument needs.  Both descriptors must carry usable axis
    or horoball data; for a conjugate pair prefer the frame-local route
    taken by broken_path.
    """
    if t1.kind == "hyperbolic" and t2.kind == "hyperbolic":
        return _hyperbolic_feet(t1, t2)
    if t1.kind == "parabolic" and t2.kind == "parabolic":
        return _parabolic_feet(t1, t2)
    raise DomainError("mixed-kind broken paths are not supported")


def _frame_local_feet(data: Case2Data):
    """Segment feet with the far one pulled back by the conjugator.

    Returns (y, u_y, z_loc, u_z, z, ell): y is the foot on the tube of f
    and u_y the unit tangent there along the connecting segment; z is the
    far foot on the conjugate tube, kept only for endpoint bookkeeping;
    z_loc is its pullback by the conjugator with u_z pointing back along
    the pulled-back segment.  Arc and angle measurements happen at y and
    z_loc, whose coordinates stay moderate no matter how far the
    conjugate tube sits, and the conjugation identity makes the local
    values equal to the ones on the actual path.
    """
    tf, th, U = data.tube_f, data.tube_h, data.conjugator
    if tf.kind == "parabolic":
        hf, hh = tf.horoball, th.horoball
        line = GeodesicLine(neg=hf.xi, pos=hh.xi)
        prod = -float(mdot(hf.xi.coords, hh.xi.coords))
        kA = math.sqrt(2.0 * prod)
        s_y = math.log(hf.c * kA / prod)
        s_z = math.log(prod / (kA * hh.c))
        ell = s_z - s_y
        if ell <= 0:
            raise DomainError("horoballs overlap; no connecting segment")
        y = line.point_at(s_y)
        u_y = line.direction_at(s_y)
        z = line.point_at(s_z)
        # pulled back, the segment runs from the preimage of the far
        # center down to xi_f; the foot on the tube of f sits where the
        # Busemann value reaches c
        xi_b = U.inverse().apply_ideal(hf.xi)
        line_b = GeodesicLine(neg=xi_b, pos=hf.xi)
        prod_b = -float(mdot(xi_b.coords, hf.xi.coords))
        kB = math.sqrt(2.0 * prod_b)
        s_b = math.log(prod_b / (kB * hf.c))
        z_loc = line_b.point_at(s_b)
        u_z = -line_b.direction_at(s_b)
        return y, u_y, z_loc, u_z, z, ell
    s_f, t_f, chd = _perp_conjugate(tf.axis, U)
    D = math.acosh(max(1.0, chd))
    ell = D - tf.radius_bound - th.radius_bound
    if ell <= 0:
        raise DomainError("tubes overlap; no connecting segment")
    p = tf.axis.point_at(s_f)
    q = U.apply(tf.axis.point_at(t_f))
    y = exp_map(p, unit_tangent(p, q), tf.radius_bound)
    u_y = unit_tangent(y, q)
    z = exp_map(q, unit_tangent(q, p), th.radius_bound)
    # the same segment pulled back by the conjugator: its axis foot is
    # gamma(t_f) exactly, and the far foot pulls back to the anchor side
    q_loc = tf.axis.point_at(t_f)
    anchor = U.inverse().apply(p)
    z_loc = exp_map(q_loc, unit_tangent(q_loc, anchor), th.radius_bound)
    u_z = unit_tangent(z_loc, anchor)
    return y, u_y, z_loc, u_z, z, ell


def _dir_angle(vertex: SpacePoint, u, target: SpacePoint) -> float:
    """Angle at vertex between the unit direction u and the geodesic to
    target."""
    c = float(mdot(u, unit_tangent(vertex, target)))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def broken_path(data: Case2Data, exponents, N: int,
                consts: PipelineConstants) -> dict:
    """Measure the broken path of the word w^N against every inequality.

    exponents = [m_1, ..., m_k] encodes the alternating word
    w = f^{m_k} h^{m_{k-1}} ... f^{m_2} h^{m_1} (odd slots act by h, the
    generator whose tube sits at the far end).  The path alternates
    isometric copies of the tube-connecting segment with short arcs
    inside the two tubes, so every arc length and corner angle is
    congruent to one of 2k local configurations at the segment feet.
    The measurements happen there, in frames where the numerics stay well
    conditioned; only the endpoint distance multiplies out the full word.
    """
    k = len(exponents)
    if k < 2 or k % 2 != 0:
        raise NotAlternating(
            f"need an even number >= 2 of alternating syllables, got {k}"
        )
    if any(int(m) != m or m == 0 for m in exponents):
        raise NotAlternating("syllable exponents must be nonzero integers")
    if N < 1:
        raise NotAlternating(f"power must be >= 1, got {N!r}")
    f, h = data.f, data.h
    y, u_y, z_loc, u_z, z, ell = _frame_local_feet(data)

    # even slots apply h^m and move the far foot z; conjugating by the
    # pullback turns those into f^m acting at z_loc, so both sides are
    # measured with powers of f at their own foot
    short_lengths = []
    angles = []
    for r, m in enumerate(exponents):
        S = f.power(int(m))
        base, u = (z_loc, u_z) if r % 2 == 0 else (y, u_y)
        img = S.apply(base)
        short_lengths.append(distance(base, img))
        angles.append(_dir_angle(base, u, img))
        angles.append(_dir_angle(base, u, S.inverse().apply(base)))

    total = k * N
    v = None
    for r in range(total):
        syll = (h if r % 2 == 0 else f).power(int(exponents[r % k]))
        v = syll if v is None else v @ syll
    try:
        endpoint = distance(y, v.apply(z))
        word_moves = distance(y, v.apply(y))
    except (InvalidPoint, OverflowError) as exc:
        raise NumericallyAmbiguous(
            f"endpoint of the power {N} word overflows the float range"
        ) from exc

    path_length = (total + 1) * ell + N * float(sum(short_lengths))
    lam, al = consts.ltg.lambda_qg, consts.ltg.alpha_qg
    qi_lower = path_length / lam - al
    claim_lower = (k * consts.ltg.L / lam) * N - al
    min_short = float(min(short_lengths))
    min_angle = float(min(angles))
    return {
        "k": k,
        "N": N,
        "segment_count": 2 * total + 1,
        "ell": ell,
        "min_long": ell,
        "min_short": min_short,
        "min_angle": min_angle,
        "path_length": float(path_length),
        "endpoint_distance": float(endpoint),
        "qi_lower": float(qi_lower),
        "claim_lower": float(claim_lower),
        "word_moves_base": float(word_moves),
        "passes": bool(
            ell >= consts.ltg.L - consts.tol_point
            and min_short >= consts.eps / 10.0 - consts.tol_point
            and min_angle >= math.pi / 2.0 - consts.tol_angle
            and endpoint >= qi_lower - consts.tol_point
        ),
    }


def word_power_growth(data: Case2Data, consts: PipelineConstants,
                      exponents=(1, 1), N_max: int = 6) -> dict:
    """Broken-path reports for w, w^2, ..., w^{N_max}.

    Checks that the endpoint distance grows at least linearly at the
    claimed quasigeodesic rate for every power.
    """
    reports = [broken_path(data, list(exponents), N, consts)
               for N in range(1, N_max + 1)]
    growth_ok = all(r["endpoint_distance"] >= r["claim_lower"] - consts.tol_point
                    for r in reports)
    return {
        "reports": reports,
        "growth_ok": bool(growth_ok),
        "all_pass": bool(growth_ok and all(r["passes"] for r in reports)),
    }


def verify_orbit_qi(data, consts: PipelineConstants, N_max: int = 6) -> dict:
    """Exhaustive orbit-growth report for a certificate's generator pair.

    Enumerates every reduced word of length <= N_max over the certified
    generators and their inverses, measures how far each moves a base
    point on the first generator's axis, and compares against the linear
    lower bound (tau / lambda_qg) |w| - alpha_qg.  Report-only: the
    certificate machinery never depends on this sweep, it is the
    empirical convex-cocompactness evidence.

    Hyperbolic generators only; a parabolic Case-2 certificate is
    skipped with an explicit status instead of an error.
    """
    if isinstance(data, Case2Data):
        if data.tube_f.kind == "parabolic":
            return {
                "status": "hyperbolic-only",
                "skipped": True,
                "reason": "orbit growth bounds need hyperbolic generators",
            }
        g1, g2 = data.f, data.h
        tau = data.f.classify().tau
    elif isinstance(data, Case1Data):
        g1 = data.f.power(data.N_used)
        g2 = data.h.power(data.N_used)
        tau = data.N_used * data.tau
    else:
        raise NotCase2(f"expected Case1Data or Case2Data, got {type(data)!r}")
    y = data.f.axis().point_at(0.0)
    lam, al = consts.ltg.lambda_qg, consts.ltg.alpha_qg

    gens = (g1, g1.inverse(), g2, g2.inverse())
    # letter i blocks letter i^-1 as the next step
    blocked = (1, 0, 3, 2)
    per_length = [
        {"length": ell, "min_distance": math.inf, "words": 0}
        for ell in range(1, N_max + 1)
    ]
    min_slack = math.inf
    min_ratio = math.inf

    def walk(prod, last, length):
        nonlocal min_slack, min_ratio
        if length > 0:
            d = prod.displacement(y)
            row = per_length[length - 1]
            row["words"] += 1
            if d < row["min_distance"]:
                row["min_distance"] = d
            min_slack = min(min_slack, d - ((tau / lam) * length - al))
            min_ratio = min(min_ratio, d / length)
        if length == N_max:
            return
        for i, g in enumerate(gens):
            if last is not None and i == blocked[last]:
                continue
            walk(g if prod is None else prod @ g, i, length + 1)

    walk(None, None, 0)
    return {
        "status": "ok",
        "skipped": False,
        "N_max": N_max,
        "tau": float(tau),
        "per_length": per_length,
        "min_ratio": float(min_ratio),
        "min_slack": float(min_slack),
        "passes": bool(min_slack >= -MARGIN_FACTOR * consts.tol_point),
    }
