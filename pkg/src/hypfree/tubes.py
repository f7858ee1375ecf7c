"""Margulis tubes and cusps with certified distance lower bounds.

The eps-tube of a nonelliptic g is the union of the displacement sets
{ x : d(x, g^i x) <= eps } over the powers i that still have translation
length <= eps/10 (all nonzero powers when g is parabolic).  For a
hyperbolic g this union is a solid cylinder around the axis; for a
parabolic g it is a horoball at the fixed ideal point.

Horoballs are handled through the time-normalized Busemann parameter
b(x) = -<x, xi>: every parabolic displacement satisfies

    cosh d(x, gx) = 1 + w b(x)^2 / 2

for a strength constant w > 0 depending only on g, provided g acts on its
horospheres as a pure translation.  That holds automatically for n <= 3;
in higher dimensions a screw parabolic violates it, which the constructor
detects by sampling, and the resulting bounds are flagged uncertified.

Cylinder radii likewise come from

    cosh d(x, g^i x) = cosh(i tau) cosh^2(rho) - cos(i theta) sinh^2(rho)

exact for n <= 3.  Since cos(i theta) <= 1, dropping the rotation term
only enlarges the radius, so the rotation-free radius at power 1 is a
certified envelope for the whole union in every dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PipelineConstants, m_exponent
from .errors import (
    DomainError,
    EllipticInput,
    MonotonicityViolation,
    PowerOutOfRange,
    PreconditionDisplacement,
    SharedFixedPoint,
    TauExceedsEps,
    TauTooLarge,
)
from .geometry import (
    GeodesicLine,
    IdealPoint,
    SpacePoint,
    distance,
    exp_map,
    line_line_distance,
    mdot,
    point_line_distance,
    project_to_line,
    unit_tangent,
)
from .isometry import Isometry

# How many random probe points are used to confirm the pure-translation
# displacement law of a parabolic before trusting its horoball form.
_PURITY_PROBES = 8


@dataclass(frozen=True)
class HoroballData:
    """Horoball { x : -<x, xi> <= c } at the ideal point xi."""

    xi: IdealPoint
    c: float
    strength: float

    def busemann(self, x: SpacePoint) -> float:
        return -float(mdot(x.coords, self.xi.coords))

    def contains(self, x: SpacePoint, tol: float = 0.0) -> bool:
        return self.busemann(x) <= self.c + tol

    def distance_to_point(self, x: SpacePoint) -> float:
        return max(0.0, math.log(self.busemann(x) / self.c))

    def to_json(self):
        return {"xi": self.xi.to_json(), "c": self.c, "strength": self.strength}


def transport_horoball(hb: HoroballData, U: Isometry) -> HoroballData:
    """Image of a horoball under an isometry, without refitting.

    The raw image of the time-normalized center has some time coordinate
    t; renormalizing the center divides every Busemann value by t, so the
    image ball is { -<x, xi'> <= c/t } and the strength scales by t^2.
    This stays accurate even when the image generator's matrix is too
    ill-conditioned to classify in floating point.
    """
    raw = U.apply_raw(hb.xi.coords)
    t = float(raw[-1])
    if t <= 0:
        raise DomainError("transported horoball center left the future cone")
    return HoroballData(xi=IdealPoint(raw), c=hb.c / t, strength=hb.strength * t * t)


def tube_radius_h2(tau: float, eps: float) -> float:
    """Radius of { d(x, gx) <= eps } for a rotation-free hyperbolic g."""
    if tau <= 0:
        raise TauTooLarge(f"translation length must be positive, got {tau!r}")
    if tau > eps:
        raise TauExceedsEps(
            f"translation length {tau!r} exceeds eps = {eps!r}: empty tube"
        )
    return math.acosh(math.sinh(eps / 2.0) / math.sinh(tau / 2.0))


def _cylinder_radius(tau_i: float, theta_i: float, eps: float) -> float:
    """Radius at which a translation tau_i with rotation theta_i moves by eps."""
    num = math.cosh(eps) - math.cos(theta_i)
    den = math.cosh(tau_i) - math.cos(theta_i)
    if den <= 0:
        raise TauTooLarge(f"degenerate displacement law at tau = {tau_i!r}")
    if num < den:
        raise TauExceedsEps(
            f"on-axis displacement {tau_i!r} already exceeds eps = {eps!r}"
        )
    return math.acosh(math.sqrt(num / den))


@dataclass(frozen=True)
class TubeDescriptor:
    """The eps-tube of one nonelliptic isometry, with certified size data.

    For kind "hyperbolic": axis is the invariant geodesic, radii[i-1] is a
    certified radius bound for the power-i displacement cylinder, and
    radius_bound covers the whole union.  For kind "parabolic": horoball
    describes the union of all power tubes.  certified records whether the
    stored bounds are proven (they are, except for a sampled-only parabolic
    in dimension >= 4).
    """

    kind: str
    generator: Isometry
    eps: float
    m_power: int
    axis: GeodesicLine | None = None
    radii: tuple = ()
    radius_bound: float = 0.0
    horoball: HoroballData | None = None
    certified: bool = True
    radii_exact: bool = False

    def space_dim(self) -> int:
        return self.generator.space_dim

    def to_json(self):
        out = {
            "kind": self.kind,
            "eps": self.eps,
            "m_power": self.m_power,
            "certified": self.certified,
        }
        if self.kind == "hyperbolic":
            out["axis"] = self.axis.to_json()
            out["radii"] = list(self.radii)
            out["radius_bound"] = self.radius_bound
            out["radii_exact"] = self.radii_exact
        else:
            out["horoball"] = self.horoball.to_json()
        return out


def _parabolic_strength(g: Isometry, xi: IdealPoint, rng=None):
    """Fit the displacement constant w and probe the pure-translation law."""
    A = g.lorentz
    n1 = A.shape[0]
    origin = np.zeros(n1)
    origin[-1] = 1.0

    def probe(coords):
        img = A @ coords
        ch = -float(mdot(coords, img))
        b = -float(mdot(coords, xi.coords))
        return max(ch - 1.0, 0.0), b

    d0, b0 = probe(origin)
    w = 2.0 * d0 / (b0 * b0)
    if w <= 0:
        raise PreconditionDisplacement("parabolic strength is not positive")
    rng = np.random.default_rng(12345) if rng is None else rng
    pure = True
    for _ in range(_PURITY_PROBES):
        v = rng.normal(size=n1 - 1)
        v /= max(np.linalg.norm(v), 1e-12)
        r = rng.uniform(0.5, 3.0)
        coords = np.concatenate([math.sinh(r) * v, [math.cosh(r)]])
        excess, b = probe(coords)
        if abs(excess - w * b * b / 2.0) > 1e-8 * max(1.0, excess):
            pure = False
            break
    return w, pure


def make_tube(g: Isometry, consts: PipelineConstants) -> TubeDescriptor:
    """Tube of g at eps = consts.eps, with certified distance data.

    Hyperbolic g must have translation length <= eps/10 (otherwise the
    union of power tubes is empty and TauTooLarge is raised).
    """
    cls = g.classify()
    if not cls.nonelliptic:
        raise EllipticInput(f"cannot build a tube for a {cls.kind} isometry")
    eps = consts.eps
    if cls.kind == "parabolic":
        xi = cls.fixed_ideal[0]
        w, pure = _parabolic_strength(g, xi)
        c = 2.0 * math.sinh(eps / 2.0) / math.sqrt(w)
        certified = g.space_dim <= 3 or pure
        # sampling supports but does not prove purity above dimension 3
        if g.space_dim > 3:
            certified = False
        return TubeDescriptor(
            kind="parabolic",
            generator=g,
            eps=eps,
            m_power=0,
            horoball=HoroballData(xi=xi, c=c, strength=w),
            certified=certified,
        )
    tau, theta = cls.tau, cls.rotation_angle
    m = m_exponent(tau, eps)
    exact = g.space_dim <= 3
    radii = []
    for i in range(1, m + 1):
        if exact:
            radii.append(_cylinder_radius(i * tau, i * theta, eps))
        else:
            radii.append(_cylinder_radius(i * tau, 0.0, eps))
    return TubeDescriptor(
        kind="hyperbolic",
        generator=g,
        eps=eps,
        m_power=m,
        axis=cls.axis,
        radii=tuple(radii),
        radius_bound=max(radii),
        certified=True,
        radii_exact=exact,
    )


def tube_contains(tube: TubeDescriptor, x: SpacePoint, power: int | None = None,
                  tol: float = 0.0) -> bool:
    """Membership in the tube, by direct displacement measurement.

    power selects a single power tube; None means the full union.  For a
    hyperbolic tube powers beyond m_power are outside the union and raise.
    """
    g = tube.generator
    if power is not None:
        if power == 0:
            raise PowerOutOfRange("power 0 has no displacement set")
        if tube.kind == "hyperbolic" and abs(power) > tube.m_power:
            raise PowerOutOfRange(
                f"power {power} exceeds the tube cutoff {tube.m_power}"
            )
        return g.power(abs(power)).displacement(x) <= tube.eps + tol
    if tube.kind == "parabolic":
        # all power tubes sit inside the power-1 tube
        return g.displacement(x) <= tube.eps + tol
    return any(
        g.power(i).displacement(x) <= tube.eps + tol
        for i in range(1, tube.m_power + 1)
    )


def cusp_contains(tube: TubeDescriptor, x: SpacePoint, tol: float = 0.0) -> bool:
    """Horoball membership for a parabolic tube, via the Busemann form."""
    if tube.kind != "parabolic" or tube.horoball is None:
        raise DomainError("cusp membership is defined for parabolic tubes only")
    return tube.horoball.contains(x, tol=tol)


def _horoball_gap(h1: HoroballData, h2: HoroballData) -> float:
    prod = -float(mdot(h1.xi.coords, h2.xi.coords))
    if prod <= 1e-11:
        raise SharedFixedPoint("horoballs share their ideal point")
    return max(0.0, math.log(prod / (2.0 * h1.c * h2.c)))


def _horoball_line_gap(h: HoroballData, line: GeodesicLine) -> float:
    a = -float(mdot(line.pos.coords, h.xi.coords))
    b = -float(mdot(line.neg.coords, h.xi.coords))
    if min(a, b) <= 1e-11:
        raise SharedFixedPoint("horoball sits at an endpoint of the axis")
    scale = line._scale
    closest = 2.0 * math.sqrt(a * b) / scale
    return max(0.0, math.log(closest / h.c))


def tube_distance_lower(t1: TubeDescriptor, t2: TubeDescriptor,
                        consts: PipelineConstants):
    """Certified lower bound for d(tube1, tube2).

    Returns (value, certified).  certified is False only when one of the
    descriptors itself carries unproven size data.
    """
    certified = t1.certified and t2.certified
    if t1.kind == "hyperbolic" and t2.kind == "hyperbolic":
        d = line_line_distance(t1.axis, t2.axis)
        return max(0.0, d - t1.radius_bound - t2.radius_bound), certified
    if t1.kind == "parabolic" and t2.kind == "parabolic":
        return _horoball_gap(t1.horoball, t2.horoball), certified
    horo, cyl = (t1, t2) if t1.kind == "parabolic" else (t2, t1)
    gap = _horoball_line_gap(horo.horoball, cyl.axis)
    return max(0.0, gap - cyl.radius_bound), certified


def hull_distance_lower(t1: TubeDescriptor, t2: TubeDescriptor,
                        consts: PipelineConstants):
    """Certified lower bound for the distance between the tube hulls.

    Each hull stays within q_hull of its tube, so the tube gap shrinks by
    at most 2 q_hull when passing to hulls.
    """
    gap, certified = tube_distance_lower(t1, t2, consts)
    return max(0.0, gap - 2.0 * consts.q_hull), certified


def find_small_displacement_point(g: Isometry, x: SpacePoint,
                                  consts: PipelineConstants):
    """Walk from a point displaced exactly eps to one displaced exactly eps/3.

    x must satisfy d(x, gx) = eps within tolerance, and g must translate by
    at most eps/10.  The returned point lies on the segment from x toward
    the axis (or fixed ideal point) of g; its distance from x is the second
    return value.
    """
    eps = consts.eps
    tol = consts.tol_point
    cls = g.classify()
    if not cls.nonelliptic:
        raise EllipticInput(f"{cls.kind} isometry")
    if cls.tau > eps / 10.0:
        raise TauTooLarge(
            f"translation length {cls.tau!r} exceeds eps/10 = {eps / 10.0!r}"
        )
    d0 = g.displacement(x)
    if abs(d0 - eps) > 1e-6:
        raise PreconditionDisplacement(
            f"start displacement {d0!r} is not eps = {eps!r}"
        )
    target = eps / 3.0
    if cls.kind == "hyperbolic":
        foot = project_to_line(x, cls.axis)
        t_hi = distance(x, foot)
        u = unit_tangent(x, foot)
    else:
        xi = cls.fixed_ideal[0]
        b = -float(mdot(xi.coords, x.coords))
        u_coords = xi.coords / b - x.coords
        u = u_coords
        # Busemann decay gives the crossing parameter in closed form; the
        # bisection below then verifies it independently.
        t_hi = math.log(max(d0 / target, 2.0)) + 2.0

    def disp_at(t: float):
        return g.displacement(exp_map(x, u, t))

    lo, hi = 0.0, t_hi
    f_lo, f_hi = disp_at(lo) - target, disp_at(hi) - target
    if f_lo <= 0 or f_hi >= 0:
        raise MonotonicityViolation(
            f"displacement does not bracket eps/3 on the segment: "
            f"{f_lo + target!r} .. {f_hi + target!r}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if disp_at(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 0.25 * tol:
            break
    t_star = 0.5 * (lo + hi)
    point = exp_map(x, u, t_star)
    check = g.displacement(point)
    if abs(check - target) > 1e-6:
        raise MonotonicityViolation(
            f"bisection landed at displacement {check!r}, wanted {target!r}"
        )
    return point, t_star
