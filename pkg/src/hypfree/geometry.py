"""Hyperboloid model of hyperbolic n-space.

Points live on the upper sheet of {<x,x> = -1} in Minkowski space R^{n,1}
with bilinear form <x,y> = x_1 y_1 + ... + x_n y_n - x_{n+1} y_{n+1}
(last coordinate time-like).  Distances are d(x,y) = arccosh(-<x,y>),
computed here through the equivalent cancellation-free form
2 asinh(sqrt(<x-y, x-y>)/2).  Ideal points are null directions scaled to
time coordinate 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateAngle,
    InvalidPoint,
    ProjectionUndefined,
    SharedEndpoint,
)

TOL_POINT = 1e-9
TOL_ANGLE = 1e-8

_EPS = float(np.finfo(float).eps)

# Noise allowance for the quadratic-form test at coordinate scale t: the
# form is only evaluable to ~eps * t^2, and points retraced from deep
# inside thin tubes arrive with that noise amplified by e^radius, so the
# gate leaves generous headroom while still rejecting genuinely
# space-like vectors (their defect grows like t^2 itself).
_FORM_SLACK = 2.0**24 * _EPS


def mdot(x, y):
    """Minkowski inner product; broadcasts over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.sum(x[..., :-1] * y[..., :-1], axis=-1) - x[..., -1] * y[..., -1]


def normalize_space(coords):
    """Scale a time-like vector onto the upper hyperboloid sheet.

    The quadratic form of a vector with time coordinate t is only
    float-evaluable to about eps * t^2, so the timelike test and the
    rescaling are applied only while that noise floor stays well below 1.
    Points farther out (they arise as isometry images and as feet deep
    inside thin tubes) are accepted as given: rescaling by a noise
    dominated norm would corrupt coordinates that are accurate in
    relative terms.
    """
    coords = np.asarray(coords, dtype=float)
    if not np.all(np.isfinite(coords)):
        raise InvalidPoint("coordinates must be finite")
    t = coords[..., -1]
    q = mdot(coords, coords)
    slack = _FORM_SLACK * np.maximum(1.0, t * t)
    assessable = slack < 0.5
    bad = (t <= 0) | (assessable & (q > -slack)) | (~assessable & (q >= slack))
    if np.any(bad):
        raise InvalidPoint("vector is not time-like with positive time coordinate")
    scale = np.sqrt(np.where(assessable, -q, 1.0))
    return coords / scale[..., None]


def distance_raw(x, y):
    """Hyperbolic distance between hyperboloid vectors; broadcasts.

    Nearby pairs go through the cancellation-free chord form
    2 asinh(sqrt(<x-y,x-y>)/2).  Distant pairs switch to
    arccosh(-<x,y>): the chord form loses all digits once coordinates
    are large, while the product form only cancels by a factor of
    about e^d there.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = -mdot(x, y)
    with np.errstate(invalid="ignore", over="ignore"):
        d = x - y
        q = mdot(d, d)
        q = np.where(np.isfinite(q), q, 0.0)
        near = 2.0 * np.arcsinh(0.5 * np.sqrt(np.maximum(q, 0.0)))
    far = np.arccosh(np.maximum(m, 1.0))
    return np.where(m > 4.0, far, near)


@dataclass(frozen=True, eq=False)
class SpacePoint:
    """A point of H^n; the constructor re-normalizes onto the hyperboloid."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1 or c.shape[0] < 3:
            raise InvalidPoint("expected a flat (n+1)-vector with n >= 2")
        c = normalize_space(c)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def validated(cls, coords, tol=1e-6):
        """Strict constructor for external input: norm must already be -1."""
        c = np.asarray(coords, dtype=float)
        if c.ndim != 1 or abs(mdot(c, c) + 1.0) > tol or c[-1] <= 0:
            raise InvalidPoint("coordinates do not satisfy <x,x> = -1 within tolerance")
        return cls(c)

    @property
    def dim(self):
        return self.coords.shape[0] - 1

    def to_json(self):
        return [float(v) for v in self.coords]


@dataclass(frozen=True, eq=False)
class IdealPoint:
    """A boundary point of H^n: a null direction scaled to time coordinate 1."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1 or c.shape[0] < 3:
            raise InvalidPoint("expected a flat (n+1)-vector with n >= 2")
        t = c[-1]
        if t <= 0:
            raise InvalidPoint("ideal point must have positive time coordinate")
        c = c / t
        scale = max(1.0, float(np.max(np.abs(c))))
        if abs(mdot(c, c)) > 1e-7 * scale * scale:
            raise InvalidPoint("vector is not null within tolerance")
        # Project exactly onto the cone: rescale the space part to unit length.
        s = np.linalg.norm(c[:-1])
        if s <= 0:
            raise InvalidPoint("degenerate null vector")
        c = np.concatenate([c[:-1] / s, [1.0]])
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def raw(cls, coords) -> "IdealPoint":
        """A null direction kept at its incoming scale.

        Normalizing to time coordinate 1 rounds nearly parallel directions
        onto each other, so images of ideal endpoints under a large-norm
        isometry must stay raw: their pairwise Minkowski products then
        cancel only as far as the isometry stretched them, not below the
        resolution of the normalized coordinates.
        """
        c = np.asarray(coords, dtype=float)
        if c.ndim != 1 or c.shape[0] < 3:
            raise InvalidPoint("expected a flat (n+1)-vector with n >= 2")
        t = c[-1]
        if t <= 0 or not np.all(np.isfinite(c)):
            raise InvalidPoint("ideal point must have positive time coordinate")
        if abs(mdot(c, c)) > 1e-7 * t * t:
            raise InvalidPoint("vector is not null within tolerance")
        obj = object.__new__(cls)
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(obj, "coords", c)
        return obj

    @property
    def dim(self):
        return self.coords.shape[0] - 1

    def to_json(self):
        return [float(v) for v in self.coords]

    def same_as(self, other, tol=1e-9):
        a = self.coords / self.coords[-1]
        b = other.coords / other.coords[-1]
        return bool(np.max(np.abs(a - b)) <= tol)


def distance(x: SpacePoint, y: SpacePoint) -> float:
    return float(distance_raw(x.coords, y.coords))


def unit_tangent(p: SpacePoint, q: SpacePoint):
    """Initial unit tangent at p of the geodesic from p to q."""
    d = distance(p, q)
    if d < TOL_POINT:
        raise DegenerateAngle("points coincide within tolerance")
    w = (q.coords - np.cosh(d) * p.coords) / np.sinh(d)
    return w


def exp_map(p: SpacePoint, u, r: float) -> SpacePoint:
    """Geodesic flow: start at p with unit tangent u, travel distance r."""
    return SpacePoint(np.cosh(r) * p.coords + np.sinh(r) * np.asarray(u, dtype=float))


def angle(vertex: SpacePoint, a: SpacePoint, b: SpacePoint) -> float:
    """Riemannian angle at vertex between the geodesics toward a and b."""
    wa = unit_tangent(vertex, a)
    wb = unit_tangent(vertex, b)
    c = float(mdot(wa, wb))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def midpoint(x: SpacePoint, y: SpacePoint) -> SpacePoint:
    return SpacePoint(x.coords + y.coords)


@dataclass(frozen=True, eq=False)
class GeodesicLine:
    """Bi-infinite geodesic with ideal endpoints neg (s -> -inf) and pos.

    Unit-speed parametrization point_at(s) = (e^s pos + e^-s neg)/c with
    c = sqrt(-2 <pos, neg>).
    """

    neg: IdealPoint
    pos: IdealPoint
    _scale: float = field(init=False, repr=False)

    def __post_init__(self):
        g = -2.0 * float(mdot(self.neg.coords, self.pos.coords))
        if g <= 1e-14:
            raise SharedEndpoint("ideal endpoints coincide within tolerance")
        object.__setattr__(self, "_scale", float(np.sqrt(g)))

    @classmethod
    def with_scale(cls, neg: IdealPoint, pos: IdealPoint,
                   scale: float) -> "GeodesicLine":
        """Line with its normalizing scale supplied analytically.

        The image of a line under an isometry keeps the Minkowski product
        of its endpoints, but the image coordinates cannot resolve that
        product once the endpoints have moved close together; carrying the
        known value over keeps the parametrization exact (the image of
        point_at(t) is the image line's point_at(t))."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "neg", neg)
        object.__setattr__(obj, "pos", pos)
        object.__setattr__(obj, "_scale", float(scale))
        return obj

    @classmethod
    def through(cls, x: SpacePoint, y: SpacePoint) -> "GeodesicLine":
        """The geodesic through two distinct points, oriented from x to y."""
        w = unit_tangent(x, y)
        return cls(neg=IdealPoint(x.coords - w), pos=IdealPoint(x.coords + w))

    def point_at(self, s: float) -> SpacePoint:
        c = (np.exp(s) * self.pos.coords + np.exp(-s) * self.neg.coords) / self._scale
        return SpacePoint(c)

    def direction_at(self, s: float):
        return (np.exp(s) * self.pos.coords - np.exp(-s) * self.neg.coords) / self._scale

    def param_of(self, x: SpacePoint) -> float:
        """Parameter of the nearest-point projection of x onto the line."""
        a = -float(mdot(x.coords, self.pos.coords))
        b = -float(mdot(x.coords, self.neg.coords))
        return 0.5 * float(np.log(b / a))

    def param_of_nearby(self, x: SpacePoint) -> float:
        """Parameter of a point lying on the line (up to rounding noise).

        Far along the line one of the two endpoint products underflows to
        cancellation garbage; on the line the other determines the
        parameter by itself, so this stays accurate at any distance where
        param_of would not.
        """
        a = -float(mdot(x.coords, self.pos.coords))
        b = -float(mdot(x.coords, self.neg.coords))
        half = 0.5 * self._scale
        if b >= a:
            return float(np.log(b / half))
        return -float(np.log(a / half))

    def reversed(self) -> "GeodesicLine":
        return GeodesicLine(neg=self.pos, pos=self.neg)

    def to_json(self):
        return {"neg": self.neg.to_json(), "pos": self.pos.to_json()}


def project_to_line(x, line: GeodesicLine) -> SpacePoint:
    """Nearest-point projection of a space or ideal point onto a line.

    For both kinds the minimizer of -<x, gamma(s)> is at
    s = log(b/a)/2 with a = -<x, pos>, b = -<x, neg>; an ideal x equal to
    an endpoint of the line has no projection.
    """
    a = -float(mdot(x.coords, line.pos.coords))
    b = -float(mdot(x.coords, line.neg.coords))
    if isinstance(x, IdealPoint):
        scale = 1.0
        if a <= 1e-13 * scale or b <= 1e-13 * scale:
            raise ProjectionUndefined("ideal point is an endpoint of the line")
    s = 0.5 * float(np.log(b / a))
    return line.point_at(s)


def point_line_distance(x, line: GeodesicLine) -> float:
    """Distance from a space point to a line: cosh d = 2 sqrt(ab)/c."""
    a = -float(mdot(x.coords, line.pos.coords))
    b = -float(mdot(x.coords, line.neg.coords))
    v = 2.0 * np.sqrt(a * b) / line._scale
    return float(np.arccosh(max(1.0, v)))


def line_line_distance(l1: GeodesicLine, l2: GeodesicLine, shared_tol=1e-11) -> float:
    """Distance between two complete geodesics, in closed form.

    With endpoint pairwise products a = -<u1,u2>, b = -<u1,v2>,
    c = -<v1,u2>, e = -<v1,v2> (u = pos, v = neg) and normalizers
    f = -<u1,v1>, g = -<u2,v2>, the minimum of -<gamma_1(s), gamma_2(t)>
    is sqrt((a e + b c + 2 sqrt(a b c e)) / (f g)).  Crossing or
    asymptotic lines yield a value <= 1, i.e. distance 0.

    Raises SharedEndpoint when the lines share an ideal endpoint.
    """
    u1, v1 = l1.pos.coords, l1.neg.coords
    u2, v2 = l2.pos.coords, l2.neg.coords
    a = -float(mdot(u1, u2))
    b = -float(mdot(u1, v2))
    c = -float(mdot(v1, u2))
    e = -float(mdot(v1, v2))
    if min(a, b, c, e) <= shared_tol:
        raise SharedEndpoint("lines share an ideal endpoint within tolerance")
    f = -float(mdot(u1, v1))
    g = -float(mdot(u2, v2))
    val = np.sqrt((a * e + b * c + 2.0 * np.sqrt(a * b * c * e)) / (f * g))
    return float(np.arccosh(max(1.0, val)))


def lines_share_endpoint(l1: GeodesicLine, l2: GeodesicLine, tol=1e-9) -> bool:
    for p in (l1.neg, l1.pos):
        for q in (l2.neg, l2.pos):
            if p.same_as(q, tol):
                return True
    return False


def minkowski_complement_basis(w):
    """Orthonormal basis (first vector time-like) of the complement of a
    space-like vector w; the complement carries signature (n-1, 1)."""
    w = np.asarray(w, dtype=float)
    n1 = w.shape[0]
    sig = np.ones(n1)
    sig[-1] = -1.0

    def proj_out(v, basis):
        for b, s in basis:
            v = v - s * mdot(v, b) * b
        return v

    ww = float(mdot(w, w))
    if ww <= 0:
        raise InvalidPoint("expected a space-like vector")
    w_unit = w / np.sqrt(ww)
    basis = [(w_unit, 1.0)]
    out_time = None
    out_space = []
    # Seed with the standard basis; keep whatever survives projection.
    for k in range(n1 - 1, -1, -1):
        v = np.zeros(n1)
        v[k] = 1.0
        v = proj_out(v, basis)
        q = float(mdot(v, v))
        if abs(q) < 1e-10:
            continue
        if q < 0:
            if out_time is not None:
                continue
            v = v / np.sqrt(-q)
            if v[-1] < 0:
                v = -v
            basis.append((v, -1.0))
            out_time = v
        else:
            v = v / np.sqrt(q)
            basis.append((v, 1.0))
            out_space.append(v)
    if out_time is None or len(out_space) != n1 - 2:
        raise InvalidPoint("failed to build a complement basis")
    return out_time, out_space


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """H(nearer, farther) = { x : d(x, nearer) <= d(x, farther) }."""

    nearer: SpacePoint
    farther: SpacePoint

    def __post_init__(self):
        # The distinctness of a deep pair is not assessable in floating
        # point (their product cancels below one ulp); only points in the
        # measurable regime are checked.
        t = max(float(self.nearer.coords[-1]), float(self.farther.coords[-1]))
        if _FORM_SLACK * t * t < 0.5 and distance(self.nearer, self.farther) < TOL_POINT:
            raise InvalidPoint("half-space needs two distinct points")

    def margin(self, x: SpacePoint) -> float:
        """Positive inside, negative outside, zero on the bisector wall."""
        return distance(x, self.farther) - distance(x, self.nearer)

    def margin_raw(self, coords):
        return distance_raw(coords, self.farther.coords) - distance_raw(
            coords, self.nearer.coords
        )

    def contains(self, x: SpacePoint, tol=TOL_POINT) -> bool:
        return self.margin(x) >= -tol

    def wall_basis(self):
        """Orthonormal basis of the bisector wall, (time-like, space-like list)."""
        return minkowski_complement_basis(self.farther.coords - self.nearer.coords)

    def sample_wall(self, rng, count: int, radius: float):
        """Points on the bisector wall, radii uniform in [0, radius]."""
        e_time, e_space = self.wall_basis()
        r = rng.uniform(0.0, radius, size=count)
        k = len(e_space)
        dirs = rng.normal(size=(count, k))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        pts = np.cosh(r)[:, None] * e_time[None, :]
        tangent = dirs @ np.stack(e_space)
        pts = pts + np.sinh(r)[:, None] * tangent
        return pts

    def to_json(self):
        return {"nearer": self.nearer.to_json(), "farther": self.farther.to_json()}


def half_space_contains(h: HalfSpace, x: SpacePoint, tol=TOL_POINT) -> bool:
    return h.contains(x, tol=tol)


def halfplane_to_hyperboloid(x: float, y: float) -> SpacePoint:
    """Upper half-plane point x + iy -> hyperboloid coordinates in R^{2,1}."""
    if y <= 0:
        raise InvalidPoint("upper half-plane point needs y > 0")
    s = x * x + y * y
    return SpacePoint(np.array([(s - 1.0) / (2.0 * y), x / y, (s + 1.0) / (2.0 * y)]))


def halfspace3_to_hyperboloid(z: complex, t: float) -> SpacePoint:
    """Upper half-space point (z, t) -> hyperboloid coordinates in R^{3,1}."""
    if t <= 0:
        raise InvalidPoint("upper half-space point needs t > 0")
    s = abs(z) ** 2 + t * t
    return SpacePoint(
        np.array([(s - 1.0) / (2.0 * t), z.real / t, z.imag / t, (s + 1.0) / (2.0 * t)])
    )


def boundary_real_to_ideal(p) -> IdealPoint:
    """Boundary point of the upper half-plane (real number or None for
    infinity) -> ideal point in R^{2,1}."""
    if p is None:
        return IdealPoint(np.array([1.0, 0.0, 1.0]))
    p = float(p)
    if abs(p) <= 1.0:
        d = 1.0 + p * p
        return IdealPoint(np.array([(p * p - 1.0) / d, 2.0 * p / d, 1.0]))
    q = 1.0 / p
    d = 1.0 + q * q
    return IdealPoint(np.array([(1.0 - q * q) / d, 2.0 * q / d, 1.0]))


def boundary_complex_to_ideal(p) -> IdealPoint:
    """Boundary point of upper half-space (complex or None for infinity)."""
    if p is None:
        return IdealPoint(np.array([1.0, 0.0, 0.0, 1.0]))
    p = complex(p)
    if abs(p) <= 1.0:
        d = 1.0 + abs(p) ** 2
        return IdealPoint(
            np.array([(abs(p) ** 2 - 1.0) / d, 2.0 * p.real / d, 2.0 * p.imag / d, 1.0])
        )
    q = 1.0 / p
    d = 1.0 + abs(q) ** 2
    return IdealPoint(
        np.array([(1.0 - abs(q) ** 2) / d, 2.0 * q.real / d, -2.0 * q.imag / d, 1.0])
    )
