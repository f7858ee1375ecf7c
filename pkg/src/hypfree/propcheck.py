"""Seeded sampling suites for the library's geometric inequalities.

Each suite draws random configurations in the hyperboloid model, evaluates
one inequality family through the public API, and reports the violation
count together with the worst observed slack.  A slack is oriented so that
the tested statement asserts slack >= 0; a sample counts as a violation
when its slack drops below -tolerance.

Randomness is a counter-based Philox stream split from the run seed by the
suite label, so reports are reproducible and order-independent across
suites.
"""

from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from .constants import PipelineConstants, c_of_D, delta_hyp, r_margulis
from .errors import UnknownSuite
from .geometry import (
    GeodesicLine,
    HalfSpace,
    IdealPoint,
    SpacePoint,
    angle,
    distance,
    half_space_contains,
    mdot,
    midpoint,
    normalize_space,
    point_line_distance,
    project_to_line,
)
from .isometry import Isometry
from .tubes import cusp_contains, find_small_displacement_point, make_tube, tube_contains


def rng_for(seed: int, label: str) -> np.random.Generator:
    """Philox generator split from seed by label, one stream per suite."""
    key = zlib.crc32(label.encode("utf-8"))
    ss = np.random.SeedSequence(seed, spawn_key=(key,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    samples: int
    violations: int
    worst_margin: float | None
    tolerance: float
    elapsed: float
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self):
        # elapsed is intentionally omitted: identical (argv, seed) must
        # produce byte-identical reports
        return {
            "suite": self.suite,
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "notes": dict(self.notes),
        }


class _Margins:
    """Slack accumulator; a slack below -tol counts as a violation."""

    def __init__(self, tol: float):
        self.tol = float(tol)
        self.worst: float | None = None
        self.violations = 0

    def add(self, slack: float):
        s = float(slack)
        if self.worst is None or s < self.worst:
            self.worst = s
        if s < -self.tol:
            self.violations += 1

    def add_batch(self, slacks):
        arr = np.asarray(slacks, dtype=float)
        if arr.size == 0:
            return
        low = float(arr.min())
        if self.worst is None or low < self.worst:
            self.worst = low
        self.violations += int(np.count_nonzero(arr < -self.tol))


# ---------------------------------------------------------------------------
# sampling helpers (2-dimensional hyperboloid)

_E3 = np.array([0.0, 0.0, 1.0])


def _tangent_frame(c):
    """Orthonormal tangent basis at a point of the 2-dimensional sheet."""
    e1 = np.array([1.0, 0.0, 0.0])
    u1 = e1 + float(mdot(e1, c)) * c
    u1 = u1 / math.sqrt(float(mdot(u1, u1)))
    e2 = np.array([0.0, 1.0, 0.0])
    u2 = e2 + float(mdot(e2, c)) * c - float(mdot(e2, u1)) * u1
    u2 = u2 / math.sqrt(float(mdot(u2, u2)))
    return u1, u2


def _h2_point(rng, rho_max: float = 2.0) -> SpacePoint:
    rho = rho_max * math.sqrt(rng.random())
    phi = 2.0 * math.pi * rng.random()
    return SpacePoint(
        (
            math.sinh(rho) * math.cos(phi),
            math.sinh(rho) * math.sin(phi),
            math.cosh(rho),
        )
    )


def _ball_batch(center, rho_max: float, count: int, rng) -> np.ndarray:
    """count random points within hyperbolic distance rho_max of center."""
    u1, u2 = _tangent_frame(center)
    rho = rho_max * np.sqrt(rng.random(count))
    phi = 2.0 * math.pi * rng.random(count)
    d = np.cos(phi)[:, None] * u1 + np.sin(phi)[:, None] * u2
    return np.cosh(rho)[:, None] * center + np.sinh(rho)[:, None] * d


def _random_line(rng) -> GeodesicLine:
    th1 = 2.0 * math.pi * rng.random()
    # keep the ideal endpoints a bounded angle apart so the line is
    # well-conditioned
    th2 = th1 + 0.35 + (2.0 * math.pi - 0.7) * rng.random()
    xi1 = IdealPoint((math.cos(th1), math.sin(th1), 1.0))
    xi2 = IdealPoint((math.cos(th2), math.sin(th2), 1.0))
    return GeodesicLine(xi1, xi2)


_J2 = np.diag([1.0, 1.0, -1.0])


def _line_frame(line: GeodesicLine):
    c = line.point_at(0.0).coords
    u1 = np.asarray(line.direction_at(0.0), dtype=float)
    e = np.array([1.0, 0.0, 0.0])
    w = e + float(mdot(e, c)) * c - float(mdot(e, u1)) * u1
    n2 = float(mdot(w, w))
    if n2 < 1e-12:
        e = np.array([0.0, 1.0, 0.0])
        w = e + float(mdot(e, c)) * c - float(mdot(e, u1)) * u1
        n2 = float(mdot(w, w))
    u2 = w / math.sqrt(n2)
    return c, u1, u2


def _hyperbolic_about(line: GeodesicLine, tau: float) -> Isometry:
    """Rotation-free hyperbolic isometry translating by tau along line."""
    c, u1, u2 = _line_frame(line)
    F = np.column_stack([u1, u2, c])
    boost = np.array(
        [
            [math.cosh(tau), 0.0, math.sinh(tau)],
            [0.0, 1.0, 0.0],
            [math.sinh(tau), 0.0, math.cosh(tau)],
        ]
    )
    F_inv = _J2 @ F.T @ _J2
    return Isometry.hyperboloid(F @ boost @ F_inv)


def _axis_offset_point(line: GeodesicLine, t: float, rho: float, side: float) -> SpacePoint:
    c, u1, u2 = _line_frame(line)
    ct = math.cosh(t) * c + math.sinh(t) * u1
    return SpacePoint(math.cosh(rho) * ct + side * math.sinh(rho) * u2)


def _random_sl2(rng, frob_cap: float = 8.0) -> np.ndarray:
    """Random SL(2, R) matrix with bounded condition number."""
    while True:
        m = rng.standard_normal((2, 2))
        det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
        if abs(det) < 0.5:
            continue
        m = m / math.sqrt(abs(det))
        if det < 0:
            m[:, 1] = -m[:, 1]
        if float(np.sum(m * m)) <= frob_cap:
            return m


def _conjugated_boost(rng, tau: float) -> Isometry:
    s = _random_sl2(rng)
    d = np.array([[math.exp(tau / 2.0), 0.0], [0.0, math.exp(-tau / 2.0)]])
    s_inv = np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]])
    return Isometry.sl2_real(s @ d @ s_inv)


# ---------------------------------------------------------------------------
# suites

def _suite_ra_triangle(samples: int, rng, consts: PipelineConstants):
    """Triangles with a right-or-wider angle at C: |A1A2| >= |A1C| + |A2C| - 2d."""
    marg = _Margins(consts.tol_point)
    two_delta = 2.0 * delta_hyp()
    angle_checked = 0
    for _ in range(samples):
        c = _h2_point(rng, 2.0)
        u1, u2 = _tangent_frame(c.coords)
        th = 2.0 * math.pi * rng.random()
        psi = 0.5 * math.pi * (1.0 + rng.random())
        a = 0.05 + 3.95 * rng.random()
        b = 0.05 + 3.95 * rng.random()
        d1 = math.cos(th) * u1 + math.sin(th) * u2
        d2 = math.cos(th + psi) * u1 + math.sin(th + psi) * u2
        a1 = SpacePoint(math.cosh(a) * c.coords + math.sinh(a) * d1)
        a2 = SpacePoint(math.cosh(b) * c.coords + math.sinh(b) * d2)
        if angle_checked < 200:
            # the construction pins the vertex angle; spot-check the
            # measured Riemannian angle against it
            if abs(angle(c, a1, a2) - psi) > 1e-6:
                marg.add(-1.0)
            angle_checked += 1
        slack = distance(a1, a2) - (distance(a1, c) + distance(a2, c) - two_delta)
        marg.add(slack)
    return marg, {"angle_checked": angle_checked}


def _suite_decrease_speed(samples: int, rng, consts: PipelineConstants):
    """Isosceles triangles shrink toward the apex at rate c(D) e^-tau."""
    d_cap = 5.0
    c_d = c_of_D(d_cap)
    marg = _Margins(consts.tol_point)
    base_err = 0.0
    for _ in range(samples):
        dab = 0.05 + (d_cap - 0.05) * rng.random()
        t_leg = dab / 2.0 + 0.01 + 6.0 * rng.random()
        cos_apex = (math.cosh(t_leg) ** 2 - math.cosh(dab)) / math.sinh(t_leg) ** 2
        alpha = math.acos(min(1.0, max(-1.0, cos_apex)))
        th = 2.0 * math.pi * rng.random()
        tau = (t_leg - 0.01) * rng.random()
        t_sub = t_leg - tau

        def leg_point(direction_angle, dist):
            return SpacePoint(
                (
                    math.sinh(dist) * math.cos(direction_angle),
                    math.sinh(dist) * math.sin(direction_angle),
                    math.cosh(dist),
                )
            )

        a = leg_point(th, t_leg)
        b = leg_point(th + alpha, t_leg)
        a_sub = leg_point(th, t_sub)
        b_sub = leg_point(th + alpha, t_sub)
        base_err = max(base_err, abs(distance(a, b) - dab))
        slack = c_d * math.exp(-tau) - distance(a_sub, b_sub)
        marg.add(slack)
    return marg, {"base_construction_err": base_err}


def _suite_2bisectors(samples: int, rng, consts: PipelineConstants):
    """Ordered collinear quadruples nest their half-spaces."""
    marg = _Margins(consts.tol_point)
    two_delta = 2.0 * delta_hyp()
    inner = 100
    member_total = 0
    api_checked = 0
    for k in range(samples):
        line = _random_line(rng)
        t0 = -2.0 + 2.0 * rng.random()
        a = 0.2 + 1.3 * rng.random()
        gap = 0.2 + 1.3 * rng.random()
        extra = rng.random()
        t1 = t0 + a
        t2 = t1 + gap
        t3 = t2 + a + two_delta + extra
        x = line.point_at(t0)
        x_p = line.point_at(t1)
        x_hat = line.point_at(t2)
        x_pp = line.point_at(t3)
        mid = line.point_at(0.5 * (t1 + t2))

        pts = _ball_batch(mid.coords, 4.0, 4 * inner, rng)
        cosh_near = -(pts @ (_J2 @ x_p.coords))
        cosh_far = -(pts @ (_J2 @ x_hat.coords))
        members = np.nonzero(cosh_near <= cosh_far)[0][:inner]
        member_total += members.size
        zs = pts[members]
        d_outer_near = np.arccosh(np.clip(-(zs @ (_J2 @ x.coords)), 1.0, None))
        d_outer_far = np.arccosh(np.clip(-(zs @ (_J2 @ x_pp.coords)), 1.0, None))
        marg.add_batch(d_outer_far - d_outer_near)

        if k < 3:
            h_in = HalfSpace(x_p, x_hat)
            h_out = HalfSpace(x, x_pp)
            for z in zs[:5]:
                zp = SpacePoint(z)
                if half_space_contains(h_in, zp) and not h_out.contains(zp):
                    marg.add(-1.0)
                api_checked += 1
    return marg, {"member_points": member_total, "api_checked": api_checked}


def _suite_margulis_distance(samples: int, rng, consts: PipelineConstants):
    """Walking inward from displacement eps reaches eps/3 within r(eps)."""
    eps = consts.eps
    r_cap = r_margulis(eps)
    marg = _Margins(0.0)
    skipped = 0
    for _ in range(samples):
        line = _random_line(rng)
        tau = eps / 10.0 * (0.01 + 0.99 * rng.random())
        h = _hyperbolic_about(line, tau)
        rho = math.acosh(math.sinh(eps / 2.0) / math.sinh(tau / 2.0))
        t = -3.0 + 6.0 * rng.random()
        side = 1.0 if rng.random() < 0.5 else -1.0
        a = _axis_offset_point(line, t, rho, side)
        if abs(h.displacement(a) - eps) > 1e-7:
            skipped += 1
            continue
        b, _ = find_small_displacement_point(h, a, consts)
        marg.add(1e-9 - abs(h.displacement(b) - eps / 3.0))
        marg.add(r_cap - distance(a, b))
    return marg, {"construction_skipped": skipped}


def _suite_tl_power(samples: int, rng, consts: PipelineConstants):
    """Translation length is homogeneous under powers."""
    marg = _Margins(0.0)
    for _ in range(samples):
        tau = 0.02 + 1.98 * rng.random()
        g = _conjugated_boost(rng, tau)
        m = int(rng.integers(1, 21))
        if rng.random() < 0.5:
            m = -m
        err = abs(g.power(m).translation_length() - abs(m) * g.translation_length())
        marg.add(1e-9 - err)
    return marg, {}


def _suite_orbit_classification(samples: int, rng, consts: PipelineConstants):
    """Orbit growth matches the classification, kind survives conjugation."""
    marg = _Margins(0.0)
    n_far = 160
    origin = SpacePoint(_E3)
    for i in range(samples):
        kind = i % 3
        if kind == 0:
            tau = 0.05 + 1.45 * rng.random()
            g = _conjugated_boost(rng, tau)
            x = _h2_point(rng, 2.0)
            ax = g.axis()
            rho = point_line_distance(x, ax)
            tau_g = g.translation_length()
            d_far = distance(x, g.power(n_far).apply(x))
            marg.add(d_far - n_far * tau_g + 1e-6)
            marg.add(n_far * tau_g + 2.0 * rho + 1e-6 - d_far)
            # the axis is g-invariant
            marg.add(1e-8 * (1.0 + rho) - abs(point_line_distance(g.apply(x), ax) - rho))
            # conjugation preserves kind and translation length
            conj = Isometry.sl2_real(_random_sl2(rng))
            g2 = g.conjugated_by(conj)
            cls2 = g2.classify()
            marg.add(1.0 if cls2.kind == "hyperbolic" else -1.0)
            marg.add(1e-9 * (1.0 + tau_g) - abs(cls2.tau - tau_g))
        elif kind == 1:
            s = int(rng.integers(1, 4))
            a = int(rng.integers(-3, 4))
            c = int(rng.integers(-3, 4))
            conj = np.array([[1 + a * c, a], [c, 1]], dtype=object)
            inv = np.array([[1, -a], [-c, 1 + a * c]], dtype=object)
            mat = conj @ np.array([[1, s], [0, 1]], dtype=object) @ inv
            g = Isometry.sl2_real([[int(v) for v in row] for row in mat])
            marg.add(1.0 if g.classify().kind == "parabolic" else -1.0)
            d_near = distance(origin, g.power(10).apply(origin))
            d_far = distance(origin, g.power(n_far).apply(origin))
            marg.add(d_far - d_near - 0.5)
            marg.add(d_near / 10.0 - d_far / n_far)
        else:
            theta = 0.2 + (math.pi - 0.4) * rng.random()
            s = _random_sl2(rng)
            rot = np.array(
                [
                    [math.cos(theta / 2.0), math.sin(theta / 2.0)],
                    [-math.sin(theta / 2.0), math.cos(theta / 2.0)],
                ]
            )
            s_inv = np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]])
            g = Isometry.sl2_real(s @ rot @ s_inv)
            marg.add(1.0 if g.classify().kind == "elliptic" else -1.0)
            p = Isometry.sl2_real(s).apply(origin)
            marg.add(1e-7 - g.displacement(p))
            x = _h2_point(rng, 1.5)
            rho = distance(x, p)
            cur = g
            worst = 0.0
            for _ in range(40):
                worst = max(worst, distance(x, cur.apply(x)))
                cur = cur @ g
            marg.add(2.0 * rho + 1e-6 - worst)
    return marg, {}


def _tube_sample_g(rng, consts: PipelineConstants):
    line = _random_line(rng)
    tau = consts.eps / 10.0 * (0.34 + 0.66 * rng.random())
    return line, _hyperbolic_about(line, tau)


def _suite_tube_equivariance(samples: int, rng, consts: PipelineConstants):
    """Conjugating the generator maps its displacement tube pointwise."""
    marg = _Margins(0.0)
    boundary_skipped = 0
    for _ in range(samples):
        line, g = _tube_sample_g(rng, consts)
        tube_g = make_tube(g, consts)
        conj_line = _random_line(rng)
        tau_h = 0.3 + 1.2 * rng.random()
        h = _hyperbolic_about(conj_line, tau_h)
        g2 = g.conjugated_by(h)
        tube_g2 = make_tube(g2, consts)

        rho1 = tube_g.radii[0]
        t = -2.0 + 4.0 * rng.random()
        side = 1.0 if rng.random() < 0.5 else -1.0
        x = _axis_offset_point(line, t, 1.4 * rho1 * rng.random(), side)
        hx = SpacePoint(h.apply_raw(x.coords))
        e1 = g.displacement(x)
        e2 = g2.displacement(hx)
        # displacement noise scales with the squared time coordinate on
        # either side of the push, with the conjugator's condition number
        # squared, and inversely with the displacement itself
        t_sc = max(float(hx.coords[-1]), float(x.coords[-1]))
        band = (1024.0 * math.exp(2.0 * tau_h) * np.finfo(float).eps
                * (1.0 + t_sc * t_sc) / max(min(e1, e2), 1e-3))
        marg.add(band - abs(e1 - e2))
        if abs(e1 - consts.eps) <= 1e-7:
            boundary_skipped += 1
            continue
        if tube_contains(tube_g, x, power=1) != tube_contains(tube_g2, hx, power=1):
            marg.add(-1.0)
    return marg, {"boundary_skipped": boundary_skipped}


def _suite_tube_convexity(samples: int, rng, consts: PipelineConstants):
    """Midpoints of tube members stay in the tube."""
    marg = _Margins(consts.tol_point)
    for _ in range(samples):
        line, g = _tube_sample_g(rng, consts)
        tube = make_tube(g, consts)
        rho1 = tube.radii[0]

        def member():
            t = -2.0 + 4.0 * rng.random()
            side = 1.0 if rng.random() < 0.5 else -1.0
            return _axis_offset_point(line, t, 0.98 * rho1 * math.sqrt(rng.random()), side)

        x, y = member(), member()
        m = midpoint(x, y)
        marg.add(consts.eps - g.displacement(m))
        if not tube_contains(tube, m, power=1, tol=consts.tol_point):
            marg.add(-1.0)
    return marg, {}


def _suite_tube_quasiconvex(samples: int, rng, consts: PipelineConstants):
    """Chords of the power-tube union stay within delta of it."""
    marg = _Margins(0.0)
    slack_pad = delta_hyp() + 10.0 * consts.tol_point
    for _ in range(samples):
        line, g = _tube_sample_g(rng, consts)
        tube = make_tube(g, consts)
        rho1 = tube.radii[0]

        def member():
            t = -2.5 + 5.0 * rng.random()
            side = 1.0 if rng.random() < 0.5 else -1.0
            return _axis_offset_point(line, t, rho1 * math.sqrt(rng.random()), side)

        x, y = member(), member()
        s = rng.random()
        z = SpacePoint(normalize_space((1.0 - s) * x.coords + s * y.coords))
        # distance to the union via the radius profile of the widest tube
        excess = max(0.0, point_line_distance(z, tube.axis) - rho1)
        marg.add(slack_pad - excess)
    return marg, {}


def _suite_tube_invariance(samples: int, rng, consts: PipelineConstants):
    """The cyclic group of the generator preserves its tube union."""
    marg = _Margins(0.0)
    boundary_skipped = 0
    for i in range(samples):
        if i % 2 == 0:
            line, g = _tube_sample_g(rng, consts)
            tube = make_tube(g, consts)
            rho1 = tube.radii[0]
            t = -2.0 + 4.0 * rng.random()
            side = 1.0 if rng.random() < 0.5 else -1.0
            x = _axis_offset_point(line, t, 1.5 * rho1 * rng.random(), side)
            gx = g.apply(x)
            worst = 0.0
            near_edge = False
            for p in range(1, tube.m_power + 1):
                dp = g.power(p).displacement(x)
                worst = max(worst, abs(dp - g.power(p).displacement(gx)))
                if abs(dp - consts.eps) <= 1e-7:
                    near_edge = True
            marg.add(1e-8 - worst)
            if near_edge:
                boundary_skipped += 1
                continue
            if tube_contains(tube, x) != tube_contains(tube, gx):
                marg.add(-1.0)
        else:
            s = int(rng.integers(1, 4))
            a = int(rng.integers(-2, 3))
            c = int(rng.integers(-2, 3))
            mat = (
                np.array([[1 + a * c, a], [c, 1]], dtype=object)
                @ np.array([[1, s], [0, 1]], dtype=object)
                @ np.array([[1, -a], [-c, 1 + a * c]], dtype=object)
            )
            g = Isometry.sl2_real([[int(v) for v in row] for row in mat])
            tube = make_tube(g, consts)
            x = _h2_point(rng, 2.0)
            gx = g.apply(x)
            b1 = tube.horoball.busemann(x)
            b2 = tube.horoball.busemann(gx)
            marg.add(1e-7 * (1.0 + abs(b1)) - abs(b1 - b2))
            if abs(b1) <= 1e-6:
                boundary_skipped += 1
                continue
            if cusp_contains(tube, x) != cusp_contains(tube, gx):
                marg.add(-1.0)
    return marg, {"boundary_skipped": boundary_skipped}


def _suite_projection(samples: int, rng, consts: PipelineConstants):
    """Nearest-point projection is idempotent and 1-Lipschitz."""
    marg = _Margins(0.0)
    for _ in range(samples):
        line = _random_line(rng)
        x = _h2_point(rng, 3.0)
        y = _h2_point(rng, 3.0)
        p = project_to_line(x, line)
        q = project_to_line(y, line)
        marg.add(1e-9 - distance(p, project_to_line(p, line)))
        marg.add(distance(x, y) - distance(p, q) + 1e-9)
    return marg, {}


def _suite_triangle_inequality(samples: int, rng, consts: PipelineConstants):
    """Symmetry and the triangle inequality on random triples."""
    marg = _Margins(0.0)
    for _ in range(samples):
        x = _h2_point(rng, 3.0)
        y = _h2_point(rng, 3.0)
        z = _h2_point(rng, 3.0)
        marg.add(1e-12 - abs(distance(x, y) - distance(y, x)))
        marg.add(distance(x, y) + distance(y, z) - distance(x, z) + 1e-9)
    return marg, {}


def _suite_arc_length(samples: int, rng, consts: PipelineConstants):
    """Circle arcs through two points are bounded by the diameter circle."""
    marg = _Margins(consts.tol_point)
    for _ in range(samples):
        line = _random_line(rng)
        dab = 0.1 + 3.9 * rng.random()
        t_mid = -1.0 + 2.0 * rng.random()
        a = line.point_at(t_mid - dab / 2.0)
        b = line.point_at(t_mid + dab / 2.0)
        # circle centers sweep the bisector of a, b
        s = 3.0 * rng.random()
        side = 1.0 if rng.random() < 0.5 else -1.0
        center = _axis_offset_point(line, t_mid, s, side) if s > 1e-12 else line.point_at(t_mid)
        r = distance(center, a)
        marg.add(1e-9 - abs(distance(center, b) - r))
        alpha = angle(center, a, b)
        arc = alpha * math.sinh(r)
        d_meas = distance(a, b)
        bound = 2.0 * math.pi * math.tanh(d_meas / 4.0) / (1.0 - math.tanh(d_meas / 4.0) ** 2)
        marg.add(bound - arc)
        marg.add(arc - d_meas)
    return marg, {}


_SUITES = {
    "ra-triangle": _suite_ra_triangle,
    "decrease-speed": _suite_decrease_speed,
    "2bisectors": _suite_2bisectors,
    "margulis-distance": _suite_margulis_distance,
    "tl-power": _suite_tl_power,
    "orbit-classification": _suite_orbit_classification,
    "tube-equivariance": _suite_tube_equivariance,
    "tube-convexity": _suite_tube_convexity,
    "tube-quasiconvex": _suite_tube_quasiconvex,
    "tube-invariance": _suite_tube_invariance,
    "projection": _suite_projection,
    "triangle-inequality": _suite_triangle_inequality,
    "arc-length": _suite_arc_length,
}


def list_suites() -> list:
    return sorted(_SUITES)


def run_suite(name: str, samples: int, seed: int = 0,
              consts: PipelineConstants | None = None) -> SuiteReport:
    """Run one registered suite and return its report.

    samples = 0 yields an empty passing report.  Unknown names raise
    UnknownSuite.
    """
    if name not in _SUITES:
        raise UnknownSuite(f"no suite named {name!r}; known: {', '.join(list_suites())}")
    if samples < 0:
        raise UnknownSuite(f"sample count must be nonnegative, got {samples}")
    if consts is None:
        consts = PipelineConstants()
    rng = rng_for(seed, name)
    start = time.perf_counter()
    if samples == 0:
        marg, notes = _Margins(0.0), {}
    else:
        marg, notes = _SUITES[name](samples, rng, consts)
    elapsed = time.perf_counter() - start
    return SuiteReport(
        suite=name,
        samples=samples,
        violations=marg.violations,
        worst_margin=marg.worst,
        tolerance=marg.tol,
        elapsed=elapsed,
        notes=notes,
    )
