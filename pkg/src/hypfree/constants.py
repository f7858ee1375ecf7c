"""Quantitative constants used by the freeness pipeline.

Everything here is an explicit function of the dimension n, the curvature
pinching kappa, and a Margulis number eps valid for (n, kappa).  The
kappa = 1 table values below are rigorous lower bounds for the Margulis
constant of H^2 and H^3; any smaller positive eps is also valid, which is
why the default configuration uses eps = 0.1 in dimension 2.

Float results are computed through mpmath at generous precision whenever
an integer ceiling or a ratio of exponentially large volumes is involved,
so the returned values do not depend on double rounding near a boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import mpmath
from scipy.integrate import quad

from .errors import EpsTooLarge, NonpositiveEps, NonpositiveL, TauTooLarge

# Rigorous Margulis lower bounds, keyed by (dimension, pinching).
MARGULIS_EPS_TABLE = {(2, 1.0): 0.19, (3, 1.0): 0.104}

# A certified inequality must clear its tolerance by this factor before the
# pipeline treats it as verified.
MARGIN_FACTOR = 10.0

_MP_DPS = 50


def delta_hyp() -> float:
    """Thinness constant of geodesic triangles in pinched negative curvature."""
    return float(mpmath.acosh(mpmath.sqrt(2)))


def delta_hyp_mp():
    with mpmath.workdps(_MP_DPS):
        return mpmath.acosh(mpmath.sqrt(2))


def c_of_D(D: float) -> float:
    """Arc-length bound c(D) for circles through two points at distance <= D.

    Any circular arc joining two points at distance <= D in the hyperbolic
    plane, meeting the chord at >= pi/2, has length at most c(D).
    """
    if D <= 0:
        raise NonpositiveL(f"chord bound must be positive, got {D!r}")
    t = math.tanh(D / 4.0)
    return 8.0 * math.pi * t / (1.0 - t * t)


def c_of_D_mp(D):
    # independent form of the same quantity: 8 pi t/(1-t^2) = 4 pi sinh(D/2)
    if D <= 0:
        raise NonpositiveL(f"chord bound must be positive, got {D!r}")
    with mpmath.workdps(_MP_DPS):
        return 4 * mpmath.pi * mpmath.sinh(mpmath.mpf(D) / 2)


def r_margulis(eps: float) -> float:
    """Search radius for a point displaced exactly eps/3.

    A point moved exactly eps by an isometry of translation length <= eps/10
    admits a point within this radius whose displacement is exactly eps/3.
    """
    if eps <= 0:
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    return math.log((c_of_D(1.1 * eps) + c_of_D(0.2 * eps)) * (30.0 / 7.0) / eps)


def r_margulis_mp(eps):
    if eps <= 0:
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    with mpmath.workdps(_MP_DPS):
        e = mpmath.mpf(eps)
        c1 = 4 * mpmath.pi * mpmath.sinh(mpmath.mpf("1.1") * e / 2)
        c2 = 4 * mpmath.pi * mpmath.sinh(mpmath.mpf("0.2") * e / 2)
        return mpmath.log((c1 + c2) * mpmath.mpf(30) / 7 / e)


def L1_of_eps(eps: float) -> float:
    """Solution of sinh(L1) sinh(eps/100) = 1."""
    if eps <= 0:
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    return math.asinh(1.0 / math.sinh(eps / 100.0))


def L1_of_eps_mp(eps):
    if eps <= 0:
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    with mpmath.workdps(_MP_DPS):
        return mpmath.asinh(1 / mpmath.sinh(mpmath.mpf(eps) / 100))


def case1_N(eps: float) -> int:
    """Uniform power N(eps) that works for every pair with both translation
    lengths >= eps/10.

    The two branches cover a short and a long projection segment; the max is
    taken so a single N is valid regardless of which occurs.
    """
    if eps <= 0:
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    with mpmath.workdps(_MP_DPS):
        e = mpmath.mpf(eps)
        delta = mpmath.acosh(mpmath.sqrt(2))
        L1 = mpmath.asinh(1 / mpmath.sinh(e / 100))
        lam = e / 10
        branch_a = (5 + 2 * delta + 3 * L1) / lam
        branch_b = 27 + 9 * (5 + 2 * delta) / L1
        return int(mpmath.ceil(max(branch_a, branch_b)))


def _sphere_coeff(n: int) -> float:
    # surface area of the unit (n-1)-sphere
    return float(2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2))


def ball_volume(r: float, n: int) -> float:
    """Volume of the radius-r ball in H^n (closed form for n = 2, 3)."""
    if r <= 0:
        raise NonpositiveL(f"radius must be positive, got {r!r}")
    if n == 2:
        return 2.0 * math.pi * (math.cosh(r) - 1.0)
    if n == 3:
        return math.pi * (math.sinh(2.0 * r) - 2.0 * r)
    return ball_volume_quad(r, n)


def ball_volume_quad(r: float, n: int) -> float:
    """Same volume by direct quadrature of the sphere-area integrand."""
    if r <= 0:
        raise NonpositiveL(f"radius must be positive, got {r!r}")
    val, err = quad(lambda t: math.sinh(t) ** (n - 1), 0.0, r, epsrel=1e-12, limit=200)
    if err > 1e-10 * max(1.0, abs(val)):
        raise NonpositiveL(f"quadrature failed to converge: error estimate {err!r}")
    return _sphere_coeff(n) * val


def ball_volume_mp(r, n: int):
    with mpmath.workdps(_MP_DPS):
        coeff = 2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2)
        return coeff * mpmath.quad(lambda t: mpmath.sinh(t) ** (n - 1), [0, mpmath.mpf(r)])


def m_exponent(tau: float, eps: float) -> int:
    """Largest m with m * tau <= eps/10."""
    if eps <= 0:
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    if tau <= 0:
        raise TauTooLarge(f"translation length must be positive, got {tau!r}")
    if tau > eps / 10.0:
        raise TauTooLarge(
            f"translation length {tau!r} exceeds eps/10 = {eps / 10.0!r}"
        )
    with mpmath.workdps(_MP_DPS):
        return int(mpmath.floor(mpmath.mpf(eps) / 10 / mpmath.mpf(tau)))


@dataclass(frozen=True)
class LocalToGlobal:
    """Quasigeodesic data for broken paths with long geodesic middle arcs.

    A piecewise-geodesic path whose arcs alternate between length >= L and
    length >= eps/10, with all corner angles >= pi/2, is a global
    (lambda_qg, alpha_qg)-quasigeodesic.
    """

    L: float
    lambda_qg: float
    alpha_qg: float

    def to_json(self):
        return {"L": self.L, "lambda_qg": self.lambda_qg, "alpha_qg": self.alpha_qg}


@dataclass(frozen=True)
class PipelineConstants:
    """Frozen numeric context for one certification run.

    n, kappa fix the space; eps must be a valid Margulis number for that
    space (checked against the table when the pair is tabulated).  The
    tolerances bound how far any verified inequality may sit from its
    threshold: a margin below MARGIN_FACTOR * tol_point is a failure, not
    a pass.
    """

    n: int = 2
    kappa: float = 1.0
    eps: float = 0.1
    tol_point: float = 1e-9
    tol_angle: float = 1e-8
    tol_classify: float = 1e-9

    def __post_init__(self):
        if self.n < 2 or int(self.n) != self.n:
            raise NonpositiveL(f"dimension must be an integer >= 2, got {self.n!r}")
        if self.kappa <= 0:
            raise NonpositiveL(f"pinching must be positive, got {self.kappa!r}")
        if self.eps <= 0:
            raise NonpositiveEps(f"eps must be positive, got {self.eps!r}")
        cap = MARGULIS_EPS_TABLE.get((self.n, self.kappa))
        if cap is not None and self.eps > cap:
            raise EpsTooLarge(
                f"eps = {self.eps!r} exceeds the tabulated Margulis bound "
                f"{cap!r} for (n, kappa) = ({self.n}, {self.kappa})"
            )

    @cached_property
    def delta(self) -> float:
        return delta_hyp()

    @cached_property
    def q_hull(self) -> float:
        """Hausdorff gap between a union of tubes and its convex hull."""
        return 4.0 * self.delta

    @property
    def lambda_threshold(self) -> float:
        """Translation-length cutoff between the two certificate cases."""
        return self.eps / 10.0

    @cached_property
    def ltg(self) -> LocalToGlobal:
        return LocalToGlobal(
            L=20.0 + 4.0 * self.delta + self.lambda_threshold,
            lambda_qg=2.0,
            alpha_qg=4.0 * self.delta,
        )

    @cached_property
    def r_search(self) -> float:
        return r_margulis(self.eps)

    @cached_property
    def L1(self) -> float:
        return L1_of_eps(self.eps)

    @cached_property
    def N_case1(self) -> int:
        return case1_N(self.eps)

    @classmethod
    def from_json(cls, obj) -> "PipelineConstants":
        """Rebuild from a to_json snapshot; derived fields are recomputed."""
        return cls(
            n=int(obj["n"]),
            kappa=float(obj["kappa"]),
            eps=float(obj["eps"]),
            tol_point=float(obj.get("tol_point", 1e-9)),
            tol_angle=float(obj.get("tol_angle", 1e-8)),
            tol_classify=float(obj.get("tol_classify", 1e-9)),
        )

    def to_json(self):
        return {
            "n": self.n,
            "kappa": self.kappa,
            "eps": self.eps,
            "delta": self.delta,
            "q_hull": self.q_hull,
            "lambda_threshold": self.lambda_threshold,
            "ltg": self.ltg.to_json(),
            "r_search": self.r_search,
            "L1": self.L1,
            "N_case1": self.N_case1,
            "tol_point": self.tol_point,
            "tol_angle": self.tol_angle,
            "tol_classify": self.tol_classify,
        }


def k_bound(L: float, consts: PipelineConstants) -> int:
    """Pigeonhole bound on how many tubes can stay pairwise within hull
    distance L of each other.

    Among any k >= k_bound(L, consts) isometries of translation length
    <= eps/10 that pairwise generate discrete nonelementary groups, two
    must have tube hulls more than L apart.
    """
    if L <= 0:
        raise NonpositiveL(f"L must be positive, got {L!r}")
    with mpmath.workdps(_MP_DPS):
        eps = mpmath.mpf(consts.eps)
        delta = mpmath.acosh(mpmath.sqrt(2))
        R1 = consts.n * delta + mpmath.mpf(L) / 2 + 4 * delta
        c1 = 4 * mpmath.pi * mpmath.sinh(mpmath.mpf("1.1") * eps / 2)
        c2 = 4 * mpmath.pi * mpmath.sinh(mpmath.mpf("0.2") * eps / 2)
        rr = mpmath.log((c1 + c2) * mpmath.mpf(30) / 7 / eps)
        R2 = R1 + rr + eps / 3
        n = consts.n
        coeff = 2 * mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2)
        big = coeff * mpmath.quad(
            lambda t: mpmath.sinh(t) ** (n - 1), [0, mpmath.mpf(consts.kappa) * R2]
        )
        small = coeff * mpmath.quad(
            lambda t: mpmath.sinh(t) ** (n - 1), [0, eps / 3]
        )
        ratio = big / mpmath.mpf(consts.kappa) ** n / small
        return int(mpmath.ceil(ratio)) + 1
