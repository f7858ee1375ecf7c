"""Isometries of hyperbolic space in three interoperable models.

model "sl2-real":    PSL(2,R) acting on the upper half-plane (n = 2)
model "sl2-complex": PSL(2,C) acting on upper half-space (n = 3)
model "hyperboloid": Lorentz matrices acting on the hyperboloid sheet (any n)

Every isometry can be pushed to a Lorentz matrix, so the geometric
routines (apply, axis, displacement) are uniform; classification uses
the cheapest reliable invariant available per model.  Matrices whose
entries arrive as ints, Fractions, or "p/q" strings are tracked exactly
(real-entry models only) and exact data wins ties that floats cannot
resolve.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from .errors import (
    DomainError,
    EllipticInput,
    InvalidMatrix,
    InvalidWord,
    ModelMismatch,
    NumericallyAmbiguous,
    SharedEndpoint,
)
from .geometry import (
    GeodesicLine,
    IdealPoint,
    SpacePoint,
    boundary_complex_to_ideal,
    boundary_real_to_ideal,
    mdot,
)

MODELS = ("sl2-real", "sl2-complex", "hyperboloid")

TOL_CLASSIFY = 1e-9
# Above this raw log-spectral-radius we trust plain double-precision eig.
TAU_EIG_MIN = 1e-4
# High-precision eig settings for the gray zone.  A defective (parabolic)
# matrix perturbs its unit eigenvalue by about eps^(1/3), so at 60 digits
# the noise floor sits near 1e-20; the band between the two thresholds
# below is reported as numerically ambiguous.
MP_DPS = 60
TAU_MP_HYPERBOLIC = 1e-12
TAU_MP_ZERO = 1e-16


# ---------------------------------------------------------------------------
# exact helpers (tuples of Fractions)


def _try_fraction_matrix(rows):
    """Nested sequence -> tuple-of-tuples of Fraction, or None if any entry
    is a float (floats are treated as inexact even when integral)."""
    out = []
    for row in rows:
        r = []
        for e in row:
            if isinstance(e, bool):
                return None
            if isinstance(e, (int, Fraction)):
                r.append(Fraction(e))
            elif isinstance(e, str):
                try:
                    r.append(Fraction(e))
                except (ValueError, ZeroDivisionError) as exc:
                    raise InvalidMatrix(f"bad rational entry {e!r}") from exc
            else:
                return None
        out.append(tuple(r))
    return tuple(out)


def _fmat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def _fmat_eye(n):
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def _fmat_float(A):
    return np.array([[float(e) for e in row] for row in A], dtype=float)


def _fmat_inv_sl2(A):
    """Adjugate inverse; valid because det = 1."""
    (a, b), (c, d) = A
    return ((d, -b), (-c, a))


def _fmat_transpose(A):
    return tuple(tuple(A[j][i] for j in range(len(A))) for i in range(len(A[0])))


def _fmat_inv_lorentz(A):
    """J A^T J, the inverse of a Lorentz matrix."""
    n1 = len(A)
    T = _fmat_transpose(A)
    return tuple(
        tuple(
            T[i][j] * (-1 if (i == n1 - 1) != (j == n1 - 1) else 1)
            for j in range(n1)
        )
        for i in range(n1)
    )


def _fraction_kernel(A):
    """Basis of the kernel of a Fraction matrix, by Gauss-Jordan."""
    m = [list(row) for row in A]
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def _fraction_psd(G):
    """Exact test: is the symmetric Fraction matrix G positive semidefinite?

    LDL^T with greedy diagonal pivoting; a PSD matrix with a zero pivot
    must have the whole pivot row zero.
    """
    m = [list(row) for row in G]
    n = len(m)
    idx = list(range(n))
    for step in range(n):
        p = max(range(step, n), key=lambda i: m[idx[i]][idx[i]])
        idx[step], idx[p] = idx[p], idx[step]
        d = m[idx[step]][idx[step]]
        if d < 0:
            return False
        if d == 0:
            if any(m[idx[step]][idx[j]] != 0 for j in range(step + 1, n)):
                return False
            continue
        for i in range(step + 1, n):
            f = m[idx[i]][idx[step]] / d
            for j in range(step + 1, n):
                m[idx[i]][idx[j]] -= f * m[idx[step]][idx[j]]
    return True


# ---------------------------------------------------------------------------
# model conversions to Lorentz matrices

_SYM_BASIS_2 = (
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[1.0, 0.0], [0.0, 1.0]]),
)

_HERM_BASIS_3 = (
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex),
)


def sl2_real_to_lorentz(g):
    """Push PSL(2,R) to SO(2,1) via the action g S g^T on symmetric
    matrices S = [[x3 + x1, x2], [x2, x3 - x1]]."""
    g = np.asarray(g, dtype=float)
    cols = []
    for S in _SYM_BASIS_2:
        T = g @ S @ g.T
        cols.append([(T[0, 0] - T[1, 1]) / 2.0, T[0, 1], (T[0, 0] + T[1, 1]) / 2.0])
    return np.array(cols).T


def sl2_real_to_lorentz_exact(g):
    out_cols = []
    basis = (
        ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1))),
        ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))),
        ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
    )
    gT = _fmat_transpose(g)
    for S in basis:
        T = _fmat_mul(_fmat_mul(g, S), gT)
        out_cols.append(
            (
                (T[0][0] - T[1][1]) / 2,
                T[0][1],
                (T[0][0] + T[1][1]) / 2,
            )
        )
    return _fmat_transpose(out_cols)


def sl2_complex_to_lorentz(g):
    """Push PSL(2,C) to SO(3,1) via g H g^* on Hermitian matrices
    H = [[x4 + x1, x2 + i x3], [x2 - i x3, x4 - x1]]."""
    g = np.asarray(g, dtype=complex)
    cols = []
    for H in _HERM_BASIS_3:
        T = g @ H @ g.conj().T
        cols.append(
            [
                (T[0, 0].real - T[1, 1].real) / 2.0,
                T[0, 1].real,
                T[0, 1].imag,
                (T[0, 0].real + T[1, 1].real) / 2.0,
            ]
        )
    return np.array(cols).T


def minkowski_J(n1):
    J = np.eye(n1)
    J[-1, -1] = -1.0
    return J


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsometryClass:
    """Isometry type with its geometric invariants.

    kind is one of hyperbolic, parabolic, elliptic.  A screw motion counts
    as hyperbolic with nonzero rotation_angle; the identity counts as
    elliptic with is_identity set.  method records which invariant decided
    (for diagnostics).  axis and fixed_ideal are filled in for nonelliptic
    kinds: the oriented invariant geodesic plus both ideal endpoints for a
    hyperbolic isometry, the single fixed ideal point for a parabolic one.
    """

    kind: str
    tau: float
    rotation_angle: float
    method: str
    is_identity: bool = False
    axis: GeodesicLine | None = None
    fixed_ideal: tuple = ()

    @property
    def nonelliptic(self) -> bool:
        return self.kind in ("parabolic", "hyperbolic")

    def to_json(self):
        out = {
            "kind": self.kind,
            "tau": self.tau,
            "rotation_angle": self.rotation_angle,
            "is_identity": self.is_identity,
            "method": self.method,
        }
        if self.fixed_ideal:
            out["fixed_ideal"] = [p.to_json() for p in self.fixed_ideal]
        return out


@dataclass(frozen=True, eq=False)
class Isometry:
    """A hyperbolic isometry in one of the supported matrix models.

    mat is the float (or complex) working matrix; exact_mat, when
    present, is the same matrix with Fraction entries and is kept in
    sync through every group operation.
    """

    model: str
    mat: np.ndarray
    exact_mat: tuple | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def sl2_real(cls, rows) -> "Isometry":
        exact = None
        if not isinstance(rows, np.ndarray):
            exact = _try_fraction_matrix(rows)
        if exact is not None:
            if len(exact) != 2 or len(exact[0]) != 2:
                raise InvalidMatrix("expected a 2x2 matrix")
            det = exact[0][0] * exact[1][1] - exact[0][1] * exact[1][0]
            if det != 1:
                raise InvalidMatrix(f"determinant must be 1, got {det}")
            return cls("sl2-real", _fmat_float(exact), exact)
        try:
            m = np.asarray(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidMatrix("entries must be numbers or 'p/q' strings") from exc
        if m.shape != (2, 2):
            raise InvalidMatrix("expected a 2x2 matrix")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if abs(det - 1.0) > 1e-9 * scale:
            raise InvalidMatrix(f"determinant must be 1, got {det}")
        return cls("sl2-real", m, None)

    @classmethod
    def sl2_complex(cls, rows) -> "Isometry":
        try:
            m = np.array(
                [
                    [
                        complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e)
                        for e in row
                    ]
                    for row in rows
                ],
                dtype=complex,
            )
        except (TypeError, ValueError) as exc:
            raise InvalidMatrix("entries must be numbers or [re, im] pairs") from exc
        if m.shape != (2, 2):
            raise InvalidMatrix("expected a 2x2 matrix")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if abs(det - 1.0) > 1e-9 * scale:
            raise InvalidMatrix(f"determinant must be 1, got {det}")
        return cls("sl2-complex", m, None)

    @classmethod
    def hyperboloid(cls, rows) -> "Isometry":
        exact = None
        if not isinstance(rows, np.ndarray):
            exact = _try_fraction_matrix(rows)
        if exact is not None:
            n1 = len(exact)
            if n1 < 3 or any(len(r) != n1 for r in exact):
                raise InvalidMatrix("expected a square matrix of size >= 3")
            JT = _fmat_mul(
                _fmat_transpose(exact),
                tuple(
                    tuple(
                        exact[i][j] * (-1 if i == n1 - 1 else 1) for j in range(n1)
                    )
                    for i in range(n1)
                ),
            )
            if JT != _fmat_eye_signed(n1):
                raise InvalidMatrix("matrix does not preserve the Minkowski form")
            if exact[n1 - 1][n1 - 1] <= 0:
                raise InvalidMatrix("matrix swaps the two hyperboloid sheets")
            return cls("hyperboloid", _fmat_float(exact), exact)
        try:
            m = np.asarray(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidMatrix("entries must be numbers or 'p/q' strings") from exc
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 3:
            raise InvalidMatrix("expected a square matrix of size >= 3")
        n1 = m.shape[0]
        J = minkowski_J(n1)
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if np.max(np.abs(m.T @ J @ m - J)) > 1e-9 * scale:
            raise InvalidMatrix("matrix does not preserve the Minkowski form")
        if m[-1, -1] <= 0:
            raise InvalidMatrix("matrix swaps the two hyperboloid sheets")
        return cls("hyperboloid", m, None)

    @classmethod
    def from_matrix(cls, model: str, rows) -> "Isometry":
        if model == "sl2-real":
            return cls.sl2_real(rows)
        if model == "sl2-complex":
            return cls.sl2_complex(rows)
        if model == "hyperboloid":
            return cls.hyperboloid(rows)
        raise ModelMismatch(f"unknown model {model!r}")

    @classmethod
    def identity_like(cls, other: "Isometry") -> "Isometry":
        k = other.mat.shape[0]
        if other.exact_mat is not None:
            return cls(other.model, np.eye(k), _fmat_eye(k))
        dtype = complex if other.model == "sl2-complex" else float
        return cls(other.model, np.eye(k, dtype=dtype), None)

    # -- basic structure ---------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.exact_mat is not None

    @property
    def space_dim(self) -> int:
        if self.model == "sl2-real":
            return 2
        if self.model == "sl2-complex":
            return 3
        return self.mat.shape[0] - 1

    @cached_property
    def lorentz(self) -> np.ndarray:
        if self.model == "sl2-real":
            if self.exact_mat is not None:
                return _fmat_float(sl2_real_to_lorentz_exact(self.exact_mat))
            return sl2_real_to_lorentz(self.mat)
        if self.model == "sl2-complex":
            return sl2_complex_to_lorentz(self.mat)
        return self.mat

    @cached_property
    def lorentz_exact(self) -> tuple | None:
        if self.exact_mat is None:
            return None
        if self.model == "sl2-real":
            return sl2_real_to_lorentz_exact(self.exact_mat)
        return self.exact_mat

    def _same_model(self, other: "Isometry"):
        if self.model != other.model or self.mat.shape != other.mat.shape:
            raise ModelMismatch(
                f"cannot combine {self.model} ({self.space_dim}d) with "
                f"{other.model} ({other.space_dim}d)"
            )

    # -- group operations ----------------------------------------------------

    def __matmul__(self, other: "Isometry") -> "Isometry":
        self._same_model(other)
        if self.exact_mat is not None and other.exact_mat is not None:
            e = _fmat_mul(self.exact_mat, other.exact_mat)
            return Isometry(self.model, _fmat_float(e), e)
        return Isometry(self.model, self.mat @ other.mat, None)

    def inverse(self) -> "Isometry":
        if self.model == "hyperboloid":
            if self.exact_mat is not None:
                e = _fmat_inv_lorentz(self.exact_mat)
                return Isometry(self.model, _fmat_float(e), e)
            J = minkowski_J(self.mat.shape[0])
            return Isometry(self.model, J @ self.mat.T @ J, None)
        if self.exact_mat is not None:
            e = _fmat_inv_sl2(self.exact_mat)
            return Isometry(self.model, _fmat_float(e), e)
        (a, b), (c, d) = self.mat
        return Isometry(self.model, np.array([[d, -b], [-c, a]], dtype=self.mat.dtype))

    def power(self, k: int) -> "Isometry":
        if k < 0:
            return self.inverse().power(-k)
        result = Isometry.identity_like(self)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def conjugated_by(self, h: "Isometry") -> "Isometry":
        """h g h^-1, carrying g's classification across the conjugation.

        The conjugate's invariants equal g's, and its fixed-point data is
        the h-image of g's, so both are transported rather than recomputed:
        once h moves the fixed points close together, the conjugate's own
        floating-point matrix cannot resolve them at all (their separation
        shrinks like the inverse of the matrix norm while the entrywise
        noise grows with it).  If the image endpoints collapse within
        floating-point resolution the transport is skipped and the product
        is returned unclassified.
        """
        out = h @ self @ h.inverse()
        try:
            cls = self.classify()
        except DomainError:
            return out
        if not cls.nonelliptic:
            return out
        try:
            # Raw endpoint images with the original normalizing scale:
            # normalized image coordinates collapse the pair once h has
            # moved the endpoints close together, and their raw product is
            # equally unresolvable, but conjugation preserves it exactly.
            axis2 = None
            if cls.axis is not None:
                axis2 = GeodesicLine.with_scale(
                    IdealPoint.raw(h.apply_raw(cls.axis.neg.coords)),
                    IdealPoint.raw(h.apply_raw(cls.axis.pos.coords)),
                    cls.axis._scale,
                )
            fixed2 = tuple(h.apply_ideal(x) for x in cls.fixed_ideal)
        except DomainError:
            return out
        out.__dict__["_classification"] = replace(
            cls,
            method=cls.method + "-transported",
            axis=axis2,
            fixed_ideal=fixed2,
        )
        return out

    # -- action on the hyperboloid -----------------------------------------

    def apply(self, x: SpacePoint) -> SpacePoint:
        return SpacePoint(self.lorentz @ x.coords)

    def apply_ideal(self, x: IdealPoint) -> IdealPoint:
        return IdealPoint(self.lorentz @ x.coords)

    def apply_raw(self, coords):
        return np.asarray(coords, dtype=float) @ self.lorentz.T

    def displacement(self, x: SpacePoint) -> float:
        from .geometry import distance

        return distance(x, self.apply(x))

    # -- classification ------------------------------------------------------

    def classify(self) -> IsometryClass:
        return self._classification

    @cached_property
    def _classification(self) -> IsometryClass:
        core = self._classify_core()
        if core.kind == "hyperbolic":
            line = self._axis_of(core)
            return replace(core, axis=line, fixed_ideal=(line.neg, line.pos))
        if core.kind == "parabolic":
            return replace(core, fixed_ideal=(self._parabolic_fixed_of(),))
        return core

    def _classify_core(self) -> IsometryClass:
        if self.model == "sl2-real":
            return self._classify_sl2_real()
        if self.model == "sl2-complex":
            return self._classify_sl2_complex()
        return self._classify_hyperboloid()

    def _classify_sl2_real(self) -> IsometryClass:
        if self.exact_mat is not None:
            (a, b), (c, d) = self.exact_mat
            tr = a + d
            if abs(tr) > 2:
                t = mpmath.mpf(tr.numerator) / tr.denominator
                tau = float(2 * mpmath.acosh(abs(t) / 2))
                return IsometryClass("hyperbolic", tau, 0.0, "trace-exact")
            if abs(tr) == 2:
                if b == 0 and c == 0:
                    return IsometryClass(
                        "elliptic", 0.0, 0.0, "trace-exact", is_identity=True
                    )
                return IsometryClass("parabolic", 0.0, 0.0, "trace-exact")
            theta = 2.0 * math.acos(float(tr) / 2.0)
            return IsometryClass("elliptic", 0.0, theta, "trace-exact")
        tr = float(self.mat[0, 0] + self.mat[1, 1])
        t = abs(tr)
        if t == 2.0:
            if np.array_equal(np.abs(self.mat), np.eye(2)):
                return IsometryClass("elliptic", 0.0, 0.0, "trace", is_identity=True)
            return IsometryClass("parabolic", 0.0, 0.0, "trace")
        if abs(t - 2.0) < TOL_CLASSIFY:
            raise NumericallyAmbiguous(
                f"|trace| = {t!r} is within {TOL_CLASSIFY} of 2; cannot separate "
                "hyperbolic from parabolic/elliptic in floating point"
            )
        if t > 2.0:
            return IsometryClass(
                "hyperbolic", 2.0 * float(np.arccosh(t / 2.0)), 0.0, "trace"
            )
        return IsometryClass("elliptic", 0.0, 2.0 * math.acos(tr / 2.0), "trace")

    def _classify_sl2_complex(self) -> IsometryClass:
        tr = complex(self.mat[0, 0] + self.mat[1, 1])
        disc = cmath.sqrt(tr * tr - 4.0)
        lam = (tr + disc) / 2.0
        if abs(lam) < 1.0:
            lam = (tr - disc) / 2.0
        tau = 2.0 * math.log(max(abs(lam), 1.0))
        near_parab = min(abs(tr - 2.0), abs(tr + 2.0))
        if near_parab == 0.0:
            off = max(abs(complex(self.mat[0, 1])), abs(complex(self.mat[1, 0])))
            diag = abs(complex(self.mat[0, 0]) - complex(self.mat[1, 1]))
            if off == 0.0 and diag == 0.0:
                return IsometryClass("elliptic", 0.0, 0.0, "trace", is_identity=True)
            return IsometryClass("parabolic", 0.0, 0.0, "trace")
        if near_parab < TOL_CLASSIFY:
            raise NumericallyAmbiguous(
                f"trace {tr!r} is within {TOL_CLASSIFY} of ±2; cannot separate "
                "loxodromic from parabolic/elliptic in floating point"
            )
        if abs(tr.imag) == 0.0 and abs(tr.real) < 2.0:
            theta = 2.0 * math.acos(tr.real / 2.0)
            return IsometryClass("elliptic", 0.0, theta, "trace")
        theta = 2.0 * cmath.phase(lam)
        if abs(theta) < 1e-12:
            theta = 0.0
        return IsometryClass("hyperbolic", tau, theta, "trace")

    def _classify_hyperboloid(self) -> IsometryClass:
        A = self.mat
        eigvals = np.linalg.eigvals(A)
        tau_raw = float(np.log(np.max(np.abs(eigvals))))
        if tau_raw > TAU_EIG_MIN:
            theta = 0.0
            unit = eigvals[np.abs(np.abs(eigvals) - 1.0) < 1e-6]
            if unit.size:
                theta = float(np.max(np.abs(np.angle(unit))))
            if theta < 1e-8:
                theta = 0.0
            return IsometryClass("hyperbolic", tau_raw, theta, "eig")
        if self.exact_mat is not None:
            return self._classify_hyperboloid_exact()
        # The stored doubles are exact rationals; resolve the gray zone by
        # recomputing the spectrum at high precision.
        with mpmath.workdps(MP_DPS):
            ev = mpmath.eig(mpmath.matrix(A.tolist()), left=False, right=False)
            tau = float(max(mpmath.log(abs(l)) for l in ev))
            theta = _unit_circle_angle(ev)
        if tau > TAU_MP_HYPERBOLIC:
            if theta < 1e-8:
                theta = 0.0
            return IsometryClass("hyperbolic", tau, theta, "high-precision-eig")
        if tau > TAU_MP_ZERO:
            raise NumericallyAmbiguous(
                f"log spectral radius {tau!r} falls between the zero threshold "
                f"{TAU_MP_ZERO} and the hyperbolic threshold {TAU_MP_HYPERBOLIC}"
            )
        return self._classify_zero_translation(A)

    def _classify_zero_translation(self, A) -> IsometryClass:
        n1 = A.shape[0]
        if float(np.max(np.abs(A - np.eye(n1)))) < 1e-12:
            return IsometryClass("elliptic", 0.0, 0.0, "fixed-space", is_identity=True)
        _, sv, vt = np.linalg.svd(A - np.eye(n1))
        scale = max(sv[0], 1.0)
        fixed = vt[sv < 1e-6 * scale]
        if fixed.shape[0] == 0:
            raise NumericallyAmbiguous(
                "no translation detected yet the fixed space is numerically empty"
            )
        G = np.array([[float(mdot(u, v)) for v in fixed] for u in fixed])
        if float(np.min(np.linalg.eigvalsh(G))) < -1e-6:
            ev = np.linalg.eigvals(A)
            theta = float(np.max(np.abs(np.angle(ev))))
            return IsometryClass("elliptic", 0.0, theta, "fixed-space")
        return IsometryClass("parabolic", 0.0, 0.0, "fixed-space")

    def _classify_hyperboloid_exact(self) -> IsometryClass:
        # Exact decision first: the matrix is hyperbolic iff its
        # characteristic polynomial has a real root > 1 (the attracting
        # eigenvalue of a sheet-preserving Lorentz matrix is positive).
        if _has_root_above_one(_char_poly_exact(self.exact_mat)):
            with mpmath.workdps(MP_DPS):
                M = mpmath.matrix(
                    [[mpmath.mpf(e.numerator) / e.denominator for e in row]
                     for row in self.exact_mat]
                )
                ev = mpmath.eig(M, left=False, right=False)
                tau = float(max(mpmath.log(abs(l)) for l in ev))
                theta = _unit_circle_angle(ev)
            if theta < 1e-8:
                theta = 0.0
            return IsometryClass("hyperbolic", tau, theta, "sturm-exact")
        n1 = len(self.exact_mat)
        AmI = tuple(
            tuple(self.exact_mat[i][j] - (1 if i == j else 0) for j in range(n1))
            for i in range(n1)
        )
        if all(all(e == 0 for e in row) for row in AmI):
            return IsometryClass(
                "elliptic", 0.0, 0.0, "fixed-space-exact", is_identity=True
            )
        kernel = _fraction_kernel(AmI)
        if not kernel:
            raise NumericallyAmbiguous(
                "zero translation length but trivial fixed space in exact arithmetic"
            )
        G = tuple(
            tuple(_fraction_mdot(u, v) for v in kernel) for u in kernel
        )
        if _fraction_psd(G):
            return IsometryClass("parabolic", 0.0, 0.0, "fixed-space-exact")
        ev = np.linalg.eigvals(self.mat)
        theta = float(np.max(np.abs(np.angle(ev))))
        return IsometryClass("elliptic", 0.0, theta, "fixed-space-exact")

    # -- invariant geometry ----------------------------------------------------

    def translation_length(self) -> float:
        return self.classify().tau

    def axis(self) -> GeodesicLine:
        """Invariant geodesic of a hyperbolic isometry, oriented from the
        repelling toward the attracting ideal endpoint."""
        cls = self.classify()
        if cls.kind != "hyperbolic":
            raise EllipticInput(f"{cls.kind} isometry has no axis")
        return cls.axis

    def _axis_of(self, cls: IsometryClass) -> GeodesicLine:
        if cls.kind != "hyperbolic":
            raise EllipticInput(f"{cls.kind} isometry has no axis")
        tau = cls.tau
        A = self.lorentz
        eigvals, eigvecs = np.linalg.eig(A)
        i_att = int(np.argmax(np.abs(eigvals)))
        att = _real_null_vector(eigvecs[:, i_att])
        # the repelling eigenvalue of a large power sits below eps * ||A||,
        # where its eigenvector is pure noise; as the dominant direction of
        # the Lorentz inverse it is as well conditioned as the attracting one
        J = minkowski_J(A.shape[0])
        eigvals_inv, eigvecs_inv = np.linalg.eig(J @ A.T @ J)
        i_rep = int(np.argmax(np.abs(eigvals_inv)))
        rep = _real_null_vector(eigvecs_inv[:, i_rep])
        try:
            line = GeodesicLine(neg=IdealPoint(rep), pos=IdealPoint(att))
        except SharedEndpoint as exc:
            # far conjugates: both eigenvectors collapse onto the image of
            # the pushed endpoint pair, which a float matrix cannot separate
            raise NumericallyAmbiguous(
                "fixed points computed from the matrix coincide within "
                "float tolerance; build the isometry with conjugated_by "
                "to carry its axis analytically"
            ) from exc
        s0 = line.param_of_nearby(self.apply(line.point_at(0.0)))
        if s0 < 0:
            line = line.reversed()
            s0 = -s0
        if abs(s0 - tau) > 1e-6 * max(1.0, tau):
            raise NumericallyAmbiguous(
                f"axis check failed: displacement along axis {s0!r} does not "
                f"match translation length {tau!r}"
            )
        return line

    def parabolic_fixed_point(self) -> IdealPoint:
        cls = self.classify()
        if cls.kind != "parabolic":
            raise EllipticInput(f"{cls.kind} isometry has no parabolic fixed point")
        return cls.fixed_ideal[0]

    def _parabolic_fixed_of(self) -> IdealPoint:
        if self.model in ("sl2-real", "sl2-complex"):
            m = self.mat if self.mat[0, 0] + self.mat[1, 1] != -2 else -self.mat
            a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
            if abs(c) == 0.0:
                p = None
            else:
                p = (a - d) / (2.0 * c)
            if self.model == "sl2-real":
                return boundary_real_to_ideal(None if p is None else float(p.real if isinstance(p, complex) else p))
            return boundary_complex_to_ideal(p)
        A = self.mat
        n1 = A.shape[0]
        _, sv, vt = np.linalg.svd(A - np.eye(n1))
        fixed = vt[sv < 1e-6 * max(sv[0], 1.0)]
        G = np.array([[float(mdot(u, v)) for v in fixed] for u in fixed])
        w, vec = np.linalg.eigh(G)
        null_dir = vec[:, 0] @ fixed
        if null_dir[-1] < 0:
            null_dir = -null_dir
        return IdealPoint(null_dir)

    def fixed_boundary_points(self) -> list:
        """Ideal fixed points: two for a hyperbolic isometry, one for a
        parabolic; elliptic raises."""
        cls = self.classify()
        if not cls.nonelliptic:
            raise EllipticInput(
                f"{cls.kind} isometry has no canonical ideal fixed points"
            )
        return list(cls.fixed_ideal)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        if self.exact_mat is not None:
            rows = [
                [int(e) if e.denominator == 1 else str(e) for e in row]
                for row in self.exact_mat
            ]
        elif self.model == "sl2-complex":
            rows = [[[v.real, v.imag] for v in row] for row in np.asarray(self.mat)]
        else:
            rows = [[float(v) for v in row] for row in np.asarray(self.mat)]
        return {"model": self.model, "matrix": rows}

    @classmethod
    def from_json(cls, obj) -> "Isometry":
        try:
            return cls.from_matrix(obj["model"], obj["matrix"])
        except (KeyError, TypeError) as exc:
            raise InvalidMatrix("expected {'model': ..., 'matrix': [[...]]}") from exc


def conjugate(g: Isometry, h: Isometry) -> Isometry:
    """h g h^-1."""
    return g.conjugated_by(h)


def _fmat_eye_signed(n1):
    return tuple(
        tuple(
            (Fraction(-1) if i == n1 - 1 else Fraction(1)) if i == j else Fraction(0)
            for j in range(n1)
        )
        for i in range(n1)
    )


def _fraction_mdot(u, v):
    return sum(a * b for a, b in zip(u[:-1], v[:-1])) - u[-1] * v[-1]


def _real_null_vector(v):
    """Realify an eigenvector that spans a real null line and scale it to
    time coordinate 1."""
    if np.max(np.abs(v.imag)) > 1e-9 * np.max(np.abs(v.real) + np.abs(v.imag)):
        raise NumericallyAmbiguous("boundary eigenvector is not real")
    v = v.real
    if v[-1] < 0:
        v = -v
    return v


def _unit_circle_angle(ev):
    """Largest |arg| among eigenvalues lying on the unit circle (mp list)."""
    unit = [l for l in ev if abs(abs(l) - 1) < mpmath.mpf("1e-15")]
    if not unit:
        return 0.0
    return float(max(abs(mpmath.arg(l)) for l in unit))


# ---------------------------------------------------------------------------
# exact root counting (Fraction polynomials, ascending coefficients)


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(c != 0 for c in a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] / b[-1]
        q[k] = f
        for i in range(len(b)):
            a[k + i] -= f * b[i]
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_gcd(a, b):
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _char_poly_exact(A):
    """Characteristic polynomial det(xI - A) via Newton's identities."""
    n = len(A)
    pw = A
    psums = []
    for _ in range(n):
        psums.append(sum(pw[i][i] for i in range(n)))
        pw = _fmat_mul(pw, A)
    e = [Fraction(1)]
    for k in range(1, n + 1):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * psums[i - 1]
        e.append(s / k)
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = (-1) ** k * e[k]
    return coeffs


def _has_root_above_one(p):
    """Exact test: does p have a real root in (1, oo)?  Sturm's theorem on
    the square-free part, with roots at exactly 1 divided out first."""
    p = _poly_trim(list(p))
    g = _poly_gcd(p, _poly_deriv(p))
    sqfree = _poly_divmod(p, g)[0] if len(g) > 1 else p
    one = Fraction(1)
    while sqfree and _poly_eval(sqfree, one) == 0:
        sqfree = _poly_divmod(sqfree, [Fraction(-1), Fraction(1)])[0]
    if len(sqfree) <= 1:
        return False
    bound = one + one + max(abs(c) for c in sqfree[:-1]) / abs(sqfree[-1])
    chain = [sqfree, _poly_trim(_poly_deriv(sqfree))]
    while len(chain[-1]) > 1:
        rem = _poly_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return _sign_changes(chain, one) - _sign_changes(chain, bound) > 0


def _sign_changes(chain, x):
    signs = []
    for p in chain:
        v = _poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


# ---------------------------------------------------------------------------
# words in two generators


LETTERS = ("a", "A", "b", "B")
INVERSE_LETTER = {"a": "A", "A": "a", "b": "B", "B": "b"}
RENDER_MAP = {"a": "f", "A": "F", "b": "g", "B": "G"}


@dataclass(frozen=True)
class Word:
    """A reduced word over {a, A, b, B}; a/b stand for the two generators
    and capitals for their inverses."""

    letters: tuple

    def __post_init__(self):
        for x in self.letters:
            if x not in LETTERS:
                raise InvalidWord(f"unknown letter {x!r}")
        for x, y in zip(self.letters, self.letters[1:]):
            if INVERSE_LETTER[x] == y:
                raise InvalidWord(f"word is not reduced at {x}{y}")

    @classmethod
    def reduced(cls, seq) -> "Word":
        """Free reduction of an arbitrary letter sequence."""
        stack = []
        for x in seq:
            if x not in LETTERS:
                raise InvalidWord(f"unknown letter {x!r}")
            if stack and INVERSE_LETTER[stack[-1]] == x:
                stack.pop()
            else:
                stack.append(x)
        return cls(tuple(stack))

    @classmethod
    def from_string(cls, s: str) -> "Word":
        return cls.reduced(s.replace(" ", ""))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return "".join(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word.reduced(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(INVERSE_LETTER[x] for x in reversed(self.letters)))

    def is_trivial(self) -> bool:
        return not self.letters

    def cyclically_reduce(self):
        """Return (core, conj) with self = conj * core * conj^-1 and core
        cyclically reduced."""
        core = list(self.letters)
        conj = []
        while len(core) >= 2 and core[0] == INVERSE_LETTER[core[-1]]:
            conj.append(core.pop(0))
            core.pop()
        return Word(tuple(core)), Word(tuple(conj))

    def render(self) -> str:
        """Human-oriented rendering with f, g for the generators and
        exponent grouping, e.g. 'g f^4 g^-1'."""
        if not self.letters:
            return "1"
        runs = []
        for x in self.letters:
            base = RENDER_MAP[x].lower()
            sign = 1 if RENDER_MAP[x].islower() else -1
            if runs and runs[-1][0] == base and runs[-1][1] * sign > 0:
                runs[-1][1] += sign
            else:
                runs.append([base, sign])
        parts = []
        for base, e in runs:
            if e == 1:
                parts.append(base)
            else:
                parts.append(f"{base}^{e}")
        return " ".join(parts)

    def to_json(self):
        return str(self)


def evaluate_word(word: Word, f: Isometry, g: Isometry) -> Isometry:
    """Product of the word's letters with a -> f, b -> g."""
    f._same_model(g)
    table = {
        "a": f,
        "A": f.inverse(),
        "b": g,
        "B": g.inverse(),
    }
    out = Isometry.identity_like(f)
    for x in word.letters:
        out = out @ table[x]
    return out


def commutator(f: Isometry, g: Isometry) -> Isometry:
    return f @ g @ f.inverse() @ g.inverse()
