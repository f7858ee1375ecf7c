"""Isometry classification, words, and conjugation transport.

Translation lengths are checked against brute-force displacement
minimization over a grid, integer matrix words against an in-test
Fraction multiplication oracle, and conjugates against exact spectral
data (trace and determinant fix the eigenvalues).
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypfree.errors import (
    InvalidMatrix,
    InvalidPoint,
    InvalidWord,
    NumericallyAmbiguous,
)
from hypfree.geometry import SpacePoint, distance, mdot
from hypfree.isometry import (
    Isometry,
    Word,
    commutator,
    conjugate,
    evaluate_word,
    minkowski_J,
    sl2_real_to_lorentz,
)

E = math.e
DIAG = Isometry.from_matrix("sl2-real", [[E, 0.0], [0.0, 1.0 / E]])
SHIFT = Isometry.from_matrix("sl2-real", [[1, 1], [0, 1]])


def random_hyperbolic(rng):
    """Random hyperbolic element: a boost conjugated by a bounded matrix."""
    tau = rng.uniform(0.1, 2.0)
    boost = [[math.exp(tau / 2), 0.0], [0.0, math.exp(-tau / 2)]]
    while True:
        m = rng.uniform(-2.0, 2.0, size=(2, 2))
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) > 0.3:
            break
    m /= math.sqrt(abs(det))
    if det < 0:
        m[:, 0] = -m[:, 0]
    g = Isometry.from_matrix("sl2-real", boost)
    u = Isometry.from_matrix("sl2-real", m.tolist())
    return g.conjugated_by(u), tau


# --- classification ---------------------------------------------------------


def test_classify_diag():
    c = DIAG.classify()
    assert c.kind == "hyperbolic"
    assert abs(c.tau - 2.0) < 1e-12


def test_classify_parabolic():
    c = SHIFT.classify()
    assert c.kind == "parabolic"
    assert c.tau == 0.0
    xi = SHIFT.parabolic_fixed_point()
    moved = SHIFT.apply_ideal(xi)
    assert xi.same_as(moved)


def test_classify_elliptic():
    th = 0.7
    rot = Isometry.from_matrix(
        "sl2-real",
        [[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]],
    )
    c = rot.classify()
    assert c.kind == "elliptic"
    assert not c.nonelliptic


def test_classify_identity():
    ident = Isometry.from_matrix("sl2-real", [[1, 0], [0, 1]])
    assert ident.translation_length() == 0.0


def test_negative_trace_hyperbolic():
    g = Isometry.from_matrix("sl2-real", [[-3, 0.0], [0.0, Fraction(-1, 3)]])
    c = g.classify()
    assert c.kind == "hyperbolic"
    # diag(-3, -1/3) acts as diag(3, 1/3): length 2 log 3
    assert abs(c.tau - 2.0 * math.log(3.0)) < 1e-12


def test_near_parabolic_float_is_ambiguous():
    # trace inside the gray band around 2 but not exactly 2
    lam = 1.0 + 5e-7
    g = Isometry.from_matrix("sl2-real", [[lam, 0.0], [0.0, 1.0 / lam]])
    with pytest.raises(NumericallyAmbiguous):
        g.classify()


def test_float_trace_exactly_two_is_parabolic():
    # documented convention: an exact float trace of 2 is believed
    g = Isometry.from_matrix("sl2-real", [[1.0 + 1e-12, 0.0], [0.0, 1.0 - 1e-12]])
    assert g.classify().kind == "parabolic"


def test_translation_length_cubed_brute_force():
    """tau(g^3) = 6 against displacement minimization over a grid."""
    g3 = DIAG.power(3)
    assert abs(g3.translation_length() - 6.0) < 1e-12
    # grid around the axis (the x-axis geodesic): displacement grows with
    # the offset, so the on-axis slice attains the minimum
    best = math.inf
    for t in np.linspace(-2.0, 2.0, 9):
        for rho in np.linspace(-0.02, 0.02, 41):
            x = SpacePoint(np.array([
                math.sinh(t) * math.cosh(rho),
                math.sinh(rho),
                math.cosh(t) * math.cosh(rho),
            ]))
            best = min(best, g3.displacement(x))
    assert best >= 6.0 - 1e-9
    assert abs(best - 6.0) < 1e-3


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(0, 10_000), st.integers(-8, 8).filter(lambda m: m != 0))
def test_power_law(seed, m):
    g, tau = random_hyperbolic(np.random.default_rng(seed))
    assert abs(g.power(m).translation_length() - abs(m) * tau) < 1e-9


def test_conjugation_preserves_length():
    u = Isometry.from_matrix("sl2-real", [[2, 1], [1, 1]])
    h = DIAG.conjugated_by(u)
    assert abs(h.translation_length() - 2.0) < 1e-12
    assert h.classify().kind == "hyperbolic"


def test_far_conjugate_transport():
    """Conjugation transports classification instead of recomputing it."""
    t = Isometry.from_matrix(
        "sl2-real",
        [[math.cosh(10.0), math.sinh(10.0)], [math.sinh(10.0), math.cosh(10.0)]],
    )
    h = DIAG.conjugated_by(t)
    c = h.classify()
    assert c.kind == "hyperbolic"
    assert c.method.endswith("-transported")
    assert abs(h.translation_length() - 2.0) < 1e-11
    axis = h.axis()
    # the normalizing scale is carried analytically, not recomputed from
    # the collapsed image endpoints
    assert axis._scale == DIAG.axis()._scale
    # endpoints are the pushed-forward originals, stored raw
    assert np.array_equal(axis.neg.coords, t.apply_raw(DIAG.axis().neg.coords))
    assert np.array_equal(axis.pos.coords, t.apply_raw(DIAG.axis().pos.coords))
    # the two fixed points are distinct but deep: resolvable, barely
    sep = float(np.max(np.abs(c.fixed_ideal[0].coords - c.fixed_ideal[1].coords)))
    assert 1e-9 < sep < 1e-7


def test_moderate_conjugate_transport_geometry():
    """Where float can still verify it, the transported axis is correct."""
    t = Isometry.from_matrix(
        "sl2-real",
        [[math.cosh(1.5), math.sinh(1.5)], [math.sinh(1.5), math.cosh(1.5)]],
    )
    h = DIAG.conjugated_by(t)
    axis = h.axis()
    p = axis.point_at(0.7)
    assert abs(h.displacement(p) - 2.0) < 1e-9
    # axis points land where pushing the original axis points lands
    q = t.apply(DIAG.axis().point_at(0.7))
    assert distance(p, q) < 1e-9
    for xi in h.classify().fixed_ideal:
        assert h.apply_ideal(xi).same_as(xi, 1e-7)


def test_far_transported_axis_points_are_relative_only():
    """World points 20 units out carry relative accuracy, not form accuracy.

    Coordinates around e^20 leave the hyperboloid constraint below float
    resolution: <x,x> evaluates to noise, so the strict constructor must
    refuse the vector.  Distances to moderate points survive, because the
    product form only needs relative accuracy."""
    t = Isometry.from_matrix(
        "sl2-real",
        [[math.cosh(10.0), math.sinh(10.0)], [math.sinh(10.0), math.cosh(10.0)]],
    )
    h = DIAG.conjugated_by(t)
    p = h.axis().point_at(0.0)
    origin = SpacePoint(np.array([0.0, 0.0, 1.0]))
    # origin sits on t's axis, so the pushed base point is exactly 20 away
    assert abs(distance(p, origin) - 20.0) < 1e-9
    with pytest.raises(InvalidPoint):
        SpacePoint.validated(p.coords)


def test_far_conjugate_raw_matrix_rejected():
    """The same matrix built numerically cannot be classified.

    The Lorentz spectrum of the far conjugate sits below the rounding
    floor of its own entries, so classification must refuse rather than
    guess."""
    t = Isometry.from_matrix(
        "sl2-real",
        [[math.cosh(10.0), math.sinh(10.0)], [math.sinh(10.0), math.cosh(10.0)]],
    )
    raw = np.array(t.mat) @ np.array(DIAG.mat) @ np.linalg.inv(np.array(t.mat))
    g = Isometry.from_matrix("sl2-real", raw.tolist())
    with pytest.raises(NumericallyAmbiguous):
        g.classify()


@settings(max_examples=30, deadline=None, derandomize=True)
@given(st.integers(0, 10_000))
def test_apply_preserves_minkowski_product(seed):
    rng = np.random.default_rng(seed)
    g, _ = random_hyperbolic(rng)
    x = rng.uniform(-1.5, 1.5, size=2)
    y = rng.uniform(-1.5, 1.5, size=2)
    px = SpacePoint(np.array([x[0], x[1], math.sqrt(1 + x @ x)]))
    py = SpacePoint(np.array([y[0], y[1], math.sqrt(1 + y @ y)]))
    before = float(mdot(px.coords, py.coords))
    after = float(mdot(g.apply(px).coords, g.apply(py).coords))
    assert abs(before - after) < 1e-10 * max(1.0, abs(before))


def test_lorentz_conversion_is_lorentz():
    g, _ = random_hyperbolic(np.random.default_rng(3))
    A = g.lorentz
    J = minkowski_J(3)
    assert np.allclose(A.T @ J @ A, J, atol=1e-12)
    assert np.allclose(sl2_real_to_lorentz(np.array(g.mat, dtype=float)), A)


# --- exact arithmetic -------------------------------------------------------


def test_rational_entries_parse_exactly():
    g = Isometry.from_matrix("sl2-real", [["5/4", "3/4"], ["3/4", "5/4"]])
    assert g.exact
    assert g.exact_mat[0][0] == Fraction(5, 4)
    c = g.classify()
    assert c.kind == "hyperbolic"


def test_bad_rational_entry():
    with pytest.raises(InvalidMatrix):
        Isometry.from_matrix("sl2-real", [["e", "0"], ["0", "1/e"]])


def test_nonunimodular_rejected():
    with pytest.raises(InvalidMatrix):
        Isometry.from_matrix("sl2-real", [[2, 0], [0, 2]])


def test_sanov_commutator_exact():
    """[a, b] for the Sanov pair against in-test Fraction products."""
    a = Isometry.from_matrix("sl2-real", [[1, 2], [0, 1]])
    b = Isometry.from_matrix("sl2-real", [[1, 0], [2, 1]])
    got = commutator(a, b)

    def mul(x, y):
        return [
            [x[0][0] * y[0][0] + x[0][1] * y[1][0],
             x[0][0] * y[0][1] + x[0][1] * y[1][1]],
            [x[1][0] * y[0][0] + x[1][1] * y[1][0],
             x[1][0] * y[0][1] + x[1][1] * y[1][1]],
        ]

    am = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]]
    bm = [[Fraction(1), Fraction(0)], [Fraction(2), Fraction(1)]]
    ai = [[Fraction(1), Fraction(-2)], [Fraction(0), Fraction(1)]]
    bi = [[Fraction(1), Fraction(0)], [Fraction(-2), Fraction(1)]]
    expected = mul(mul(am, bm), mul(ai, bi))
    assert [list(r) for r in got.exact_mat] == expected
    # the commutator is visibly not the identity (free group evidence)
    assert expected[0][1] != 0
    w = evaluate_word(Word.from_string("abAB"), a, b)
    assert w.exact_mat == got.exact_mat


# --- words ------------------------------------------------------------------


def test_word_reduction():
    assert str(Word.reduced("aA")) == ""
    assert Word.from_string("abBA").is_trivial()
    assert str(Word.from_string("abA")) == "abA"
    with pytest.raises(InvalidWord):
        Word(("a", "A"))
    with pytest.raises(InvalidWord):
        Word.from_string("xyz")


def test_word_inverse_and_product():
    w = Word.from_string("abA")
    assert str(w * w.inverse()) == ""
    assert str(w.inverse()) == "aBA"


def test_cyclic_reduction():
    core, conj = Word.from_string("Ababa").cyclically_reduce()
    assert str(core) == "bab"
    assert str(conj) == "A"
    # free-group identity: conj * core * conj^-1 recovers the word
    rebuilt = conj * core * conj.inverse()
    assert str(rebuilt) == "Ababa"
    flat, empty = Word.from_string("ab").cyclically_reduce()
    assert str(flat) == "ab" and empty.is_trivial()


def test_word_render():
    assert Word.from_string("baaaaB").render() == "g f^4 g^-1"
    assert Word(()).render() == "1"


def test_evaluate_word_empty_is_identity():
    w = evaluate_word(Word(()), DIAG, SHIFT)
    assert np.allclose(np.array(w.mat, dtype=float), np.eye(2))


def test_evaluate_word_inverse_pair():
    w = evaluate_word(Word.from_string("a"), DIAG, DIAG.inverse())
    b = evaluate_word(Word.from_string("B"), DIAG, DIAG.inverse())
    assert np.allclose(np.array(w.mat, dtype=float),
                       np.array(b.mat, dtype=float))


# --- conjugate helper -------------------------------------------------------


def test_conjugate_by_identity():
    ident = Isometry.from_matrix("sl2-real", [[1, 0], [0, 1]])
    h = conjugate(DIAG, ident)
    assert np.allclose(np.array(h.mat, dtype=float),
                       np.array(DIAG.mat, dtype=float))
    assert np.allclose(np.array(conjugate(ident, DIAG).mat, dtype=float),
                       np.eye(2))


def test_conjugate_spectral_data():
    """g f g^-1 keeps the spectrum: trace e + 1/e, length 2."""
    h = conjugate(DIAG, SHIFT)
    m = np.array(h.mat, dtype=float)
    assert abs(np.trace(m) - (E + 1.0 / E)) < 1e-12
    assert abs(np.linalg.det(m) - 1.0) < 1e-12
    assert abs(h.translation_length() - 2.0) < 1e-12
    assert h.classify().kind == "hyperbolic"


def test_parabolic_conjugate_stays_parabolic():
    u = Isometry.from_matrix("sl2-real", [[2, 1], [1, 1]])
    h = SHIFT.conjugated_by(u)
    assert h.classify().kind == "parabolic"


# --- serialization ----------------------------------------------------------


def test_json_roundtrip_float():
    g, tau = random_hyperbolic(np.random.default_rng(11))
    back = Isometry.from_json(g.to_json())
    assert back.model == g.model
    assert abs(back.translation_length() - g.translation_length()) < 1e-12


def test_json_roundtrip_exact():
    g = Isometry.from_matrix("sl2-real", [["5/4", "3/4"], ["3/4", "5/4"]])
    back = Isometry.from_json(g.to_json())
    assert back.exact
    assert back.exact_mat == g.exact_mat
