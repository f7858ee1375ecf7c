"""End-to-end freeness certification for a pair of nonelliptic isometries.

certify_free takes two generators, reduces them to an equal-length pair,
branches on translation length versus the eps/10 threshold, builds the
matching geometric certificate, and cross-examines the certified pair with
an exhaustive relation search before returning.  The certificate carries
the two group elements as words over the input letters, so it can be
rechecked later without rerunning the search.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import MARGIN_FACTOR, PipelineConstants
from .errors import (
    DepthTooLarge,
    DomainError,
    Elementary,
    EllipticInput,
    HypothesisGapMissing,
    OracleRefuted,
)
from .isometry import Isometry, Word, evaluate_word
from .pingpong import (
    broken_path,
    case1_certificate,
    case2_certificate,
    conjugate_tube_gap,
)
from .tubes import make_tube

ORACLE_BUDGET = 10_000_000
ORACLE_DEPTH_EXACT = 12
ORACLE_DEPTH_FLOAT = 8
SCREEN_DEPTH = 6
IDENTITY_TOL = 1e-6


# ---------------------------------------------------------------------------
# relation oracle


@dataclass(frozen=True)
class OracleResult:
    """Outcome of an exhaustive search for relations between two elements.

    status is "no-relation" when every reduced word up to the depth was
    checked and none is trivial, "relation" otherwise (with the offending
    word).  exact records whether the products were formed in integer or
    rational arithmetic, in which case the verdict is not subject to
    rounding.
    """

    status: str
    relation: str | None
    exact: bool
    words_checked: int
    depth: int

    def to_json(self):
        return {
            "status": self.status,
            "relation": self.relation,
            "exact": self.exact,
            "words_checked": self.words_checked,
            "depth": self.depth,
        }


def _flat2(mat):
    return (mat[0][0], mat[0][1], mat[1][0], mat[1][1])


def _mul2(x, y):
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def _oracle_rep(f: Isometry, h: Isometry, identity_tol: float):
    """Pick a product representation for the four generators.

    Returns (mats, one, mul, is_id, exact).  2x2 models act through the
    projective quotient, so both signs of the identity matrix count as
    trivial; Lorentz matrices are trivial only at the identity itself.
    """
    gens = [f, f.inverse(), h, h.inverse()]
    sl2 = f.model.startswith("sl2")
    exact = all(g.exact_mat is not None for g in gens)
    if exact and sl2:
        entries = [v for g in gens for row in g.exact_mat for v in row]
        conv = int if all(v.denominator == 1 for v in entries) else (lambda v: v)
        mats = [tuple(conv(v) for v in _flat2(g.exact_mat)) for g in gens]

        def is_id(m):
            return m[1] == 0 and m[2] == 0 and m[0] == m[3] and abs(m[0]) == 1

        return mats, (1, 0, 0, 1), _mul2, is_id, True
    if exact:
        mats = [g.exact_mat for g in gens]
        idx = range(len(mats[0]))
        one = tuple(
            tuple(Fraction(1 if i == j else 0) for j in idx) for i in idx
        )

        def mul(x, y):
            return tuple(
                tuple(sum(x[i][k] * y[k][j] for k in idx) for j in idx)
                for i in idx
            )

        return mats, one, mul, lambda m: m == one, True
    if sl2:
        mats = [_flat2(g.mat) for g in gens]
        tol2 = identity_tol * identity_tol

        def is_id(m):
            off = abs(m[1]) ** 2 + abs(m[2]) ** 2
            if off >= tol2:
                return False
            plus = off + abs(m[0] - 1) ** 2 + abs(m[3] - 1) ** 2
            minus = off + abs(m[0] + 1) ** 2 + abs(m[3] + 1) ** 2
            return min(plus, minus) < tol2

        return mats, (1.0, 0.0, 0.0, 1.0), _mul2, is_id, False
    mats = [g.lorentz for g in gens]
    one = np.eye(mats[0].shape[0])

    def is_id(m):
        return float(np.linalg.norm(m - one)) < identity_tol

    return mats, one, (lambda x, y: x @ y), is_id, False


def oracle_free_up_to(f: Isometry, h: Isometry, depth: int,
                      budget: int = ORACLE_BUDGET,
                      identity_tol: float = IDENTITY_TOL) -> OracleResult:
    """Check every nonempty reduced word in f, h up to the given length.

    Words are enumerated depth first with free cancellation built into the
    walk, so each of the 2 * (3^depth - 1) candidates is formed with one
    matrix product.  A word evaluating to the identity (projectively, for
    2x2 models) is returned as a relation; exhausting the tree certifies
    there is none up to that length, which is what the geometric
    certificates are tested against.
    """
    if depth < 1:
        raise DomainError(f"oracle depth must be at least 1, got {depth!r}")
    f._same_model(h)
    needed = 2 * (3 ** depth - 1)
    if needed > budget:
        raise DepthTooLarge(
            f"depth {depth} enumerates {needed} reduced words, over the "
            f"budget of {budget}"
        )
    mats, one, mul, is_id, exact = _oracle_rep(f, h, identity_tol)
    letters = "aAbB"
    inverse_of = (1, 0, 3, 2)
    count = 0
    relation = None
    prefix = []

    def walk(prod, last, remaining):
        nonlocal count, relation
        for i in range(4):
            if i == inverse_of[last]:
                continue
            m = mul(prod, mats[i])
            count += 1
            prefix.append(letters[i])
            if is_id(m):
                relation = "".join(prefix)
                return True
            if remaining > 1 and walk(m, i, remaining - 1):
                return True
            prefix.pop()
        return False

    for i in range(4):
        m = mats[i]
        count += 1
        prefix.append(letters[i])
        if is_id(m):
            relation = "".join(prefix)
            break
        if depth > 1 and walk(m, i, depth - 1):
            break
        prefix.pop()
    status = "relation" if relation is not None else "no-relation"
    return OracleResult(
        status=status,
        relation=relation,
        exact=exact,
        words_checked=count,
        depth=depth,
    )


# ---------------------------------------------------------------------------
# preconditions


def check_nonelementary(f: Isometry, g: Isometry,
                        consts: PipelineConstants) -> dict:
    """Decide whether two nonelliptic isometries generate a nonelementary
    group from their fixed ideal points.

    A nonelliptic isometry cannot swap a pair of ideal points, so the
    generated group is elementary exactly when the two fixed-point sets
    intersect.  Separations inside the tolerance raise Elementary;
    separations less than MARGIN_FACTOR times tol_point are too close to
    call in floating point and come back unverified.
    """
    cf, cg = f.classify(), g.classify()
    if not cf.nonelliptic or not cg.nonelliptic:
        raise EllipticInput("both generators must be nonelliptic")
    sep = min(
        float(np.max(np.abs(xi.coords - eta.coords)))
        for xi in cf.fixed_ideal
        for eta in cg.fixed_ideal
    )
    if sep <= consts.tol_point:
        raise Elementary(
            f"the generators share a fixed ideal point (separation {sep!r})"
        )
    verified = sep >= MARGIN_FACTOR * consts.tol_point
    return {"verified": verified, "min_separation": sep}


def reduce_to_equal_lengths(f: Isometry, g: Isometry, max_shift: int = 8,
                            tol: float = 1e-9):
    """Replace (f, g) by (f, g^j f g^-j), the smallest j whose conjugate
    shares no fixed ideal point with f.

    The conjugate has the same translation length as f, so the reduced
    pair always lands in exactly one of the two certificate branches.
    j = 1 works unless g happens to carry a fixed point of f back onto a
    fixed point of f; a handful of shifts always escapes that, since at
    most two ideal points are available to collide.
    """
    cf = f.classify()
    if not cf.nonelliptic:
        raise EllipticInput("cannot reduce an elliptic generator")
    for j in range(1, max_shift + 1):
        conj = g.power(j)
        h = f.conjugated_by(conj)
        ch = h.classify()
        shared = any(
            xi.same_as(eta, tol)
            for xi in cf.fixed_ideal
            for eta in ch.fixed_ideal
        )
        if not shared:
            return f, h, j
    raise Elementary(
        f"every conjugate g^j f g^-j for j <= {max_shift} shares a fixed "
        "ideal point with f"
    )


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class FreenessCertificate:
    """Witness that two explicit words in the input pair generate a free
    group of rank 2.

    The certified generators are eval(f_word)^N and eval(h_word); case
    records which geometric construction backs the claim (1: half-space
    walls for a long hyperbolic pair, 2: separated tube hulls for a short
    or parabolic pair).  margins holds every verified inequality together
    with its floor, oracle the exhaustive relation searches that were run,
    and details the raw construction data.  status is "verified" when the
    nonelementarity precondition could be decided numerically and
    "unverified-precondition" when it was too close to call (the geometric
    inequalities themselves are still checked either way).
    """

    case: int
    f_word: Word
    h_word: Word
    N: int
    word_length_bound: int
    status: str
    margins: dict
    oracle: dict
    constants: dict
    details: dict

    def certified_pair(self, f: Isometry, g: Isometry):
        """Evaluate the certificate's words on the input pair."""
        base = evaluate_word(self.f_word, f, g)
        return base.power(self.N), evaluate_word(self.h_word, f, g)

    def to_json(self):
        return {
            "case": self.case,
            "f_word": str(self.f_word),
            "h_word": str(self.h_word),
            "N": self.N,
            "word_length_bound": self.word_length_bound,
            "status": self.status,
            "margins": self.margins,
            "oracle": self.oracle,
            "constants": self.constants,
            "details": self.details,
        }

    @classmethod
    def from_json(cls, obj) -> "FreenessCertificate":
        return cls(
            case=int(obj["case"]),
            f_word=Word.from_string(obj["f_word"]),
            h_word=Word.from_string(obj["h_word"]),
            N=int(obj["N"]),
            word_length_bound=int(obj["word_length_bound"]),
            status=obj["status"],
            margins=dict(obj["margins"]),
            oracle=dict(obj["oracle"]),
            constants=dict(obj["constants"]),
            details=dict(obj["details"]),
        )


def _case2_words(j: int, delta: int):
    """Words for the pair (f, c f c^-1) with c = (g^j f g^-j)^delta."""
    left = "b" * j + "a" * delta + "B" * j
    right = "b" * j + "A" * delta + "B" * j
    return Word.from_string("a"), Word.from_string(left + "a" + right)


def certify_free(f: Isometry, g: Isometry,
                 consts: PipelineConstants | None = None, *,
                 oracle_depth: int | None = None,
                 search_budget: int = 1_000_000,
                 samples: int = 10_000,
                 rng=None) -> FreenessCertificate:
    """Produce a freeness certificate for a subgroup of <f, g>.

    The pipeline: classify both generators (elliptic input is rejected),
    decide nonelementarity from the fixed ideal points, screen the input
    pair for short relations, replace g by the conjugate g^j f g^-j to
    equalise translation lengths, then branch on the common length tau:
    tau >= eps/10 builds the four-half-space certificate for the pair of
    N-th powers, anything shorter (parabolic included) scans conjugates
    until two tube hulls clear the local-to-global threshold L.  The
    certified pair is finally handed to the relation oracle; exact input
    matrices are searched to depth 12, floating point to depth 8.
    """
    consts = PipelineConstants() if consts is None else consts
    f._same_model(g)
    cf, cg = f.classify(), g.classify()
    if not cf.nonelliptic:
        raise EllipticInput(
            f"first generator is {cf.kind}; need hyperbolic or parabolic"
        )
    if not cg.nonelliptic:
        raise EllipticInput(
            f"second generator is {cg.kind}; need hyperbolic or parabolic"
        )
    nonelem = check_nonelementary(f, g, consts)

    exact = f.exact_mat is not None and g.exact_mat is not None
    final_depth = (
        oracle_depth
        if oracle_depth is not None
        else (ORACLE_DEPTH_EXACT if exact else ORACLE_DEPTH_FLOAT)
    )
    screen = oracle_free_up_to(f, g, min(SCREEN_DEPTH, final_depth))
    if screen.relation is not None:
        raise OracleRefuted(
            "input pair satisfies the relation "
            f"{screen.relation!r}; no free subgroup certificate is issued "
            "for a pair that visibly fails the discreteness hypotheses",
            relation=screen.relation,
        )

    f1, h1, j = reduce_to_equal_lengths(f, g)

    if cf.kind == "hyperbolic" and cf.tau >= consts.lambda_threshold:
        case = 1
        conj = g.power(j)
        data = case1_certificate(
            f1, h1, consts, rng=rng, samples=samples, conjugator=conj
        )
        N = data.N_used
        f_word = Word.from_string("a")
        h_word = Word.from_string("b" * j + "a" * N + "B" * j)
        # h1^N = conj f^N conj^-1; powering the conjugate's own matrix
        # instead would compound its conjugation noise at every squaring.
        pair = (f1.power(N), f1.power(N).conjugated_by(conj))
        margins = dict(data.margins)
        margins["wall_margin_floor"] = -MARGIN_FACTOR * consts.tol_point
        details = {
            "reduction_shift": j,
            "case1": data.to_json(),
        }
    else:
        case = 2
        data = case2_certificate(f1, h1, consts, budget=search_budget)
        N = 1
        f_word, h_word = _case2_words(j, data.delta_shift)
        pair = (data.f, data.h)
        rep = broken_path(data, (1, 1), 1, consts)
        if not rep["passes"]:
            raise HypothesisGapMissing(
                "broken path inequalities failed on the certified pair"
            )
        margins = {
            "hull_gap": data.hull_gap,
            "gap_floor": consts.ltg.L + MARGIN_FACTOR * consts.tol_point,
            "min_short": rep["min_short"],
            "short_floor": consts.lambda_threshold,
            "min_angle": rep["min_angle"],
            "angle_floor": math.pi / 2,
            "endpoint_distance": rep["endpoint_distance"],
            "endpoint_floor": rep["qi_lower"],
        }
        details = {
            "reduction_shift": j,
            "case2": data.to_json(),
            "path": rep,
        }

    final = oracle_free_up_to(pair[0], pair[1], final_depth)
    if final.relation is not None:
        raise OracleRefuted(
            f"certified pair satisfies the relation {final.relation!r}",
            relation=final.relation,
        )
    details["nonelementary"] = nonelem
    status = "verified" if nonelem["verified"] else "unverified-precondition"
    return FreenessCertificate(
        case=case,
        f_word=f_word,
        h_word=h_word,
        N=N,
        word_length_bound=max(N * len(f_word), len(h_word)),
        status=status,
        margins=margins,
        oracle={"screen": screen.to_json(), "final": final.to_json()},
        constants=consts.to_json(),
        details=details,
    )


def verify_certificate(f: Isometry, g: Isometry, cert,
                       rng=None, samples: int = 2_000) -> dict:
    """Recheck a certificate against the pair it was issued for.

    Rebuilds the reduced pair from the recorded shift, recomputes the
    case's geometric margin from scratch, evaluates the certificate's
    words, and reruns the relation oracle to the recorded depth.  Returns
    a report whose "ok" field is the conjunction of all three checks.
    """
    if isinstance(cert, FreenessCertificate):
        cert = cert.to_json()
    consts = PipelineConstants.from_json(cert["constants"])
    N = int(cert["N"])
    j = int(cert["details"]["reduction_shift"])
    f1, h1, j2 = reduce_to_equal_lengths(f, g)
    if j2 != j:
        raise DomainError(
            f"reduction shift mismatch: certificate says {j}, pair gives {j2}"
        )
    word_f = Word.from_string(cert["f_word"])
    word_h = Word.from_string(cert["h_word"])
    F = evaluate_word(word_f, f, g).power(N)
    H = evaluate_word(word_h, f, g)

    checks = {}
    if int(cert["case"]) == 1:
        data = case1_certificate(
            f1, h1, consts, rng=rng, samples=samples, conjugator=g.power(j)
        )
        checks["N"] = data.N_used == N
        checks["margins"] = all(
            m <= -MARGIN_FACTOR * consts.tol_point
            for m in data.margins.values()
        )
        expect = (f1.power(N), f1.power(N).conjugated_by(g.power(j)))
    else:
        delta = int(cert["details"]["case2"]["delta_shift"])
        tube_f = make_tube(f1, consts)
        conj = h1.power(delta)
        gap, _ = conjugate_tube_gap(tube_f, conj, consts)
        checks["hull_gap"] = (
            tube_f.certified
            and gap >= consts.ltg.L + MARGIN_FACTOR * consts.tol_point
        )
        checks["gap_matches"] = (
            abs(gap - float(cert["margins"]["hull_gap"]))
            <= 1e-6 * max(1.0, abs(gap))
        )
        expect = (f1, f1.conjugated_by(conj))
    checks["words"] = _same_isometry(F, expect[0]) and _same_isometry(
        H, expect[1]
    )
    oracle = oracle_free_up_to(F, H, int(cert["oracle"]["final"]["depth"]))
    checks["oracle"] = oracle.relation is None
    return {
        "ok": all(checks.values()),
        "checks": checks,
        "oracle": oracle.to_json(),
    }


def _same_isometry(x: Isometry, y: Isometry, tol: float = 1e-8) -> bool:
    """Equality as isometries: 2x2 matrices are compared up to sign."""
    if x.exact_mat is not None and y.exact_mat is not None:
        if x.exact_mat == y.exact_mat:
            return True
        if x.model.startswith("sl2"):
            neg = tuple(tuple(-v for v in row) for row in y.exact_mat)
            return x.exact_mat == neg
        return False
    a, b = np.asarray(x.mat), np.asarray(y.mat)
    scale = max(1.0, float(np.max(np.abs(b))))
    if x.model.startswith("sl2"):
        return (
            float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))
            < tol * scale
        )
    return float(np.max(np.abs(a - b))) < tol * scale
