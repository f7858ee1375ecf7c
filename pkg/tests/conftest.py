"""Shared fixtures.

The expensive end-to-end runs (the Sanov Case-2 scan and the Case-1
half-space build) happen once per session here; the acceptance tests
assert on the recorded wall-clock times, the module tests reuse the
results.
"""

import math
import time

import numpy as np
import pytest

from hypfree.certifier import certify_free, reduce_to_equal_lengths
from hypfree.constants import PipelineConstants
from hypfree.isometry import Isometry
from hypfree.pingpong import case2_certificate


@pytest.fixture(scope="session")
def consts():
    return PipelineConstants()


@pytest.fixture(scope="session")
def sanov_pair():
    a = Isometry.from_matrix("sl2-real", [[1, 2], [0, 1]])
    b = Isometry.from_matrix("sl2-real", [[1, 0], [2, 1]])
    return a, b


@pytest.fixture(scope="session")
def case1_pair():
    e = math.e
    f = Isometry.from_matrix("sl2-real", [[e, 0.0], [0.0, 1.0 / e]])
    t = Isometry.from_matrix(
        "sl2-real",
        [[math.cosh(10.0), math.sinh(10.0)], [math.sinh(10.0), math.cosh(10.0)]],
    )
    return f, t


@pytest.fixture(scope="session")
def dihedral_pair():
    # (a b)^2 = -I exactly; a parabolic, b hyperbolic, no shared fixed point
    a = Isometry.from_matrix("sl2-real", [[1, 2], [0, 1]])
    b = Isometry.from_matrix("sl2-real", [[1, -1], [-2, 3]])
    return a, b


@pytest.fixture(scope="session")
def sanov_run(sanov_pair, consts):
    a, b = sanov_pair
    t0 = time.monotonic()
    cert = certify_free(a, b, consts)
    elapsed = time.monotonic() - t0
    return {"cert": cert, "elapsed": elapsed}


@pytest.fixture(scope="session")
def case1_run(case1_pair, consts):
    f, t = case1_pair
    t0 = time.monotonic()
    cert = certify_free(f, t, consts, rng=np.random.default_rng(0))
    elapsed = time.monotonic() - t0
    return {"cert": cert, "elapsed": elapsed}


@pytest.fixture(scope="session")
def sanov_case2_data(sanov_pair, consts):
    a, b = sanov_pair
    f1, h1, _ = reduce_to_equal_lengths(a, b)
    return case2_certificate(f1, h1, consts)
