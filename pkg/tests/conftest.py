import random
import sys
import time

import pytest

from skeleta.exactla import IntMatrix
from skeleta.formats import load_corpus
from skeleta.polytope import LatticePolytope

BIG_TRIANGLE = ((2, -1), (-1, 2), (-1, -1))
SMALL_TRIANGLE = ((1, 0), (0, 1), (-1, -1))
SEGMENT = ((-1,), (1,))
OCTAHEDRON = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
CUBE = tuple((a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1))
SQUARE = ((1, 1), (-1, 1), (-1, -1), (1, -1))
DIAMOND = ((1, 0), (0, 1), (-1, 0), (0, -1))

POLYGONS = load_corpus("polygons")
POLYTOPES3D = load_corpus("polytopes3d")
CORPUS = POLYGONS + POLYTOPES3D


@pytest.fixture
def big_triangle():
    return LatticePolytope(BIG_TRIANGLE)


@pytest.fixture
def small_triangle():
    return LatticePolytope(SMALL_TRIANGLE)


@pytest.fixture
def segment():
    return LatticePolytope(SEGMENT)


@pytest.fixture
def octahedron():
    return LatticePolytope(OCTAHEDRON)


def random_unimodular(n, rng: random.Random, steps=8):
    """Product of random elementary matrices and sign flips."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if n > 1:
            c = rng.choice([-2, -1, 1, 2])
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        if rng.random() < 0.3:
            k = rng.randrange(n)
            m[k] = [-a for a in m[k]]
    if n > 1:
        perm = list(range(n))
        rng.shuffle(perm)
        m = [m[k] for k in perm]
    return IntMatrix(m, (n, n))


# ---------------------------------------------------------------- acceptance

SUITE_BUDGET_S = 60.0


def pytest_sessionstart(session):
    session.config._skeleta_t0 = time.perf_counter()


def _acceptance_lines():
    mod = sys.modules.get("test_acceptance")
    return list(getattr(mod, "RESULTS", []))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = _acceptance_lines()
    if not lines:
        return
    elapsed = time.perf_counter() - config._skeleta_t0
    verdict = "PASS" if elapsed < SUITE_BUDGET_S else "FAIL"
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    terminalreporter.write_line(f"{verdict} criterion 7: full suite runtime {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    if _acceptance_lines() and time.perf_counter() - session.config._skeleta_t0 >= SUITE_BUDGET_S:
        session.exitstatus = 1
