import numpy as np
import pytest

from dwbf import tanner


@pytest.fixture(scope="session")
def code_3_6_120():
    """(3,6)-regular N=120 code with girth >= 6."""
    g = tanner.generate_regular(120, 3, 6, seed=7, min_girth=6)
    assert tanner.girth(g) >= 6
    return g


@pytest.fixture(scope="session")
def code_4_6_816():
    """(4,6)-regular N=816 code (rate 1/3) for statistical checks."""
    g = tanner.generate_regular(816, 4, 6, seed=11, min_girth=6)
    assert tanner.girth(g) >= 6
    return g


@pytest.fixture(scope="session")
def code_girth10():
    """(2,3)-regular code with girth > 8."""
    g = tanner.generate_regular(60, 2, 3, seed=3, min_girth=10)
    assert tanner.girth(g) > 8
    return g


@pytest.fixture(scope="session")
def code_girth12():
    """(2,3)-regular code with girth > 10."""
    g = tanner.generate_regular(105, 2, 3, seed=5, min_girth=12)
    assert tanner.girth(g) > 10
    return g


@pytest.fixture
def tiny_graph():
    H = np.array([[1, 1, 1, 0, 0, 0],
                  [0, 0, 1, 1, 1, 0],
                  [1, 0, 0, 0, 1, 1],
                  [0, 1, 0, 1, 0, 1]], dtype=np.uint8)
    return tanner.TannerGraph.from_dense(H)


def random_graph(rng, M=None, N=None):
    """Random (possibly irregular) Tanner graph with no empty rows/cols."""
    M = M or int(rng.integers(2, 8))
    N = N or int(rng.integers(M + 1, M + 9))
    while True:
        H = (rng.random((M, N)) < 0.4).astype(np.uint8)
        if H.sum(axis=1).min() >= 2 and H.sum(axis=0).min() >= 1:
            return tanner.TannerGraph.from_dense(H), H
