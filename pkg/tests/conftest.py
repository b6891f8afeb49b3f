import itertools
import os
import sys

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from freesum.polytope import Polytope  # noqa: E402
from freesum.errors import LowerDimensionalError  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def reeve(r):
    return Polytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, r)])


@pytest.fixture
def T2():
    return reeve(2)


@pytest.fixture
def unit_square():
    return Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture
def cross2():
    return Polytope([(1, 0), (-1, 0), (0, 1), (0, -1)])


@pytest.fixture
def sym_square():
    return Polytope(itertools.product((-1, 1), repeat=2))


@st.composite
def lattice_polytopes(draw, min_dim=1, max_dim=3, bound=3, max_points=8):
    """Full-dimensional lattice polytopes from random integer point clouds."""
    d = draw(st.integers(min_dim, max_dim))
    coord = st.integers(-bound, bound)
    pts = draw(st.lists(st.tuples(*[coord] * d), min_size=d + 1, max_size=max_points, unique=True))
    try:
        return Polytope(pts)
    except LowerDimensionalError:
        from hypothesis import assume

        assume(False)
