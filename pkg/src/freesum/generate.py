"""Seeded random lattice polytopes for property checks."""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass

from .errors import BudgetExceededError, DomainError, LowerDimensionalError
from .polytope import Location, Polytope, contains

ORIGIN_MODES = ("interior", "boundary", "vertex", "any-containing")
MAX_RETRIES = 500


def derive_seed(seed: int, *labels) -> int:
    """Order-independent 64-bit sub-seed for (seed, labels...)."""
    text = ":".join(str(x) for x in (seed,) + labels)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


@dataclass(frozen=True)
class RandomInstanceSpec:
    ambient_dim: int
    num_points: int = 6
    coordinate_bound: int = 3
    origin_mode: str = "any-containing"
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.ambient_dim <= 4:
            raise DomainError("ambient_dim must be in 1..4")
        if not 3 <= self.num_points <= 16:
            raise DomainError("num_points must be in 3..16")
        if self.num_points < self.ambient_dim + 1:
            raise DomainError("num_points must be at least ambient_dim + 1 for a full-dimensional hull")
        if not 1 <= self.coordinate_bound <= 6:
            raise DomainError("coordinate_bound must be in 1..6")
        if self.origin_mode not in ORIGIN_MODES:
            raise DomainError(f"origin_mode must be one of {ORIGIN_MODES}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")


def _within(P: Polytope, bound: int) -> bool:
    return all(abs(c) <= bound for v in P.vertices for c in v)


def _boundary_lattice_points(P: Polytope):
    """Non-vertex lattice points on the boundary of a lattice polytope P."""
    vertices = P.vertex_set()
    facets = [(normal, offset) for normal, offset, _ in P._facet_data]
    scale = P._scale
    ranges = [range(int(min(v[k] for v in vertices)), int(max(v[k] for v in vertices)) + 1)
              for k in range(P.ambient_dim)]
    out = []
    for x in itertools.product(*ranges):
        slack = [offset - scale * sum(a * c for a, c in zip(normal, x)) for normal, offset in facets]
        if min(slack) == 0 and x not in vertices:
            out.append(x)
    return out


def _attempt(spec: RandomInstanceSpec, rng: random.Random) -> Polytope | None:
    d, b = spec.ambient_dim, spec.coordinate_bound
    points = [tuple(rng.randint(-b, b) for _ in range(d)) for _ in range(spec.num_points)]
    try:
        P = Polytope(points)
    except LowerDimensionalError:
        return None
    origin = (0,) * d
    mode = spec.origin_mode
    if mode == "interior":
        return P if contains(P, origin) is Location.INTERIOR else None
    if mode == "any-containing":
        return P if contains(P, origin) is not Location.OUTSIDE else None
    if mode == "vertex" or (mode == "boundary" and d == 1):
        v = rng.choice(P.vertices)
    else:
        candidates = _boundary_lattice_points(P)
        if not candidates:
            return None
        v = rng.choice(candidates)
    shifted = P.translate(tuple(-c for c in v))
    return shifted if _within(shifted, b) else None


def gen_random(spec: RandomInstanceSpec) -> Polytope:
    """Full-dimensional lattice polytope meeting ``spec.origin_mode``; deterministic in the seed.

    ``boundary`` puts the origin on the boundary away from the vertices, except
    in dimension 1 where the boundary consists of the two vertices.
    """
    rng = random.Random(spec.seed)
    for _ in range(MAX_RETRIES):
        P = _attempt(spec, rng)
        if P is not None:
            return P
    raise BudgetExceededError(f"no polytope matching {spec} after {MAX_RETRIES} attempts")


def random_unimodular(dim: int, rng: random.Random, steps: int = 4) -> list[list[int]]:
    """Product of a signed permutation and a few elementary shears with multipliers in {-1, 1}."""
    perm = list(range(dim))
    rng.shuffle(perm)
    m = [[(rng.choice((-1, 1)) if perm[i] == j else 0) for j in range(dim)] for i in range(dim)]
    if dim == 1:
        return m
    for _ in range(steps):
        i, j = rng.sample(range(dim), 2)
        c = rng.choice((-1, 1))
        m[i] = [a + c * bb for a, bb in zip(m[i], m[j])]
    return m


def cube(dim: int) -> Polytope:
    return Polytope(itertools.product((-1, 1), repeat=dim))


def cross_polytope(dim: int) -> Polytope:
    pts = []
    for i in range(dim):
        for s in (1, -1):
            pts.append(tuple(s if j == i else 0 for j in range(dim)))
    return Polytope(pts)


def reeve_tetrahedron(r: int) -> Polytope:
    return Polytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, r)])
