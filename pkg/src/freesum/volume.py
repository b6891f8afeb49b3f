"""Exact volumes by pulling triangulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError
from .polytope import Polytope, _bits, affine_dimension
from .rational_linalg import hermite_normal_form, int_det, to_vector


@dataclass(frozen=True)
class Triangulation:
    """Full-dimensional simplices given as sorted vertex-index tuples of ``polytope``."""

    polytope: Polytope
    simplices: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.simplices)


def triangulate(P: Polytope) -> Triangulation:
    """Pulling triangulation: every face is coned from its lexicographically smallest vertex.

    Because the pulling order is global, the triangulations induced on shared
    faces agree, so the result is a genuine triangulation using only vertices.
    """
    structure = P._face_structure()
    order = sorted(range(P.num_vertices), key=lambda i: P.vertices[i])
    rank_of = {v: r for r, v in enumerate(order)}
    memo: dict[int, list[tuple[int, ...]]] = {}

    def pull(mask: int) -> list[tuple[int, ...]]:
        if mask in memo:
            return memo[mask]
        dim, children = structure[mask]
        verts = _bits(mask)
        apex = min(verts, key=rank_of.__getitem__)
        if dim == 0:
            out = [(apex,)]
        else:
            out = []
            for child in children:
                if child >> apex & 1:
                    continue
                out.extend(s + (apex,) for s in pull(child))
        memo[mask] = out
        return out

    full = (1 << P.num_vertices) - 1
    simplices = tuple(tuple(sorted(s)) for s in pull(full))
    return Triangulation(P, simplices)


def _simplex_det(P: Polytope, simplex) -> int:
    base = P._ivertices[simplex[0]]
    rows = [[a - b for a, b in zip(P._ivertices[i], base)] for i in simplex[1:]]
    return abs(int_det(rows))


def _normalized_volume_from(tri: Triangulation) -> Fraction:
    P = tri.polytope
    total = sum(_simplex_det(P, s) for s in tri.simplices)
    return Fraction(total, P._scale ** P.ambient_dim)


def normalized_volume(P: Polytope) -> Fraction:
    """``d! * vol(P)``; an integer for lattice polytopes."""
    return _normalized_volume_from(triangulate(P))


def euclidean_volume(P: Polytope) -> Fraction:
    return normalized_volume(P) / math.factorial(P.ambient_dim)


def simplex_volumes(tri: Triangulation) -> list[Fraction]:
    """Euclidean volume of each simplex of a triangulation."""
    P = tri.polytope
    denom = P._scale ** P.ambient_dim * math.factorial(P.ambient_dim)
    return [Fraction(_simplex_det(P, s), denom) for s in tri.simplices]


def lattice_projection(points: Iterable) -> list[tuple[int, ...]]:
    """Map lattice points onto Z^k, k = affine dimension, preserving the induced lattice.

    With ``D`` the matrix of differences from the first point, the row HNF of
    ``D^T`` gives a unimodular ``U`` such that ``U x`` has zeros beyond the first
    ``k`` coordinates for every difference ``x``; dropping them is a lattice
    isomorphism of ``aff(points) ∩ Z^n`` onto ``Z^k``.
    """
    pts = [to_vector(p) for p in points]
    if any(v.denominator != 1 for p in pts for v in p):
        raise DomainError("relative volume requires lattice points")
    ipts = [tuple(int(v) for v in p) for p in pts]
    base = ipts[0]
    n = len(base)
    diffs = [[a - b for a, b in zip(p, base)] for p in ipts[1:]]
    if not diffs or not any(any(r) for r in diffs):
        return [()] * len(ipts)
    transposed = [[row[j] for row in diffs] for j in range(n)]
    h, u = hermite_normal_form(transposed)
    k = sum(1 for row in h if any(row))
    return [tuple(sum(u[i][j] * (p[j] - base[j]) for j in range(n)) for i in range(k)) for p in ipts]


def relative_normalized_volume(points: Iterable) -> Fraction:
    """Normalized volume of conv(points) relative to the lattice of its affine hull.

    A single point has relative normalized volume 1.
    """
    pts = [to_vector(p) for p in points]
    if affine_dimension(pts) == 0:
        if any(v.denominator != 1 for p in pts for v in p):
            raise DomainError("relative volume requires lattice points")
        return Fraction(1)
    return normalized_volume(Polytope(lattice_projection(pts)))
