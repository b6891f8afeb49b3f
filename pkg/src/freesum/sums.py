"""Free sums, Minkowski sums, mixed volumes and the product-formula verifier."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceededError, DimensionError, LowerDimensionalError
from .polytope import Polytope, affine_dimension, contains_origin, extreme_points
from .rational_linalg import to_vector
from .volume import normalized_volume

MAX_MIXED_VOLUME_DIM = 6


def embed_first(P: Polytope, n: int) -> list[tuple]:
    """Vertices of P' = (P, 0) in R^(m+n)."""
    zero = (Fraction(0),) * n
    return [tuple(v) + zero for v in P.vertices]


def embed_second(Q: Polytope, m: int) -> list[tuple]:
    """Vertices of Q' = (0, Q) in R^(m+n)."""
    zero = (Fraction(0),) * m
    return [zero + tuple(v) for v in Q.vertices]


def free_sum(P: Polytope, Q: Polytope) -> Polytope:
    """conv{(P, 0) ∪ (0, Q)}.

    The construction is made for any P and Q; ``meta["is_free_sum"]`` records
    whether both summands contain their origin.
    """
    m, n = P.ambient_dim, Q.ambient_dim
    points = embed_first(P, n) + embed_second(Q, m)
    p_origin = contains_origin(P)
    q_origin = contains_origin(Q)
    return Polytope(
        points,
        meta={
            "is_free_sum": p_origin and q_origin,
            "p_contains_origin": p_origin,
            "q_contains_origin": q_origin,
        },
    )


def _vertex_rows(A) -> list[tuple]:
    if isinstance(A, Polytope):
        return list(A.vertices)
    return [to_vector(p) for p in A]


def minkowski_point_sum(A, B) -> list[tuple]:
    """Extreme points of conv(A) + conv(B) for arbitrary (possibly flat) point sets."""
    a_rows, b_rows = _vertex_rows(A), _vertex_rows(B)
    if len(a_rows[0]) != len(b_rows[0]):
        raise DimensionError("Minkowski summands must live in the same ambient space")
    sums = [tuple(x + y for x, y in zip(a, b)) for a in a_rows for b in b_rows]
    return extreme_points(sums)


def minkowski_sum(A: Polytope, B: Polytope) -> Polytope:
    if A.ambient_dim != B.ambient_dim:
        raise DimensionError("Minkowski summands must live in the same ambient space")
    return Polytope(tuple(x + y for x, y in zip(a, b)) for a in A.vertices for b in B.vertices)


def _hull_and_volume(points, n) -> tuple[list[tuple], Fraction]:
    """Extreme points and Euclidean volume of conv(points), hulling only once."""
    if affine_dimension(points) < n:
        return extreme_points(points), Fraction(0)
    P = Polytope(points)
    return list(P.vertices), normalized_volume(P) / math.factorial(n)


def mixed_volume(polytopes: Sequence) -> Fraction:
    """Mixed volume normalized so that MV(Q, ..., Q) = Vol(Q).

    Arguments may be :class:`Polytope` objects or plain point lists (which may be
    lower-dimensional, e.g. segments).  Computed by inclusion-exclusion over all
    nonempty subsets S: MV = sum (-1)^(n-|S|) vol(sum_{i in S} Q_i).
    """
    rows = [extreme_points(_vertex_rows(Q)) for Q in polytopes]
    n = len(rows)
    if n == 0:
        raise DimensionError("mixed volume of an empty family")
    if any(len(r[0]) != n for r in rows):
        raise DimensionError(f"mixed volume needs {n} polytopes in R^{n}")
    if n > MAX_MIXED_VOLUME_DIM:
        raise BudgetExceededError(
            f"mixed volume in dimension {n} exceeds the cap of {MAX_MIXED_VOLUME_DIM}"
        )
    # Minkowski sums of subsets built along the subset lattice, keyed by bitmask
    sums: dict[int, list[tuple]] = {}
    total = Fraction(0)
    for mask in range(1, 1 << n):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        if rest:
            raw = [tuple(x + y for x, y in zip(a, b)) for a in sums[rest] for b in rows[i]]
        else:
            raw = rows[i]
        sums[mask], vol = _hull_and_volume(raw, n)
        size = mask.bit_count()
        total += vol if (n - size) % 2 == 0 else -vol
    return total


@dataclass(frozen=True)
class ProductFormulaReport:
    vol_p: Fraction
    vol_q: Fraction
    vol_sum: Fraction
    holds: bool
    p_full_dim: bool
    q_full_dim: bool
    p_contains_origin: bool
    q_contains_origin: bool

    @property
    def preconditions_met(self) -> bool:
        return self.p_full_dim and self.q_full_dim and self.p_contains_origin and self.q_contains_origin


def verify_product_formula(P, Q) -> ProductFormulaReport:
    """Compare Vol(P ⊕ Q) with Vol(P)·Vol(Q), reporting rather than enforcing the hypotheses.

    P and Q may be polytopes or point lists; lower-dimensional summands get
    normalized volume 0 in their ambient space.
    """
    p_rows, q_rows = _vertex_rows(P), _vertex_rows(Q)
    m, n = len(p_rows[0]), len(q_rows[0])
    p_full = affine_dimension(p_rows) == m
    q_full = affine_dimension(q_rows) == n
    p_poly = P if isinstance(P, Polytope) else (Polytope(p_rows) if p_full else None)
    q_poly = Q if isinstance(Q, Polytope) else (Polytope(q_rows) if q_full else None)
    vol_p = normalized_volume(p_poly) if p_full else Fraction(0)
    vol_q = normalized_volume(q_poly) if q_full else Fraction(0)
    if p_full and q_full:
        vol_sum = normalized_volume(free_sum(p_poly, q_poly))
    else:
        pts = [tuple(v) + (Fraction(0),) * n for v in p_rows] + [(Fraction(0),) * m + tuple(v) for v in q_rows]
        try:
            vol_sum = normalized_volume(Polytope(pts))
        except LowerDimensionalError:
            vol_sum = Fraction(0)
    p_origin = p_full and contains_origin(p_poly)
    q_origin = q_full and contains_origin(q_poly)
    return ProductFormulaReport(
        vol_p, vol_q, vol_sum, vol_sum == vol_p * vol_q, p_full, q_full, p_origin, q_origin
    )

