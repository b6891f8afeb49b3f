"""Lattice-point enumeration, Ehrhart polynomials and h*-vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceededError, DomainError, InternalConsistencyError
from .polytope import Location, Polytope, contains
from .rational_linalg import Polynomial, lagrange_interpolate
from .volume import euclidean_volume, normalized_volume

DEFAULT_BUDGET = 10**7


class _FibreTower:
    """Projections of a lattice polytope onto its leading coordinates.

    Level ``k`` holds the facets of conv(first k+1 coordinates of the vertices)
    that bound coordinate ``k``; over any prefix inside the level-(k-1)
    projection they cut out the exact fibre interval.
    """

    def __init__(self, P: Polytope):
        if not P.is_lattice():
            raise DomainError("lattice point counting requires a lattice polytope")
        d = P.ambient_dim
        self.dim = d
        self.levels = []
        for k in range(1, d + 1):
            proj = P if k == d else Polytope([v[:k] for v in P.vertices])
            upper, lower = [], []
            for h in proj.facets:
                a_k = h.normal[k - 1]
                entry = (h.normal[: k - 1], int(h.offset), a_k)
                if a_k > 0:
                    upper.append(entry)
                elif a_k < 0:
                    lower.append(entry)
            self.levels.append((upper, lower))

    def _range(self, k, prefix, m):
        upper, lower = self.levels[k]
        hi = None
        for head, b, a_k in upper:
            bound = (m * b - sum(x * y for x, y in zip(head, prefix))) // a_k
            if hi is None or bound < hi:
                hi = bound
        lo = None
        for head, b, a_k in lower:
            # a_k < 0:  x_k >= (m b - head.prefix) / a_k
            bound = -((m * b - sum(x * y for x, y in zip(head, prefix))) // -a_k)
            if lo is None or bound > lo:
                lo = bound
        return lo, hi

    def count(self, m: int, budget: int = DEFAULT_BUDGET) -> int:
        if m == 0:
            return 1
        d = self.dim
        visited = 0
        total = 0
        stack = [()]
        while stack:
            prefix = stack.pop()
            k = len(prefix)
            lo, hi = self._range(k, prefix, m)
            if hi < lo:
                continue
            if k == d - 1:
                total += hi - lo + 1
                continue
            visited += hi - lo + 1
            if visited > budget:
                raise BudgetExceededError(
                    f"lattice-point enumeration exceeded the budget of {budget} nodes at dilate {m}"
                )
            stack.extend(prefix + (x,) for x in range(lo, hi + 1))
        return total


def lattice_point_count(P: Polytope, m: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of integer points in the m-th dilate of a lattice polytope."""
    if m < 0:
        raise DomainError("dilation factor must be nonnegative")
    return _FibreTower(P).count(m, budget)


def lattice_point_counts(P: Polytope, upto: int, budget: int = DEFAULT_BUDGET) -> list[int]:
    """``[L_P(0), ..., L_P(upto)]`` sharing one projection tower."""
    tower = _FibreTower(P)
    return [tower.count(m, budget) for m in range(upto + 1)]


def h_star_from_counts(counts, d: int) -> list[int]:
    """Binomial transform ``h_i = sum_j (-1)^j C(d+1, j) L(i-j)`` for i = 0..d."""
    h = []
    for i in range(d + 1):
        h.append(sum((-1) ** j * math.comb(d + 1, j) * counts[i - j] for j in range(i + 1)))
    return h


def _check_h_star(h, d):
    if len(h) != d + 1 or h[0] != 1 or any(x < 0 for x in h):
        raise InternalConsistencyError(f"h*-vector {h} violates h_0 = 1 / nonnegativity")


def ehrhart_polynomial(P: Polytope, budget: int = DEFAULT_BUDGET) -> Polynomial:
    """Interpolate L_P through m = 0..d and confirm it at m = d+1..2d."""
    d = P.ambient_dim
    counts = lattice_point_counts(P, 2 * d, budget)
    poly = lagrange_interpolate([(m, counts[m]) for m in range(d + 1)])
    for m in range(d + 1, 2 * d + 1):
        if poly(m) != counts[m]:
            raise InternalConsistencyError(
                f"interpolated Ehrhart polynomial gives {poly(m)} at m={m}, direct count {counts[m]}"
            )
    return poly


def h_star_vector(P: Polytope, budget: int = DEFAULT_BUDGET) -> list[int]:
    """h*-vector of a full-dimensional lattice polytope, padded to length dim+1."""
    d = P.ambient_dim
    h = h_star_from_counts(lattice_point_counts(P, d, budget), d)
    _check_h_star(h, d)
    return h


def trim_h_star(h) -> list[int]:
    """Drop trailing zeros for reporting."""
    h = list(h)
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return h


def h_star_polynomial(h) -> Polynomial:
    return Polynomial(h)


@dataclass(frozen=True)
class EhrhartData:
    dim: int
    ehrhart_poly: Polynomial
    h_star: tuple[int, ...]
    normalized_volume: Fraction

    @property
    def h_star_trimmed(self) -> list[int]:
        return trim_h_star(self.h_star)


def ehrhart_data(P: Polytope, budget: int = DEFAULT_BUDGET) -> EhrhartData:
    """Ehrhart polynomial and h*-vector, cross-checked against the triangulated volume."""
    d = P.ambient_dim
    counts = lattice_point_counts(P, 2 * d, budget)
    poly = lagrange_interpolate([(m, counts[m]) for m in range(d + 1)])
    for m in range(d + 1, 2 * d + 1):
        if poly(m) != counts[m]:
            raise InternalConsistencyError(f"Ehrhart polynomial disagrees with the count at m={m}")
    h = h_star_from_counts(counts, d)
    _check_h_star(h, d)
    vol = normalized_volume(P)
    if sum(h) != vol:
        raise InternalConsistencyError(f"sum of h* = {sum(h)} but normalized volume = {vol}")
    if poly(0) != 1 or poly.coefficient(d) != euclidean_volume(P):
        raise InternalConsistencyError("Ehrhart polynomial constant/leading coefficient mismatch")
    return EhrhartData(d, poly, tuple(h), vol)


@dataclass(frozen=True)
class BraunReport:
    h_star_p: tuple[int, ...]
    h_star_q: tuple[int, ...]
    product: tuple[int, ...]
    direct: tuple[int, ...]
    equal: bool
    hypotheses_met: bool
    notes: tuple[str, ...] = field(default=())


def braun_check(P: Polytope, Q: Polytope, budget: int = DEFAULT_BUDGET) -> BraunReport:
    """Compare h*(P ⊕ Q) with h*(P) h*(Q).

    The comparison runs even when P is not reflexive or the origin is not
    interior to Q; ``hypotheses_met`` is then False and ``notes`` says why.
    """
    from .polytope import is_reflexive
    from .sums import free_sum

    notes = []
    if not is_reflexive(P):
        notes.append("P is not reflexive")
    if contains(Q, (0,) * Q.ambient_dim) is not Location.INTERIOR:
        notes.append("origin is not interior to Q")
    hp = h_star_vector(P, budget)
    hq = h_star_vector(Q, budget)
    direct = h_star_vector(free_sum(P, Q), budget)
    product = [int(c) for c in (Polynomial(hp) * Polynomial(hq)).coefficients]
    equal = trim_h_star(direct) == trim_h_star(product)
    return BraunReport(
        tuple(hp), tuple(hq), tuple(product), tuple(direct), equal, not notes, tuple(notes)
    )
