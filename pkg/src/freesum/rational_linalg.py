"""Exact scalars, matrices and polynomials.

Rationals are plain :class:`fractions.Fraction` values and vectors/matrices are
tuples (or lists) of them.  Integer-valued entries may be given as ``int``.
Everything here is exact: no floating point ever enters a computation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, DomainError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` (ints are accepted as-is)."""
    if isinstance(text, bool):
        raise DomainError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise DomainError(f"not a rational: {text!r}")
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise DomainError(f"malformed rational {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value) -> str:
    """Canonical ``"a/b"`` form, or ``"a"`` when the denominator is 1."""
    return str(Fraction(value))


def to_vector(values: Iterable) -> tuple[Fraction, ...]:
    vec = tuple(Fraction(v) for v in values)
    if not vec:
        raise DimensionError("vectors must have dimension >= 1")
    return vec


def is_integral(vec: Iterable) -> bool:
    return all(Fraction(v).denominator == 1 for v in vec)


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for v in vec:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(vec)
    return tuple(v // g for v in vec)


def _lcm_of_denominators(row: Iterable[Fraction]) -> int:
    m = 1
    for v in row:
        m = math.lcm(m, Fraction(v).denominator)
    return m


def _integer_rows(rows):
    """Scale each row to integers; returns the integer rows and the product of the scales."""
    out = []
    scale = 1
    for row in rows:
        m = _lcm_of_denominators(row)
        out.append([int(Fraction(v) * m) for v in row])
        scale *= m
    return out, scale


def _check_rectangular(rows) -> tuple[int, int]:
    if not rows:
        raise DimensionError("matrix must have at least one row")
    ncols = len(rows[0])
    if ncols == 0 or any(len(r) != ncols for r in rows):
        raise DimensionError("matrix rows must be nonempty and of equal length")
    return len(rows), ncols


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (no validation)."""
    if len(rows) == 1:
        return rows[0][0]
    if len(rows) == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    return _bareiss_det([list(r) for r in rows])


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    nrows, ncols = _check_rectangular(matrix)
    if nrows != ncols:
        raise DimensionError(f"determinant of a non-square {nrows}x{ncols} matrix")
    rows, scale = _integer_rows(matrix)
    return Fraction(int_det(rows), scale)


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(a)) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, len(a)):
            f = a[i][col]
            if f:
                ri, rr = a[i], a[rank]
                for j in range(col, ncols):
                    ri[j] = ri[j] * p - f * rr[j]
                g = 0
                for v in ri:
                    g = math.gcd(g, v)
                if g > 1:
                    a[i] = [v // g for v in ri]
        rank += 1
        if rank == len(a):
            break
    return rank


def rank(matrix: Sequence[Sequence]) -> int:
    """Exact rank over the rationals."""
    _check_rectangular(matrix)
    rows, _ = _integer_rows(matrix)
    return int_rank(rows)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of the rational nullspace of an integer matrix, as primitive integer vectors.

    Integer Gauss-Jordan elimination; rows are kept gcd-reduced.
    """
    a = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        rr = a[r]
        p = rr[col]
        for i in range(len(a)):
            if i == r:
                continue
            f = a[i][col]
            if f:
                ri = a[i]
                new = [x * p - f * y for x, y in zip(ri, rr)]
                g = 0
                for v in new:
                    g = math.gcd(g, v)
                a[i] = [v // g for v in new] if g > 1 else new
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    a = a[:r]
    pivot_set = set(pivots)
    basis = []
    for fc in range(ncols):
        if fc in pivot_set:
            continue
        scale = 1
        for row, pc in zip(a, pivots):
            scale = math.lcm(scale, abs(row[pc]))
        vec = [0] * ncols
        vec[fc] = scale
        for row, pc in zip(a, pivots):
            vec[pc] = -row[fc] * scale // row[pc]
        basis.append(primitive(vec))
    return basis


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(matrix: Sequence[Sequence]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ M`` and ``U`` unimodular.  Pivots of ``H``
    are positive, entries above a pivot lie in ``[0, pivot)`` and zero rows are
    at the bottom.
    """
    nrows, ncols = _check_rectangular(matrix)
    h = []
    for row in matrix:
        fr = [Fraction(v) for v in row]
        if any(v.denominator != 1 for v in fr):
            raise DomainError("Hermite normal form requires integer entries")
        h.append([int(v) for v in fr])
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]

    def combine(i, k, a, b, c, d):
        # rows (i, k) <- (a*row_i + b*row_k, c*row_i + d*row_k), ad - bc = +-1
        for mat in (h, u):
            ri, rk = mat[i], mat[k]
            mat[i] = [a * x + b * y for x, y in zip(ri, rk)]
            mat[k] = [c * x + d * y for x, y in zip(ri, rk)]

    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        for k in range(r + 1, nrows):
            if h[k][col] == 0:
                continue
            a, b = h[r][col], h[k][col]
            g, x, y = _xgcd(a, b)
            combine(r, k, x, y, -b // g, a // g)
        if h[r][col] == 0:
            continue
        if h[r][col] < 0:
            h[r] = [-v for v in h[r]]
            u[r] = [-v for v in u[r]]
        p = h[r][col]
        for i in range(r):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial with exact rational coefficients, ascending degree."""

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable = ()):
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.coefficients or not other.coefficients:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(out)

    def coefficient(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coefficients]})"


def lagrange_interpolate(samples: Sequence[tuple]) -> Polynomial:
    """Unique polynomial of degree < len(samples) through the given (x, y) pairs."""
    pts = [(Fraction(x), Fraction(y)) for x, y in samples]
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise DomainError("interpolation abscissae must be pairwise distinct")
    n = len(pts)
    result = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(pts):
        # basis numerator prod_{j != i} (x - xj), built up in ascending order
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k] -= c * xj
                nxt[k + 1] += c
            basis = nxt
            denom *= xi - xj
        scale = yi / denom
        for k, c in enumerate(basis):
            result[k] += c * scale
    return Polynomial(result)
