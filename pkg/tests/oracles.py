"""Independent reference computations used only by the tests.

None of these share code paths with the package: facets come from brute-force
enumeration of d-subsets, determinants from Laplace expansion, lattice counts
from a plain bounding-box sweep.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import sympy


def laplace_det(rows):
    rows = [[Fraction(v) for v in r] for r in rows]
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * laplace_det(minor)
    return total


def sympy_rank(rows):
    return sympy.Matrix([[sympy.Rational(str(Fraction(v))) for v in r] for r in rows]).rank()


def brute_force_facets(points):
    """All facet inequalities (a, b) with a.x <= b, by trying every d-subset."""
    pts = [tuple(Fraction(v) for v in p) for p in set(map(tuple, points))]
    d = len(pts[0])
    facets = set()
    for subset in itertools.combinations(pts, d):
        base = subset[0]
        diffs = sympy.Matrix([[sympy.Rational(str(a - b)) for a, b in zip(p, base)] for p in subset[1:]])
        if d == 1:
            normal = [1]
        else:
            null = diffs.nullspace()
            if len(null) != 1:
                continue
            normal = list(null[0])
        lcm = 1
        for v in normal:
            lcm = math.lcm(lcm, sympy.Rational(v).q)
        normal = [int(v * lcm) for v in normal]
        g = 0
        for v in normal:
            g = math.gcd(g, v)
        normal = tuple(v // g for v in normal)
        b = sum(Fraction(a) * x for a, x in zip(normal, base))
        values = [sum(Fraction(a) * x for a, x in zip(normal, p)) for p in pts]
        if all(v <= b for v in values):
            facets.add((normal, b))
        if all(v >= b for v in values):
            facets.add((tuple(-a for a in normal), -b))
    return facets


def brute_force_vertices(points):
    """A point is a vertex iff the normals of the facets through it span R^d."""
    pts = [tuple(Fraction(v) for v in p) for p in set(map(tuple, points))]
    d = len(pts[0])
    facets = brute_force_facets(pts)
    out = set()
    for p in pts:
        normals = [list(a) for a, b in facets if sum(Fraction(x) * y for x, y in zip(a, p)) == b]
        if normals and sympy.Matrix(normals).rank() == d:
            out.add(p)
    return out


def inside(facets, x):
    return all(sum(Fraction(a) * v for a, v in zip(normal, x)) <= b for normal, b in facets)


def box_count(points, m):
    """|mP ∩ Z^d| by sweeping the integer bounding box of mP."""
    if m == 0:
        return 1
    facets = brute_force_facets(points)
    d = len(points[0])
    lo = [math.floor(min(Fraction(p[i]) for p in points) * m) for i in range(d)]
    hi = [math.ceil(max(Fraction(p[i]) for p in points) * m) for i in range(d)]
    scaled = {(a, b * m) for a, b in facets}
    return sum(
        1
        for x in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))
        if inside(scaled, x)
    )


def float_volume(points):
    """scipy/qhull volume: a floating-point sanity check."""
    from scipy.spatial import ConvexHull

    pts = [[float(v) for v in p] for p in points]
    if len(pts[0]) == 1:
        xs = [p[0] for p in pts]
        return max(xs) - min(xs)
    return ConvexHull(pts).volume


def mixed_area_by_interpolation(A, B):
    """MV(A, B) in the plane as the t-coefficient of vol(A + tB), t = 0, 1, 2.

    Area is computed with the shoelace formula on a monotone-chain hull.
    """
    def area(points):
        pts = sorted(set(points))
        if len(pts) < 3:
            return Fraction(0)

        def cross(o, a, b):
            return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

        lower, upper = [], []
        for p in pts:
            while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
                lower.pop()
            lower.append(p)
        for p in reversed(pts):
            while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
                upper.pop()
            upper.append(p)
        hull = lower[:-1] + upper[:-1]
        s = sum(hull[i][0] * hull[(i + 1) % len(hull)][1] - hull[(i + 1) % len(hull)][0] * hull[i][1]
                for i in range(len(hull)))
        return abs(Fraction(s)) / 2

    A = [tuple(Fraction(v) for v in p) for p in A]
    B = [tuple(Fraction(v) for v in p) for p in B]
    values = []
    for t in range(3):
        if t == 0:
            values.append(area(A))
        else:
            values.append(area([(a[0] + t * b[0], a[1] + t * b[1]) for a in A for b in B]))
    # vol(A + tB) = c0 + c1 t + c2 t^2
    c0 = values[0]
    c2 = (values[2] - 2 * values[1] + c0) / 2
    c1 = values[1] - c0 - c2
    return c1

