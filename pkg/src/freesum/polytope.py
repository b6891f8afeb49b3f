"""V-represented polytopes with an exact H-representation.

A :class:`Polytope` is built from any finite full-dimensional point set.  The
hull is computed once, incrementally (beneath-beyond), in integer coordinates
obtained by clearing all denominators; facets are stored as primitive integer
normals with rational offsets.
"""

from __future__ import annotations

import enum
import json
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, DomainError, LowerDimensionalError, UnboundedDualError
from .rational_linalg import (
    format_rational,
    int_rank,
    integer_kernel,
    is_integral,
    parse_rational,
    to_vector,
)


class Location(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class Hyperplane:
    """The half-space ``normal . x <= offset``."""

    normal: tuple[int, ...]
    offset: Fraction

    def value(self, x) -> Fraction:
        return sum((a * b for a, b in zip(self.normal, x)), Fraction(0))


@dataclass(frozen=True, order=True)
class Face:
    dim: int
    vertex_indices: tuple[int, ...]


def _dedupe(points):
    seen = set()
    out = []
    for p in points:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _scale_to_integers(points):
    scale = 1
    for p in points:
        for v in p:
            scale = math.lcm(scale, v.denominator)
    return [tuple(int(v * scale) for v in p) for p in points], scale


def _affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    base = points[0]
    return int_rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def affine_dimension(points: Iterable) -> int:
    """Dimension of the affine span of a nonempty point set."""
    pts = [to_vector(p) for p in points]
    if not pts:
        raise DimensionError("affine dimension of an empty point set")
    ipts, _ = _scale_to_integers(pts)
    return _affine_rank(ipts)


def _affine_basis(points: Sequence[Sequence[int]]) -> list[int]:
    """Greedy rank growth: indices of a maximal affinely independent subset."""
    chosen = [0]
    rows: list[list[int]] = []
    base = points[0]
    for i in range(1, len(points)):
        row = [a - b for a, b in zip(points[i], base)]
        if int_rank(rows + [row]) > len(rows):
            rows.append(row)
            chosen.append(i)
    return chosen


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _incremental_hull(points: list[tuple[int, ...]], dim: int):
    """Beneath-beyond hull of full-dimensional integer points.

    Returns a dict ``{(normal, offset): point_mask}`` where ``normal . x <= offset``
    and the mask holds every input point lying on that facet hyperplane.
    """
    basis = _affine_basis(points)
    if len(basis) < dim + 1:
        raise LowerDimensionalError(len(basis) - 1, dim)
    interior = [sum(points[i][k] for i in basis) for k in range(dim)]  # (dim+1) * centroid

    def plane_through(indices):
        idx = list(indices)
        base = points[idx[0]]
        rows = [[a - b for a, b in zip(points[i], base)] for i in idx[1:]]
        normal = integer_kernel(rows, dim)[0]
        offset = _dot(normal, base)
        if _dot(normal, interior) > (dim + 1) * offset:
            normal = tuple(-v for v in normal)
            offset = -offset
        return normal, offset

    facets: dict[tuple, int] = {}
    for skip in basis:
        members = [i for i in basis if i != skip]
        mask = 0
        for i in members:
            mask |= 1 << i
        facets[plane_through(members)] = mask

    # far points first: they tend to be vertices, after which the rest are cheap to reject
    basis_set = set(basis)
    order = sorted(
        (i for i in range(len(points)) if i not in basis_set),
        key=lambda i: -sum(((dim + 1) * a - c) ** 2 for a, c in zip(points[i], interior)),
    )
    for p_idx in order:
        p = points[p_idx]
        bit = 1 << p_idx
        visible = []
        hidden = []
        for key in facets:
            normal, offset = key
            s = _dot(normal, p) - offset
            if s > 0:
                visible.append((key, s))
            else:
                hidden.append((key, s))
                if s == 0:
                    facets[key] |= bit
        if not visible:
            continue
        masks = list(facets.values())
        new_facets: dict[tuple, int] = {}
        for (vkey, sv) in visible:
            vmask = facets[vkey]
            for (hkey, sh) in hidden:
                ridge = vmask & facets[hkey] & ~bit
                if ridge.bit_count() < dim - 1:
                    continue
                # a face of dimension <= d-3 lies in at least three facets
                if sum(1 for m in masks if m & ridge == ridge) != 2:
                    continue
                # the new facet plane lies in the pencil of the two planes and passes through p
                (nv, ov), (nh, oh) = vkey, hkey
                normal = [-sh * a + sv * b for a, b in zip(nv, nh)]
                offset = -sh * ov + sv * oh
                g = 0
                for v in normal:
                    g = math.gcd(g, v)
                key = (tuple(v // g for v in normal), offset // g)
                new_facets[key] = new_facets.get(key, 0) | ridge | bit
        for vkey, _ in visible:
            del facets[vkey]
        for key, mask in new_facets.items():
            facets[key] = facets.get(key, 0) | mask
    # points on a merged facet hyperplane that were absorbed earlier
    for key in facets:
        normal, offset = key
        mask = facets[key]
        for i, q in enumerate(points):
            if not mask >> i & 1 and _dot(normal, q) == offset:
                mask |= 1 << i
        facets[key] = mask
    return facets


def _hull_1d(points):
    lo = min(range(len(points)), key=lambda i: points[i][0])
    hi = max(range(len(points)), key=lambda i: points[i][0])
    if points[lo][0] == points[hi][0]:
        raise LowerDimensionalError(0, 1)
    return {((-1,), -points[lo][0]): 1 << lo, ((1,), points[hi][0]): 1 << hi}


class Polytope:
    """Convex hull of finitely many rational points spanning their ambient space.

    Construction computes the vertex set (in order of first appearance among the
    input points) and the irredundant facet list.  ``meta`` is free-form
    metadata that operations such as :func:`freesum.sums.free_sum` attach.
    """

    def __init__(self, points: Iterable, meta: dict | None = None):
        pts = [to_vector(p) for p in points]
        if not pts:
            raise DimensionError("a polytope needs at least one point")
        dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise DimensionError("all points must have the same dimension")
        pts = _dedupe(pts)
        ipts, scale = _scale_to_integers(pts)
        if dim == 1:
            raw = _hull_1d(ipts)
        else:
            raw = _incremental_hull(ipts, dim)

        # a point is a vertex iff the facets through it meet only in that point
        tight: dict[int, int] = {}
        keys = list(raw)
        for f, key in enumerate(keys):
            for i in _bits(raw[key]):
                tight[i] = tight.get(i, 0) | (1 << f)
        vertex_ids = []
        for i in range(len(pts)):
            fmask = tight.get(i, 0)
            if not fmask:
                continue
            meet = -1
            for f in _bits(fmask):
                meet &= raw[keys[f]]
            if meet == 1 << i:
                vertex_ids.append(i)

        self.ambient_dim = dim
        self.vertices: tuple[tuple[Fraction, ...], ...] = tuple(pts[i] for i in vertex_ids)
        self.meta = dict(meta or {})
        self._scale = scale
        self._ivertices = tuple(ipts[i] for i in vertex_ids)
        position = {old: new for new, old in enumerate(vertex_ids)}

        facets = []
        for key in keys:
            normal, offset = key
            vmask = 0
            for i in _bits(raw[key]):
                if i in position:
                    vmask |= 1 << position[i]
            facets.append((normal, offset, vmask))
        facets.sort(key=lambda t: (t[0], t[1]))
        self._facet_data = tuple(facets)
        self.facets: tuple[Hyperplane, ...] = tuple(
            Hyperplane(normal, Fraction(offset, scale)) for normal, offset, _ in facets
        )
        self._lattice_lock = threading.Lock()
        self._lattice = None

    # basic queries

    @property
    def dim(self) -> int:
        return self.ambient_dim

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def is_lattice(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    def facet_vertex_indices(self) -> list[tuple[int, ...]]:
        return [tuple(_bits(mask)) for _, _, mask in self._facet_data]

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vertex_set() == other.vertex_set()

    def __hash__(self):
        return hash((self.ambient_dim, self.vertex_set()))

    def __repr__(self):
        verts = ", ".join("(" + ",".join(format_rational(c) for c in v) + ")" for v in self.vertices)
        return f"Polytope(dim={self.ambient_dim}, vertices=[{verts}])"

    def translate(self, t) -> "Polytope":
        t = to_vector(t)
        return Polytope([tuple(a + b for a, b in zip(v, t)) for v in self.vertices])

    def scale(self, k) -> "Polytope":
        k = Fraction(k)
        return Polytope([tuple(k * a for a in v) for v in self.vertices])

    def linear_image(self, matrix) -> "Polytope":
        """Image under ``x -> M x`` for a square invertible matrix ``M``."""
        rows = [to_vector(r) for r in matrix]
        return Polytope([tuple(_dot(r, v) for r in rows) for v in self.vertices])

    # face lattice

    def _face_structure(self):
        """Map ``vertex mask -> (dim, children masks)`` over all nonempty faces."""
        with self._lattice_lock:
            if self._lattice is None:
                self._lattice = _build_face_lattice(self)
            return self._lattice


def _build_face_lattice(P: Polytope):
    d = P.ambient_dim
    full = (1 << P.num_vertices) - 1
    facet_masks = sorted({mask for _, _, mask in P._facet_data})
    structure = {full: (d, tuple(facet_masks))}
    level = facet_masks
    dim = d - 1
    while dim > 0:
        nxt = set()
        for face in level:
            candidates = set()
            for fm in facet_masks:
                c = face & fm
                if c and c != face:
                    candidates.add(c)
            children = [c for c in candidates if not any(c != o and c & o == c for o in candidates)]
            children.sort()
            structure[face] = (dim, tuple(children))
            nxt.update(children)
        level = sorted(nxt)
        dim -= 1
    for face in level:
        structure[face] = (0, ())
    return structure


def convex_hull(points: Iterable) -> Polytope:
    """Minimal vertex set and facet list of a full-dimensional point set."""
    return Polytope(points)


def extreme_points(points: Iterable) -> list[tuple[Fraction, ...]]:
    """Vertices of conv(points) for any (possibly lower-dimensional) point set.

    Lower-dimensional sets are projected onto a coordinate subset on which the
    affine hull projects bijectively, hulled there and lifted back.
    """
    pts = _dedupe([to_vector(p) for p in points])
    if len(pts) <= 2:
        return pts
    ipts, _ = _scale_to_integers(pts)
    base = ipts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in ipts[1:]]
    r = int_rank(diffs)
    if r == 0:
        return pts[:1]
    if r == len(base):
        return list(Polytope(pts).vertices)
    # pick coordinates greedily so that the projection keeps the affine rank
    cols: list[int] = []
    for c in range(len(base)):
        trial = cols + [c]
        if int_rank([[row[j] for j in trial] for row in diffs]) > len(cols):
            cols = trial
        if len(cols) == r:
            break
    projected = [tuple(p[c] for c in cols) for p in pts]
    lookup = {}
    for p, q in zip(pts, projected):
        lookup.setdefault(q, p)
    return [lookup[v] for v in Polytope(projected).vertices]


def contains(P: Polytope, x) -> Location:
    x = to_vector(x)
    if len(x) != P.ambient_dim:
        raise DimensionError(f"point of dimension {len(x)} tested against polytope in R^{P.ambient_dim}")
    on_boundary = False
    for h in P.facets:
        s = h.value(x)
        if s > h.offset:
            return Location.OUTSIDE
        if s == h.offset:
            on_boundary = True
    return Location.BOUNDARY if on_boundary else Location.INTERIOR


def contains_origin(P: Polytope) -> bool:
    return contains(P, (0,) * P.ambient_dim) is not Location.OUTSIDE


def face_lattice(P: Polytope) -> list[Face]:
    """All faces including the empty face and P, sorted by (dim, vertex indices)."""
    faces = [Face(-1, ())]
    for mask, (dim, _) in P._face_structure().items():
        faces.append(Face(dim, tuple(_bits(mask))))
    faces.sort()
    return faces


def polar_dual(P: Polytope) -> Polytope:
    if contains(P, (0,) * P.ambient_dim) is not Location.INTERIOR:
        raise UnboundedDualError("origin is not an interior point; the polar dual is unbounded")
    return Polytope([tuple(Fraction(a) / h.offset for a in h.normal) for h in P.facets])


def is_reflexive(P: Polytope) -> bool:
    """Origin-centred reflexivity; lattice translates are not recentred."""
    if not P.is_lattice():
        raise DomainError("reflexivity is defined for lattice polytopes")
    if contains(P, (0,) * P.ambient_dim) is not Location.INTERIOR:
        return False
    # normals are primitive, so a/offset is integral iff offset == 1
    return all(h.offset == 1 for h in P.facets)


# JSON document format


def polytope_to_dict(P: Polytope) -> dict:
    return {
        "ambient_dim": P.ambient_dim,
        "vertices": [[format_rational(c) for c in v] for v in P.vertices],
    }


def polytope_to_json(P: Polytope) -> str:
    return json.dumps(polytope_to_dict(P))


def points_from_dict(doc) -> list[tuple[Fraction, ...]]:
    """Validate a polytope document and return its point rows."""
    if not isinstance(doc, dict):
        raise DomainError("polytope document must be a JSON object")
    n = doc.get("ambient_dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"'ambient_dim' must be a positive integer, got {n!r}")
    rows = doc.get("vertices")
    if not isinstance(rows, list) or not rows:
        raise DomainError("'vertices' must be a nonempty list")
    points = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise DimensionError(f"vertex {i}: expected {n} coordinates, got {row!r}")
        coords = []
        for j, value in enumerate(row):
            try:
                coords.append(parse_rational(value))
            except DomainError as exc:
                raise DomainError(f"vertex {i}, coordinate {j}: {exc}") from None
        points.append(tuple(coords))
    return points


def polytope_from_dict(doc) -> Polytope:
    return Polytope(points_from_dict(doc))
