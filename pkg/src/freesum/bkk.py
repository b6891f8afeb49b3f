"""Supports, Newton polytopes, root-count bounds and the face-condition certificate.

Nothing here solves polynomial systems.  :func:`build_free_sum_system` only
exports a generic system for external homotopy solvers; the bounds are
computed as volumes and mixed volumes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, LowerDimensionalError
from .polytope import Face, Polytope, _bits, _dedupe, affine_dimension
from .rational_linalg import to_vector
from .sums import mixed_volume
from .volume import normalized_volume


@dataclass(frozen=True)
class SupportSet:
    """Distinct integer exponent vectors of one Laurent polynomial."""

    ambient_dim: int
    exponents: tuple[tuple[int, ...], ...]

    def __init__(self, exponents: Iterable):
        rows = []
        for e in exponents:
            vec = to_vector(e)
            if any(v.denominator != 1 for v in vec):
                raise DomainError(f"exponent {e!r} is not an integer vector")
            rows.append(tuple(int(v) for v in vec))
        if not rows:
            raise DomainError("a support set must be nonempty")
        dim = len(rows[0])
        if any(len(r) != dim for r in rows):
            raise DimensionError("exponent vectors must share one dimension")
        if len(set(rows)) != len(rows):
            raise DomainError("exponent vectors must be pairwise distinct")
        object.__setattr__(self, "ambient_dim", dim)
        object.__setattr__(self, "exponents", tuple(rows))

    def __iter__(self):
        return iter(self.exponents)

    def __len__(self):
        return len(self.exponents)


def _rows(S) -> list[tuple[Fraction, ...]]:
    return [to_vector(p) for p in S]


def newton_polytope(S) -> Polytope:
    return Polytope(_rows(S))


def kushnirenko_bound(S) -> Fraction:
    """n! vol(conv S): the root bound for n polynomials sharing the support S."""
    return normalized_volume(newton_polytope(S))


def bkk_bound(supports: Sequence) -> Fraction:
    """Mixed volume of the Newton polytopes of n supports in Z^n."""
    return mixed_volume([_rows(S) for S in supports])


# system export


@dataclass(frozen=True)
class Term:
    coeff: str
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class LaurentSystem:
    num_vars: int
    variables: tuple[str, ...]
    polynomials: tuple[tuple[Term, ...], ...]
    seed: int

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "variables": list(self.variables),
            "polynomials": [
                {"terms": [{"coeff": t.coeff, "exponents": list(t.exponents)} for t in poly]}
                for poly in self.polynomials
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def supports(self) -> list[SupportSet]:
        return [SupportSet(t.exponents for t in poly) for poly in self.polynomials]


def coefficient_stream(seed: int):
    """Coefficients uniform in [-1, 1) from numpy's PCG64 bit generator.

    Each coefficient is ``2 u - 1`` with ``u = Generator(PCG64(seed)).random()``
    (53 random bits scaled by 2**-53), so a given seed reproduces bit-identical
    doubles on every platform.
    """
    if not 0 <= seed < 2**64:
        raise DomainError("seed must be an unsigned 64-bit integer")
    rng = np.random.Generator(np.random.PCG64(seed))
    while True:
        yield 2.0 * float(rng.random()) - 1.0


def build_free_sum_system(P: Polytope, Q: Polytope, seed: int) -> LaurentSystem:
    """Generic system H = (f_1..f_m, g_1..g_n) with supports (S',..,S', T',..,T').

    Each f_i uses the vertices of P as exponents in the x-variables and each g_j
    the vertices of Q in the y-variables.  Coefficients are written as the
    shortest decimal string that round-trips to the sampled double.
    """
    if not (P.is_lattice() and Q.is_lattice()):
        raise DomainError("supports must come from lattice polytopes")
    m, n = P.ambient_dim, Q.ambient_dim
    s_prime = [tuple(int(c) for c in v) + (0,) * n for v in P.vertices]
    t_prime = [(0,) * m + tuple(int(c) for c in v) for v in Q.vertices]
    coeffs = coefficient_stream(seed)
    polys = []
    for support in [s_prime] * m + [t_prime] * n:
        polys.append(tuple(Term(repr(next(coeffs)), e) for e in support))
    variables = tuple(f"x{i + 1}" for i in range(m)) + tuple(f"y{j + 1}" for j in range(n))
    return LaurentSystem(m + n, variables, tuple(polys), seed)


def free_sum_supports(P: Polytope, Q: Polytope) -> list[list[tuple]]:
    """The support family (S' x m, T' x n) of the free-sum system."""
    m, n = P.ambient_dim, Q.ambient_dim
    s_prime = [tuple(v) + (Fraction(0),) * n for v in P.vertices]
    t_prime = [(Fraction(0),) * m + tuple(v) for v in Q.vertices]
    return [s_prime] * m + [t_prime] * n


# face-condition certificate


@dataclass(frozen=True)
class FaceVerdict:
    face: Face
    intersections: tuple[int, ...]
    verdict: str
    witness: tuple[int, ...] | None = None


@dataclass(frozen=True)
class FaceConditionReport:
    faces: tuple[FaceVerdict, ...]
    full_dimensional: bool

    @property
    def certificate_passes(self) -> bool:
        return all(f.verdict != "FAIL" for f in self.faces)

    def verdict_counts(self) -> dict[str, int]:
        counts = {"A": 0, "B": 0, "C": 0, "FAIL": 0}
        for f in self.faces:
            counts[f.verdict] += 1
        return counts


def _classify(face_points, face_vertices, n):
    """Return (verdict, witness) for one face; ``face_points[i]`` is F ∩ S_i."""
    if all(face_points):
        return "A", None
    if any(len(pts) == 1 for pts in face_points):
        return "B", None
    meeting = [i for i in range(n) if face_points[i]]
    k = len(meeting)
    union = [p for i in meeting for p in face_points[i]]
    for J in itertools.combinations(range(n), k):
        outside = [c for c in range(n) if c not in J]
        if any(p[c] != 0 for p in union for c in outside):
            continue
        projected = [tuple(v[c] for c in J) for v in face_vertices]
        if affine_dimension(projected) < k:
            return "C", tuple(c + 1 for c in J)
    return "FAIL", None


def check_face_conditions(supports: Sequence) -> FaceConditionReport:
    """Classify every positive-dimensional proper face of conv(S_1 ∪ ... ∪ S_n).

    Conditions are tried in the order A, B, C and the first match is recorded.
    For C, ``witness`` is the 1-based coordinate subset J.  If the union is not
    full-dimensional there is nothing to certify and the report is empty.
    """
    families = [_dedupe(_rows(S)) for S in supports]
    if not families or any(not f for f in families):
        raise DomainError("need at least one nonempty support set")
    n = len(families[0][0])
    if any(len(p) != n for f in families for p in f):
        raise DimensionError("all supports must share one ambient dimension")
    union = _dedupe([p for f in families for p in f])
    if affine_dimension(union) < n:
        return FaceConditionReport((), False)
    hull = Polytope(union)
    facet_masks = [mask for _, _, mask in hull._facet_data]

    def tight_mask(p):
        mask = 0
        for j, h in enumerate(hull.facets):
            if h.value(p) == h.offset:
                mask |= 1 << j
        return mask

    tight = [[tight_mask(p) for p in f] for f in families]
    verdicts = []
    for vmask, (dim, _) in hull._face_structure().items():
        if dim <= 0 or dim == n:
            continue
        fset = 0
        for j, fm in enumerate(facet_masks):
            if fm & vmask == vmask:
                fset |= 1 << j
        face_points = [
            [p for p, t in zip(f, tf) if t & fset == fset] for f, tf in zip(families, tight)
        ]
        face_vertices = [hull.vertices[i] for i in _bits(vmask)]
        verdict, witness = _classify(face_points, face_vertices, len(families))
        meeting = tuple(i + 1 for i in range(len(families)) if face_points[i])
        verdicts.append(FaceVerdict(Face(dim, tuple(_bits(vmask))), meeting, verdict, witness))
    verdicts.sort(key=lambda v: v.face)
    return FaceConditionReport(tuple(verdicts), True)


@dataclass(frozen=True)
class CertificateReport:
    certificate_passes: bool
    mv: Fraction
    vol: Fraction
    equal: bool
    conditions: FaceConditionReport

    @property
    def consistent(self) -> bool:
        """False only if the certificate passed but MV != Vol, which would point to a bug."""
        return self.equal or not self.certificate_passes


def certify_mv_equals_vol(supports: Sequence) -> CertificateReport:
    """Run the face-condition certificate and independently compute both sides."""
    conditions = check_face_conditions(supports)
    mv = mixed_volume([_rows(S) for S in supports])
    union = _dedupe([p for S in supports for p in _rows(S)])
    try:
        vol = normalized_volume(Polytope(union))
    except LowerDimensionalError:
        vol = Fraction(0)
    return CertificateReport(conditions.certificate_passes, mv, vol, mv == vol, conditions)
