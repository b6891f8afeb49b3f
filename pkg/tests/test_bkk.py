import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from freesum.bkk import (
    SupportSet,
    bkk_bound,
    build_free_sum_system,
    certify_mv_equals_vol,
    check_face_conditions,
    coefficient_stream,
    free_sum_supports,
    kushnirenko_bound,
    newton_polytope,
)
from freesum.errors import DimensionError, DomainError
from freesum.generate import RandomInstanceSpec, gen_random
from freesum.polytope import Polytope
from freesum.sums import mixed_volume
from freesum.volume import normalized_volume


def seg(a, b):
    return Polytope([(a,), (b,)])


class TestSupports:
    def test_newton_polytope(self):
        assert newton_polytope([(0, 0), (1, 0), (0, 1), (1, 1)]).num_vertices == 4

    def test_kushnirenko_square(self):
        assert kushnirenko_bound([(0, 0), (1, 0), (0, 1), (1, 1)]) == 2

    def test_kushnirenko_reeve(self, T2):
        assert kushnirenko_bound(T2.vertices) == 2

    def test_bkk_square_triangle(self):
        assert bkk_bound([[(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 0), (1, 0), (0, 1)]]) == 2

    def test_bkk_linear(self):
        lin = [(0, 0), (1, 0), (0, 1)]
        assert bkk_bound([lin, lin]) == 1

    @pytest.mark.parametrize("bad", [[(0, 0), (0, 0)], [(Fraction(1, 2), 0)], []])
    def test_support_set_validation(self, bad):
        with pytest.raises(DomainError):
            SupportSet(bad)

    def test_support_set_dimensions(self):
        with pytest.raises(DimensionError):
            SupportSet([(0, 0), (1,)])


class TestExport:
    def test_structure(self, T2):
        system = build_free_sum_system(T2, T2, seed=7)
        assert system.variables == ("x1", "x2", "x3", "y1", "y2", "y3")
        assert len(system.polynomials) == 6
        supports = system.supports()
        for S in supports[:3]:
            assert {e[3:] for e in S} == {(0, 0, 0)}
            assert {e[:3] for e in S} == T2.vertex_set()
        for S in supports[3:]:
            assert {e[:3] for e in S} == {(0, 0, 0)}

    def test_coefficients_in_range(self, T2):
        doc = build_free_sum_system(T2, seg(-1, 1), seed=3).to_dict()
        coeffs = [float(t["coeff"]) for p in doc["polynomials"] for t in p["terms"]]
        assert all(-1 <= c < 1 for c in coeffs)
        assert len(set(coeffs)) == len(coeffs)

    def test_deterministic(self, T2):
        a = build_free_sum_system(T2, T2, seed=11).to_json()
        b = build_free_sum_system(T2, T2, seed=11).to_json()
        c = build_free_sum_system(T2, T2, seed=12).to_json()
        assert a == b != c
        assert json.loads(a)["seed"] == 11

    def test_coefficient_text_round_trips(self):
        stream = coefficient_stream(5)
        for _ in range(20):
            c = next(stream)
            assert float(repr(c)) == c

    @pytest.mark.parametrize("seed", [-1, 2**64])
    def test_seed_bounds(self, seed):
        with pytest.raises(DomainError):
            next(coefficient_stream(seed))

    def test_bkk_bound_matches_product(self, T2):
        supports = build_free_sum_system(T2, T2, seed=0).supports()
        assert bkk_bound(supports) == 4


class TestFaceConditions:
    def test_free_sum_of_reeves(self, T2):
        report = check_face_conditions(free_sum_supports(T2, T2))
        assert report.full_dimensional and report.certificate_passes
        assert set(report.verdict_counts()) == {"A", "B", "C", "FAIL"}
        assert report.verdict_counts()["FAIL"] == 0
        assert all(f.verdict in ("A", "C") for f in report.faces)

    def test_witness_is_one_based(self, T2):
        report = check_face_conditions(free_sum_supports(T2, T2))
        witnesses = {f.witness for f in report.faces if f.verdict == "C"}
        assert witnesses and all(min(w) >= 1 and max(w) <= 6 for w in witnesses)

    def test_segments_in_the_plane(self):
        report = check_face_conditions(free_sum_supports(seg(-1, 1), seg(-1, 1)))
        # every edge of the diamond joins a point of each support
        assert [f.verdict for f in report.faces] == ["A"] * 4

    def test_identical_supports_all_a(self):
        tri = [(0, 0), (1, 0), (0, 1)]
        report = check_face_conditions([tri, tri])
        assert {f.verdict for f in report.faces} == {"A"}

    def test_single_point_gives_b(self):
        o = (0, 0, 0)
        report = check_face_conditions([[o, (1, 0, 0)], [o, (0, 1, 0)], [o, (0, 0, 1)]])
        # the edges avoiding the origin miss one support and meet the others in single points
        assert report.verdict_counts() == {"A": 7, "B": 3, "C": 0, "FAIL": 0}

    def test_counterexample_fails(self):
        report = check_face_conditions(free_sum_supports(seg(3, 4), seg(0, 1)))
        assert not report.certificate_passes
        assert "FAIL" in report.verdict_counts() and report.verdict_counts()["FAIL"] >= 1

    def test_lower_dimensional_union(self):
        report = check_face_conditions([[(0, 0), (1, 1)], [(2, 2)]])
        assert not report.full_dimensional and report.faces == ()

    def test_empty_support(self):
        with pytest.raises(DomainError):
            check_face_conditions([[(0, 0)], []])


class TestCertify:
    def test_reeves(self, T2):
        r = certify_mv_equals_vol(free_sum_supports(T2, T2))
        assert r.certificate_passes and r.mv == r.vol == 4 and r.consistent

    def test_counterexample(self):
        r = certify_mv_equals_vol(free_sum_supports(seg(3, 4), seg(0, 1)))
        assert not r.certificate_passes
        assert (r.mv, r.vol) == (1, 4)
        assert r.consistent

    @given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1), st.sampled_from([(1, 1), (1, 2), (2, 1), (2, 2)]))
    def test_free_sum_families(self, s1, s2, dims):
        P = gen_random(RandomInstanceSpec(dims[0], 5, 3, "any-containing", s1))
        Q = gen_random(RandomInstanceSpec(dims[1], 5, 3, "any-containing", s2))
        r = certify_mv_equals_vol(free_sum_supports(P, Q))
        assert all(f.verdict in ("A", "C") for f in r.conditions.faces)
        assert r.mv == r.vol == normalized_volume(P) * normalized_volume(Q)

    @given(st.randoms(use_true_random=False))
    def test_soundness_on_random_planar_families(self, rnd):
        fam = [list({(rnd.randint(0, 2), rnd.randint(0, 2)) for _ in range(rnd.randint(1, 4))}) for _ in range(2)]
        r = certify_mv_equals_vol(fam)
        if r.certificate_passes and r.conditions.full_dimensional:
            assert r.mv == r.vol
        assert r.consistent
        assert r.mv == mixed_volume(fam)

    def test_full_dimensional_hull_is_used(self):
        # two segments spanning the plane: MV 1, but the union triangle has Vol 1 too
        r = certify_mv_equals_vol([[(0, 0), (1, 0)], [(0, 0), (0, 1)]])
        assert r.mv == 1 and r.vol == 1
