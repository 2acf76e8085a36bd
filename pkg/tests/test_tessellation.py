"""Face counts, builders, chord subdivisions, derived thickness sequences."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqsurf.surface_complex import canonical_json, complex_to_dict, validate
from fqsurf.loops import assign_face_orientations, trace_geodesic_loops
from fqsurf.tessellation import (
    BadDivisibility,
    ConstructionFailure,
    NonIntegralFaceCount,
    SymmetryViolation,
    build_block_tessellation,
    build_rect_tessellation,
    complex_from_matchings,
    derived_sequence,
    face_count,
    subdivide_four,
    subdivide_two,
    subdivision_map_to_dict,
)


class TestFaceCount:
    @pytest.mark.parametrize(
        "p,g,expected",
        [(6, 2, 4), (8, 2, 2), (12, 2, 1), (12, 10, 9), (5, 2, 8), (6, 3, 8)],
    )
    def test_known_values(self, p, g, expected):
        assert face_count(p, g) == expected

    def test_non_integral_rejected(self):
        with pytest.raises(NonIntegralFaceCount):
            face_count(7, 2)

    def test_domain_guards(self):
        with pytest.raises(ValueError):
            face_count(4, 2)
        with pytest.raises(ValueError):
            face_count(6, 1)

    @given(st.integers(5, 16), st.integers(2, 12))
    @settings(max_examples=80, deadline=None)
    def test_defining_identity(self, p, g):
        try:
            F = face_count(p, g)
        except NonIntegralFaceCount:
            assert 8 * (g - 1) % (p - 4) != 0
        else:
            assert F * (p - 4) == 8 * (g - 1)
            assert F >= 1


class TestComplexFromMatchings:
    def test_two_face_cylinder_of_matchings(self):
        cx = complex_from_matchings(6, ("ccw", "cw"), [[(0, 1)]] * 6)
        assert cx.is_closed()
        assert cx.num_faces == 2
        assert cx.num_edges == 6

    def test_self_match_rejected(self):
        with pytest.raises(ValueError):
            complex_from_matchings(6, ("ccw", "cw"), [[(0, 1)]] * 5 + [[(0, 0)]])

    def test_incomplete_cover_rejected(self):
        with pytest.raises(ValueError):
            complex_from_matchings(6, ("ccw", "cw", "cw", "ccw"), [[(0, 1)]] * 6)


class TestBlockBuilder:
    @pytest.mark.parametrize("p,g", [(6, 2), (6, 3), (8, 3), (10, 4), (6, 4)])
    def test_output_fully_validates(self, p, g):
        cx = build_block_tessellation(p, g)
        assert cx.num_faces == face_count(p, g)
        rep = validate(cx, expected_genus=g)
        assert rep.passed, rep.tags()

    def test_dual_is_bipartite(self, block_p6_g3):
        orient = assign_face_orientations(block_p6_g3)
        assert orient.bipartite
        assert orient.odd_cycle is None

    def test_all_loops_even(self, block_p8_g3):
        report = trace_geodesic_loops(block_p8_g3)
        assert report.odd_loops == []
        assert not any(lp.degenerate for lp in report.loops)

    def test_odd_p_rejected(self):
        with pytest.raises(BadDivisibility):
            build_block_tessellation(7, 2)

    def test_face_count_not_multiple_of_four_rejected(self):
        with pytest.raises(BadDivisibility):
            build_block_tessellation(8, 2)

    def test_deterministic(self):
        a = canonical_json(complex_to_dict(build_block_tessellation(6, 2)))
        b = canonical_json(complex_to_dict(build_block_tessellation(6, 2)))
        assert a == b


class TestRectBuilder:
    @pytest.mark.parametrize(
        "p,a,b,genus", [(8, 1, 2, 2), (8, 3, 2, 4), (12, 3, 3, 10), (8, 2, 2, 3)]
    )
    def test_structurally_valid_with_genus(self, p, a, b, genus):
        cx = build_rect_tessellation(p, a, b)
        assert cx.num_faces == a * b
        rep = validate(cx, expected_genus=genus)
        assert rep.structurally_ok, rep.tags()
        assert rep.genus == genus

    def test_p_guard(self):
        with pytest.raises(BadDivisibility):
            build_rect_tessellation(6, 2, 2)
        with pytest.raises(BadDivisibility):
            build_rect_tessellation(4, 2, 2)

    def test_odd_column_odd_notch_unpairable(self):
        with pytest.raises(ConstructionFailure):
            build_rect_tessellation(8, 1, 1)

    def test_single_row_wraps_to_self_adjacency(self):
        dg_loops = trace_geodesic_loops(build_rect_tessellation(8, 1, 2))
        assert dg_loops.odd_loops != []

    def test_deterministic(self):
        a = canonical_json(complex_to_dict(build_rect_tessellation(12, 3, 3)))
        b = canonical_json(complex_to_dict(build_rect_tessellation(12, 3, 3)))
        assert a == b


class TestSubdivideTwo:
    def test_halves_rect_faces(self, rect_p8_1x2, hex4):
        assert hex4.p == 6
        assert hex4.num_faces == 2 * rect_p8_1x2.num_faces
        rep = validate(hex4, expected_genus=2)
        assert rep.passed, rep.tags()

    def test_loops_become_even(self, hex4):
        report = trace_geodesic_loops(hex4)
        assert report.odd_loops == []

    def test_map_records_cuts(self, rect_p8_1x2):
        cx, sub = subdivide_two(rect_p8_1x2, axis=1)
        assert sub.pieces == 2
        assert sub.axis == 1
        assert set(sub.chords) == {0, 1}
        assert set(sub.edge_splits) == set(sub.midpoint_vertices)
        assert sub.center_vertices == {}
        doc = subdivision_map_to_dict(sub)
        assert doc["format"] == "fq-subdiv/1"
        assert doc["pieces"] == 2
        assert len(doc["chords"]) == 2

    def test_axis_search_finds_a_cut(self, rect_p8_1x2):
        cx, sub = subdivide_two(rect_p8_1x2)
        assert validate(cx).passed
        assert 1 <= sub.axis <= 4

    def test_wrong_p_rejected(self, block_p6_g2):
        with pytest.raises(BadDivisibility):
            subdivide_two(block_p6_g2)

    def test_open_complex_rejected(self):
        from conftest import make_open_square

        with pytest.raises(ValueError):
            subdivide_two(make_open_square(), axis=1)


class TestSubdivideFour:
    def test_quarters_rect_faces(self, rect_p12_3x3, hex36):
        assert hex36.p == 6
        assert hex36.num_faces == 36
        rep = validate(hex36, expected_genus=10)
        assert rep.passed, rep.tags()

    def test_map_records_centers(self, rect_p12_3x3):
        cx, sub = subdivide_four(rect_p12_3x3, axis=1)
        assert sub.pieces == 4
        assert set(sub.center_vertices) == set(range(9))
        assert len(sub.chords[0]) > 1

    def test_wrong_residue_rejected(self, rect_p8_1x2, block_p6_g2):
        with pytest.raises(BadDivisibility):
            subdivide_four(rect_p8_1x2)
        with pytest.raises(BadDivisibility):
            subdivide_four(block_p6_g2)


class TestDerivedSequence:
    def test_halving_reads_from_the_axis(self):
        q = (3, 2, 9, 2, 3, 2, 9, 2)
        assert derived_sequence(q, 2, 1) == (3, 2, 9, 2, 3, 2)

    def test_halving_checks_symmetry(self):
        with pytest.raises(SymmetryViolation):
            derived_sequence((3, 2, 9, 2, 3, 2, 9, 3), 2, 1)

    def test_quartering_constant_sequence(self):
        assert derived_sequence((2,) * 12, 4, 1) == (2, 2, 2, 2, 2, 2)

    def test_quartering_needs_full_symmetry(self):
        # invariant under rotation by p/2 but not under the reflection
        q = (2, 3, 4, 5, 2, 3, 4, 5)
        with pytest.raises(SymmetryViolation):
            derived_sequence(q, 4, 1)

    def test_quartering_needs_divisible_p(self):
        with pytest.raises(BadDivisibility):
            derived_sequence((2,) * 6, 4, 1)

    def test_unknown_piece_count(self):
        with pytest.raises(ValueError):
            derived_sequence((2,) * 8, 3, 1)

    @given(st.integers(1, 8), st.lists(st.integers(2, 9), min_size=4, max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_palindromes_about_any_axis_halve(self, m, half):
        # build a q symmetric about m by reflecting the drawn half
        p = 8
        q = [0] * p
        for i in range(p // 2 + 1):
            v = half[min(i, len(half) - 1)]
            q[(m - 1 + i) % p] = v
            q[(m - 1 - i) % p] = v
        derived = derived_sequence(tuple(q), 2, m)
        assert len(derived) == p // 2 + 2
        assert derived[-1] == 2
        assert derived[0] == q[(m - 1) % p]
