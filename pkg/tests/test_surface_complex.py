"""Complex construction, validation, exact linear algebra, serialization."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqsurf.surface_complex import (
    CCW,
    CW,
    DanglingEdgeReference,
    DuplicateId,
    IntegerMatrix,
    WrongSideCount,
    betti_numbers,
    boundary_matrices,
    build_complex,
    canonical_json,
    complex_from_dict,
    complex_to_dict,
    dual_graph,
    integer_solve,
    kernel_basis,
    smith_normal_form,
    snf_with_transforms,
    succ_type,
    validate,
)
from fqsurf.tessellation import complex_from_matchings

from conftest import (
    make_crossing,
    make_disconnected,
    make_open_square,
    make_pillowcase,
    make_same_sense,
    make_torus,
    make_twelve_gon,
)


class TestBuildComplex:
    def test_duplicate_edge_id(self):
        with pytest.raises(DuplicateId):
            build_complex(4, [(0, 1), (0, 2)], [])

    def test_duplicate_face_id(self):
        sides = [(0, False), (1, False), (0, True), (1, True)]
        with pytest.raises(DuplicateId):
            build_complex(
                4,
                [(0, 1), (1, 2)],
                [(0, CCW, sides), (0, CCW, sides)],
            )

    def test_dangling_edge_reference(self):
        with pytest.raises(DanglingEdgeReference):
            build_complex(
                4,
                [(0, 1), (1, 2)],
                [(0, CCW, [(0, False), (1, False), (7, True), (1, True)])],
            )

    def test_wrong_side_count(self):
        with pytest.raises(WrongSideCount):
            build_complex(4, [(0, 1)], [(0, CCW, [(0, False), (0, True)])])

    def test_sparse_edge_ids_rejected(self):
        with pytest.raises(ValueError):
            build_complex(4, [(0, 1), (2, 2)], [])

    def test_sparse_face_ids_rejected(self):
        sides = [(0, False), (1, False), (0, True), (1, True)]
        with pytest.raises(ValueError):
            build_complex(4, [(0, 1), (1, 2)], [(1, CCW, sides)])

    def test_bad_chirality(self):
        with pytest.raises(ValueError):
            build_complex(
                4,
                [(0, 1), (1, 2)],
                [(0, "widdershins", [(0, False), (1, False), (0, True), (1, True)])],
            )

    def test_type_out_of_range(self):
        with pytest.raises(ValueError):
            build_complex(4, [(0, 5)], [])

    def test_tiny_polygon_rejected(self):
        with pytest.raises(ValueError):
            build_complex(2, [], [])


class TestTorusGeometry:
    """The one-square torus is small enough to check by hand."""

    def test_counts(self):
        cx = make_torus()
        assert (cx.num_vertices, cx.num_edges, cx.num_faces) == (1, 2, 1)

    def test_genus_one(self):
        rep = validate(make_torus())
        assert rep.euler_characteristic == 0
        assert rep.genus == 1

    def test_rotation_has_four_rays(self):
        cx = make_torus()
        rays = cx.rotation(0)
        assert len(rays) == 4
        assert sorted(rays) == [(0, False), (0, True), (1, False), (1, True)]

    def test_every_dedge_loops_back_to_itself(self):
        cx = make_torus()
        for d in [(0, True), (0, False), (1, True), (1, False)]:
            assert cx.head_vertex(d) == 0
            assert cx.tail_vertex(d) == 0
            assert cx.straight_continuation(d) == d

    def test_double_back_reverses(self):
        cx = make_torus()
        assert cx.continue_through((0, True), 0) == (0, False)

    def test_vertex_type_pair(self):
        assert make_torus().vertex_type_pair(0) == (1, 2)

    def test_directed_boundary_matches_sides(self):
        cx = make_torus()
        assert cx.directed_boundary(0) == [
            (0, True),
            (1, True),
            (0, False),
            (1, False),
        ]


class TestValidate:
    def test_open_edges_flagged(self):
        rep = validate(make_open_square())
        assert not rep.passed
        assert "Closedness" in rep.tags()
        assert not rep.structurally_ok

    def test_same_sense_gluing_flagged(self):
        rep = validate(make_same_sense())
        assert "Closedness" in rep.tags()
        finding = next(f for f in rep.failures if f.tag == "Closedness")
        assert "same sense" in finding.detail

    def test_disconnected_flagged(self):
        rep = validate(make_disconnected())
        assert "Disconnected" in rep.tags()

    def test_degree_two_vertices_flagged(self):
        rep = validate(make_pillowcase())
        assert "RightAngledVertex" in rep.tags()

    def test_genus_mismatch(self):
        rep = validate(make_torus(), expected_genus=2)
        assert "GenusMismatch" in rep.tags()
        assert validate(make_torus(), expected_genus=1).genus == 1

    def test_labeling_failures_are_not_structural(self):
        rep = validate(make_crossing())
        assert rep.tags() == ["VertexTypeAlternation"]
        assert rep.structurally_ok
        assert not rep.passed

    def test_single_face_twelve_gon(self):
        rep = validate(make_twelve_gon())
        assert rep.structurally_ok
        assert rep.genus == 2
        assert set(rep.tags()) == {"FaceLabeling", "VertexTypeAlternation"}

    def test_clean_builder_output_passes(self, block_p6_g2):
        rep = validate(block_p6_g2, expected_genus=2)
        assert rep.passed
        assert rep.tags() == []


def test_succ_type_wraps():
    assert succ_type(1, 6) == 2
    assert succ_type(5, 6) == 6
    assert succ_type(6, 6) == 1


class TestDualGraph:
    def test_torus_dual_is_self_loops(self):
        dg = dual_graph(make_torus())
        assert dg.nodes == (0,)
        assert dg.edges == ((0, 0, 0), (0, 0, 1))

    def test_crossing_dual_edges(self):
        dg = dual_graph(make_crossing())
        assert dg.nodes == (0, 1, 2, 3)
        # s1 at odd types, s2 at even types, repeated three times each
        assert dg.edges == (
            (0, 1, 0), (2, 3, 1), (0, 2, 2), (1, 3, 3),
            (0, 1, 4), (2, 3, 5), (0, 2, 6), (1, 3, 7),
            (0, 1, 8), (2, 3, 9), (0, 2, 10), (1, 3, 11),
        )

    def test_to_dot_mentions_every_face(self, block_p6_g2):
        dot = dual_graph(block_p6_g2).to_dot()
        assert dot.startswith("graph")
        for fid in range(block_p6_g2.num_faces):
            assert f"f{fid}" in dot


class TestSmithNormalForm:
    def test_diagonal_is_not_always_the_input_diagonal(self):
        diag, rank = smith_normal_form(IntegerMatrix([[2, 0], [0, 3]]))
        assert diag == (1, 6)
        assert rank == 2

    def test_zero_matrix(self):
        diag, rank = smith_normal_form(IntegerMatrix.zeros(3, 2))
        assert diag == (0, 0)
        assert rank == 0

    def test_identity(self):
        diag, rank = smith_normal_form(IntegerMatrix.identity(3))
        assert diag == (1, 1, 1)
        assert rank == 3

    def test_worked_example(self):
        m = IntegerMatrix([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        diag, rank = smith_normal_form(m)
        assert diag == (2, 2, 156)
        assert rank == 3

    def test_transforms_reconstruct(self):
        m = IntegerMatrix([[1, 2, 3], [4, 5, 6]])
        d, u, v = snf_with_transforms(m)
        assert u.mul(m).mul(v) == d

    @given(
        st.integers(1, 4),
        st.integers(1, 4),
        st.data(),
    )
    @settings(max_examples=60, deadline=None)
    def test_invariant_factor_properties(self, rows, cols, data):
        entries = data.draw(
            st.lists(
                st.lists(st.integers(-9, 9), min_size=cols, max_size=cols),
                min_size=rows,
                max_size=rows,
            )
        )
        m = IntegerMatrix(entries)
        diag, rank = smith_normal_form(m)
        assert len(diag) == min(rows, cols)
        assert all(d >= 0 for d in diag)
        assert rank == sum(1 for d in diag if d)
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
            if a == 0:
                assert b == 0
        d, u, v = snf_with_transforms(m)
        assert u.mul(m).mul(v) == d
        assert tuple(d.data[i][i] for i in range(min(rows, cols))) == diag

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_matches_sympy(self, data):
        from sympy import Matrix
        from sympy.matrices.normalforms import smith_normal_form as sympy_snf

        rows = data.draw(st.integers(1, 4))
        cols = data.draw(st.integers(1, 4))
        entries = data.draw(
            st.lists(
                st.lists(st.integers(-9, 9), min_size=cols, max_size=cols),
                min_size=rows,
                max_size=rows,
            )
        )
        diag, _ = smith_normal_form(IntegerMatrix(entries))
        ref = sympy_snf(Matrix(entries))
        ref_diag = tuple(abs(ref[i, i]) for i in range(min(rows, cols)))
        assert diag == ref_diag

    @given(st.permutations(list(range(4))))
    @settings(max_examples=24, deadline=None)
    def test_row_permutation_invariance(self, perm):
        base = [[2, 4, 4], [-6, 6, 12], [10, 4, 16], [0, 1, 0]]
        m = IntegerMatrix(base)
        shuffled = IntegerMatrix([base[i] for i in perm])
        assert smith_normal_form(m)[0] == smith_normal_form(shuffled)[0]


class TestIntegerSolve:
    def test_recovers_a_solution(self):
        a = IntegerMatrix([[2, 0], [0, 3]])
        x = integer_solve(a, [4, 9])
        assert x is not None
        assert a.mul_vec(x) == [4, 9]

    def test_detects_unsolvable(self):
        a = IntegerMatrix([[2]])
        assert integer_solve(a, [3]) is None

    def test_inconsistent_overdetermined(self):
        a = IntegerMatrix([[1], [1]])
        assert integer_solve(a, [1, 2]) is None

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, data):
        rows = data.draw(st.integers(1, 4))
        cols = data.draw(st.integers(1, 4))
        entries = data.draw(
            st.lists(
                st.lists(st.integers(-6, 6), min_size=cols, max_size=cols),
                min_size=rows,
                max_size=rows,
            )
        )
        x = data.draw(st.lists(st.integers(-6, 6), min_size=cols, max_size=cols))
        a = IntegerMatrix(entries)
        b = a.mul_vec(x)
        found = integer_solve(a, b)
        assert found is not None
        assert a.mul_vec(found) == b

    def test_kernel_vectors_annihilate(self):
        a = IntegerMatrix([[1, 2, 3], [2, 4, 6]])
        basis = kernel_basis(a)
        assert len(basis) == 2
        for k in basis:
            assert a.mul_vec(k) == [0, 0]


class TestHomology:
    def test_boundary_composition_vanishes(self, block_p6_g2):
        d2, d1 = boundary_matrices(block_p6_g2)
        assert d1.mul(d2).is_zero()

    def test_torus_betti(self):
        assert betti_numbers(make_torus()) == (1, 2, 1)

    def test_block_betti(self, block_p6_g2):
        assert betti_numbers(block_p6_g2) == (1, 4, 1)

    def test_disconnected_betti_zero(self):
        assert betti_numbers(make_disconnected())[0] == 2


class TestSerialization:
    def test_canonical_json_is_stable(self, block_p6_g2):
        doc = complex_to_dict(block_p6_g2)
        text = canonical_json(doc)
        assert text == canonical_json(complex_to_dict(block_p6_g2))
        assert text.endswith("\n")
        assert json.loads(text) == doc

    def test_round_trip(self, rect_p8_1x2):
        doc = complex_to_dict(rect_p8_1x2)
        back = complex_from_dict(doc)
        assert back == rect_p8_1x2
        assert canonical_json(complex_to_dict(back)) == canonical_json(doc)

    def test_format_guard(self):
        with pytest.raises(ValueError):
            complex_from_dict({"format": "fq-complex/99"})


# ---------------------------------------------------------------- properties

MATCHINGS = [
    [(0, 1), (2, 3)],
    [(0, 2), (1, 3)],
    [(0, 3), (1, 2)],
]


@st.composite
def matchings_complexes(draw):
    p = draw(st.sampled_from([6, 8]))
    chir = tuple(draw(st.sampled_from([CCW, CW])) for _ in range(4))
    combo = draw(st.lists(st.sampled_from(range(3)), min_size=p, max_size=p))
    return complex_from_matchings(p, chir, [MATCHINGS[c] for c in combo])


@given(matchings_complexes())
@settings(max_examples=50, deadline=None)
def test_matchings_complexes_are_closed_orientable(cx):
    assert cx.is_closed()
    rep = validate(cx)
    assert "Closedness" not in rep.tags()
    chi = cx.num_vertices - cx.num_edges + cx.num_faces
    assert rep.euler_characteristic == chi
    assert chi % 2 == 0
    if rep.structurally_ok:
        assert rep.genus == (2 - chi) // 2


@given(matchings_complexes())
@settings(max_examples=50, deadline=None)
def test_rotation_is_a_permutation_partition(cx):
    seen = []
    for v in range(cx.num_vertices):
        for d in cx.rotation(v):
            assert cx.tail_vertex(d) == v
            seen.append(d)
    assert len(seen) == 2 * cx.num_edges
    assert len(set(seen)) == len(seen)


@given(matchings_complexes())
@settings(max_examples=50, deadline=None)
def test_straight_continuation_commutes_with_reversal(cx):
    for e in range(cx.num_edges):
        for fwd in (True, False):
            d = (e, fwd)
            if len(cx.rotation(cx.head_vertex(d))) != 4:
                continue
            nxt = cx.straight_continuation(d)
            back = (nxt[0], not nxt[1])
            if len(cx.rotation(cx.head_vertex(back))) != 4:
                continue
            assert cx.straight_continuation(back) == (e, not fwd)
