import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ

from fnsphere.dual_complex import (
    ComplexError,
    DeltaComplex,
    HomologyProfile,
    caution_example,
    cone,
    from_facets,
    hollow_triangle,
    is_homology_sphere,
    join,
    mprime_boundary_model,
    point,
    projective_plane,
    q_boundary_model,
    reduced_homology,
    satisfies_simplicial_identities,
    smith_diagonal,
    tetrahedron_boundary,
    two_points,
)


# ---------------------------------------------------------------- independent oracle


def oracle_boundary(K: DeltaComplex, d: int) -> sympy.Matrix:
    if d == 0:
        return sympy.ones(1, K.count(0))
    M = sympy.zeros(K.count(d - 1), K.count(d))
    for col, faces in enumerate(K.cells[d]):
        for j, f in enumerate(faces):
            M[f, col] += (-1) ** j
    return M


def oracle_homology(K: DeltaComplex) -> dict[int, tuple[int, list[int]]]:
    """Reduced homology {d: (rank, torsion)} through sympy rank and invariant factors."""
    out = {}
    if K.count(0) == 0:
        return out
    for d in range(K.dim + 1):
        rank_out = oracle_boundary(K, d).rank()
        incoming = oracle_boundary(K, d + 1) if d < K.dim else sympy.zeros(K.count(d), 0)
        rank_in = incoming.rank()
        tors = []
        if incoming.cols and incoming.rows:
            factors = invariant_factors(incoming, domain=ZZ)
            tors = [abs(int(x)) for x in factors if abs(int(x)) > 1]
        free = K.count(d) - rank_out - rank_in
        if free or tors:
            out[d] = (free, sorted(tors))
    return out


def as_dict(h: HomologyProfile) -> dict[int, tuple[int, list[int]]]:
    return {d: (h.rank(d), list(h.torsion_at(d))) for d in h.degrees()}


@st.composite
def random_complexes(draw, max_vertices=6):
    n = draw(st.integers(1, max_vertices))
    facets = draw(
        st.lists(
            st.sets(st.integers(1, n), min_size=1, max_size=min(n, 4)),
            min_size=1,
            max_size=6,
        )
    )
    return from_facets(facets)


# ---------------------------------------------------------------- construction


def test_from_facets_examples():
    assert hollow_triangle().counts() == [3, 3]
    assert from_facets([{1, 2, 3}]).counts() == [3, 3, 1]
    assert tetrahedron_boundary().counts() == [4, 6, 4]
    with pytest.raises(ComplexError):
        from_facets([{1, 2}, set()])


def test_from_facets_names_and_ordering():
    K = from_facets([{3, 1}])
    assert K.cell_names() == (("v1", "v3"), ("v1v3",))
    assert K.cells[1] == ((1, 0),)  # face opposite v1 is v3


def test_boundary_squared_nonzero_rejected():
    with pytest.raises(ComplexError, match="boundary of boundary"):
        # a triangle whose edges do not close up
        DeltaComplex((((), (), ()), ((1, 0), (2, 0), (2, 1)), ((0, 0, 0),)))


def test_bad_references_rejected():
    with pytest.raises(ComplexError, match="out of range"):
        DeltaComplex((((),), ((0, 1),)))
    with pytest.raises(ComplexError, match="faces"):
        DeltaComplex((((), ()), ((0,),)))


def test_json_round_trip():
    K = q_boundary_model()
    data = K.to_json()
    assert data == {
        "cells": {
            "0": ["a", "b"],
            "1": [{"id": "e0", "faces": ["a", "b"]}, {"id": "e1", "faces": ["a", "b"]}],
        }
    }
    assert DeltaComplex.from_json(data) == K
    T = tetrahedron_boundary()
    assert DeltaComplex.from_json(T.to_json()) == T


def test_json_errors():
    with pytest.raises(ComplexError):
        DeltaComplex.from_json({"cells": {"0": ["a"], "2": []}})
    with pytest.raises(ComplexError):
        DeltaComplex.from_json({"cells": {"0": ["a"], "1": [{"id": "e", "faces": ["a", "z"]}]}})
    with pytest.raises(ComplexError):
        DeltaComplex.from_json({"nope": 1})


# ---------------------------------------------------------------- homology examples


def test_homology_examples():
    assert as_dict(reduced_homology(hollow_triangle())) == {1: (1, [])}
    assert as_dict(reduced_homology(tetrahedron_boundary())) == {2: (1, [])}
    assert as_dict(reduced_homology(projective_plane())) == {1: (0, [2])}
    assert reduced_homology(point()).is_trivial
    assert as_dict(reduced_homology(two_points())) == {0: (1, [])}


def test_homology_json():
    assert reduced_homology(hollow_triangle()).to_json() == {"reduced": [{"dim": 1, "rank": 1, "torsion": []}]}
    assert reduced_homology(projective_plane()).to_json() == {"reduced": [{"dim": 1, "rank": 0, "torsion": [2]}]}


def test_projective_plane_is_a_delta_complex():
    assert satisfies_simplicial_identities(projective_plane())
    assert projective_plane().euler_characteristic() == 1


def test_simplicial_identities_of_constructions():
    for K in (tetrahedron_boundary(), join(hollow_triangle(), two_points()), mprime_boundary_model(5)):
        assert satisfies_simplicial_identities(K)


def test_is_homology_sphere_examples():
    assert is_homology_sphere(hollow_triangle(), 1)
    assert not is_homology_sphere(hollow_triangle(), 2)
    assert not is_homology_sphere(projective_plane(), 1)
    three = join(join(q_boundary_model(), q_boundary_model()), q_boundary_model())
    assert is_homology_sphere(three, 5)


def test_smith_diagonal():
    assert smith_diagonal([[2, 0], [0, 3]]) == [1, 6]
    assert smith_diagonal([[0, 0], [0, 0]]) == []
    assert smith_diagonal([[4, 6]]) == [2]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_diagonal_matches_sympy(rows):
    M = sympy.Matrix(rows)
    expected = [abs(int(x)) for x in invariant_factors(M, domain=ZZ) if x != 0]
    assert smith_diagonal(rows) == expected


# ---------------------------------------------------------------- join and cone


def test_join_examples():
    assert reduced_homology(cone(hollow_triangle())).is_trivial
    assert reduced_homology(join(point(), hollow_triangle())) == reduced_homology(cone(hollow_triangle()))
    square = join(two_points(), two_points())
    assert square.counts() == [4, 4]
    assert is_homology_sphere(square, 1)
    assert as_dict(reduced_homology(join(q_boundary_model(), q_boundary_model()))) == {3: (1, [])}


def test_cone_examples():
    assert cone(DeltaComplex.empty()).counts() == [1]
    interval = cone(two_points())
    assert interval.counts() == [3, 2]
    assert reduced_homology(interval).is_trivial
    assert reduced_homology(cone(q_boundary_model())).is_trivial
    assert reduced_homology(cone(projective_plane())).is_trivial


def test_join_with_empty_is_identity_up_to_relabelling():
    K = projective_plane()
    assert join(K, DeltaComplex.empty()).counts() == K.counts()
    assert reduced_homology(join(DeltaComplex.empty(), K)) == reduced_homology(K)


def test_join_with_torsion():
    # RP^2 * S^0 is the suspension; torsion shifts up one degree
    assert as_dict(reduced_homology(join(projective_plane(), two_points()))) == {2: (0, [2])}


# ---------------------------------------------------------------- boundary models


def test_q_boundary_model():
    Q = q_boundary_model()
    assert Q.counts() == [2, 2]
    assert as_dict(reduced_homology(Q)) == {1: (1, [])}
    assert is_homology_sphere(Q, 1)


@pytest.mark.parametrize("k, counts", [(4, [2, 2]), (5, [4, 8, 8, 4]), (6, [6, 18, 32, 36, 24, 8])])
def test_mprime_boundary_model(k, counts):
    M = mprime_boundary_model(k)
    assert M.counts() == counts
    assert as_dict(reduced_homology(M)) == {2 * (k - 3) - 1: (1, [])}
    assert as_dict(reduced_homology(M)) == oracle_homology(M)


def test_mprime_boundary_model_errors():
    with pytest.raises(ComplexError):
        mprime_boundary_model(3)


def test_caution_example():
    X, U = caution_example()
    hx, hu = reduced_homology(X), reduced_homology(U)
    assert X.counts() == [] and hx.to_json() == {"reduced": []}
    assert is_homology_sphere(U, 1)
    assert hx != hu


# ---------------------------------------------------------------- properties


@settings(max_examples=60, deadline=None)
@given(random_complexes())
def test_homology_matches_oracle(K):
    assert as_dict(reduced_homology(K)) == oracle_homology(K)


@settings(max_examples=40, deadline=None)
@given(random_complexes(5), random_complexes(4))
def test_join_formula(K, L):
    hk, hl = reduced_homology(K), reduced_homology(L)
    if hk.torsion or hl.torsion:
        return
    hj = reduced_homology(join(K, L))
    for n in range(K.dim + L.dim + 2):
        expected = sum(hk.rank(p) * hl.rank(n - 1 - p) for p in range(n))
        assert hj.rank(n) == expected
    assert not hj.torsion
    assert as_dict(hj) == oracle_homology(join(K, L))


@settings(max_examples=20, deadline=None)
@given(random_complexes(3), random_complexes(3), random_complexes(3))
def test_join_associative(A, B, C):
    left, right = join(join(A, B), C), join(A, join(B, C))
    assert left.counts() == right.counts()
    assert reduced_homology(left) == reduced_homology(right)


@settings(max_examples=40, deadline=None)
@given(random_complexes())
def test_cone_trivial(K):
    assert reduced_homology(cone(K)).is_trivial


@settings(max_examples=60, deadline=None)
@given(random_complexes())
def test_euler_consistency(K):
    assert K.euler_characteristic() - 1 == reduced_homology(K).reduced_euler_characteristic()


@settings(max_examples=30, deadline=None)
@given(random_complexes())
def test_json_round_trip_property(K):
    assert DeltaComplex.from_json(K.to_json()) == K
    assert satisfies_simplicial_identities(K)


def test_seeded_random_complexes_are_reproducible():
    def build(seed):
        rng = random.Random(seed)
        n = rng.randint(2, 6)
        return from_facets(rng.sample(list(itertools.combinations(range(n), 2)), 1) + [[rng.randrange(n)]])

    assert build(7) == build(7)
