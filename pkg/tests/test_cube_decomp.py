from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
import sympy

from heron4d.cube_decomp import (
    MAX_N,
    QUARTER_LABELS,
    OrderingSimplex,
    VertexMatrix,
    all_orderings,
    cube_volume_fraction,
    delta_delta_class,
    l7_vertex_matrices,
    nicomachus_check,
    permutation_witness,
    pyramidal_decomposition,
    quarter_hypercube,
    quartering_table,
    refine_to_six,
    simplicial_decomposition,
)
from heron4d.exact_scalar import DomainError
from heron4d.geometry4 import certify_tiling, congruent, cube4, piece_volume


def sympy_volume(rows) -> Fraction:
    n = len(rows) - 1
    m = sympy.Matrix([[rows[i + 1][j] - rows[0][j] for j in range(n)] for i in range(n)])
    return Fraction(abs(int(m.det())), factorial(n))


def test_l7_first_matrices_for_n3():
    mats = l7_vertex_matrices(3)
    assert mats[0].rows == ((0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1))
    assert len(mats) == 6


@pytest.mark.parametrize("n", range(1, 7))
def test_l7_enumerates_every_ordering_once(n):
    mats = l7_vertex_matrices(n)
    got = {m.ordering().permutation for m in mats}
    assert len(mats) == factorial(n)
    assert got == set(permutations(range(n)))


@pytest.mark.parametrize("n", range(2, 7))
def test_volumes_match_sympy_determinant(n):
    d = simplicial_decomposition(n)
    oracle = [sympy_volume(m.rows) for m in d.matrices]
    assert all(v == o == Fraction(1, factorial(n)) for v, o in zip(d.volumes(), oracle))
    assert d.certificate().verdict


def test_vertex_matrix_validation():
    with pytest.raises(DomainError):
        VertexMatrix(((0, 0), (1, 1), (1, 1)))
    with pytest.raises(DomainError):
        VertexMatrix(((0, 0), (0, 1)))


def test_ordering_round_trip():
    o = OrderingSimplex.parse("x<=z<=y<=w")
    assert o.label() == "x<=z<=y<=w"
    assert o.vertex_matrix().ordering() == o
    for v in o.vertices():
        assert v[0] <= v[2] <= v[1] <= v[3]
    with pytest.raises(DomainError):
        OrderingSimplex.parse("x<=q")


def test_four_cube_geometric_tiling():
    d = simplicial_decomposition(4)
    cert = d.certificate()
    assert len(d.pieces) == 24
    assert cert.verdict and cert.disjoint_ok
    assert all(piece_volume(p) == Fraction(1, 24) for p in d.pieces)


def test_four_cube_witnesses_are_verified_permutations():
    d = simplicial_decomposition(4)
    w = d.congruence_witnesses()
    assert len(w) == 24 * 23 // 2
    # the general congruence search agrees on a sample
    assert congruent(d.pieces[0], d.pieces[17]) is not None


def test_witness_maps_source_vertices_onto_target():
    a, b = OrderingSimplex((0, 1, 2)), OrderingSimplex((2, 0, 1))
    perm = permutation_witness(a, b)
    image = {tuple(v[perm[i]] for i in range(3)) for v in a.vertices()}
    assert image == set(b.vertices())


def test_scaled_cube():
    d = simplicial_decomposition(4, Fraction(3, 2))
    assert d.certificate().verdict
    assert d.volumes()[0] == Fraction(3, 2) ** 4 / 24


@pytest.mark.parametrize("n", [0, MAX_N + 1])
def test_out_of_range_n(n):
    with pytest.raises(DomainError):
        simplicial_decomposition(n)


def test_pyramids_refine_into_orderings():
    pyr = pyramidal_decomposition(4)
    assert [p.label for p in pyr] == ["P4", "P3", "P2", "P1"]
    assert all(p.volume() == Fraction(1, 4) and p.refinement_inside() for p in pyr)
    assert sorted(o.permutation for p in pyr for o in p.orderings) == sorted(permutations(range(4)))


@pytest.mark.parametrize("n", range(2, 7))
def test_pyramid_volume_fraction(n):
    for p in pyramidal_decomposition(n):
        assert len(p.orderings) == factorial(n - 1)
        assert p.volume() == Fraction(1, n)


def test_quartering():
    pieces = quarter_hypercube(1)
    assert len(pieces) == len(QUARTER_LABELS) == 4
    cert = certify_tiling(cube4(1), pieces, check_disjoint=True)
    assert cert.verdict and cert.disjoint_ok
    assert all(piece_volume(p) == Fraction(1, 4) for p in pieces)


def test_every_ordering_simplex_lies_in_its_quarter():
    pieces = quarter_hypercube(1)
    from heron4d.geometry4 import contains

    for o in all_orderings(4):
        assert contains(pieces[delta_delta_class(o)], o.simplex())


def test_quartering_table_rows_and_columns():
    t = quartering_table()
    assert all(sum(r) == 6 for r in t)
    assert all(sum(t[i][j] for i in range(4)) == 6 for j in range(4))


def test_refine_to_six_shares_three():
    dd = refine_to_six("DeltaDelta")
    p4 = refine_to_six("P4")
    assert len(dd.orderings) == len(p4.orderings) == 6
    assert len(dd.shared) == 3
    assert set(dd.shared) == set(p4.shared)
    quarter = quarter_hypercube(1)[0]
    cert = certify_tiling(quarter, dd.simplices(), check_disjoint=True)
    assert cert.verdict and cert.disjoint_ok
    with pytest.raises(DomainError):
        refine_to_six("P1")


def test_nicomachus_closed_form():
    for n in range(1, 51):
        r = nicomachus_check(n)
        assert r.equal
        assert r.sum_of_cubes == sum(k**3 for k in range(1, n + 1))
    with pytest.raises(DomainError):
        nicomachus_check(0)


def test_cube_volume_fraction():
    assert cube_volume_fraction(4) == Fraction(1, 24)
