from fractions import Fraction
from itertools import combinations, product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from heron4d.exact_scalar import as_quad, sqrt_rational
from heron4d.geometry4 import (
    Box4,
    GeometryError,
    IsometryMap,
    Product2x2,
    Simplex4,
    apply_isometry,
    box4,
    certify_tiling,
    clip_polygon,
    congruent,
    contains,
    cube4,
    interiors_disjoint,
    make_polygon,
    piece_class,
    piece_volume,
    point4,
    polygons_disjoint,
    project_wireframe,
    rectangle,
    same_set,
)

coord = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3))


def cayley_menger_volume(vertices) -> Fraction:
    """Simplex volume from pairwise squared distances alone."""
    n = len(vertices) - 1
    d2 = [[sum((a - b) ** 2 for a, b in zip(u, v)) for v in vertices] for u in vertices]
    m = sympy.zeros(n + 2, n + 2)
    for i in range(n + 1):
        m[0, i + 1] = m[i + 1, 0] = 1
        for j in range(n + 1):
            m[i + 1, j + 1] = sympy.Rational(d2[i][j].numerator, d2[i][j].denominator)
    factorial = sympy.factorial(n)
    vol2 = (-1) ** (n + 1) * m.det() / (2**n * factorial**2)
    return Fraction(str(vol2))


@given(st.lists(st.tuples(coord, coord, coord, coord), min_size=5, max_size=5, unique=True))
def test_simplex_volume_matches_cayley_menger(verts):
    pts = [point4(*v) for v in verts]
    try:
        s = Simplex4(tuple(pts))
    except GeometryError:
        assert cayley_menger_volume(verts) == 0
        return
    vol = piece_volume(s)
    assert vol * vol == cayley_menger_volume(verts)


def test_degenerate_simplex_rejected():
    with pytest.raises(GeometryError):
        Simplex4(tuple(point4(i, i, 0, 0) for i in range(5)))


def test_polygon_area_and_orientation():
    tri = make_polygon((0, 1), [(0, 0), (4, 0), (0, 3)])
    assert tri.area() == 6
    sq = rectangle((2, 3), 0, 0, 2, 2)
    assert sq.area() == 4
    assert tri.contains_point((as_quad(1), as_quad(1)))
    assert not tri.contains_point((as_quad(4), as_quad(4)))


def test_clip_and_disjointness():
    a = rectangle((0, 1), 0, 0, 2, 2)
    b = rectangle((0, 1), 1, 1, 3, 3)
    c = rectangle((0, 1), 2, 0, 4, 2)
    clipped = clip_polygon(a, b)
    assert clipped.area() == 1
    assert polygons_disjoint(a, c)
    assert not polygons_disjoint(a, b)
    assert clip_polygon(a, rectangle((0, 1), 5, 5, 6, 6)) is None


def test_product_volume_and_class():
    tri = make_polygon((0, 1), [(0, 0), (1, 0), (0, 1)])
    sq = rectangle((2, 3), 0, 0, 3, 3)
    p = Product2x2(tri, sq)
    assert piece_volume(p) == Fraction(9, 2)
    assert piece_class(p) == "triangle x square"
    assert len(p.vertex_set()) == 12


def test_product_planes_must_partition_axes():
    with pytest.raises(GeometryError):
        Product2x2(rectangle((0, 1), 0, 0, 1, 1), rectangle((0, 1), 0, 0, 1, 1))


def test_isometry_must_be_orthogonal():
    with pytest.raises(GeometryError):
        IsometryMap(((2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))


def test_irrational_rotation_is_exact():
    r = sqrt_rational(2) / 2
    rot = IsometryMap(((r, -r, 0, 0), (r, r, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
    assert rot.compose(rot.inverse()).is_translation()
    s = Simplex4(tuple(point4(*v) for v in [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]))
    moved = apply_isometry(rot, s)
    assert piece_volume(moved) == piece_volume(s)


def test_congruence_witness_for_translated_product():
    tri = make_polygon((0, 1), [(0, 0), (2, 0), (0, 1)])
    sq = rectangle((2, 3), 0, 0, 1, 1)
    p = Product2x2(tri, sq)
    q = apply_isometry(IsometryMap.signed_permutation((1, 0, 2, 3), (-1, 1, 1, 1), (5, 0, 1, 1)), p)
    w = congruent(p, q)
    assert w is not None
    assert same_set(apply_isometry(w, p), q)
    assert congruent(p, Product2x2(tri, rectangle((2, 3), 0, 0, 1, 2))) is None


def test_box_containment_and_disjointness():
    big = cube4(2)
    small = box4((0, 1), (0, 1), (0, 1), (0, 1))
    other = box4((1, 2), (0, 1), (0, 1), (0, 1))
    assert contains(big, small)
    assert not contains(small, big)
    assert interiors_disjoint(small, other)
    assert not interiors_disjoint(small, big)


def test_tiling_certificate_for_sixteen_unit_boxes():
    cells = [box4(*[(c, c + 1) for c in corner]) for corner in product((0, 1), repeat=4)]
    cert = certify_tiling(cube4(2), cells, check_disjoint=True)
    assert cert.verdict and cert.disjoint_ok
    assert cert.volume_sum == 16


def test_overlap_passes_volume_criterion_but_fails_disjointness():
    halves = [box4((0, 1), (0, 2), (0, 2), (0, 2)), box4((0, 1), (0, 2), (0, 2), (0, 2))]
    cert = certify_tiling(cube4(2), halves, check_disjoint=True)
    assert cert.verdict
    assert cert.disjoint_ok is False


def test_tiling_certificate_detects_gap_and_escape():
    gap = certify_tiling(cube4(2), [box4((0, 1), (0, 2), (0, 2), (0, 2))])
    assert not gap.verdict and not gap.volume_sum_ok
    out = certify_tiling(cube4(2), [box4((1, 3), (0, 2), (0, 2), (0, 2)), box4((0, 1), (0, 2), (0, 2), (0, 2))])
    assert not out.containment_ok and not out.verdict


def test_verdict_must_be_consistent():
    from heron4d.geometry4 import TilingCertificate

    with pytest.raises(GeometryError):
        TilingCertificate(as_quad(1), (as_quad(1),), True, False, True)


def test_cube_wireframe_has_32_edges():
    segs = project_wireframe(cube4(1))
    assert len(segs) == 32
    assert len({frozenset(s) for s in segs}) <= 32


def test_simplex_wireframe_has_10_edges():
    s = Simplex4(tuple(point4(*v) for v in [(0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 0), (1, 1, 1, 1)]))
    assert len(project_wireframe(s)) == len(list(combinations(range(5), 2)))


def test_box_as_product_round_trip():
    b = box4((0, 1), (0, 2), (0, 3), (0, 4))
    p = b.as_product()
    assert piece_volume(p) == piece_volume(b) == 24
    assert isinstance(b, Box4)
