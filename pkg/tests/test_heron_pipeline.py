from fractions import Fraction

import mpmath
import pytest
from conftest import triangle_coords
from hypothesis import given, settings
from hypothesis import strategies as st

from heron4d.exact_scalar import DomainError, as_quad
from heron4d.geometry4 import contains, piece_volume
from heron4d.heron_pipeline import (
    ChainReport,
    TriangleDatum,
    chain_values,
    lhs_assembly,
    triangle_from_coords,
    triangle_from_sides,
    verify_heron,
    verify_lhs,
    verify_pythagorean_rewrites,
    verify_regrouping,
)

F = Fraction
lam = st.builds(Fraction, st.integers(1, 20), st.integers(1, 7))


@settings(max_examples=100)
@given(triangle_coords())
def test_chain_values_agree(coords):
    t = triangle_from_coords(*coords)
    values = chain_values(t)
    assert len(set(values.values())) == 1


@settings(max_examples=100)
@given(triangle_coords())
def test_semiperimeter_oracle(coords):
    t = triangle_from_coords(*coords)
    a, b, c = t.sides
    s = (a + b + c) / 2
    exact = 16 * s * (s - a) * (s - b) * (s - c)
    value = chain_values(t)["16A^2"]
    assert exact == value
    with mpmath.workdps(60):
        fa, fb, fc = (mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator) for x in (t.a2, t.b2, t.c2))
        fs = (fa + fb + fc) / 2
        approx = 16 * fs * (fs - fa) * (fs - fb) * (fs - fc)
        v = value.as_rational()
        assert abs(approx - mpmath.mpf(v.numerator) / v.denominator) < mpmath.mpf(10) ** -40 * (1 + abs(approx))


@settings(max_examples=50)
@given(triangle_coords(), lam)
def test_scale_covariance(coords, k):
    t = triangle_from_coords(*coords)
    base = chain_values(t)
    scaled = chain_values(t.scaled(k))
    assert all(scaled[name] == base[name] * k**4 for name in base)


@pytest.mark.parametrize(
    "p,r,h,value",
    [
        (F(5), F(9, 5), F(12, 5), 576),
        (F(4), F(1), F(2), 256),
        (F(2), F(1), F(1), 16),
        (F(7), F(3), F(5), 4900),
    ],
)
def test_full_chain(p, r, h, value):
    rep = verify_heron(p, r, h)
    assert rep.verdict, rep.failures()
    assert rep.value == value
    assert [s.name for s in rep.steps] == ["lhs", "regrouping", "pythagorean_rewrites", "rhs_expansion"]
    rep.validate()


@settings(max_examples=6)
@given(triangle_coords())
def test_full_chain_on_random_data(coords):
    rep = verify_heron(*coords)
    assert rep.verdict, rep.failures()
    assert rep.value == chain_values(rep.datum)["product"]


def test_full_chain_scaled():
    rep = verify_heron(F(10), F(18, 5), F(24, 5))
    assert rep.verdict
    assert rep.value == 576 * 16


def test_degenerate_isosceles_right():
    t = triangle_from_coords(2, 1, 1)
    assert t.degenerate_isosceles_right
    assert chain_values(t)["product"] == 4 * t.a2 * t.a2


def test_reflection_of_far_apex():
    t = triangle_from_coords(5, F(16, 5), F(12, 5))
    assert t.reflected
    assert t.r == F(9, 5)
    assert chain_values(t)["4p^2h^2"] == 576


@pytest.mark.parametrize(
    "coords",
    [(0, 0, 1), (1, 0, 0), (1, 2, 1), (1, -1, 1), (4, 1, 5)],
)
def test_invalid_coords(coords):
    with pytest.raises(DomainError):
        triangle_from_coords(*coords)


def test_right_angle_datum_is_never_valid():
    # b^2 = p^2 + h^2 exceeds c^2 whenever r = 0
    with pytest.raises(DomainError):
        triangle_from_coords(3, 0, 2)


def test_right_angle_paths_directly():
    t = TriangleDatum(F(3), F(0), F(2))
    assert t.right_angle_at_origin
    lhs = verify_lhs(t)
    assert lhs.verdict
    assert lhs.left == 4 * 9 * 4
    assert verify_regrouping(t).verdict
    assert verify_pythagorean_rewrites(t).verdict


def test_from_sides():
    t = triangle_from_sides(5, 13, 4)
    assert (t.p, t.r, t.h) == (4, 1, 2)
    with pytest.raises(DomainError):
        triangle_from_sides(2, 3, 4)


def test_lhs_assembly_shapes():
    asm = lhs_assembly(triangle_from_coords(4, 1, 2))
    assert len(asm.quarters) == 4
    assert len(asm.pieces) == len(asm.moved) == 4
    total = sum((piece_volume(m) for m in asm.moved), as_quad(0))
    assert total == piece_volume(asm.rectangle_box) == (4 * 2) ** 2
    assert all(contains(asm.rectangle_box, m) for m in asm.moved)


def test_failures_reported_for_broken_report():
    rep = verify_heron(F(4), F(1), F(2))
    broken = ChainReport(rep.datum, {**rep.values, "product": as_quad(255)}, rep.steps[:1])
    assert not broken.verdict
    assert broken.failures() == ["chain_values"]
    empty = ChainReport(rep.datum, rep.values, (rep.steps[0].__class__("x", "=", as_quad(1), as_quad(1), ()),))
    with pytest.raises(ValueError):
        empty.validate()
