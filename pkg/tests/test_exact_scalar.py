import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heron4d.exact_scalar import (
    DomainError,
    QuadScalar,
    as_quad,
    parse_rational,
    quad_arith,
    quad_make,
    quad_sign,
    sqrt_rational,
)

SQUAREFREE = (2, 3, 5, 6, 7, 10, 11, 13, 15, 65)


def mp_value(x: QuadScalar) -> mpmath.mpf:
    d1, d2 = x.base
    q0, q1, q2, q3 = (mpmath.mpf(c.numerator) / c.denominator for c in x.coords)
    return q0 + q1 * mpmath.sqrt(d1) + q2 * mpmath.sqrt(d2) + q3 * mpmath.sqrt(d1 * d2)


def mp_sign(x: QuadScalar) -> int:
    with mpmath.workdps(110):
        v = mp_value(x)
        if abs(v) < mpmath.mpf(10) ** -100:
            return 0
        return 1 if v > 0 else -1


def _near_cancelling(rng: random.Random) -> QuadScalar:
    # rational approximations of sqrt(d) stress the nested-squaring sign test
    d1, d2 = rng.sample(SQUAREFREE[:8], 2)
    with mpmath.workdps(60):
        approx = Fraction(mpmath.nstr(mpmath.sqrt(d1), rng.randint(3, 25), strip_zeros=False))
    kind = rng.randrange(3)
    if kind == 0:
        return quad_make(-approx, 1, 0, 0, d1, d2)
    if kind == 1:
        return quad_make(0, approx, -1, 0, d2, d1 * d1 * d2 if rng.random() < 0.5 else d2)
    return quad_make(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3), d1, d2)


def random_quads(count: int, seed: int) -> list[QuadScalar]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        if i % 3 == 0:
            out.append(_near_cancelling(rng))
            continue
        d1, d2 = rng.sample(SQUAREFREE, 2)
        coords = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(4)]
        out.append(quad_make(*coords, d1, d2))
    return out


def test_quad_sign_matches_high_precision_oracle():
    values = random_quads(1000, 20240)
    disagreements = [x for x in values if quad_sign(x) != mp_sign(x)]
    assert disagreements == []


def test_exact_cancellations_have_sign_zero():
    r2 = sqrt_rational(2)
    r3 = sqrt_rational(3)
    assert quad_sign(r2 * r2 - 2) == 0
    assert quad_sign((r2 + r3) * (r2 - r3) + 1) == 0
    assert (r2 * r3 - sqrt_rational(6)).is_zero()


def test_sqrt_of_square_is_rational():
    assert sqrt_rational(Fraction(9, 4)).is_rational
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
    assert sqrt_rational(8) == 2 * sqrt_rational(2)
    with pytest.raises(DomainError):
        sqrt_rational(-1)


def test_canonical_equality_across_bases():
    a = quad_make(1, 1, 0, 0, 5, 13)
    b = quad_make(1, 1, 0, 0, 5, 1)
    assert a == b
    assert hash(a) == hash(b)


def test_field_closure_over_biquadratic_base():
    a = sqrt_rational(5)
    b = sqrt_rational(13)
    x = (a + b + 2) * (a - b + 2)
    assert x == (a + 2) ** 2 - 13
    assert x / x == 1
    assert (a + b).inverse() * (a + b) == 1


def test_incompatible_bases_rejected():
    with pytest.raises(DomainError):
        sqrt_rational(2) + sqrt_rational(3) + sqrt_rational(5)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        as_quad(1) / as_quad(0)


@pytest.mark.parametrize("text", ["1/2", "-3", " 7 / 4 ", "+5"])
def test_parse_rational_accepts(text):
    assert parse_rational(text) == Fraction(text.replace(" ", ""))


@pytest.mark.parametrize("text", ["1.5", "abc", "1/0", "", "2/-3", "sqrt(2)"])
def test_parse_rational_rejects(text):
    with pytest.raises(DomainError):
        parse_rational(text)


def test_text_round_trip_for_random_values():
    for x in random_quads(200, 7):
        assert QuadScalar.parse(x.to_text()) == x
        assert QuadScalar.parse(x.to_text(full=True)) == x


def test_decimal_text_is_advisory_only():
    x = sqrt_rational(2)
    assert x.decimal_text(12) == "1.41421356237"
    assert as_quad(Fraction(1, 4)).decimal_text() == "0.25"


def test_quad_arith_dispatch():
    assert quad_arith("add", 1, Fraction(1, 2)) == Fraction(3, 2)
    assert quad_arith("div", 3, 4) == Fraction(3, 4)
    with pytest.raises(ValueError):
        quad_arith("pow", 1, 2)


@given(
    st.tuples(*[st.builds(Fraction, st.integers(-99, 99), st.integers(1, 20))] * 4),
    st.sampled_from(SQUAREFREE),
    st.sampled_from(SQUAREFREE),
)
def test_ordering_is_consistent_with_sign(coords, d1, d2):
    x = quad_make(*coords, d1, d2)
    assert (x > 0) == (quad_sign(x) > 0)
    assert quad_sign(-x) == -quad_sign(x)
    assert quad_sign(x * x) == (0 if x.is_zero() else 1)
