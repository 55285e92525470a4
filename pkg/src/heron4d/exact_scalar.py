"""Exact arithmetic in Q and in biquadratic fields Q(sqrt(d1), sqrt(d2)).

Every length, coordinate and volume handled by the package is a
:class:`QuadScalar`, i.e. ``q0 + q1*sqrt(d1) + q2*sqrt(d2) + q3*sqrt(d1*d2)``
with rational ``q``.  Bases are kept canonical (each ``d`` is 1 or a
squarefree integer > 1, and the two are distinct unless both are 1), which
makes the all-coordinates-zero test sound and gives a value-based hash.
"""

from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Union

Rational = Fraction
Scalar = Union["QuadScalar", Fraction, int]

__all__ = [
    "DomainError",
    "QuadScalar",
    "Rational",
    "as_quad",
    "parse_rational",
    "quad_arith",
    "quad_make",
    "quad_sign",
    "sqrt_rational",
]


class DomainError(ValueError):
    """Raised for inputs outside an operation's mathematical domain."""


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer literal; nothing else is accepted."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise DomainError(f"malformed rational {text!r} (expected 'num/den' or an integer)")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(num, den)


# -- squarefree decomposition -------------------------------------------------

_TRIAL_LIMIT = 100_000


@lru_cache(maxsize=4096)
def _square_split(n: int) -> tuple[int, int]:
    """Return ``(k, s)`` with ``n == k*k*s`` and ``s`` squarefree (n > 0)."""
    r = isqrt(n)
    if r * r == n:
        return r, 1
    k, s, m = 1, 1, n
    p = 2
    # after removing primes <= cbrt(m) the cofactor is 1, p, p*q or p*p
    while p * p * p <= m:
        if p > _TRIAL_LIMIT:
            return _square_split_sympy(n)
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    r = isqrt(m)
    if r * r == m:
        k *= r
    else:
        s *= m
    return k, s


def _square_split_sympy(n: int) -> tuple[int, int]:
    from sympy import factorint

    k = s = 1
    for p, e in factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return k, s


def _sqrt_parts(d: Fraction) -> tuple[Fraction, int]:
    """Write ``sqrt(d) == f * sqrt(s)`` with rational f and squarefree s."""
    if d == 0:
        return Fraction(0), 1
    # sqrt(n/m) = sqrt(n*m)/m
    k, s = _square_split(d.numerator * d.denominator)
    return Fraction(k, d.denominator), s


def _sf_product(d1: int, d2: int) -> tuple[int, int]:
    """sqrt(d1*d2) == g*sqrt(s) for squarefree d1, d2; returns (g, s)."""
    g = gcd(d1, d2)
    return g, (d1 // g) * (d2 // g)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _sign2(u: Fraction, v: Fraction, d: int) -> int:
    """Exact sign of u + v*sqrt(d)."""
    su, sv = _sign(u), _sign(v)
    if sv == 0 or d == 0:
        return su
    if d == 1:
        return _sign(u + v)
    if su == 0:
        return sv
    if su == sv:
        return su
    return su * _sign(u * u - v * v * d)


_ZERO = Fraction(0)
_ONE = Fraction(1)


class QuadScalar:
    """Immutable element of Q(sqrt(d1), sqrt(d2)) in canonical form.

    Use :func:`quad_make` (or :func:`as_quad` / :func:`sqrt_rational`) to
    build values; the constructor trusts its arguments.
    """

    __slots__ = ("_c", "_d", "_hash")

    def __init__(self, coords: tuple[Fraction, Fraction, Fraction, Fraction], base: tuple[int, int]):
        self._c = coords
        self._d = base
        self._hash = None

    # -- accessors ------------------------------------------------------------
    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self._c

    @property
    def base(self) -> tuple[int, int]:
        return self._d

    @property
    def is_rational(self) -> bool:
        c = self._c
        return c[1] == 0 and c[2] == 0 and c[3] == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise DomainError(f"{self} is not rational")
        return self._c[0]

    def is_zero(self) -> bool:
        c = self._c
        return c[0] == 0 and c[1] == 0 and c[2] == 0 and c[3] == 0

    def sign(self) -> int:
        return quad_sign(self)

    def _radical_terms(self) -> dict[int, Fraction]:
        """Map squarefree radicand -> coefficient; unique per value."""
        d1, d2 = self._d
        q0, q1, q2, q3 = self._c
        out: dict[int, Fraction] = {}
        if q0:
            out[1] = q0
        if q1:
            out[d1] = out.get(d1, _ZERO) + q1
        if q2:
            out[d2] = out.get(d2, _ZERO) + q2
        if q3:
            g, s = _sf_product(d1, d2)
            out[s] = out.get(s, _ZERO) + q3 * g
        return {k: v for k, v in out.items() if v}

    # -- python protocol ------------------------------------------------------
    def __repr__(self) -> str:
        return f"QuadScalar({self})"

    def __str__(self) -> str:
        return self.to_text()

    def __hash__(self) -> int:
        if self._hash is None:
            terms = self._radical_terms()
            if set(terms) <= {1}:
                self._hash = hash(terms.get(1, _ZERO))
            else:
                self._hash = hash(frozenset(terms.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            c = self._c
            return c[1] == 0 and c[2] == 0 and c[3] == 0 and c[0] == other
        if not isinstance(other, QuadScalar):
            return NotImplemented
        if self._d == other._d:
            return self._c == other._c
        try:
            return (self - other).is_zero()
        except DomainError:
            return False

    def __ne__(self, other: object) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __lt__(self, other: Scalar) -> bool:
        return quad_sign(self - other) < 0

    def __le__(self, other: Scalar) -> bool:
        return quad_sign(self - other) <= 0

    def __gt__(self, other: Scalar) -> bool:
        return quad_sign(self - other) > 0

    def __ge__(self, other: Scalar) -> bool:
        return quad_sign(self - other) >= 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __neg__(self) -> QuadScalar:
        c = self._c
        return QuadScalar((-c[0], -c[1], -c[2], -c[3]), self._d)

    def __pos__(self) -> QuadScalar:
        return self

    def __abs__(self) -> QuadScalar:
        return -self if quad_sign(self) < 0 else self

    def __add__(self, other: Scalar) -> QuadScalar:
        if isinstance(other, (int, Fraction)):
            c = self._c
            return QuadScalar((c[0] + other, c[1], c[2], c[3]), self._d)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        x, y = _align(self, other)
        return QuadScalar(_lin(x._c, y._c, x._d, 1), x._d)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> QuadScalar:
        if isinstance(other, (int, Fraction)):
            c = self._c
            return QuadScalar((c[0] - other, c[1], c[2], c[3]), self._d)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        x, y = _align(self, other)
        return QuadScalar(_lin(x._c, y._c, x._d, -1), x._d)

    def __rsub__(self, other: Scalar) -> QuadScalar:
        return (-self) + other

    def __mul__(self, other: Scalar) -> QuadScalar:
        if isinstance(other, (int, Fraction)):
            c = self._c
            if self._d == (1, 1):
                return QuadScalar((c[0] * other, _ZERO, _ZERO, _ZERO), self._d)
            return QuadScalar((c[0] * other, c[1] * other, c[2] * other, c[3] * other), self._d)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        x, y = _align(self, other)
        return QuadScalar(_mul_coords(x._c, y._c, x._d), x._d)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> QuadScalar:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QuadScalar division by zero")
            f = Fraction(other)
            c = self._c
            return QuadScalar((c[0] / f, c[1] / f, c[2] / f, c[3] / f), self._d)
        if not isinstance(other, QuadScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> QuadScalar:
        return as_quad(other) * self.inverse()

    def __pow__(self, n: int) -> QuadScalar:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadScalar((_ONE, _ZERO, _ZERO, _ZERO), self._d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, flip1: bool, flip2: bool) -> QuadScalar:
        """Galois conjugate: negate sqrt(d1) and/or sqrt(d2)."""
        q0, q1, q2, q3 = self._c
        s1 = -1 if flip1 else 1
        s2 = -1 if flip2 else 1
        return QuadScalar((q0, q1 * s1, q2 * s2, q3 * s1 * s2), self._d)

    def inverse(self) -> QuadScalar:
        if self.is_zero():
            raise ZeroDivisionError("QuadScalar division by zero")
        c2 = self.conjugate(False, True)
        n = self * c2  # lies in Q(sqrt(d1))
        c1 = n.conjugate(True, False)
        m = (n * c1).as_rational()
        return (c2 * c1) / m

    # -- rendering ------------------------------------------------------------
    def to_text(self, full: bool = False) -> str:
        """Render as ``q0 + q1*sqrt(d1) + q2*sqrt(d2) + q3*sqrt(d1*d2)``.

        With ``full=False`` zero terms are dropped, so rational values read
        as plain ``num/den`` strings.
        """
        d1, d2 = self._d
        q0, q1, q2, q3 = self._c
        terms = [(q0, None), (q1, f"sqrt({d1})"), (q2, f"sqrt({d2})"), (q3, f"sqrt({d1}*{d2})")]
        if full:
            return " + ".join(f"{q}" if r is None else f"{q}*{r}" for q, r in terms)
        parts = []
        for q, r in terms:
            if q == 0:
                continue
            body = f"{abs(q)}" if r is None else f"{abs(q)}*{r}"
            if not parts:
                parts.append(body if q > 0 else f"-{body}")
            else:
                parts.append(("+ " if q > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def to_decimal(self, digits: int = 12) -> Decimal:
        """Decimal approximation with ``digits`` significant digits."""
        d1, d2 = self._d
        q0, q1, q2, q3 = self._c
        with localcontext() as ctx:
            ctx.prec = digits + 20
            r1 = Decimal(d1).sqrt()
            r2 = Decimal(d2).sqrt()

            def dec(q: Fraction) -> Decimal:
                return Decimal(q.numerator) / Decimal(q.denominator)

            value = dec(q0) + dec(q1) * r1 + dec(q2) * r2 + dec(q3) * r1 * r2
        with localcontext() as ctx:
            ctx.prec = digits
            return +value

    def decimal_text(self, digits: int = 12) -> str:
        """Fixed rendering used for SVG coordinates and advisory JSON values."""
        value = self.to_decimal(digits)
        if value == 0:
            return "0"
        text = format(value, "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return "0" if text in ("-0", "") else text

    def __float__(self) -> float:
        return float(self.to_decimal(20))

    @classmethod
    def parse(cls, text: str) -> QuadScalar:
        """Inverse of :meth:`to_text` (both compact and full forms)."""
        s = text.replace(" ", "").replace("+-", "-").replace("--", "+")
        if not s:
            raise DomainError("empty QuadScalar text")
        if s[0] not in "+-":
            s = "+" + s
        total = as_quad(0)
        pos = 0
        for m in _TERM_RE.finditer(s):
            if m.start() != pos:
                raise DomainError(f"malformed QuadScalar text {text!r}")
            pos = m.end()
            coef = Fraction(int(m.group("num")), int(m.group("den") or 1))
            if m.group("sign") == "-":
                coef = -coef
            if m.group("r1") is None:
                total = total + coef
            else:
                r1 = int(m.group("r1"))
                r2 = int(m.group("r2")) if m.group("r2") else 1
                total = total + quad_make(0, coef, 0, 0, r1 * r2, 1)
        if pos != len(s):
            raise DomainError(f"malformed QuadScalar text {text!r}")
        return total


_TERM_RE = re.compile(
    r"(?P<sign>[+-])(?P<num>\d+)(?:/(?P<den>\d+))?(?:\*sqrt\((?P<r1>\d+)(?:\*(?P<r2>\d+))?\))?"
)


def _lin(a, b, base, s):
    """a + s*b on shared coordinates, skipping slots that are zero by base."""
    if base[1] == 1:
        if base[0] == 1:
            return (a[0] + b[0] if s > 0 else a[0] - b[0], _ZERO, _ZERO, _ZERO)
        if s > 0:
            return (a[0] + b[0], a[1] + b[1], _ZERO, _ZERO)
        return (a[0] - b[0], a[1] - b[1], _ZERO, _ZERO)
    if s > 0:
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def _mul_coords(a, b, base):
    d1, d2 = base
    if d2 == 1:
        if d1 == 1:
            return (a[0] * b[0], _ZERO, _ZERO, _ZERO)
        return (a[0] * b[0] + d1 * a[1] * b[1], a[0] * b[1] + a[1] * b[0], _ZERO, _ZERO)
    dd = d1 * d2
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 + d1 * a1 * b1 + d2 * a2 * b2 + dd * a3 * b3,
        a0 * b1 + a1 * b0 + d2 * (a2 * b3 + a3 * b2),
        a0 * b2 + a2 * b0 + d1 * (a1 * b3 + a3 * b1),
        a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
    )


# -- common base ---------------------------------------------------------------


def _span(basis: list[int]) -> set[int]:
    out = {1}
    for b in basis:
        out |= {_sf_product(b, e)[1] for e in out}
    return out


def _effective(x: QuadScalar) -> list[int]:
    d1, d2 = x._d
    q0, q1, q2, q3 = x._c
    out = []
    if d1 != 1 and (q1 or q3):
        out.append(d1)
    if d2 != 1 and (q2 or q3):
        out.append(d2)
    return out


def _merge_bases(first: list[int], second: list[int]) -> tuple[int, int] | None:
    slots = list(first)
    for r in second:
        if r == 1 or r in _span([s for s in slots if s != 1]):
            continue
        slots.append(r)
    slots = [s for s in slots if s != 1]
    if len(slots) > 2:
        return None
    slots += [1] * (2 - len(slots))
    return slots[0], slots[1]


def _rebase(x: QuadScalar, base: tuple[int, int]) -> QuadScalar:
    if x._d == base:
        return x
    e1, e2 = base
    g12, s12 = _sf_product(e1, e2)
    out = [_ZERO, _ZERO, _ZERO, _ZERO]
    for rad, coef in x._radical_terms().items():
        if rad == 1:
            out[0] += coef
        elif rad == e1:
            out[1] += coef
        elif rad == e2:
            out[2] += coef
        elif rad == s12:
            # sqrt(s12) == sqrt(e1*e2) / g12
            out[3] += coef / g12
        else:
            raise DomainError(f"sqrt({rad}) is not in Q(sqrt({e1}), sqrt({e2}))")
    return QuadScalar(tuple(out), base)


def _align(x: QuadScalar, y: QuadScalar) -> tuple[QuadScalar, QuadScalar]:
    if x._d == y._d:
        return x, y
    base = _merge_bases(list(x._d), list(y._d))
    if base is None:
        base = _merge_bases(_effective(x), _effective(y))
    if base is None:
        raise DomainError(f"incompatible bases {x._d} and {y._d}")
    return _rebase(x, base), _rebase(y, base)


# -- public operations -----------------------------------------------------------


def quad_make(q0=0, q1=0, q2=0, q3=0, d1=1, d2=1) -> QuadScalar:
    """Canonical element ``q0 + q1*sqrt(d1) + q2*sqrt(d2) + q3*sqrt(d1*d2)``."""
    q0, q1, q2, q3 = (Fraction(q) for q in (q0, q1, q2, q3))
    d1, d2 = Fraction(d1), Fraction(d2)
    if d1 < 0 or d2 < 0:
        raise DomainError(f"negative base ({d1}, {d2})")
    f1, s1 = _sqrt_parts(d1)
    f2, s2 = _sqrt_parts(d2)
    q1, q2, q3 = q1 * f1, q2 * f2, q3 * f1 * f2
    if s1 == 1:
        q0, q2, q1, q3 = q0 + q1, q2 + q3, _ZERO, _ZERO
    if s2 == 1:
        q0, q1, q2, q3 = q0 + q2, q1 + q3, _ZERO, _ZERO
    if s1 == s2 and s1 != 1:
        # sqrt(s1)*sqrt(s2) == s1, sqrt(s2) == sqrt(s1)
        q0, q1, q2, q3 = q0 + q3 * s1, q1 + q2, _ZERO, _ZERO
        s2 = 1
    return QuadScalar((q0, q1, q2, q3), (s1, s2))


def as_quad(value: Scalar) -> QuadScalar:
    if isinstance(value, QuadScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return QuadScalar((Fraction(value), _ZERO, _ZERO, _ZERO), (1, 1))
    raise TypeError(f"cannot convert {type(value).__name__} to QuadScalar")


def sqrt_rational(value: Scalar) -> QuadScalar:
    """Exact square root of a non-negative rational."""
    q = as_quad(value).as_rational()
    if q < 0:
        raise DomainError(f"square root of negative {q}")
    return quad_make(0, 1, 0, 0, q, 1)


def quad_arith(kind: str, x: Scalar, y: Scalar) -> QuadScalar:
    x, y = as_quad(x), as_quad(y)
    if kind == "add":
        return x + y
    if kind == "sub":
        return x - y
    if kind == "mul":
        return x * y
    if kind == "div":
        return x / y
    raise ValueError(f"unknown operation {kind!r}")


def quad_sign(x: Scalar) -> int:
    """Exact sign of the real value, by nested squaring."""
    if isinstance(x, (int, Fraction)):
        return _sign(Fraction(x))
    d1, d2 = x._d
    q0, q1, q2, q3 = x._c
    if d2 == 1:
        return _sign2(q0 + q2, q1 + q3, d1)
    sa = _sign2(q0, q1, d1)
    sb = _sign2(q2, q3, d1)
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # sign(A + B*sqrt(d2)) with opposite signs: compare A^2 with d2*B^2 in Q(sqrt(d1))
    n0 = q0 * q0 + d1 * q1 * q1 - d2 * (q2 * q2 + d1 * q3 * q3)
    n1 = 2 * (q0 * q1 - d2 * q2 * q3)
    return sa * _sign2(n0, n1, d1)
