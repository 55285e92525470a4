"""Certified chain ``16A^2 = 4p^2h^2 = 2a^2b^2+2a^2c^2+2b^2c^2-a^4-b^4-c^4 = (a+b+c)(a+b-c)(a-b+c)(-a+b+c)``.

A triangle is given by its base ``p`` on the x-axis and apex ``(r, h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .exact_scalar import DomainError, QuadScalar, Scalar, as_quad, parse_rational, quad_sign, sqrt_rational
from .geometry4 import (
    Box4,
    IsometryMap,
    Polygon2,
    Product2x2,
    apply_isometry,
    box4,
    certify_tiling,
    congruent,
    make_polygon,
    polygons_disjoint,

)
from .pythag_dissect import (
    Dissection2D,
    PLANE_A,
    PLANE_B,
    difference_of_squares_product,
    dissect_square,
    legs,
    product_of,
    reassemble_of,
    sum_of_squares_product,
    trivial_square,
)
from .signed_expansion import HERON_NET, MonomialPolynomial, certify_heron_expansion, heron_product


def _q(v) -> Fraction:
    if isinstance(v, str):
        return parse_rational(v)
    if isinstance(v, QuadScalar):
        return v.as_rational()
    return Fraction(v)


@dataclass(frozen=True)
class TriangleDatum:
    p: Fraction
    r: Fraction
    h: Fraction
    reflected: bool = False

    @property
    def q(self) -> Fraction:
        """Horizontal distance from the apex foot to ``(p, 0)``."""
        return self.p - self.r

    @property
    def a2(self) -> Fraction:
        return self.r * self.r + self.h * self.h

    @property
    def b2(self) -> Fraction:
        return self.q * self.q + self.h * self.h

    @property
    def c2(self) -> Fraction:
        return self.p * self.p

    @property
    def area(self) -> Fraction:
        return self.p * self.h / 2

    @property
    def sides(self) -> tuple[QuadScalar, QuadScalar, QuadScalar]:
        return sqrt_rational(self.a2), sqrt_rational(self.b2), as_quad(self.p)

    @property
    def degenerate_isosceles_right(self) -> bool:
        """``a = b`` and ``c = a*sqrt(2)``: the right side reduces to ``4a^4``."""
        return self.a2 == self.b2 and self.c2 == 2 * self.a2

    @property
    def right_angle_at_origin(self) -> bool:
        return self.r == 0

    def scaled(self, lam: Fraction) -> TriangleDatum:
        return TriangleDatum(self.p * lam, self.r * lam, self.h * lam, self.reflected)


def triangle_from_coords(p, r, h) -> TriangleDatum:
    p, r, h = _q(p), _q(r), _q(h)
    if p <= 0 or h <= 0:
        raise DomainError("need p > 0 and h > 0")
    if r < 0 or r > p:
        raise DomainError("the apex foot r must lie in [0, p]")
    reflected = False
    if r > p / 2:
        r, reflected = p - r, True
    t = TriangleDatum(p, r, h, reflected)
    if t.b2 > t.c2:
        raise DomainError("the base p is not the longest side; relabel so that c is the longest side")
    a, b, c = t.sides
    if quad_sign(-a + b + c) <= 0 or quad_sign(a + b - c) <= 0:
        raise DomainError("triangle inequality fails")
    return t


def triangle_from_sides(a2, b2, c) -> TriangleDatum:
    """Datum from squared sides, when the resulting altitude is rational."""
    a2, b2, c = _q(a2), _q(b2), _q(c)
    if c <= 0:
        raise DomainError("c must be positive")
    r = (a2 - b2 + c * c) / (2 * c)
    h = sqrt_rational(a2 - r * r) if a2 - r * r > 0 else None
    if h is None or not h.is_rational:
        raise DomainError("altitude is not rational; supply (p, r, h) instead")
    return triangle_from_coords(c, r, h.as_rational())


def chain_values(t: TriangleDatum) -> dict[str, QuadScalar]:
    """The four chain expressions, computed independently of any dissection."""
    a, b, c = t.sides
    a2, b2, c2 = t.a2, t.b2, t.c2
    return {
        "16A^2": as_quad(16 * t.area * t.area),
        "4p^2h^2": as_quad(4 * t.p * t.p * t.h * t.h),
        "polynomial": as_quad(2 * a2 * b2 + 2 * a2 * c2 + 2 * b2 * c2 - a2 * a2 - b2 * b2 - c2 * c2),
        "product": heron_product(a, b, c),
    }


# -- reports -----------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateRef:
    kind: str  # tiling | signed | identity
    name: str
    verdict: bool
    detail: dict[str, Any] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ChainStep:
    name: str
    relation: str
    left: QuadScalar
    right: QuadScalar
    certificates: tuple[CertificateRef, ...]
    lines: tuple[tuple[str, bool], ...] = ()

    @property
    def equal(self) -> bool:
        return self.left == self.right

    @property
    def verdict(self) -> bool:
        return (
            self.equal
            and bool(self.certificates)
            and all(c.verdict for c in self.certificates)
            and all(ok for _, ok in self.lines)
        )


@dataclass(frozen=True)
class ChainReport:
    datum: TriangleDatum
    values: dict[str, QuadScalar]
    steps: tuple[ChainStep, ...]

    @property
    def verdict(self) -> bool:
        return self.values_agree and all(s.verdict for s in self.steps)

    @property
    def values_agree(self) -> bool:
        return len(set(self.values.values())) == 1

    @property
    def value(self) -> Optional[QuadScalar]:
        return next(iter(self.values.values())) if self.values_agree else None

    def failures(self) -> list[str]:
        out = [] if self.values_agree else ["chain_values"]
        for s in self.steps:
            if not s.equal:
                out.append(s.name)
            out.extend(f"{s.name}/{c.name}" for c in s.certificates if not c.verdict)
            out.extend(f"{s.name}/{label}" for label, ok in s.lines if not ok)
            if not s.certificates:
                out.append(f"{s.name}/no-certificate")
        return out

    def validate(self) -> None:
        missing = [s.name for s in self.steps if not s.certificates]
        if missing:
            raise ValueError(f"steps without certificates: {missing}")


def _tiling_ref(name: str, cert) -> CertificateRef:
    detail = {
        "container_volume": cert.container_volume,
        "volume_sum": cert.volume_sum,
        "pieces": len(cert.piece_volumes),
        "containment_ok": cert.containment_ok,
        "volume_sum_ok": cert.volume_sum_ok,
    }
    if cert.disjoint_ok is not None:
        detail["disjoint_ok"] = cert.disjoint_ok
    return CertificateRef("tiling", name, cert.verdict, detail)


# -- left-hand side ------------------------------------------------------------------------


@dataclass(frozen=True)
class LhsAssembly:
    """Pieces of the parallelogram-squared to rectangle-squared rearrangement."""

    triangle: Polygon2
    twin: Polygon2
    parallelogram: tuple[Polygon2, Polygon2]
    quarters: tuple[Product2x2, ...]
    container: Product2x2
    pieces: tuple[Product2x2, ...]
    placements: tuple[IsometryMap, ...]
    moved: tuple[Product2x2, ...]
    rectangle_box: Box4


def lhs_assembly(t: TriangleDatum) -> LhsAssembly:
    p, r, h = as_quad(t.p), as_quad(t.r), as_quad(t.h)
    zero = as_quad(0)

    def planar(plane):
        tri = make_polygon(plane, [(zero, zero), (p, zero), (r, h)])
        twin = make_polygon(plane, [(p, zero), (p + r, h), (r, h)])
        para = make_polygon(plane, [(zero, zero), (p, zero), (p + r, h), (r, h)])
        trap = make_polygon(plane, [(r, zero), (p, zero), (p + r, h), (r, h)])
        corner = make_polygon(plane, [(zero, zero), (r, zero), (r, h)]) if t.r > 0 else None
        return tri, twin, para, trap, corner

    tri, twin, para, trap, corner = planar(PLANE_A)
    tri_b, twin_b, para_b, trap_b, corner_b = planar(PLANE_B)
    quarters = tuple(Product2x2(a, b) for a, b in [(tri, tri_b), (tri, twin_b), (twin, tri_b), (twin, twin_b)])
    # parallelogram = corner triangle + trapezoid; the corner moves right by p
    if corner is not None:
        factors_a = [(corner, (p, zero)), (trap, (zero, zero))]
        factors_b = [(corner_b, (p, zero)), (trap_b, (zero, zero))]
    else:
        factors_a = [(trap, (zero, zero))]
        factors_b = [(trap_b, (zero, zero))]
    pieces, isos, moved = [], [], []
    for fa, (dx, dy) in factors_a:
        for fb, (du, dv) in factors_b:
            piece = Product2x2(fa, fb)
            iso = IsometryMap.translation_by((dx, dy, du, dv))
            pieces.append(piece)
            isos.append(iso)
            moved.append(apply_isometry(iso, piece))
    return LhsAssembly(
        tri,
        twin,
        (para, para_b),
        quarters,
        Product2x2(para, para_b),
        tuple(pieces),
        tuple(isos),
        tuple(moved),
        box4((r, p + r), (0, h), (r, p + r), (0, h)),
    )


def verify_lhs(t: TriangleDatum) -> ChainStep:
    """Parallelogram squared, cut at ``x = r`` and translated into a rectangle squared."""
    asm = lhs_assembly(t)
    p, h = as_quad(t.p), as_quad(t.h)
    tri, twin = asm.triangle, asm.twin
    para, para_b = asm.parallelogram
    para2 = asm.container
    refs = []
    area = tri.area()
    refs.append(
        CertificateRef(
            "tiling",
            "triangle+copy=parallelogram",
            area + twin.area() == para.area() and polygons_disjoint(tri, twin),
            {"triangle_area": area, "parallelogram_area": para.area()},
        )
    )
    refs.append(_tiling_ref("four triangle x triangle = parallelogram^2", certify_tiling(para2, asm.quarters, True)))
    base = asm.quarters[0]
    twins_ok = all(congruent(base, q) is not None for q in asm.quarters[1:])
    refs.append(CertificateRef("identity", "triangle x triangle copies congruent", twins_ok))
    refs.append(_tiling_ref("parallelogram^2 cut", certify_tiling(para2, asm.pieces, True)))
    refs.append(_tiling_ref("translated into rectangle^2", certify_tiling(asm.rectangle_box, asm.moved, True)))
    refs.append(
        CertificateRef("identity", "placements are translations", all(m.is_translation() for m in asm.placements))
    )

    left = 16 * area * area
    right = 4 * p * p * h * h
    rect2 = (p * h) * (p * h)
    lines = (("16A^2 = 4 * parallelogram^2", left == 4 * para2.first.area() * para2.second.area()),)
    lines += (("parallelogram^2 = rectangle^2", para.area() * para_b.area() == rect2),)
    return ChainStep("lhs", "16A^2 = 4p^2h^2", left, right, tuple(refs), lines)


# -- right-hand side ----------------------------------------------------------------------


def verify_rhs_expansion(t: TriangleDatum) -> ChainStep:
    a, b, c = t.sides
    res, cert = certify_heron_expansion(a, b, c)
    poly = as_quad(2 * t.a2 * t.b2 + 2 * t.a2 * t.c2 + 2 * t.b2 * t.c2 - t.a2 * t.a2 - t.b2 * t.b2 - t.c2 * t.c2)
    ref = CertificateRef(
        "signed",
        "81-box expansion and cancellation",
        cert.verdict and res.net == HERON_NET,
        {
            "terms": cert.term_count,
            "cancelled_pairs": len(res.pairs),
            "net": cert.net_text,
            "level_local": cert.level_local_ok,
            "max_class_size": res.max_class_size(),
        },
    )
    return ChainStep(
        "rhs_expansion", "(a+b+c)(a+b-c)(a-b+c)(-a+b+c) = polynomial", heron_product(a, b, c), poly, (ref,)
    )


def _side_dissection(x: Fraction, y: Fraction, plane) -> Dissection2D:
    if x == 0:
        return trivial_square(y, plane)
    return dissect_square(legs(x, y), plane)


def verify_pythagorean_rewrites(t: TriangleDatum) -> ChainStep:
    """Rewrite ``a^4, b^4, a^2b^2, a^2c^2, b^2c^2`` as sums of leg-square products."""
    da = lambda pl: _side_dissection(t.r, t.h, pl)  # noqa: E731
    db = lambda pl: _side_dissection(t.q, t.h, pl)  # noqa: E731
    dc = lambda pl: trivial_square(t.p, pl)  # noqa: E731
    jobs = [
        ("a^4", da, da, t.a2 * t.a2),
        ("b^4", db, db, t.b2 * t.b2),
        ("a^2b^2", da, db, t.a2 * t.b2),
        ("a^2c^2", da, dc, t.a2 * t.c2),
        ("b^2c^2", db, dc, t.b2 * t.c2),
    ]
    refs, lines = [], []
    left = right = as_quad(0)
    for name, f1, f2, expected in jobs:
        src = product_of(f1(PLANE_A), f2(PLANE_B), with_frame=False)
        cert = src.certificate(check_disjoint=False)
        re = reassemble_of(src)
        total = as_quad(0)
        for v in re.target_volumes():
            total = total + v
        refs.append(_tiling_ref(f"{name} source", cert))
        refs.append(
            CertificateRef(
                "tiling",
                f"{name} reassembly",
                re.verdict,
                {
                    "pieces": len(src.pieces),
                    "targets": dict(zip(re.target_names, re.target_volumes())),
                    "translations_only": re.all_translations(),
                },
            )
        )
        lines.append((f"{name} = {expected}", total == expected))
        left = left + expected
        right = right + total
    return ChainStep("pythagorean_rewrites", "quartic terms = sums of leg-square products", left, right, tuple(refs), tuple(lines))


_P, _R, _H, _Q = (MonomialPolynomial.symbol(s) for s in "prhq")


def _poly(text: dict[str, int]) -> MonomialPolynomial:
    return MonomialPolynomial.parse_terms(text)


def _subst_q(poly: MonomialPolynomial) -> MonomialPolynomial:
    return poly.substitute("q", _P - _R)


def verify_regrouping(t: TriangleDatum) -> ChainStep:
    """Replay the expansion, cancellation, regrouping and factoring ledger in ``p, r, h, q = p - r``."""
    a2 = _R * _R + _H * _H
    b2 = _Q * _Q + _H * _H
    c2 = _P * _P
    values = {"p": t.p, "r": t.r, "h": t.h, "q": t.q}
    refs: list[CertificateRef] = []
    lines: list[tuple[str, bool]] = []

    blocks = {
        "2a^2b^2": (2 * (a2 * b2), _poly({"r^2q^2": 2, "h^2q^2": 2, "r^2h^2": 2, "h^4": 2})),
        "2a^2c^2": (2 * (a2 * c2), _poly({"r^2p^2": 2, "h^2p^2": 2})),
        "2b^2c^2": (2 * (b2 * c2), _poly({"q^2p^2": 2, "h^2p^2": 2})),
        "-a^4": (-(a2 * a2), _poly({"r^4": -1, "r^2h^2": -2, "h^4": -1})),
        "-b^4": (-(b2 * b2), _poly({"q^4": -1, "h^2q^2": -2, "h^4": -1})),
        "-c^4": (-(c2 * c2), _poly({"p^4": -1})),
    }
    total = MonomialPolynomial()
    for name, (expanded, printed) in blocks.items():
        lines.append((f"expand {name}", expanded == printed))
        total = total + printed

    # sums of squares multiplied out as box tilings
    if t.r > 0:
        for name, args in (("(r^2+h^2)(q^2+h^2)", (t.r, t.h, t.q, t.h)), ("(r^2+h^2)^2", (t.r, t.h, t.r, t.h))):
            cert = sum_of_squares_product(*args)
            refs.append(CertificateRef("tiling", f"sum of squares {name}", cert.verdict, {"total": cert.total}))
    cert = sum_of_squares_product(t.q, t.h, t.q, t.h)
    refs.append(CertificateRef("tiling", "sum of squares (q^2+h^2)^2", cert.verdict, {"total": cert.total}))

    cancelled = _poly({"r^2q^2": 2, "r^2p^2": 2, "h^2p^2": 4, "q^2p^2": 2, "r^4": -1, "q^4": -1, "p^4": -1})
    lines.append(("cancel like terms", total == cancelled))

    regrouped_mid = _poly({"r^2q^2": 2, "q^2p^2": 2, "q^4": -1})
    last = _poly({"p^4": -1, "r^2p^2": 2, "r^4": -1})
    four_h2p2 = _poly({"h^2p^2": 4})
    lines.append(("regroup", four_h2p2 + regrouped_mid + last == cancelled))

    diff = _P * _P - _R * _R
    lines.append(("factor -(p^2-r^2)^2", last == -(diff * diff)))
    if t.r > 0:
        dcert = difference_of_squares_product(t.p, t.r)
        refs.append(CertificateRef("signed", "difference of squares (p^2-r^2)^2", dcert.verdict, {"net": dcert.net()}))
    else:
        ok = as_quad(t.p**4) == last.evaluate(values) * -1
        refs.append(CertificateRef("signed", "difference of squares (p^2-0)^2", ok, {"net": as_quad(t.p**4)}))
    lines.append(("(p^2-r^2)^2 = q^2(p+r)^2", _subst_q(_Q * _Q * (_P + _R) * (_P + _R)) == diff * diff))

    bracket = 2 * (_R * _R) + 2 * (_P * _P) - _Q * _Q - (_P + _R) * (_P + _R)
    combined = four_h2p2 + _Q * _Q * bracket
    lines.append(("combine q^2[...]", _subst_q(combined) == _subst_q(four_h2p2 + regrouped_mid + -(diff * diff))))
    lines.append(("bracket vanishes", _subst_q(bracket).is_zero()))
    lines.append(("ledger reproduces the polynomial form", _subst_q(cancelled) == _subst_q(total)))
    refs.append(
        CertificateRef(
            "identity",
            "polynomial ledger",
            all(ok for _, ok in lines),
            {"net": four_h2p2.to_text(), "lines": len(lines)},
        )
    )

    left = total.evaluate(values)
    right = four_h2p2.evaluate(values)
    return ChainStep("regrouping", "polynomial = 4p^2h^2", left, right, tuple(refs), tuple(lines))


def verify_heron(p, r, h) -> ChainReport:
    t = triangle_from_coords(p, r, h)
    steps = (verify_lhs(t), verify_regrouping(t), verify_pythagorean_rewrites(t), verify_rhs_expansion(t))
    return ChainReport(t, chain_values(t), steps)
