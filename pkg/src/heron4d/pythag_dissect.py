"""Windmill dissection of a hypotenuse square, its 4-D product, and sum/difference-of-squares boxes.

Planar coordinates use a leg-aligned frame. The hypotenuse square is tilted
with corners ``(x, 0), (x+y, x), (y, x+y), (0, y)`` so that every piece has
coordinates in the field of the legs. The reassembled x-square and y-square
are axis-aligned: ``Y = [0, y]^2`` and ``X = [y, x+y] x [0, x]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exact_scalar import DomainError, QuadScalar, Scalar, as_quad, quad_sign, sqrt_rational
from .geometry4 import (
    Box4,
    IsometryMap,
    Piece,
    Polygon2,
    Product2x2,
    TilingCertificate,
    apply_isometry,
    box4,
    certify_tiling,
    clip_polygon,
    make_polygon,
    piece_class,
    piece_volume,
    polygons_disjoint,
    rectangle,
)

ZERO = as_quad(0)
PLANE_A = (0, 1)
PLANE_B = (2, 3)


def _total(values) -> QuadScalar:
    out = ZERO
    for v in values:
        out = out + v
    return out


@dataclass(frozen=True)
class RightTriangleParams:
    x: QuadScalar
    y: QuadScalar

    def __post_init__(self):
        x, y = as_quad(self.x), as_quad(self.y)
        if quad_sign(x) <= 0 or quad_sign(y) <= 0:
            raise DomainError("legs must be positive")
        if x > y:
            x, y = y, x
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if not self.hyp2.is_rational:
            raise DomainError("the squared hypotenuse must be rational")

    @property
    def hyp2(self) -> QuadScalar:
        return self.x * self.x + self.y * self.y

    @property
    def hyp(self) -> QuadScalar:
        return sqrt_rational(self.hyp2.as_rational())

    @property
    def isosceles(self) -> bool:
        return self.x == self.y


def legs(x: Scalar, y: Scalar) -> RightTriangleParams:
    return RightTriangleParams(as_quad(x), as_quad(y))


@dataclass(frozen=True)
class Dissection2D:
    params: RightTriangleParams
    container: Polygon2
    labels: tuple[str, ...]
    pieces: tuple[Polygon2, ...]
    translations: tuple[tuple[QuadScalar, QuadScalar], ...]
    x_square: Polygon2
    y_square: Polygon2

    def placed(self) -> list[Polygon2]:
        return [p.translated(*t) for p, t in zip(self.pieces, self.translations)]

    def fragments(self, target: Polygon2) -> list[Optional[Polygon2]]:
        """Each placed piece clipped to a target square (None where they do not meet)."""
        return [clip_polygon(p, target) for p in self.placed()]

    def check(self) -> dict[str, bool]:
        t = self.params
        areas = [p.area() for p in self.pieces]
        placed = self.placed()
        checks = {
            "area_sum": _total(areas) == t.hyp2 == self.container.area(),
            "containment": all(self.container.contains_point(v) for p in self.pieces for v in p.vertices),
            "disjoint": all(
                polygons_disjoint(a, b) for i, a in enumerate(self.pieces) for b in self.pieces[i + 1 :]
            ),
            "placed_disjoint": all(polygons_disjoint(a, b) for i, a in enumerate(placed) for b in placed[i + 1 :]),
            "translations_only": True,
        }
        covered = []
        for target in (self.x_square, self.y_square):
            frags = [f for f in self.fragments(target) if f is not None]
            covered.append(_total(f.area() for f in frags) == target.area())
        per_piece = []
        xs, ys = self.fragments(self.x_square), self.fragments(self.y_square)
        for p, fx, fy in zip(self.pieces, xs, ys):
            got = _total(f.area() for f in (fx, fy) if f is not None)
            per_piece.append(got == p.area())
        checks["targets_filled"] = all(covered)
        checks["pieces_accounted"] = all(per_piece)
        checks["squares_sum"] = self.x_square.area() + self.y_square.area() == t.hyp2
        return checks

    @property
    def verdict(self) -> bool:
        return all(self.check().values())


def dissect_square(t: RightTriangleParams, plane: tuple[int, int] = PLANE_A) -> Dissection2D:
    """Four right triangles around a central ``(y-x)``-square filling the tilted hypotenuse square."""
    x, y = t.x, t.y
    v0, v1, v2, v3 = (x, ZERO), (x + y, x), (y, x + y), (ZERO, y)
    container = make_polygon(plane, [v0, v1, v2, v3])
    labels = ["SE", "NE", "NW", "SW"]
    pieces = [
        make_polygon(plane, [v0, v1, (x, x)]),
        make_polygon(plane, [v1, v2, (y, x)]),
        make_polygon(plane, [v2, v3, (y, y)]),
        make_polygon(plane, [v3, v0, (x, y)]),
    ]
    moves = [(ZERO, ZERO), (-y, -x), (x, -y), (ZERO, ZERO)]
    if not t.isosceles:
        labels.append("C")
        pieces.append(rectangle(plane, x, x, y, y))
        moves.append((ZERO, ZERO))
    return Dissection2D(
        t,
        container,
        tuple(labels),
        tuple(pieces),
        tuple(moves),
        rectangle(plane, y, ZERO, x + y, x),
        rectangle(plane, ZERO, ZERO, y, y),
    )


def trivial_square(side: Scalar, plane: tuple[int, int] = PLANE_A) -> Dissection2D:
    """One-piece dissection of an axis-aligned square, used where a leg vanishes."""
    s = as_quad(side)
    if quad_sign(s) <= 0:
        raise DomainError("side must be positive")
    sq = rectangle(plane, ZERO, ZERO, s, s)
    params = RightTriangleParams(s, s)
    # treated as the y-square of a degenerate triangle; x-square is unused
    return _TrivialDissection(params, sq, ("S",), (sq,), ((ZERO, ZERO),), None, sq)


class _TrivialDissection(Dissection2D):
    def fragments(self, target):
        if target is None:
            return [None]
        return super().fragments(target)

    def check(self) -> dict[str, bool]:
        return {"single_piece": self.pieces[0] == self.container}


@dataclass(frozen=True)
class ProductDissection:
    first: Dissection2D
    second: Dissection2D
    container: Product2x2
    labels: tuple[str, ...]
    pieces: tuple[Product2x2, ...]
    box_frame: Optional[IsometryMap]

    @property
    def box(self) -> Box4:
        z, w = self.first.params.hyp, self.second.params.hyp
        return box4((0, z), (0, z), (0, w), (0, w))

    def census(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for p in self.pieces:
            out[piece_class(p)] = out.get(piece_class(p), 0) + 1
        return out

    def certificate(self, check_disjoint: bool = True) -> TilingCertificate:
        return certify_tiling(self.container, self.pieces, check_disjoint=check_disjoint)

    def box_certificate(self) -> Optional[TilingCertificate]:
        """The same tiling carried rigidly onto the axis-aligned box ``[0,z]^2 x [0,w]^2``."""
        if self.box_frame is None:
            return None
        moved = [apply_isometry(self.box_frame, p) for p in self.pieces]
        if not all(isinstance(p, Product2x2) for p in moved):
            return None
        return certify_tiling(self.box, moved)


def _frame_block(t: RightTriangleParams) -> tuple[tuple[QuadScalar, QuadScalar], ...]:
    z = t.hyp
    return ((t.y / z, t.x / z), (-t.x / z, t.y / z))


def _box_frame(t1: RightTriangleParams, t2: RightTriangleParams) -> IsometryMap:
    a, b = _frame_block(t1), _frame_block(t2)
    m = (
        (a[0][0], a[0][1], ZERO, ZERO),
        (a[1][0], a[1][1], ZERO, ZERO),
        (ZERO, ZERO, b[0][0], b[0][1]),
        (ZERO, ZERO, b[1][0], b[1][1]),
    )
    # corner (x, 0) of each tilted square goes to the origin
    shift = (t1.x, ZERO, t2.x, ZERO)
    lin = IsometryMap(m)
    moved = lin.apply_point(shift)
    return IsometryMap(m, tuple(-c for c in moved))


def product_of(d1: Dissection2D, d2: Dissection2D, with_frame: bool = True) -> ProductDissection:
    labels, pieces = [], []
    for la, pa in zip(d1.labels, d1.pieces):
        for lb, pb in zip(d2.labels, d2.pieces):
            labels.append(f"{la}x{lb}")
            pieces.append(Product2x2(pa, pb.on_plane(PLANE_B)))
    container = Product2x2(d1.container, d2.container.on_plane(PLANE_B))
    frame = None
    if with_frame and not isinstance(d1, _TrivialDissection) and not isinstance(d2, _TrivialDissection):
        frame = _box_frame(d1.params, d2.params)
    return ProductDissection(d1, d2, container, tuple(labels), tuple(pieces), frame)


def product_dissection(t1: RightTriangleParams, t2: RightTriangleParams) -> ProductDissection:
    """The hypotenuse-square product cut into 25 (or fewer) products of planar pieces."""
    return product_of(dissect_square(t1, PLANE_A), dissect_square(t2, PLANE_B))


@dataclass(frozen=True)
class Reassembly:
    source: ProductDissection
    target_names: tuple[str, ...]
    targets: tuple[Box4, ...]
    placements: tuple[IsometryMap, ...]
    fragments: tuple[tuple[tuple[int, Product2x2], ...], ...]
    certificates: tuple[TilingCertificate, ...]

    def target_volumes(self) -> list[QuadScalar]:
        return [piece_volume(b) for b in self.targets]

    def all_translations(self) -> bool:
        return all(p.is_translation() for p in self.placements)

    def pieces_accounted(self) -> bool:
        """Fragment volumes of each piece over all targets add back to the piece volume."""
        got = [ZERO] * len(self.source.pieces)
        for frag_list in self.fragments:
            for idx, frag in frag_list:
                got[idx] = got[idx] + piece_volume(frag)
        return all(g == piece_volume(p) for g, p in zip(got, self.source.pieces))

    def conservation(self) -> bool:
        return _total(self.target_volumes()) == piece_volume(self.source.container)

    @property
    def verdict(self) -> bool:
        return (
            all(c.verdict for c in self.certificates)
            and self.all_translations()
            and self.pieces_accounted()
            and self.conservation()
        )


TARGET_NAMES = ("R_xxuu", "R_xxvv", "R_yyuu", "R_yyvv")


def _square_box(a: Polygon2, b: Polygon2) -> Box4:
    return Box4(_bounds(a) + _bounds(b))


def _bounds(poly: Polygon2):
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    return (min(xs), max(xs)), (min(ys), max(ys))


def reassemble_of(src: ProductDissection, check_disjoint: bool = False) -> Reassembly:
    d1, d2 = src.first, src.second
    placements, placed = [], []
    for i, pa in enumerate(d1.pieces):
        for j, pb in enumerate(d2.pieces):
            (dx, dy), (du, dv) = d1.translations[i], d2.translations[j]
            placements.append(IsometryMap.translation_by((dx, dy, du, dv)))
            placed.append((pa.translated(dx, dy), pb.on_plane(PLANE_B).translated(du, dv)))
    squares1 = (d1.x_square, d1.x_square, d1.y_square, d1.y_square)
    squares2 = (d2.x_square, d2.y_square, d2.x_square, d2.y_square)
    names, targets, frags, certs = [], [], [], []
    clips: dict = {}
    for name, s1, s2 in zip(TARGET_NAMES, squares1, squares2):
        if s1 is None or s2 is None:
            continue
        s2 = s2.on_plane(PLANE_B)
        box = _square_box(s1, s2)
        found = []
        for idx, (pa, pb) in enumerate(placed):
            ca, cb = _clip_cached(clips, pa, s1), _clip_cached(clips, pb, s2)
            if ca is not None and cb is not None:
                found.append((idx, Product2x2(ca, cb)))
        names.append(name)
        targets.append(box)
        frags.append(tuple(found))
        certs.append(certify_tiling(box, [f for _, f in found], check_disjoint=check_disjoint))
    return Reassembly(src, tuple(names), tuple(targets), tuple(placements), tuple(frags), tuple(certs))


def reassemble_product(t1: RightTriangleParams, t2: RightTriangleParams, check_disjoint: bool = False) -> Reassembly:
    """Translate the product pieces into the four leg-square products and certify each target."""
    return reassemble_of(product_dissection(t1, t2), check_disjoint)


def _clip_cached(cache: dict, poly: Polygon2, window: Polygon2) -> Optional[Polygon2]:
    key = (poly, window)
    if key not in cache:
        cache[key] = clip_polygon(poly, window)
    return cache[key]


def _box_from_lengths(a0: QuadScalar, a1: QuadScalar, b0: QuadScalar, b1: QuadScalar) -> Box4:
    one = as_quad(1)
    return box4((a0, a1), (0, one), (b0, b1), (0, one))


@dataclass(frozen=True)
class SumOfSquaresCertificate:
    factors: tuple[QuadScalar, QuadScalar]
    labels: tuple[str, ...]
    boxes: tuple[Box4, ...]
    tiling: TilingCertificate
    total: QuadScalar

    def term_volumes(self) -> list[QuadScalar]:
        return [piece_volume(b) for b in self.boxes]

    @property
    def verdict(self) -> bool:
        return self.tiling.verdict and self.total == self.factors[0] * self.factors[1]


def sum_of_squares_product(x: Scalar, y: Scalar, z: Scalar, w: Scalar) -> SumOfSquaresCertificate:
    """``(x^2+y^2)(z^2+w^2)`` as a box of unit thickness cut at the ``x^2`` and ``z^2`` marks."""
    x, y, z, w = (as_quad(v) for v in (x, y, z, w))
    if any(quad_sign(v) <= 0 for v in (x, y, z, w)):
        raise DomainError("all lengths must be positive")
    x2, y2, z2, w2 = x * x, y * y, z * z, w * w
    s1, s2 = x2 + y2, z2 + w2
    container = _box_from_lengths(ZERO, s1, ZERO, s2)
    boxes = (
        _box_from_lengths(ZERO, x2, ZERO, z2),
        _box_from_lengths(ZERO, x2, z2, s2),
        _box_from_lengths(x2, s1, ZERO, z2),
        _box_from_lengths(x2, s1, z2, s2),
    )
    tiling = certify_tiling(container, boxes, check_disjoint=True)
    return SumOfSquaresCertificate(
        (s1, s2), ("x^2z^2", "x^2w^2", "y^2z^2", "y^2w^2"), boxes, tiling, _total(piece_volume(b) for b in boxes)
    )


@dataclass(frozen=True)
class DifferenceOfSquaresCertificate:
    """Signed boxes ``+x^4, -x^2y^2, -x^2y^2, +y^4`` whose net is the ``(x^2-y^2)``-square.

    Segments of length ``x^2`` run right and ``y^2`` run left, so the negative
    boxes sit inside the positive ``x^4`` box and overlap exactly in the
    ``y^4`` box.
    """

    x2: QuadScalar
    y2: QuadScalar
    signed_boxes: tuple[tuple[int, Box4], ...]
    net_box: Box4
    placement_ok: bool

    def net(self) -> QuadScalar:
        return _total(piece_volume(b) if s > 0 else -piece_volume(b) for s, b in self.signed_boxes)

    @property
    def verdict(self) -> bool:
        d = self.x2 - self.y2
        return self.placement_ok and self.net() == d * d == piece_volume(self.net_box)


def _box_intersection(a: Box4, b: Box4) -> Optional[Box4]:
    ivs = []
    for (a0, a1), (b0, b1) in zip(a.intervals, b.intervals):
        lo, hi = max(a0, b0), min(a1, b1)
        if quad_sign(hi - lo) < 0:
            return None
        ivs.append((lo, hi))
    return Box4(tuple(ivs))


def difference_of_squares_product(x: Scalar, y: Scalar) -> DifferenceOfSquaresCertificate:
    x, y = as_quad(x), as_quad(y)
    if not (quad_sign(y) > 0 and quad_sign(x - y) > 0):
        raise DomainError("need x > y > 0")
    x2, y2 = x * x, y * y
    d = x2 - y2
    big = _box_from_lengths(ZERO, x2, ZERO, x2)
    n1 = _box_from_lengths(d, x2, ZERO, x2)
    n2 = _box_from_lengths(ZERO, x2, d, x2)
    small = _box_from_lengths(d, x2, d, x2)
    net_box = _box_from_lengths(ZERO, d, ZERO, d)
    placement_ok = (
        all(certify_tiling(big, [b]).containment_ok for b in (n1, n2, small, net_box))
        and _box_intersection(n1, n2) == small
    )
    signed = ((1, big), (-1, n1), (-1, n2), (1, small))
    return DifferenceOfSquaresCertificate(x2, y2, signed, net_box, placement_ok)


def placed_product_pieces(src: ProductDissection) -> list[Piece]:
    """Pieces after their reassembly translations (for figures)."""
    return [apply_isometry(m, p) for m, p in zip(reassemble_of(src).placements, src.pieces)]
