"""Exact convex pieces in R^4: volumes, isometries, congruence and tiling checks.

Three piece kinds cover every figure we need:

* :class:`Simplex4` -- five affinely independent points;
* :class:`Box4` -- an axis-aligned hyper-rectangle;
* :class:`Product2x2` -- a product of two convex polygons lying in
  complementary coordinate planes.

All pieces are convex hulls of their vertex sets, which is what makes the
vertex-based containment and congruence tests below exact and complete.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Optional, Sequence, Union

from .exact_scalar import QuadScalar, Scalar, as_quad, quad_sign

Point2 = tuple[QuadScalar, QuadScalar]
Point4 = tuple[QuadScalar, QuadScalar, QuadScalar, QuadScalar]
Segment2 = tuple[Point2, Point2]

ZERO = as_quad(0)
ONE = as_quad(1)

_PLANE_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


class GeometryError(ValueError):
    """A piece or map violates its defining invariant."""


def point4(*coords: Scalar) -> Point4:
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, QuadScalar)):
        coords = tuple(coords[0])
    if len(coords) != 4:
        raise GeometryError(f"expected 4 coordinates, got {len(coords)}")
    return tuple(as_quad(c) for c in coords)


def point2(x: Scalar, y: Scalar) -> Point2:
    return as_quad(x), as_quad(y)


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _dot(u, v) -> QuadScalar:
    total = ZERO
    for a, b in zip(u, v):
        total = total + a * b
    return total


def _cross2(o: Point2, a: Point2, b: Point2) -> QuadScalar:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def sq_dist(u, v) -> QuadScalar:
    d = _sub(u, v)
    return _dot(d, d)


# -- determinants and small linear algebra ---------------------------------------


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


_PERMS4 = [(p, _perm_sign(p)) for p in permutations(range(4))]
_PERMS3 = [(p, _perm_sign(p)) for p in permutations(range(3))]


def det(rows: Sequence[Sequence[QuadScalar]]) -> QuadScalar:
    """Leibniz expansion; division-free so it stays inside the field."""
    n = len(rows)
    perms = _PERMS4 if n == 4 else _PERMS3 if n == 3 else [(p, _perm_sign(p)) for p in permutations(range(n))]
    total = ZERO
    for p, s in perms:
        term = rows[0][p[0]]
        for i in range(1, n):
            term = term * rows[i][p[i]]
        total = total + term if s > 0 else total - term
    return total


def _normal4(e1, e2, e3) -> tuple[QuadScalar, ...]:
    """Vector orthogonal to three vectors in R^4 (generalized cross product)."""
    rows = (e1, e2, e3)
    out = []
    for j in range(4):
        cols = [c for c in range(4) if c != j]
        minor = [[r[c] for c in cols] for r in rows]
        m = det(minor)
        out.append(m if j % 2 == 0 else -m)
    return tuple(out)


def _solve_matrix(a: list[list[QuadScalar]], b: list[list[QuadScalar]]) -> Optional[list[list[QuadScalar]]]:
    """Solve ``a @ x = b`` by exact Gauss-Jordan; None if ``a`` is singular."""
    n = len(a)
    m = [list(a[i]) + list(b[i]) for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _rank(vectors: Sequence[Sequence[QuadScalar]]) -> int:
    rows = [list(v) for v in vectors]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if not rows[r][col].is_zero()), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        for r in range(rank + 1, len(rows)):
            if not rows[r][col].is_zero():
                f = rows[r][col] * inv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# -- polygons ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Polygon2:
    """Strictly convex polygon, counterclockwise, in the coordinate plane ``plane``.

    Vertices are rotated so the lexicographically smallest comes first, so
    dataclass equality is geometric equality.
    """

    plane: tuple[int, int]
    vertices: tuple[Point2, ...]

    def __post_init__(self):
        i, j = self.plane
        if not (0 <= i < j <= 3):
            raise GeometryError(f"plane must be an increasing axis pair, got {self.plane}")
        verts = tuple(point2(*v) for v in self.vertices)
        n = len(verts)
        if n < 3:
            raise GeometryError("a polygon needs at least 3 vertices")
        for k in range(n):
            a, b = verts[k], verts[(k + 1) % n]
            for m in range(n):
                if m in (k, (k + 1) % n):
                    continue
                if quad_sign(_cross2(a, b, verts[m])) <= 0:
                    raise GeometryError("polygon is not strictly convex and counterclockwise")
        start = min(range(n), key=lambda k: verts[k])
        object.__setattr__(self, "vertices", verts[start:] + verts[:start])

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Point2, Point2]]:
        v = self.vertices
        return [(v[k], v[(k + 1) % len(v)]) for k in range(len(v))]

    def area(self) -> QuadScalar:
        """Shoelace formula."""
        total = ZERO
        for a, b in self.edges():
            total = total + a[0] * b[1] - a[1] * b[0]
        return total / 2

    def contains_point(self, p: Point2) -> bool:
        return all(quad_sign(_cross2(a, b, p)) >= 0 for a, b in self.edges())

    def halfplanes(self) -> list[tuple[Point2, QuadScalar]]:
        """``(n, c)`` with the polygon equal to the intersection of ``n . p <= c``."""
        out = []
        for a, b in self.edges():
            n = (b[1] - a[1], a[0] - b[0])
            out.append((n, n[0] * a[0] + n[1] * a[1]))
        return out

    def translated(self, dx: Scalar, dy: Scalar) -> Polygon2:
        dx, dy = as_quad(dx), as_quad(dy)
        return Polygon2(self.plane, tuple((x + dx, y + dy) for x, y in self.vertices))

    def on_plane(self, plane: tuple[int, int]) -> Polygon2:
        return Polygon2(plane, self.vertices)


def make_polygon(plane: tuple[int, int], vertices: Iterable[Sequence[Scalar]]) -> Polygon2:
    return Polygon2(tuple(plane), tuple(point2(*v) for v in vertices))


def rectangle(plane: tuple[int, int], x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> Polygon2:
    return make_polygon(plane, [(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def _clean_ring(points: list[Point2]) -> list[Point2]:
    """Drop repeated and collinear vertices from a convex ring."""
    ring = []
    for p in points:
        if not ring or ring[-1] != p:
            ring.append(p)
    if len(ring) > 1 and ring[0] == ring[-1]:
        ring.pop()
    changed = True
    while changed and len(ring) >= 3:
        changed = False
        for k in range(len(ring)):
            a, b, c = ring[k - 1], ring[k], ring[(k + 1) % len(ring)]
            if _cross2(a, b, c).is_zero():
                ring.pop(k)
                changed = True
                break
    return ring


def clip_polygon(poly: Polygon2, window: Polygon2) -> Optional[Polygon2]:
    """Exact intersection of two convex polygons; None if it has no area."""
    ring = list(poly.vertices)
    for n, c in window.halfplanes():
        if not ring:
            break
        out = []
        for k in range(len(ring)):
            p, q = ring[k], ring[(k + 1) % len(ring)]
            fp = n[0] * p[0] + n[1] * p[1] - c
            fq = n[0] * q[0] + n[1] * q[1] - c
            sp, sq = quad_sign(fp), quad_sign(fq)
            if sp <= 0:
                out.append(p)
            if sp * sq < 0:
                t = fp / (fp - fq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        ring = out
    ring = _clean_ring(ring)
    if len(ring) < 3:
        return None
    return Polygon2(poly.plane, tuple(ring))


def polygons_disjoint(p: Polygon2, q: Polygon2) -> bool:
    """True iff the interiors are disjoint (an edge line of one separates them)."""
    for a, b in (p, q), (q, p):
        for n, c in a.halfplanes():
            if all(quad_sign(n[0] * v[0] + n[1] * v[1] - c) >= 0 for v in b.vertices):
                return True
    return False


# -- pieces ------------------------------------------------------------------------------


def ordering_vertices(order: Sequence[int], lo: Sequence[QuadScalar], hi: Sequence[QuadScalar]) -> tuple:
    """Vertices of ``{lo <= x_order[0] <= ... <= x_order[-1] <= hi}`` after scaling.

    The region is the simplex of points whose *relative* positions inside the
    box follow the given coordinate order; its vertices switch coordinates
    from low to high starting with the largest one.
    """
    n = len(order)
    cur = list(lo)
    verts = [tuple(cur)]
    for axis in reversed(order):
        cur[axis] = hi[axis]
        verts.append(tuple(cur))
    assert len(verts) == n + 1
    return tuple(verts)


@dataclass(frozen=True)
class Simplex4:
    vertices: tuple[Point4, ...]

    def __post_init__(self):
        verts = tuple(point4(*v) for v in self.vertices)
        if len(verts) != 5:
            raise GeometryError("a 4-simplex has exactly 5 vertices")
        object.__setattr__(self, "vertices", verts)
        if self.signed_volume_x24().is_zero():
            raise GeometryError("degenerate 4-simplex")

    kind = "simplex"

    def signed_volume_x24(self) -> QuadScalar:
        return self._det

    @cached_property
    def _det(self) -> QuadScalar:
        v0 = self.vertices[0]
        return det([_sub(v, v0) for v in self.vertices[1:]])

    def vertex_set(self) -> tuple[Point4, ...]:
        return self.vertices

    def halfspaces(self) -> list[tuple[tuple[QuadScalar, ...], QuadScalar]]:
        return self._halfspaces

    @cached_property
    def _halfspaces(self):
        out = []
        for i in range(5):
            f = [v for k, v in enumerate(self.vertices) if k != i]
            n = _normal4(_sub(f[1], f[0]), _sub(f[2], f[0]), _sub(f[3], f[0]))
            c = _dot(n, f[0])
            if quad_sign(_dot(n, self.vertices[i]) - c) > 0:
                n, c = tuple(-x for x in n), -c
            out.append((n, c))
        return out

    def same_set(self, other) -> bool:
        return isinstance(other, Simplex4) and set(self.vertices) == set(other.vertices)


@dataclass(frozen=True)
class Box4:
    intervals: tuple[tuple[QuadScalar, QuadScalar], ...]

    def __post_init__(self):
        ivs = tuple((as_quad(lo), as_quad(hi)) for lo, hi in self.intervals)
        if len(ivs) != 4:
            raise GeometryError("a 4-box needs 4 intervals")
        for lo, hi in ivs:
            if quad_sign(hi - lo) < 0:
                raise GeometryError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "intervals", ivs)

    kind = "box"

    @property
    def lo(self) -> Point4:
        return tuple(iv[0] for iv in self.intervals)

    @property
    def hi(self) -> Point4:
        return tuple(iv[1] for iv in self.intervals)

    def vertex_set(self) -> tuple[Point4, ...]:
        return tuple(product(*self.intervals))

    def halfspaces(self):
        out = []
        for axis, (lo, hi) in enumerate(self.intervals):
            e = tuple(ONE if k == axis else ZERO for k in range(4))
            out.append((e, hi))
            out.append((tuple(-x for x in e), -lo))
        return out

    def factor(self, plane: tuple[int, int]) -> Polygon2:
        (a0, a1), (b0, b1) = self.intervals[plane[0]], self.intervals[plane[1]]
        return rectangle(plane, a0, b0, a1, b1)

    def as_product(self, pairing=((0, 1), (2, 3))) -> Product2x2:
        return Product2x2(self.factor(pairing[0]), self.factor(pairing[1]))

    def same_set(self, other) -> bool:
        return isinstance(other, Box4) and self.intervals == other.intervals


def box4(*intervals: Sequence[Scalar]) -> Box4:
    return Box4(tuple((as_quad(lo), as_quad(hi)) for lo, hi in intervals))


def cube4(edge: Scalar = 1, origin: Scalar = 0) -> Box4:
    o = as_quad(origin)
    return Box4(((o, o + edge),) * 4)


@dataclass(frozen=True)
class Product2x2:
    first: Polygon2
    second: Polygon2

    def __post_init__(self):
        planes = set(self.first.plane) | set(self.second.plane)
        if planes != {0, 1, 2, 3}:
            raise GeometryError(f"factor planes {self.first.plane}, {self.second.plane} do not partition the axes")
        if 0 not in self.first.plane:
            first, second = self.second, self.first
            object.__setattr__(self, "first", first)
            object.__setattr__(self, "second", second)

    kind = "product"

    def _lift(self, p: Point2, q: Point2) -> Point4:
        out = [None] * 4
        (i, j), (k, l) = self.first.plane, self.second.plane
        out[i], out[j], out[k], out[l] = p[0], p[1], q[0], q[1]
        return tuple(out)

    def vertex_set(self) -> tuple[Point4, ...]:
        return self._vertex_set

    @cached_property
    def _vertex_set(self):
        return tuple(self._lift(p, q) for p in self.first.vertices for q in self.second.vertices)

    def halfspaces(self):
        return self._halfspaces

    @cached_property
    def _halfspaces(self):
        out = []
        for poly in (self.first, self.second):
            i, j = poly.plane
            for n, c in poly.halfplanes():
                vec = [ZERO] * 4
                vec[i], vec[j] = n
                out.append((tuple(vec), c))
        return out

    def same_set(self, other) -> bool:
        return isinstance(other, Product2x2) and self == other


Piece = Union[Simplex4, Box4, Product2x2]


def piece_class(p: Piece) -> str:
    """Palette class used by reports: simplex, box or '<a> x <b>' for products."""
    if isinstance(p, Simplex4):
        return "simplex"
    if isinstance(p, Box4):
        return "box"
    name = {3: "triangle", 4: "square"}
    return f"{name.get(len(p.first), 'polygon')} x {name.get(len(p.second), 'polygon')}"


def piece_volume(p: Piece) -> QuadScalar:
    if isinstance(p, Simplex4):
        return abs(p.signed_volume_x24()) / 24
    if isinstance(p, Box4):
        vol = ONE
        for lo, hi in p.intervals:
            vol = vol * (hi - lo)
        return vol
    if isinstance(p, Product2x2):
        return p.first.area() * p.second.area()
    raise TypeError(f"not a piece: {p!r}")


# -- isometries --------------------------------------------------------------------------


@dataclass(frozen=True)
class IsometryMap:
    """``x -> M x + t`` with ``M`` exactly orthogonal."""

    matrix: tuple[tuple[QuadScalar, ...], ...]
    translation: Point4 = field(default=(ZERO, ZERO, ZERO, ZERO))

    def __post_init__(self):
        m = tuple(tuple(as_quad(x) for x in row) for row in self.matrix)
        if len(m) != 4 or any(len(r) != 4 for r in m):
            raise GeometryError("isometry matrix must be 4x4")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", point4(*self.translation))
        for i in range(4):
            for j in range(i, 4):
                g = ZERO
                for k in range(4):
                    g = g + m[k][i] * m[k][j]
                if g != (1 if i == j else 0):
                    raise GeometryError("matrix is not orthogonal")

    @classmethod
    def identity(cls) -> IsometryMap:
        return cls.signed_permutation((0, 1, 2, 3), (1, 1, 1, 1))

    @classmethod
    def translation_by(cls, t: Sequence[Scalar]) -> IsometryMap:
        return cls.signed_permutation((0, 1, 2, 3), (1, 1, 1, 1), t)

    @classmethod
    def signed_permutation(cls, perm, signs, t=(0, 0, 0, 0)) -> IsometryMap:
        """Map with output coordinate ``i`` equal to ``signs[i] * x[perm[i]] + t[i]``."""
        rows = tuple(tuple(as_quad(signs[i] if k == perm[i] else 0) for k in range(4)) for i in range(4))
        return cls(rows, point4(*t))

    def apply_point(self, v: Sequence[QuadScalar]) -> Point4:
        return tuple(_dot(row, v) + t for row, t in zip(self.matrix, self.translation))

    def compose(self, inner: IsometryMap) -> IsometryMap:
        """``self o inner``."""
        m = tuple(
            tuple(_dot(self.matrix[i], [inner.matrix[k][j] for k in range(4)]) for j in range(4)) for i in range(4)
        )
        return IsometryMap(m, self.apply_point(inner.translation))

    def inverse(self) -> IsometryMap:
        mt = tuple(tuple(self.matrix[j][i] for j in range(4)) for i in range(4))
        t = tuple(-_dot(row, self.translation) for row in mt)
        return IsometryMap(mt, t)

    def is_translation(self) -> bool:
        return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(4) for j in range(4))

    def as_signed_permutation(self) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
        perm, signs = [], []
        for row in self.matrix:
            nz = [(k, x) for k, x in enumerate(row) if not x.is_zero()]
            if len(nz) != 1 or nz[0][1] not in (1, -1):
                return None
            perm.append(nz[0][0])
            signs.append(1 if nz[0][1] == 1 else -1)
        return tuple(perm), tuple(signs)


def _map_polygon(iso: IsometryMap, poly: Polygon2) -> Optional[Polygon2]:
    """Image of a planar factor if the map sends its plane onto a coordinate plane."""
    i, j = poly.plane
    m = iso.matrix
    rows = sorted({r for r in range(4) if not (m[r][i].is_zero() and m[r][j].is_zero())})
    if len(rows) != 2:
        return None
    k, l = rows
    verts = []
    for a, b in poly.vertices:
        verts.append((m[k][i] * a + m[k][j] * b, m[l][i] * a + m[l][j] * b))
    orient = quad_sign(m[k][i] * m[l][j] - m[k][j] * m[l][i])
    if orient < 0:
        verts.reverse()
    return Polygon2((k, l), tuple(verts))


def _translate_factor(poly: Polygon2, t: Point4) -> Polygon2:
    k, l = poly.plane
    return poly.translated(t[k], t[l])


def triangulate_polygon(poly: Polygon2) -> list[Polygon2]:
    v = poly.vertices
    return [Polygon2(poly.plane, (v[0], v[k], v[k + 1])) for k in range(1, len(v) - 1)]


def product_simplices(p: Product2x2) -> list[Simplex4]:
    """Staircase triangulation: each triangle x triangle splits into 6 simplices."""
    out = []
    for t1 in triangulate_polygon(p.first):
        for t2 in triangulate_polygon(p.second):
            holder = Product2x2(t1, t2)
            # monotone lattice paths from (0,0) to (2,2)
            for steps in sorted(set(permutations("RRUU"))):
                a = b = 0
                verts = [holder._lift(t1.vertices[a], t2.vertices[b])]
                for s in steps:
                    if s == "R":
                        a += 1
                    else:
                        b += 1
                    verts.append(holder._lift(t1.vertices[a], t2.vertices[b]))
                out.append(Simplex4(tuple(verts)))
    return out


def box_simplices(b: Box4) -> list[Simplex4]:
    """The 24 ordering simplices of a box."""
    return [Simplex4(ordering_vertices(order, b.lo, b.hi)) for order in permutations(range(4))]


def apply_isometry(iso: IsometryMap, p: Piece) -> Union[Piece, tuple[Simplex4, ...]]:
    """Exact image of a piece.

    Boxes and products keep their kind whenever the map sends their factor
    planes onto coordinate planes; otherwise the image is returned as a tuple
    of simplices from the canonical subdivision.
    """
    if isinstance(p, Simplex4):
        return Simplex4(tuple(iso.apply_point(v) for v in p.vertices))
    if isinstance(p, Box4):
        sp = iso.as_signed_permutation()
        if sp is not None:
            perm, signs = sp
            ivs = []
            for i in range(4):
                lo, hi = p.intervals[perm[i]]
                t = iso.translation[i]
                ivs.append((lo + t, hi + t) if signs[i] > 0 else (t - hi, t - lo))
            return Box4(tuple(ivs))
        for pairing in _PLANE_PAIRINGS:
            image = apply_isometry(iso, p.as_product(pairing))
            if isinstance(image, Product2x2):
                return image
        return tuple(s for b in box_simplices(p) for s in (apply_isometry(iso, b),))
    if isinstance(p, Product2x2):
        f1 = _map_polygon(iso, p.first)
        f2 = _map_polygon(iso, p.second)
        if f1 is not None and f2 is not None and set(f1.plane) | set(f2.plane) == {0, 1, 2, 3}:
            return Product2x2(_translate_factor(f1, iso.translation), _translate_factor(f2, iso.translation))
        return tuple(apply_isometry(iso, s) for s in product_simplices(p))
    raise TypeError(f"not a piece: {p!r}")


def same_set(p: Union[Piece, tuple], q: Union[Piece, tuple]) -> bool:
    """Geometric equality of two pieces (convex hulls of equal vertex sets)."""
    if isinstance(p, tuple) or isinstance(q, tuple):
        return False
    return set(p.vertex_set()) == set(q.vertex_set())


# -- congruence --------------------------------------------------------------------------


def _profile(values: Sequence[QuadScalar]) -> frozenset:
    low = min(values)
    return frozenset(Counter(v - low for v in values).items())


def _signed_perm_search(v1, v2) -> Optional[IsometryMap]:
    target = frozenset(v2)
    anchor2 = min(v2)
    # a signed permutation can only send axis j to axis i if the coordinate
    # multisets agree up to translation
    prof2 = [_profile([w[i] for w in v2]) for i in range(4)]
    allowed = [[(j, s) for j in range(4) for s in (1, -1) if _profile([s * v[j] for v in v1]) == prof2[i]] for i in range(4)]
    for choice in product(*allowed):
        perm = tuple(j for j, _ in choice)
        if len(set(perm)) != 4:
            continue
        signs = tuple(s for _, s in choice)
        mapped = [tuple(v[perm[i]] if signs[i] > 0 else -v[perm[i]] for i in range(4)) for v in v1]
        t = _sub(anchor2, min(mapped))
        if frozenset(_add(m, t) for m in mapped) == target:
            return IsometryMap.signed_permutation(perm, signs, t)
    return None


def _distance_signature(v, verts) -> frozenset:
    return frozenset(Counter(sq_dist(v, w) for w in verts).items())


def _affine_frame(verts: Sequence[Point4]) -> list[int]:
    frame = [0]
    for k in range(1, len(verts)):
        trial = frame + [k]
        vecs = [_sub(verts[i], verts[frame[0]]) for i in trial[1:]]
        if _rank(vecs) == len(vecs):
            frame = trial
        if len(frame) == 5:
            break
    return frame


def _general_search(v1, v2) -> Optional[IsometryMap]:
    frame = _affine_frame(v1)
    if len(frame) != 5:
        return None
    target = frozenset(v2)
    sig2 = [_distance_signature(w, v2) for w in v2]
    cands = [[j for j in range(len(v2)) if sig2[j] == _distance_signature(v1[i], v1)] for i in frame]

    def extend(assigned: list[int]) -> Optional[IsometryMap]:
        depth = len(assigned)
        if depth == 5:
            f0, g0 = v1[frame[0]], v2[assigned[0]]
            e1 = [list(_sub(v1[frame[k]], f0)) for k in range(1, 5)]
            e2 = [list(_sub(v2[assigned[k]], g0)) for k in range(1, 5)]
            # rows of e1 are edge vectors; M e1_k = e2_k  <=>  e1 @ M^T = e2
            mt = _solve_matrix(e1, e2)
            if mt is None:
                return None
            m = tuple(tuple(mt[j][i] for j in range(4)) for i in range(4))
            try:
                iso = IsometryMap(m, (0, 0, 0, 0))
            except GeometryError:
                return None
            shift = _sub(g0, iso.apply_point(f0))
            iso = IsometryMap(m, shift)
            if frozenset(iso.apply_point(v) for v in v1) == target:
                return iso
            return None
        for j in cands[depth]:
            if j in assigned:
                continue
            if all(sq_dist(v1[frame[k]], v1[frame[depth]]) == sq_dist(v2[assigned[k]], v2[j]) for k in range(depth)):
                found = extend(assigned + [j])
                if found is not None:
                    return found
        return None

    return extend([])


def congruent(p1: Piece, p2: Piece) -> Optional[IsometryMap]:
    """Witness isometry with ``apply_isometry(w, p1)`` equal to ``p2`` as a set, or None.

    Signed coordinate permutations plus translation are tried first; the
    general search matches affine frames filtered by squared-distance
    multisets.
    """
    v1, v2 = p1.vertex_set(), p2.vertex_set()
    if len(v1) != len(v2) or piece_volume(p1) != piece_volume(p2):
        return None
    found = _signed_perm_search(v1, v2)
    if found is None:
        found = _general_search(v1, v2)
    return found


# -- containment, disjointness, tiling -----------------------------------------------------


def _inside(halfspaces, v) -> bool:
    return all(quad_sign(_dot(n, v) - c) <= 0 for n, c in halfspaces)


def contains(container: Piece, p: Piece) -> bool:
    """True iff every vertex of ``p`` satisfies the container's half-spaces."""
    if isinstance(container, Box4):
        lo, hi = container.lo, container.hi
        if isinstance(p, Product2x2):
            return all(
                quad_sign(v[k] - lo[axis]) >= 0 and quad_sign(hi[axis] - v[k]) >= 0
                for poly in (p.first, p.second)
                for v in poly.vertices
                for k, axis in enumerate(poly.plane)
            )
        return all(quad_sign(v[i] - lo[i]) >= 0 and quad_sign(hi[i] - v[i]) >= 0 for v in p.vertex_set() for i in range(4))
    if isinstance(container, Product2x2) and isinstance(p, Product2x2):
        if (container.first.plane, container.second.plane) == (p.first.plane, p.second.plane):
            return all(container.first.contains_point(v) for v in p.first.vertices) and all(
                container.second.contains_point(v) for v in p.second.vertices
            )
    hs = container.halfspaces()
    return all(_inside(hs, v) for v in p.vertex_set())


def interiors_disjoint(p: Piece, q: Piece) -> bool:
    """Sound disjointness test: True only if a facet hyperplane separates p and q.

    Complete for products of polygons (checked factorwise) and for pieces
    separated by one of their own facets; False means "not proven".
    """
    if isinstance(p, (Product2x2, Box4)) and isinstance(q, (Product2x2, Box4)):
        pp = p if isinstance(p, Product2x2) else p.as_product()
        qq = q if isinstance(q, Product2x2) else q.as_product()
        if pp.first.plane == qq.first.plane:
            return polygons_disjoint(pp.first, qq.first) or polygons_disjoint(pp.second, qq.second)
    for a, b in (p, q), (q, p):
        verts = b.vertex_set()
        for n, c in a.halfspaces():
            if all(quad_sign(_dot(n, v) - c) >= 0 for v in verts):
                return True
    return False


@dataclass(frozen=True)
class TilingCertificate:
    container_volume: QuadScalar
    piece_volumes: tuple[QuadScalar, ...]
    containment_ok: bool
    volume_sum_ok: bool
    verdict: bool
    disjoint_ok: Optional[bool] = None

    def __post_init__(self):
        if self.verdict != (self.containment_ok and self.volume_sum_ok):
            raise GeometryError("verdict must equal containment_ok and volume_sum_ok")

    @property
    def volume_sum(self) -> QuadScalar:
        total = ZERO
        for v in self.piece_volumes:
            total = total + v
        return total


def certify_tiling(container: Piece, pieces: Sequence[Piece], check_disjoint: bool = False) -> TilingCertificate:
    """Containment of every piece plus exact equality of volume sums.

    With ``check_disjoint`` the pairwise interior-disjointness of the pieces is
    also established (reported separately in ``disjoint_ok``).
    """
    vols = tuple(piece_volume(p) for p in pieces)
    cvol = piece_volume(container)
    total = ZERO
    for v in vols:
        total = total + v
    containment_ok = all(contains(container, p) for p in pieces)
    volume_ok = total == cvol
    disjoint = None
    if check_disjoint:
        disjoint = all(interiors_disjoint(a, b) for a, b in combinations(pieces, 2))
    return TilingCertificate(cvol, vols, containment_ok, volume_ok, containment_ok and volume_ok, disjoint)


# -- projection --------------------------------------------------------------------------

# x, y horizontal/vertical; z, w along the two diagonals at half length
DEFAULT_PROJECTION = (
    (Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(1)),
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(-1, 2), Fraction(1, 2)),
)


def piece_edges(p: Piece) -> list[tuple[Point4, Point4]]:
    if isinstance(p, Simplex4):
        return list(combinations(p.vertices, 2))
    if isinstance(p, Box4):
        p = p.as_product()
    out = []
    for a, b in p.first.edges():
        for q in p.second.vertices:
            out.append((p._lift(a, q), p._lift(b, q)))
    for a, b in p.second.edges():
        for q in p.first.vertices:
            out.append((p._lift(q, a), p._lift(q, b)))
    return out


def project_point(v: Point4, projection=DEFAULT_PROJECTION) -> Point2:
    x = y = ZERO
    for c, (px, py) in zip(v, projection):
        x = x + c * px
        y = y + c * py
    return x, y


def project_wireframe(p: Piece, projection=DEFAULT_PROJECTION) -> list[Segment2]:
    """Edges of the piece's vertex skeleton mapped through a 4x2 rational matrix."""
    projection = tuple(tuple(Fraction(x) for x in row) for row in projection)
    return [(project_point(a, projection), project_point(b, projection)) for a, b in piece_edges(p)]
