"""Decompositions of the n-cube: ordering simplices, pyramids and the Delta x Delta quartering."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Optional, Sequence

from .exact_scalar import DomainError, QuadScalar, Scalar, as_quad, quad_sign
from .geometry4 import (
    Box4,
    Product2x2,
    Simplex4,
    TilingCertificate,
    certify_tiling,
    cube4,
    make_polygon,
)

AXES = "xyzw"
MAX_N = 8


def _axis_name(i: int, n: int) -> str:
    return AXES[i] if n <= 4 else f"x{i + 1}"


def _check_n(n: int, low: int = 1) -> None:
    if not isinstance(n, int) or not (low <= n <= MAX_N):
        raise DomainError(f"n must be an integer in [{low}, {MAX_N}], got {n!r}")


@dataclass(frozen=True, order=True)
class OrderingSimplex:
    """The region ``0 <= x[p0] <= x[p1] <= ... <= 1`` for a permutation ``p``."""

    permutation: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise DomainError(f"not a permutation: {self.permutation}")

    @property
    def n(self) -> int:
        return len(self.permutation)

    @classmethod
    def parse(cls, text: str) -> OrderingSimplex:
        """Parse chains like ``"x<=z<=y<=w"``."""
        names = [t.strip() for t in text.replace("≤", "<=").split("<=")]
        try:
            return cls(tuple(AXES.index(t) for t in names))
        except ValueError as exc:
            raise DomainError(f"bad ordering {text!r}") from exc

    def label(self) -> str:
        return "<=".join(_axis_name(i, self.n) for i in self.permutation)

    def vertex_matrix(self) -> VertexMatrix:
        n = self.n
        rows = [tuple([0] * n)]
        cur = [0] * n
        for axis in reversed(self.permutation):
            cur[axis] = 1
            rows.append(tuple(cur))
        return VertexMatrix(tuple(rows))

    def vertices(self, edge: Scalar = 1) -> list[tuple[QuadScalar, ...]]:
        return self.vertex_matrix().scaled(edge)

    def simplex(self, edge: Scalar = 1) -> Simplex4:
        if self.n != 4:
            raise DomainError("only 4-dimensional orderings are materialized as geometry")
        return Simplex4(tuple(self.vertices(edge)))

    def maximal_axis(self) -> int:
        return self.permutation[-1]

    def precedes(self, a: int, b: int) -> bool:
        return self.permutation.index(a) < self.permutation.index(b)


@dataclass(frozen=True)
class VertexMatrix:
    """(n+1) x n 0/1 array whose rows are the vertices of one right simplex."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = self.rows
        n = len(rows) - 1
        if n < 1 or any(len(r) != n for r in rows):
            raise DomainError("a vertex matrix has n+1 rows of n entries")
        if any(x not in (0, 1) for r in rows for x in r):
            raise DomainError("entries must be 0 or 1")
        if any(rows[0]) or not all(rows[-1]):
            raise DomainError("first row must be zeros and last row ones")
        for a, b in zip(rows, rows[1:]):
            flips = [(x, y) for x, y in zip(a, b) if x != y]
            if len(flips) != 1 or flips[0] != (0, 1):
                raise DomainError("consecutive rows must differ by turning one 0 into a 1")

    @property
    def n(self) -> int:
        return len(self.rows) - 1

    def ordering(self) -> OrderingSimplex:
        switched = []
        for a, b in zip(self.rows, self.rows[1:]):
            switched.append(next(i for i in range(self.n) if a[i] != b[i]))
        return OrderingSimplex(tuple(reversed(switched)))

    def scaled(self, edge: Scalar = 1) -> list[tuple[QuadScalar, ...]]:
        e = as_quad(edge)
        zero = as_quad(0)
        return [tuple(e if x else zero for x in row) for row in self.rows]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in r) for r in self.rows)


def l7_vertex_matrices(n: int) -> list[VertexMatrix]:
    """All n! vertex matrices, built by hanging a column of 1s under each 0.

    Column positions are taken right to left (the order in which the arrays
    are usually drawn) and each is filled depth-first with the (n-1) list.
    """
    _check_n(n)
    if n == 1:
        return [VertexMatrix(((0,), (1,)))]
    smaller = l7_vertex_matrices(n - 1)
    out = []
    for col in reversed(range(n)):
        for sub in smaller:
            rows = [tuple([0] * n)]
            for r in sub.rows:
                row = list(r)
                row.insert(col, 1)
                rows.append(tuple(row))
            out.append(VertexMatrix(tuple(rows)))
    return out


def all_orderings(n: int) -> list[OrderingSimplex]:
    return [OrderingSimplex(p) for p in permutations(range(n))]


def _det_gauss(rows: Sequence[Sequence[QuadScalar]]) -> QuadScalar:
    m = [list(r) for r in rows]
    n = len(m)
    result = as_quad(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return as_quad(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        result = result * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if not m[r][col].is_zero():
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return result


def _int_det(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def simplex_volume(vertices: Sequence[Sequence[QuadScalar]]) -> QuadScalar:
    """|det(v_k - v_0)| / n! for an n-simplex given by n+1 points."""
    v0 = vertices[0]
    rows = [[a - b for a, b in zip(v, v0)] for v in vertices[1:]]
    return abs(_det_gauss(rows)) / factorial(len(rows))


def permutation_witness(src: OrderingSimplex, dst: OrderingSimplex) -> tuple[int, ...]:
    """Coordinate permutation ``perm`` with ``out[i] = x[perm[i]]`` taking src onto dst."""
    perm = [0] * src.n
    for a, b in zip(src.permutation, dst.permutation):
        perm[b] = a
    return tuple(perm)


def apply_coordinate_permutation(perm: Sequence[int], point: Sequence) -> tuple:
    return tuple(point[perm[i]] for i in range(len(perm)))


@dataclass(frozen=True)
class CubeDecomposition:
    """The n! ordering simplices of ``[0, edge]^n``."""

    n: int
    edge: QuadScalar
    matrices: tuple[VertexMatrix, ...]
    container: Optional[Box4]
    pieces: tuple[Simplex4, ...]

    @property
    def orderings(self) -> tuple[OrderingSimplex, ...]:
        return tuple(m.ordering() for m in self.matrices)

    def vertex_lists(self) -> list[list[tuple[QuadScalar, ...]]]:
        return [m.scaled(self.edge) for m in self.matrices]

    def volumes(self) -> list[QuadScalar]:
        scale = self.edge**self.n / factorial(self.n)
        return [scale * abs(_int_det([list(r) for r in m.rows[1:]])) for m in self.matrices]

    def certificate(self) -> TilingCertificate:
        if self.container is not None:
            return certify_tiling(self.container, self.pieces, check_disjoint=True)
        # vertices are 0/1 rows scaled by a positive edge, so containment is entrywise
        inside = quad_sign(self.edge) > 0 and all(x in (0, 1) for m in self.matrices for r in m.rows for x in r)
        unit = [Fraction(abs(_int_det([list(r) for r in m.rows[1:]])), factorial(self.n)) for m in self.matrices]
        ok = sum(unit) == 1
        vols = tuple(self.edge**self.n * u for u in unit)
        distinct = len(set(self.orderings)) == len(self.matrices)
        return TilingCertificate(self.edge**self.n, vols, inside, ok, inside and ok, distinct)

    def congruence_witnesses(self, star: bool = False) -> dict[tuple[int, int], tuple[int, ...]]:
        """Verified coordinate-permutation witnesses for every pair i < j.

        With ``star`` only pairs (0, j) are produced; composing them covers all pairs.
        """
        lists = [set(v) for v in self.vertex_lists()]
        out = {}
        orders = self.orderings
        for i in range(1 if star else len(orders)):
            for j in range(i + 1, len(orders)):
                perm = permutation_witness(orders[i], orders[j])
                image = {apply_coordinate_permutation(perm, v) for v in lists[i]}
                if image != lists[j]:
                    raise AssertionError(f"witness {perm} failed for simplices {i}, {j}")
                out[(i, j)] = perm
        return out


def simplicial_decomposition(n: int, edge: Scalar = 1) -> CubeDecomposition:
    _check_n(n)
    e = as_quad(edge)
    if quad_sign(e) <= 0:
        raise DomainError("edge must be positive")
    mats = tuple(l7_vertex_matrices(n))
    if n == 4:
        pieces = tuple(Simplex4(tuple(m.scaled(e))) for m in mats)
        return CubeDecomposition(n, e, mats, cube4(e), pieces)
    return CubeDecomposition(n, e, mats, None, ())


@dataclass(frozen=True)
class Pyramid:
    """``P_k``: points of the unit n-cube whose coordinate ``k`` is maximal."""

    n: int
    apex_axis: int
    orderings: tuple[OrderingSimplex, ...]

    @property
    def label(self) -> str:
        return f"P{self.apex_axis + 1}"

    def volume(self) -> QuadScalar:
        total = as_quad(0)
        for o in self.orderings:
            total = total + simplex_volume(o.vertices())
        return total

    def simplices(self) -> list[Simplex4]:
        return [o.simplex() for o in self.orderings]

    def refinement_inside(self) -> bool:
        """Every refining simplex satisfies ``x_i <= x_k``."""
        k = self.apex_axis
        return all(v[i] <= v[k] for o in self.orderings for v in o.vertices() for i in range(self.n))


def pyramidal_decomposition(n: int) -> list[Pyramid]:
    """P_n, P_(n-1), ..., P_1, each refined into its (n-1)! ordering simplices."""
    _check_n(n, low=2)
    out = []
    for k in reversed(range(n)):
        orders = tuple(o for o in all_orderings(n) if o.maximal_axis() == k)
        out.append(Pyramid(n, k, orders))
    return out


# -- the four Delta x Delta pieces -----------------------------------------------------------

QUARTER_LABELS = (
    "D_{x<=y} x D_{z<=w}",
    "D_{y<=x} x D_{z<=w}",
    "D_{x<=y} x D_{w<=z}",
    "D_{y<=x} x D_{w<=z}",
)


def _half_square(plane: tuple[int, int], lower_first: bool, e: QuadScalar):
    zero = as_quad(0)
    if lower_first:
        # first coordinate <= second
        return make_polygon(plane, [(zero, zero), (e, e), (zero, e)])
    return make_polygon(plane, [(zero, zero), (e, zero), (e, e)])


def quarter_hypercube(edge: Scalar = 1) -> list[Product2x2]:
    """The four products of right isosceles triangles filling ``[0, edge]^4``."""
    e = as_quad(edge)
    if quad_sign(e) <= 0:
        raise DomainError("edge must be positive")
    out = []
    for zw in (True, False):
        for xy in (True, False):
            out.append(Product2x2(_half_square((0, 1), xy, e), _half_square((2, 3), zw, e)))
    return out


def delta_delta_class(o: OrderingSimplex) -> int:
    """Index in QUARTER_LABELS of the quarter containing an ordering simplex."""
    x, y, z, w = range(4)
    return (0 if o.precedes(x, y) else 1) + (0 if o.precedes(z, w) else 2)


def quartering_table() -> list[list[int]]:
    """Counts of ordering simplices shared by each quarter (rows) and pyramid P4..P1 (cols)."""
    table = [[0] * 4 for _ in range(4)]
    for o in all_orderings(4):
        table[delta_delta_class(o)][3 - o.maximal_axis()] += 1
    return table


_SIX = {
    "DeltaDelta": ("x<=y<=z<=w", "x<=z<=w<=y", "x<=z<=y<=w", "z<=x<=w<=y", "z<=x<=y<=w", "z<=w<=x<=y"),
    "P4": ("x<=y<=z<=w", "y<=x<=z<=w", "x<=z<=y<=w", "y<=z<=x<=w", "z<=x<=y<=w", "z<=y<=x<=w"),
}


@dataclass(frozen=True)
class SixRefinement:
    piece_id: str
    orderings: tuple[OrderingSimplex, ...]
    shared: tuple[OrderingSimplex, ...]

    def simplices(self, edge: Scalar = 1) -> list[Simplex4]:
        return [o.simplex(edge) for o in self.orderings]


def refine_to_six(piece_id: str) -> SixRefinement:
    """Six ordering simplices of ``D_{x<=y} x D_{z<=w}`` or of ``P4``, in listing order.

    ``shared`` holds the orderings common to both refinements.
    """
    if piece_id not in _SIX:
        raise DomainError(f"unknown piece id {piece_id!r}; expected one of {sorted(_SIX)}")
    orders = tuple(OrderingSimplex.parse(t) for t in _SIX[piece_id])
    other = {OrderingSimplex.parse(t) for t in _SIX["P4" if piece_id == "DeltaDelta" else "DeltaDelta"]}
    shared = tuple(o for o in orders if o in other)
    return SixRefinement(piece_id, orders, shared)


@dataclass(frozen=True)
class NicomachusResult:
    n: int
    sum_of_cubes: int
    triangular_squared: int

    @property
    def equal(self) -> bool:
        return self.sum_of_cubes == self.triangular_squared


def nicomachus_check(n: int) -> NicomachusResult:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    cubes = sum(k**3 for k in range(1, n + 1))
    tri = n * (n + 1) // 2
    return NicomachusResult(n, cubes, tri * tri)


def cube_volume_fraction(n: int) -> Fraction:
    return Fraction(1, factorial(n))
