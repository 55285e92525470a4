"""Multinomial lattice addressing, signed box expansions and their cancellation."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import product
from math import factorial, prod
from typing import Iterable, Mapping, Optional, Sequence

from .exact_scalar import DomainError, QuadScalar, Scalar, as_quad, quad_sign

MAX_TERMS = 10**6

Monomial = tuple[tuple[str, int], ...]


def monomial(*pairs: tuple[str, int]) -> Monomial:
    """Canonical monomial key: sorted (symbol, exponent) pairs with exponents > 0."""
    acc: Counter = Counter()
    for s, e in pairs:
        acc[s] += e
    return tuple(sorted((s, e) for s, e in acc.items() if e))


def monomial_from_symbols(symbols: Iterable[str]) -> Monomial:
    return monomial(*((s, 1) for s in symbols))


def monomial_text(m: Monomial) -> str:
    if not m:
        return "1"
    return "".join(s if e == 1 else f"{s}^{e}" for s, e in m)


class MonomialPolynomial:
    """Integer-coefficient polynomial keyed by monomials; zero coefficients are dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, int]] = None):
        self._terms: dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            if c:
                self._terms[monomial(*m)] = self._terms.get(monomial(*m), 0) + c
        self._terms = {m: c for m, c in self._terms.items() if c}

    @classmethod
    def symbol(cls, name: str) -> MonomialPolynomial:
        return cls({((name, 1),): 1})

    @classmethod
    def constant(cls, c: int) -> MonomialPolynomial:
        return cls({(): c})

    @classmethod
    def parse_terms(cls, terms: Mapping[str, int]) -> MonomialPolynomial:
        """Build from keys like ``"a^2b^2"`` or ``"abc"``."""
        out = {}
        for text, c in terms.items():
            pairs = []
            i = 0
            while i < len(text):
                sym = text[i]
                i += 1
                exp = 1
                if i < len(text) and text[i] == "^":
                    j = i + 1
                    while j < len(text) and text[j].isdigit():
                        j += 1
                    exp = int(text[i + 1 : j])
                    i = j
                pairs.append((sym, exp))
            out[monomial(*pairs)] = c
        return cls(out)

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: MonomialPolynomial) -> MonomialPolynomial:
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0) + c
        return MonomialPolynomial(acc)

    def __neg__(self) -> MonomialPolynomial:
        return MonomialPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: MonomialPolynomial) -> MonomialPolynomial:
        return self + (-other)

    def __mul__(self, other) -> MonomialPolynomial:
        if isinstance(other, int):
            return MonomialPolynomial({m: c * other for m, c in self._terms.items()})
        acc: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = monomial(*m1, *m2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return MonomialPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MonomialPolynomial:
        out = MonomialPolynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def substitute(self, name: str, value: MonomialPolynomial) -> MonomialPolynomial:
        out = MonomialPolynomial()
        for m, c in self._terms.items():
            term = MonomialPolynomial.constant(c)
            for s, e in m:
                term = term * (value**e if s == name else MonomialPolynomial({((s, e),): 1}))
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Scalar]) -> QuadScalar:
        total = as_quad(0)
        for m, c in self._terms.items():
            term = as_quad(c)
            for s, e in m:
                term = term * as_quad(values[s]) ** e
            total = total + term
        return total

    def sorted_items(self) -> list[tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda kv: (-sum(e for _, e in kv[0]), kv[1] < 0, kv[0]))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for m, c in self.sorted_items():
            body = (str(abs(c)) if abs(c) != 1 or not m else "") + (monomial_text(m) if m else "")
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"MonomialPolynomial({self.to_text()})"

    def as_string_map(self) -> dict[str, int]:
        return {monomial_text(m): c for m, c in self.sorted_items()}


# -- multinomial lattice --------------------------------------------------------------------


@dataclass(frozen=True)
class MultinomialClass:
    exponents: tuple[int, ...]
    coefficient: int
    addresses: tuple[tuple[int, ...], ...]

    @property
    def level(self) -> int:
        return sum(self.addresses[0])

    def monomial(self) -> Monomial:
        return monomial(*((f"x{j + 1}", e) for j, e in enumerate(self.exponents)))

    def label(self) -> str:
        body = monomial_text(self.monomial())
        return body if self.coefficient == 1 else f"{self.coefficient}{body}"


@dataclass(frozen=True)
class LatticeTerm:
    address: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def level(self) -> int:
        return sum(self.address)


def _exponents(address: Sequence[int], k: int) -> tuple[int, ...]:
    counts = [0] * k
    for i in address:
        counts[i] += 1
    return tuple(counts)


def multinomial_coefficient(exponents: Sequence[int]) -> int:
    return factorial(sum(exponents)) // prod(factorial(e) for e in exponents)


def multinomial_expand(k: int, n: int) -> list[LatticeTerm]:
    """Every lattice address in ``[0, k-1]^n`` with the monomial it labels.

    Address entry ``i`` at position ``l`` selects ``x_(i+1)`` from factor ``l``.
    """
    if k < 1 or n < 1:
        raise DomainError("k and n must be positive")
    if k**n > MAX_TERMS:
        raise DomainError(f"k^n = {k**n} exceeds the limit {MAX_TERMS}")
    return [LatticeTerm(addr, _exponents(addr, k)) for addr in product(range(k), repeat=n)]


def multinomial_classes(k: int, n: int) -> list[MultinomialClass]:
    """Terms grouped by monomial, ordered by level then by first address."""
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = defaultdict(list)
    for t in multinomial_expand(k, n):
        groups[t.exponents].append(t.address)
    out = []
    for exps, addrs in groups.items():
        addrs.sort(reverse=True)
        out.append(MultinomialClass(exps, multinomial_coefficient(exps), tuple(addrs)))
    out.sort(key=lambda c: (c.level, c.addresses))
    if sum(c.coefficient for c in out) != k**n:
        raise AssertionError("class coefficients do not sum to k^n")
    return out


# -- Heron right-hand side ------------------------------------------------------------------

SYMBOLS = ("a", "b", "c")
# per-factor signs for (a, b, c) in (a+b+c)(a+b-c)(a-b+c)(-a+b+c)
HERON_FACTOR_SIGNS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))


@dataclass(frozen=True)
class SignedBox:
    sign: int
    address: tuple[int, ...]
    symbols: tuple[str, ...]
    volume: QuadScalar = field(compare=False)

    @property
    def level(self) -> int:
        return sum(self.address)

    def monomial(self) -> Monomial:
        return monomial_from_symbols(self.symbols)

    def signed_volume(self) -> QuadScalar:
        return self.volume if self.sign > 0 else -self.volume

    def label(self) -> str:
        return ("+" if self.sign > 0 else "-") + monomial_text(self.monomial())


def signed_box_expansion(
    lengths: Sequence[QuadScalar], factor_signs: Sequence[Sequence[int]], symbols: Sequence[str]
) -> list[SignedBox]:
    """Distribute a product of signed sums into one box per lattice address."""
    k = len(lengths)
    out = []
    for addr in product(range(k), repeat=len(factor_signs)):
        sign = prod(factor_signs[l][i] for l, i in enumerate(addr))
        vol = as_quad(1)
        for i in addr:
            vol = vol * lengths[i]
        out.append(SignedBox(sign, addr, tuple(symbols[i] for i in addr), vol))
    return out


def heron_signed_expansion(a: Scalar, b: Scalar, c: Scalar) -> list[SignedBox]:
    """The 81 signed boxes of ``(a+b+c)(a+b-c)(a-b+c)(-a+b+c)``."""
    lengths = [as_quad(a), as_quad(b), as_quad(c)]
    for name, v in zip(SYMBOLS, lengths):
        if quad_sign(v) <= 0:
            raise DomainError(f"length {name} must be positive")
    return signed_box_expansion(lengths, HERON_FACTOR_SIGNS, SYMBOLS)


def heron_product(a: Scalar, b: Scalar, c: Scalar) -> QuadScalar:
    a, b, c = as_quad(a), as_quad(b), as_quad(c)
    return (a + b + c) * (a + b - c) * (a - b + c) * (-a + b + c)


HERON_NET = MonomialPolynomial.parse_terms({"a^2b^2": 2, "a^2c^2": 2, "b^2c^2": 2, "a^4": -1, "b^4": -1, "c^4": -1})


def group_by_level(terms: Sequence[SignedBox]) -> dict[int, list[SignedBox]]:
    out: dict[int, list[SignedBox]] = defaultdict(list)
    for t in terms:
        out[t.level].append(t)
    return {k: out[k] for k in sorted(out)}


def group_by_class(terms: Sequence[SignedBox]) -> dict[tuple[int, Monomial], list[SignedBox]]:
    out: dict[tuple[int, Monomial], list[SignedBox]] = defaultdict(list)
    for t in terms:
        out[(t.level, t.monomial())].append(t)
    return {k: sorted(out[k], key=lambda t: t.address) for k in sorted(out)}


@dataclass(frozen=True)
class Cancellation:
    net: MonomialPolynomial
    pairs: tuple[tuple[SignedBox, SignedBox], ...]
    leftovers: tuple[SignedBox, ...]
    input_count: int

    def pairs_cancel(self) -> bool:
        return all((p.signed_volume() + m.signed_volume()).is_zero() for p, m in self.pairs)

    def level_local(self) -> bool:
        return all(p.level == m.level for p, m in self.pairs)

    def accounts_for_all(self) -> bool:
        used = [t.address for pair in self.pairs for t in pair] + [t.address for t in self.leftovers]
        return len(used) == len(set(used)) == self.input_count

    def max_class_size(self) -> int:
        sizes = Counter((t.level, t.monomial()) for pair in self.pairs for t in pair)
        sizes.update((t.level, t.monomial()) for t in self.leftovers)
        return max(sizes.values(), default=0)


def cancel(terms: Sequence[SignedBox]) -> Cancellation:
    """Pair opposite signs within each (level, monomial) bucket, first with first."""
    pairs = []
    leftovers = []
    for _, bucket in group_by_class(terms).items():
        pos = [t for t in bucket if t.sign > 0]
        neg = [t for t in bucket if t.sign < 0]
        n = min(len(pos), len(neg))
        pairs.extend(zip(pos[:n], neg[:n]))
        leftovers.extend(pos[n:] + neg[n:])
    net: dict[Monomial, int] = {}
    for t in leftovers:
        net[t.monomial()] = net.get(t.monomial(), 0) + t.sign
    return Cancellation(MonomialPolynomial(net), tuple(pairs), tuple(leftovers), len(terms))


@dataclass(frozen=True)
class SignedCancellationCertificate:
    """Checks for an expansion of a signed product into boxes followed by cancellation."""

    term_count: int
    pairs_cancel_ok: bool
    level_local_ok: bool
    accounting_ok: bool
    net_matches_product: bool
    net_text: str
    value: QuadScalar

    @property
    def verdict(self) -> bool:
        return self.pairs_cancel_ok and self.level_local_ok and self.accounting_ok and self.net_matches_product


def certify_heron_expansion(a: Scalar, b: Scalar, c: Scalar) -> tuple[Cancellation, SignedCancellationCertificate]:
    terms = heron_signed_expansion(a, b, c)
    res = cancel(terms)
    values = {"a": a, "b": b, "c": c}
    value = res.net.evaluate(values)
    cert = SignedCancellationCertificate(
        len(terms),
        res.pairs_cancel(),
        res.level_local(),
        res.accounts_for_all(),
        value == heron_product(a, b, c),
        res.net.to_text(),
        value,
    )
    return res, cert
