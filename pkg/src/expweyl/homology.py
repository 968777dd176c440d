"""Hochschild and cyclic differentials on finite windows.

Chains are finite sums of monomial tensors m_0 x ... x m_n over a common
signature, kept in the normalized model: a tensor with the unit monomial in
any position >= 1 is degenerate and dropped.  In that model b^2 = 0,
bB + Bb = 0, and B^2 = 0 hold exactly (B re-inserts the unit in position 0,
so a second application dies under normalization).

Windows are finite monomial lists giving exact coordinates for elements
supported on them; ranks computed over a window are window-relative
truncation numbers, not homology of the full algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Element, Monomial, WeylAlgebra, monomial_sort_key
from .errors import DegreeZero, SignatureMismatch, WindowOverflow, ZeroElement
from .linalg import combination, span_rank
from .scalars import Scalar


class Chain:
    """Degree-n chain: dict from (n+1)-tuples of Monomials to Scalars."""

    __slots__ = ("algebra", "degree", "terms")

    def __init__(self, algebra: WeylAlgebra, degree: int, terms):
        if degree < 0:
            raise SignatureMismatch("chain degree must be >= 0")
        unit = algebra.one_monomial
        norm: dict[tuple[Monomial, ...], Scalar] = {}
        for key, coeff in terms.items():
            key = tuple(key)
            if len(key) != degree + 1:
                raise SignatureMismatch("tensor length differs from degree + 1")
            if isinstance(coeff, Scalar) and coeff.is_zero:
                continue
            if any(m == unit for m in key[1:]):
                continue  # degenerate in the normalized model
            if key in norm:
                norm[key] = norm[key] + coeff
            else:
                norm[key] = coeff
        self.algebra = algebra
        self.degree = degree
        self.terms = {k: c for k, c in norm.items() if not c.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (
            self.algebra.signature == other.algebra.signature
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms)))

    def __add__(self, other: "Chain") -> "Chain":
        if self.degree != other.degree:
            raise SignatureMismatch("chain degrees differ")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Chain(self.algebra, self.degree, terms)

    def __neg__(self) -> "Chain":
        return Chain(self.algebra, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scale(self, c) -> "Chain":
        return Chain(self.algebra, self.degree, {k: v * c for k, v in self.terms.items()})

    def sorted_terms(self):
        return sorted(
            self.terms.items(), key=lambda kc: tuple(monomial_sort_key(m) for m in kc[0])
        )

    def __repr__(self):
        return f"Chain(degree={self.degree}, tensors={len(self.terms)})"


def tensor_chain(factors, coeff=1) -> Chain:
    """Multilinear expansion of an Element tensor a_0 x ... x a_n."""
    factors = list(factors)
    if not factors:
        raise SignatureMismatch("a chain needs at least one tensor factor")
    algebra = factors[0].algebra
    field = algebra.field
    c0 = coeff if isinstance(coeff, Scalar) else field.from_rational(coeff)
    terms: dict[tuple[Monomial, ...], Scalar] = {(): c0}
    for f in factors:
        if f.algebra.signature != algebra.signature:
            raise SignatureMismatch("tensor factors over different signatures")
        new: dict[tuple[Monomial, ...], Scalar] = {}
        for key, c in terms.items():
            for m, cm in f.terms.items():
                k2 = key + (m,)
                cc = c * cm
                new[k2] = new[k2] + cc if k2 in new else cc
        terms = new
    return Chain(algebra, len(factors) - 1, terms)


def hochschild_b(c: Chain) -> Chain:
    """b(a_0 x ... x a_n) = sum_i (-1)^i (... a_i a_{i+1} ...) + (-1)^n a_n a_0 x ..."""
    if c.degree == 0:
        raise DegreeZero("b is defined on chains of degree >= 1")
    alg = c.algebra
    n = c.degree
    out: dict[tuple[Monomial, ...], Scalar] = {}

    def put(key, coeff):
        out[key] = out[key] + coeff if key in out else coeff

    for key, coeff in c.terms.items():
        for i in range(n):
            prod = alg.mul(alg.from_term(key[i]), alg.from_term(key[i + 1]))
            sign = 1 if i % 2 == 0 else -1
            for m, cm in prod.terms.items():
                k2 = key[:i] + (m,) + key[i + 2 :]
                put(k2, coeff * cm if sign > 0 else -(coeff * cm))
        prod = alg.mul(alg.from_term(key[n]), alg.from_term(key[0]))
        sign = 1 if n % 2 == 0 else -1
        for m, cm in prod.terms.items():
            k2 = (m,) + key[1:n]
            put(k2, coeff * cm if sign > 0 else -(coeff * cm))
    return Chain(alg, n - 1, out)


def connes_B(c: Chain) -> Chain:
    """Normalized cyclic operator B = sum_i (-1)^{ni} 1 x a_i x ... x a_{i-1}."""
    alg = c.algebra
    n = c.degree
    unit = alg.one_monomial
    out: dict[tuple[Monomial, ...], Scalar] = {}
    for key, coeff in c.terms.items():
        for i in range(n + 1):
            sign = 1 if (n * i) % 2 == 0 else -1
            k2 = (unit,) + key[i:] + key[:i]
            cc = coeff if sign > 0 else -coeff
            out[k2] = out[k2] + cc if k2 in out else cc
    return Chain(alg, n + 1, out)


class Window:
    """Finite ordered list of distinct monomials with exact coordinates."""

    def __init__(self, algebra: WeylAlgebra, monomials):
        monomials = tuple(monomials)
        if len(set(monomials)) != len(monomials):
            raise SignatureMismatch("window monomials must be distinct")
        self.algebra = algebra
        self.monomials = monomials
        self._index = {m: i for i, m in enumerate(monomials)}

    def __len__(self):
        return len(self.monomials)

    def __contains__(self, m: Monomial) -> bool:
        return m in self._index

    def coordinates(self, P: Element) -> dict[Monomial, Scalar]:
        for m in P.terms:
            if m not in self._index:
                raise WindowOverflow("element has support outside the window")
        return dict(P.terms)

    @classmethod
    def spanning(cls, algebra: WeylAlgebra, elements) -> "Window":
        """The window of all monomials appearing in the given elements."""
        seen: dict[Monomial, None] = {}
        for e in elements:
            for m in e.terms:
                seen.setdefault(m)
        ordered = sorted(seen, key=monomial_sort_key)
        return cls(algebra, ordered)


@dataclass(frozen=True)
class SpanCheck:
    inside: bool
    combination: tuple[Scalar, ...] | None


def commutator_span_check(f: Element, pairs, window: Window | None = None) -> SpanCheck:
    """Exact membership of f in the span of the commutators [P_i, Q_i].

    With a window given, f and every commutator must be supported on it
    (WindowOverflow otherwise); without one, the spanning window of the
    inputs is used.
    """
    alg = f.algebra
    comms = [alg.commutator(P, Q) for P, Q in pairs]
    if window is not None:
        for e in comms + [f]:
            window.coordinates(e)
    vectors = [dict(e.terms) for e in comms]
    coeffs = combination(vectors, dict(f.terms), alg.field)
    if coeffs is None:
        return SpanCheck(False, None)
    return SpanCheck(True, tuple(coeffs))


@dataclass(frozen=True)
class WindowRankReport:
    """Rank data of b on window chains; window-relative numbers only."""

    degree: int
    chains: int
    rank: int
    nullity: int

    def as_text(self) -> str:
        return (
            f"degree {self.degree}: {self.chains} chains, "
            f"rank {self.rank}, nullity {self.nullity} (window-relative)"
        )


def window_chain_basis(window: Window, degree: int) -> list[tuple[Monomial, ...]]:
    """Normalized tensor basis: all factors in the window, no unit past slot 0."""
    unit = window.algebra.one_monomial
    tail = [m for m in window.monomials if m != unit]
    basis: list[tuple[Monomial, ...]] = []

    def grow(key):
        if len(key) == degree + 1:
            basis.append(key)
            return
        for m in tail:
            grow(key + (m,))

    for m0 in window.monomials:
        grow((m0,))
    return basis


def window_rank(window: Window, degree: int) -> WindowRankReport:
    """Exact rank of b from degree to degree-1 on the window chain basis.

    The image of every basis chain must stay on the window, otherwise
    WindowOverflow.
    """
    alg = window.algebra
    basis = window_chain_basis(window, degree)
    if degree == 0 or not basis:
        return WindowRankReport(degree, len(basis), 0, len(basis))
    field = alg.field
    images = []
    for key in basis:
        img = hochschild_b(Chain(alg, degree, {key: field.one}))
        for k2 in img.terms:
            for m in k2:
                if m not in window:
                    raise WindowOverflow(
                        "boundary of a window chain leaves the window"
                    )
        images.append(img.terms)
    rank = span_rank(images, field)
    return WindowRankReport(degree, len(basis), rank, len(basis) - rank)
