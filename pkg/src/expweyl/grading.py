"""Filtration by exponential order, degree maps, and graded-symbol calculus.

The filtration weight of a monomial is |a| + l1(beta) + l1(gamma) + d summed
over variables.  Top-order parts live in a commutative algebra where the
derivative symbol of D_i is written y_i.  The literature claim that
commutators strictly drop order is false in general here (the E relation
raises order); filtration_diagnostic reports the actual behavior with
witnesses instead of assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Element, Monomial, WeylAlgebra
from .errors import NotHomogeneous, SignatureMismatch, ZeroElement
from .scalars import GroupElement, Scalar

__all__ = [
    "OrderWeights",
    "GrMonomial",
    "GrElement",
    "order",
    "exp_degree",
    "power_degree",
    "symbol",
    "full_symbol",
    "gr_mul",
    "filtration_diagnostic",
    "FiltrationReport",
]


@dataclass(frozen=True)
class OrderWeights:
    """Per-symbol-class weights for the filtration; defaults give |a|+|b|+|c|+d."""

    tower: int = 1
    exponential: int = 1
    power: int = 1
    derivative: int = 1


_DEFAULT_WEIGHTS = OrderWeights()


def _monomial_order(m: Monomial, w: OrderWeights) -> int:
    return (
        w.tower * sum(abs(ai) for ai in m.a)
        + w.exponential * sum(sum(abs(c) for c in row) for row in m.beta)
        + w.power * sum(sum(abs(c) for c in row) for row in m.gamma)
        + w.derivative * sum(m.d)
    )


def order(P: Element, weights: OrderWeights = _DEFAULT_WEIGHTS) -> int:
    """Filtration order: maximal weight over the terms of P."""
    if P.is_zero:
        raise ZeroElement("the zero element has no order")
    return max(_monomial_order(m, weights) for m in P.terms)


def _total_rows(rows: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    return tuple(sum(col) for col in zip(*rows))


def exp_degree(P: Element) -> GroupElement:
    """Common total exponential degree of P (sum of beta rows per term)."""
    if P.is_zero:
        raise ZeroElement("the zero element has no degree")
    degrees = {_total_rows(m.beta) for m in P.terms}
    if len(degrees) > 1:
        raise NotHomogeneous("terms carry different exponential degrees")
    return GroupElement(degrees.pop())


def power_degree(P: Element) -> GroupElement:
    """Common total power degree of P (sum of gamma rows per term)."""
    if P.is_zero:
        raise ZeroElement("the zero element has no degree")
    degrees = {_total_rows(m.gamma) for m in P.terms}
    if len(degrees) > 1:
        raise NotHomogeneous("terms carry different power degrees")
    return GroupElement(degrees.pop())


class GrMonomial:
    """Commutative monomial: E, exponential, and power data plus y exponents."""

    __slots__ = ("a", "beta", "gamma", "y", "_hash")

    def __init__(
        self,
        a: tuple[int, ...],
        beta: tuple[tuple[int, ...], ...],
        gamma: tuple[tuple[int, ...], ...],
        y: tuple[int, ...],
    ):
        self.a = a
        self.beta = beta
        self.gamma = gamma
        self.y = y
        self._hash = hash((a, beta, gamma, y))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, GrMonomial):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.a == other.a
            and self.beta == other.beta
            and self.gamma == other.gamma
            and self.y == other.y
        )

    def __repr__(self):
        return f"GrMonomial(a={self.a}, beta={self.beta}, gamma={self.gamma}, y={self.y})"

    def order(self, w: OrderWeights = _DEFAULT_WEIGHTS) -> int:
        return (
            w.tower * sum(abs(ai) for ai in self.a)
            + w.exponential * sum(sum(abs(c) for c in row) for row in self.beta)
            + w.power * sum(sum(abs(c) for c in row) for row in self.gamma)
            + w.derivative * sum(self.y)
        )

    def mul(self, other: "GrMonomial") -> "GrMonomial":
        return GrMonomial(
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(
                tuple(x + y for x, y in zip(r1, r2))
                for r1, r2 in zip(self.beta, other.beta)
            ),
            tuple(
                tuple(x + y for x, y in zip(r1, r2))
                for r1, r2 in zip(self.gamma, other.gamma)
            ),
            tuple(x + y for x, y in zip(self.y, other.y)),
        )


def gr_monomial_sort_key(m: GrMonomial):
    flat_gamma = tuple(c for g in m.gamma for c in g)
    flat_beta = tuple(c for b in m.beta for c in b)
    return (m.order(), m.y, flat_gamma, flat_beta, m.a)


class GrElement:
    """Finite scalar combination of commutative graded monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: WeylAlgebra, terms):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if not c.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: gr_monomial_sort_key(mc[0]), reverse=True)

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if not isinstance(other, GrElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, GrElement):
            if other.algebra is not self.algebra:
                raise SignatureMismatch("graded elements from different algebras")
            out = dict(self.terms)
            for m, c in other.terms.items():
                cur = out.get(m)
                out[m] = c if cur is None else cur + c
            return GrElement(self.algebra, out)
        return NotImplemented

    def __neg__(self):
        return GrElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, GrElement):
            return self + (-other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GrElement):
            return gr_mul(self, other)
        if isinstance(other, Scalar) or isinstance(other, int):
            c = other if isinstance(other, Scalar) else self.algebra.field.from_rational(other)
            return GrElement(self.algebra, {m: cc * c for m, cc in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self):
        from .expr import format_gr_element

        return format_gr_element(self)

    def __repr__(self):
        return f"GrElement({self.__str__()!r})"


def _gr_of(m: Monomial) -> GrMonomial:
    return GrMonomial(m.a, m.beta, m.gamma, m.d)


def symbol(P: Element) -> GrElement:
    """Top-order part of P in the commutative graded algebra (D_i becomes y_i)."""
    if P.is_zero:
        raise ZeroElement("the zero element has no symbol")
    top = order(P)
    return GrElement(
        P.algebra,
        {
            _gr_of(m): c
            for m, c in P.terms.items()
            if _monomial_order(m, _DEFAULT_WEIGHTS) == top
        },
    )


def full_symbol(P: Element) -> GrElement:
    """Every term of P mapped into the commutative algebra, not only the top."""
    return GrElement(P.algebra, {_gr_of(m): c for m, c in P.terms.items()})


def gr_mul(u: GrElement, v: GrElement) -> GrElement:
    if u.algebra is not v.algebra:
        raise SignatureMismatch("graded elements from different algebras")
    acc: dict[GrMonomial, Scalar] = {}
    for m1, c1 in u.terms.items():
        for m2, c2 in v.terms.items():
            m = m1.mul(m2)
            c = c1 * c2
            cur = acc.get(m)
            acc[m] = c if cur is None else cur + c
    return GrElement(u.algebra, acc)


@dataclass(frozen=True)
class FiltrationReport:
    ord_p: int
    ord_q: int
    ord_pq: int
    ord_comm: int | None
    submultiplicative: bool
    strict_drop: bool
    witness: Monomial | None


def filtration_diagnostic(
    P: Element, Q: Element, weights: OrderWeights = _DEFAULT_WEIGHTS
) -> FiltrationReport:
    """Check ord(PQ) <= ord P + ord Q and strict order drop of the commutator.

    Violations are reported with the offending top monomial as witness; the
    kernel itself never assumes either property.
    """
    if P.is_zero or Q.is_zero:
        raise ZeroElement("diagnostics need nonzero operands")
    algebra = P.algebra
    op, oq = order(P, weights), order(Q, weights)
    pq = algebra.mul(P, Q)
    comm = pq + (-algebra.mul(Q, P))
    opq = order(pq, weights) if not pq.is_zero else 0
    ocomm = order(comm, weights) if not comm.is_zero else None
    submult = opq <= op + oq
    strict = ocomm is None or ocomm < op + oq
    witness = None
    if not submult:
        witness = max(pq.terms, key=lambda m: _monomial_order(m, weights))
    elif not strict:
        witness = max(comm.terms, key=lambda m: _monomial_order(m, weights))
    return FiltrationReport(
        ord_p=op,
        ord_q=oq,
        ord_pq=opq,
        ord_comm=ocomm,
        submultiplicative=submult,
        strict_drop=strict,
        witness=witness,
    )
