"""Normal-form arithmetic for Weyl-type algebras over exponential-polynomial rings.

Per variable x_i the algebra carries four exponent slots: an integer power a_i
of the tower exponential E_i = exp(x_i^{p_i} e^{t_i x_i}), a lattice exponent
beta_i for e^{beta_i x_i}, a lattice exponent gamma_i for x_i^{gamma_i}, and a
natural power d_i of the derivative D_i.  A monomial is the product of these
factors in that fixed order; an element is a finite scalar combination of
monomials, kept in normal form (all derivatives on the right).

Multiplication rewrites D^d * f through the Leibniz expansion
D^d f = sum over k <= d of binom(d, k) (D^k f) D^{d-k}, where the derivative of
a function monomial splits by factor:

  E_i^{a_i}:  a_i * (p_i x^{p_i-1} + t_i x^{p_i}) e^{t_i x_i} times the monomial
  e^{b x_i}:  b times the monomial
  x_i^{g}:    g times the monomial with g lowered by one

(lattice exponents act through the field embedding, so the derivative rule is
exact for arbitrary lattice powers).  With the t-shift deformation switched on,
the E rule instead differentiates exp(x^p e^{(t + hbar x) x}) truncated at the
algebra's hbar order; everything downstream is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .errors import (
    NegativePower,
    NotAFunction,
    SignatureMismatch,
)
from .scalars import GroupElement, Scalar, ScalarField

__all__ = ["Signature", "Monomial", "Element", "WeylAlgebra", "monomial_sort_key"]


@dataclass(frozen=True)
class Signature:
    """Shape of an algebra: variable count, lattice rank, tower exponents."""

    n: int = 1
    rank: int = 1
    p: tuple[int, ...] = (1,)
    t: tuple[tuple[int, ...], ...] = ((0,),)
    hbar_order: int | None = None
    t_shift: bool = False
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise SignatureMismatch("need at least one variable")
        if self.rank < 1:
            raise SignatureMismatch("lattice rank must be >= 1")
        if len(self.p) != self.n or any(pi < 1 for pi in self.p):
            raise SignatureMismatch("p must list one exponent >= 1 per variable")
        if len(self.t) != self.n or any(len(ti) != self.rank for ti in self.t):
            raise SignatureMismatch("t must list one lattice element per variable")
        if self.t_shift and self.hbar_order is None:
            raise SignatureMismatch("t-shift deformation requires an hbar order")


class Monomial:
    """Exponent data of one normally-ordered monomial (immutable by convention).

    Slots: E powers a, exponential lattice rows beta, power lattice rows gamma,
    derivative powers d.  The hash is cached because monomials are used as dict
    keys throughout the multiplication kernel.
    """

    __slots__ = ("a", "beta", "gamma", "d", "_hash")

    def __init__(
        self,
        a: tuple[int, ...],
        beta: tuple[tuple[int, ...], ...],
        gamma: tuple[tuple[int, ...], ...],
        d: tuple[int, ...],
    ):
        self.a = a
        self.beta = beta
        self.gamma = gamma
        self.d = d
        self._hash = hash((a, beta, gamma, d))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.a == other.a
            and self.beta == other.beta
            and self.gamma == other.gamma
            and self.d == other.d
        )

    def __repr__(self):
        return f"Monomial(a={self.a}, beta={self.beta}, gamma={self.gamma}, d={self.d})"

    @property
    def is_function(self) -> bool:
        return not any(self.d)

    def function_part(self) -> "Monomial":
        if self.is_function:
            return self
        return Monomial(self.a, self.beta, self.gamma, (0,) * len(self.d))

    def filtration_order(self) -> int:
        return (
            sum(abs(ai) for ai in self.a)
            + sum(sum(abs(c) for c in b) for b in self.beta)
            + sum(sum(abs(c) for c in g) for g in self.gamma)
            + sum(self.d)
        )


def monomial_sort_key(m: Monomial):
    """Graded-lex order used for canonical printing and reports."""
    flat_gamma = tuple(c for g in m.gamma for c in g)
    flat_beta = tuple(c for b in m.beta for c in b)
    return (m.filtration_order(), m.d, flat_gamma, flat_beta, m.a)


class Element:
    """Finite scalar combination of monomials; immutable by convention."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "WeylAlgebra", terms: Mapping[Monomial, Scalar]):
        self.algebra = algebra
        self.terms = {m: c for m, c in terms.items() if not c.is_zero}

    # -- inspection ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_function_element(self) -> bool:
        return all(m.is_function for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        return sorted(self.terms.items(), key=lambda mc: monomial_sort_key(mc[0]), reverse=True)

    def constant_coefficient(self) -> Scalar:
        """Coefficient of the unit monomial."""
        return self.terms.get(self.algebra._unit_monomial, self.algebra.field.zero)

    def as_scalar(self) -> Scalar | None:
        """The element as a scalar if it is one, else None."""
        if self.is_zero:
            return self.algebra.field.zero
        if len(self.terms) == 1 and self.algebra._unit_monomial in self.terms:
            return self.terms[self.algebra._unit_monomial]
        return None

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ----------------------------------------------------------

    def _coerce_scalar(self, c) -> Scalar | None:
        if isinstance(c, Scalar):
            if c.field is not self.algebra.field:
                raise SignatureMismatch("scalar from a different field")
            return c
        if isinstance(c, (int, Fraction)):
            return self.algebra.field.from_rational(c)
        return None

    def __add__(self, other):
        if isinstance(other, Element):
            if other.algebra is not self.algebra:
                raise SignatureMismatch("elements from different algebras")
            out = dict(self.terms)
            for m, c in other.terms.items():
                acc = out.get(m)
                out[m] = c if acc is None else acc + c
            return Element(self.algebra, out)
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self + self.algebra.scalar_element(c)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, Element):
            return self + (-other)
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self + self.algebra.scalar_element(-c)

    def __rsub__(self, other):
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self.algebra.scalar_element(c) + (-self)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.mul(self, other)
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return Element(self.algebra, {m: cc * c for m, cc in self.terms.items()})

    def __rmul__(self, other):
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self * c

    def __truediv__(self, other):
        if isinstance(other, Element):
            s = other.as_scalar()
            if s is None:
                raise NotAFunction("division is defined by scalars only")
            other = s
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self * (self.algebra.field.one / c)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise NegativePower("general elements have no negative powers")
        out = self.algebra.one
        for _ in range(k):
            out = self.algebra.mul(out, self)
        return out

    def __str__(self) -> str:
        from .expr import format_element

        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({self.__str__()!r})"


class WeylAlgebra:
    """Context object tying a signature to a scalar field and the rewrite rules."""

    def __init__(self, signature: Signature | None = None, _field: ScalarField | None = None, **kwargs):
        if signature is None:
            signature = Signature(**kwargs)
        elif kwargs:
            raise TypeError("pass either a signature or keyword fields, not both")
        self.signature = signature
        if _field is None:
            _field = ScalarField(signature.rank, signature.hbar_order, signature.names)
        self.field = _field
        n, r = signature.n, signature.rank
        self._zero_vec = (0,) * r
        self._zero_mat = ((0,) * r,) * n
        self._zero_d = (0,) * n
        self._unit_monomial = Monomial((0,) * n, self._zero_mat, self._zero_mat, self._zero_d)
        self.one_monomial = self._unit_monomial
        self.zero = Element(self, {})
        self.one = Element(self, {self._unit_monomial: self.field.one})
        self._embed_t = tuple(self.field.embed(GroupElement(ti)) for ti in signature.t)
        self._diff_cache: dict[tuple[int, Monomial], tuple[tuple[Monomial, Scalar], ...]] = {}
        self._diff_pow_cache: dict[tuple[Monomial, tuple[int, ...]], tuple[tuple[Monomial, Scalar], ...]] = {}
        self._kbinom_cache: dict[tuple[int, ...], tuple[tuple[tuple[int, ...], int], ...]] = {}
        self._int_pay_cache: dict[int, object] = {}
        self._twin_cache: dict[tuple, "WeylAlgebra"] = {}
        if signature.t_shift:
            N = signature.hbar_order
            hb = self.field.hbar
            self._hbar_over_fact = [
                hb**k * self.field.from_rational(Fraction(1, math.factorial(k)))
                for k in range(N + 1)
            ]

    # -- deformed twins -------------------------------------------------------

    def with_hbar(self, order: int) -> "WeylAlgebra":
        # twins share the scalar ops so coefficients lift across without
        # renormalization; cached so repeated calls return the same instance
        key = ("hbar", order, self.signature.t_shift)
        twin = self._twin_cache.get(key)
        if twin is None:
            sig = self.signature
            twin = WeylAlgebra(
                Signature(sig.n, sig.rank, sig.p, sig.t, order, sig.t_shift, sig.names),
                _field=self.field.with_hbar(order),
            )
            self._twin_cache[key] = twin
        return twin

    def with_t_shift(self, order: int) -> "WeylAlgebra":
        key = ("t_shift", order, True)
        twin = self._twin_cache.get(key)
        if twin is None:
            sig = self.signature
            twin = WeylAlgebra(
                Signature(sig.n, sig.rank, sig.p, sig.t, order, True, sig.names),
                _field=self.field.with_hbar(order),
            )
            self._twin_cache[key] = twin
        return twin

    # -- index and lattice helpers --------------------------------------------

    def _var(self, i: int) -> int:
        if not 1 <= i <= self.signature.n:
            raise SignatureMismatch(f"variable index {i} out of range 1..{self.signature.n}")
        return i - 1

    def lattice(self, value: int | Sequence[int] | GroupElement) -> GroupElement:
        """Coerce to a lattice element: an int k means k*g_1."""
        if isinstance(value, GroupElement):
            ge = value
        elif isinstance(value, int):
            ge = GroupElement((value,) + (0,) * (self.signature.rank - 1))
        else:
            ge = GroupElement(tuple(value))
        if ge.rank != self.signature.rank:
            raise SignatureMismatch("lattice element rank does not match the algebra")
        return ge

    # -- element constructors --------------------------------------------------

    def scalar_element(self, c) -> Element:
        if isinstance(c, (int, Fraction, str)):
            c = self.field.from_rational(c)
        if not isinstance(c, Scalar) or c.field is not self.field:
            raise SignatureMismatch("scalar from a different field")
        return Element(self, {self._unit_monomial: c})

    def from_term(self, monomial: Monomial, coeff: Scalar | int = 1) -> Element:
        if isinstance(coeff, (int, Fraction)):
            coeff = self.field.from_rational(coeff)
        return Element(self, {monomial: coeff})

    def _mono_single(self, i: int, *, a: int = 0, beta=None, gamma=None, d: int = 0) -> Monomial:
        i0 = self._var(i)
        avec = tuple(a if j == i0 else 0 for j in range(self.signature.n))
        bmat = tuple(
            (beta.coords if beta is not None else self._zero_vec) if j == i0 else self._zero_vec
            for j in range(self.signature.n)
        )
        gmat = tuple(
            (gamma.coords if gamma is not None else self._zero_vec) if j == i0 else self._zero_vec
            for j in range(self.signature.n)
        )
        dvec = tuple(d if j == i0 else 0 for j in range(self.signature.n))
        return Monomial(avec, bmat, gmat, dvec)

    def x(self, i: int, power: int | Sequence[int] | GroupElement = 1) -> Element:
        """x_i^power, power a lattice element (int means a plain power)."""
        ge = self.lattice(power)
        if ge.is_zero:
            return self.one
        return self.from_term(self._mono_single(i, gamma=ge))

    def D(self, i: int, k: int = 1) -> Element:
        if k < 0:
            raise NegativePower("derivatives have no inverses")
        if k == 0:
            return self.one
        return self.from_term(self._mono_single(i, d=k))

    def E(self, i: int, k: int = 1) -> Element:
        if k == 0:
            return self.one
        return self.from_term(self._mono_single(i, a=k))

    def exp_sym(self, i: int, alpha: int | Sequence[int] | GroupElement) -> Element:
        """The exponential symbol e^{alpha x_i}."""
        ge = self.lattice(alpha)
        if ge.is_zero:
            return self.one
        return self.from_term(self._mono_single(i, beta=ge))

    # -- derivative rule --------------------------------------------------------

    def _diff_mono(self, i0: int, m: Monomial) -> tuple[tuple[Monomial, Scalar], ...]:
        """Derivative of a function monomial in variable i0 (0-based)."""
        key = (i0, m)
        hit = self._diff_cache.get(key)
        if hit is not None:
            return hit
        sig = self.signature
        field = self.field
        out: list[tuple[Monomial, Scalar]] = []
        a_i = m.a[i0]
        beta_i = m.beta[i0]
        gamma_i = m.gamma[i0]
        t_i = sig.t[i0]

        def shifted(dgamma: int, add_t: bool) -> Monomial:
            g = list(gamma_i)
            g[0] += dgamma
            gmat = m.gamma[:i0] + (tuple(g),) + m.gamma[i0 + 1:]
            if add_t and any(t_i):
                b = tuple(x + y for x, y in zip(beta_i, t_i))
                bmat = m.beta[:i0] + (b,) + m.beta[i0 + 1:]
            else:
                bmat = m.beta
            return Monomial(m.a, bmat, gmat, m.d)

        if a_i:
            p_i = sig.p[i0]
            a_scal = field.from_rational(a_i)
            if sig.t_shift:
                N = sig.hbar_order
                two_hbar = field.hbar * 2
                for k in range(N + 1):
                    base = a_scal * self._hbar_over_fact[k]
                    out.append((shifted(p_i - 1 + 2 * k, True), base * p_i))
                    if not self._embed_t[i0].is_zero:
                        out.append((shifted(p_i + 2 * k, True), base * self._embed_t[i0]))
                    if k + 1 <= N:
                        out.append((shifted(p_i + 1 + 2 * k, True), base * two_hbar))
            else:
                out.append((shifted(p_i - 1, True), a_scal * p_i))
                if not self._embed_t[i0].is_zero:
                    out.append((shifted(p_i, True), a_scal * self._embed_t[i0]))
        if any(beta_i):
            out.append((m, field.embed(GroupElement(beta_i))))
        if any(gamma_i):
            out.append((shifted(-1, False), field.embed(GroupElement(gamma_i))))

        merged: dict[Monomial, Scalar] = {}
        for mono, c in out:
            if not c.is_zero:
                acc = merged.get(mono)
                merged[mono] = c if acc is None else acc + c
        result = tuple((mono, c) for mono, c in merged.items() if not c.is_zero)
        self._diff_cache[key] = result
        return result

    def _diff_pow_mono(self, m: Monomial, k: tuple[int, ...]) -> tuple[tuple[Monomial, Scalar], ...]:
        """k-fold derivative (multi-index) of a function monomial."""
        if not any(k):
            return ((m, self.field.one),)
        key = (m, k)
        hit = self._diff_pow_cache.get(key)
        if hit is not None:
            return hit
        i0 = next(i for i, ki in enumerate(k) if ki)
        prev_k = tuple(ki - 1 if i == i0 else ki for i, ki in enumerate(k))
        acc: dict[Monomial, Scalar] = {}
        for pm, pc in self._diff_pow_mono(m, prev_k):
            for dm, dc in self._diff_mono(i0, pm):
                c = pc * dc
                cur = acc.get(dm)
                acc[dm] = c if cur is None else cur + c
        result = tuple((mono, c) for mono, c in acc.items() if not c.is_zero)
        self._diff_pow_cache[key] = result
        return result

    def diff_function(self, f: Element, i: int) -> Element:
        """Formal partial derivative of a function element in variable x_i."""
        self._check(f)
        if not f.is_function_element:
            raise NotAFunction("derivative rule applies to function elements")
        i0 = self._var(i)
        acc: dict[Monomial, Scalar] = {}
        for m, c in f.terms.items():
            for dm, dc in self._diff_mono(i0, m):
                v = c * dc
                cur = acc.get(dm)
                acc[dm] = v if cur is None else cur + v
        return Element(self, acc)

    # -- multiplication -----------------------------------------------------------

    def _check(self, e: Element) -> None:
        if not isinstance(e, Element) or e.algebra is not self:
            raise SignatureMismatch("element belongs to a different algebra")

    def _kbinom(self, d1: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Leibniz splittings of a derivative multi-index with their binomials."""
        hit = self._kbinom_cache.get(d1)
        if hit is not None:
            return hit
        rows = []
        for k in product(*(range(di + 1) for di in d1)):
            binom = 1
            for di, ki in zip(d1, k):
                binom = binom * math.comb(di, ki)
            rows.append((k, binom))
        result = tuple(rows)
        self._kbinom_cache[d1] = result
        return result

    def mul(self, P: Element, Q: Element) -> Element:
        self._check(P)
        self._check(Q)
        if self.field.slots == 1:
            return self._mul_fast(P, Q)
        acc: dict[Monomial, Scalar] = {}
        for mQ, cQ in Q.terms.items():
            fQ = mQ.function_part()
            for mP, cP in P.terms.items():
                self._mul_term(acc, mP, mQ, fQ, cP * cQ)
        return Element(self, acc)

    def _mul_fast(self, P: Element, Q: Element) -> Element:
        """Single-slot product accumulating raw payloads (no Scalar wrappers)."""
        field = self.field
        ops = field._ops
        pmul = ops.mul
        padd = ops.add
        acc: dict[Monomial, object] = {}
        for mQ, cQ in Q.terms.items():
            payQ = cQ.coeffs[0]
            fQ = mQ.function_part()
            dQ = mQ.d
            for mP, cP in P.terms.items():
                pay = pmul(cP.coeffs[0], payQ)
                d1 = mP.d
                if not any(d1):
                    mono = Monomial(
                        tuple(x + y for x, y in zip(mP.a, mQ.a)),
                        tuple(
                            tuple(x + y for x, y in zip(bP, bQ))
                            for bP, bQ in zip(mP.beta, mQ.beta)
                        ),
                        tuple(
                            tuple(x + y for x, y in zip(gP, gQ))
                            for gP, gQ in zip(mP.gamma, mQ.gamma)
                        ),
                        dQ,
                    )
                    cur = acc.get(mono)
                    acc[mono] = pay if cur is None else padd(cur, pay)
                    continue
                for k, binom in self._kbinom(d1):
                    cb = pay if binom == 1 else pmul(pay, self._int_payload(binom))
                    for fm, fc in self._diff_pow_mono(fQ, k):
                        mono = Monomial(
                            tuple(x + y for x, y in zip(mP.a, fm.a)),
                            tuple(
                                tuple(x + y for x, y in zip(bP, bF))
                                for bP, bF in zip(mP.beta, fm.beta)
                            ),
                            tuple(
                                tuple(x + y for x, y in zip(gP, gF))
                                for gP, gF in zip(mP.gamma, fm.gamma)
                            ),
                            tuple(di - ki + dQi for di, ki, dQi in zip(d1, k, dQ)),
                        )
                        c = pmul(cb, fc.coeffs[0])
                        cur = acc.get(mono)
                        acc[mono] = c if cur is None else padd(cur, c)
        return Element(self, {m: Scalar(field, (c,)) for m, c in acc.items()})

    def _int_payload(self, n: int):
        hit = self._int_pay_cache.get(n)
        if hit is None:
            hit = self.field.from_rational(n).coeffs[0]
            self._int_pay_cache[n] = hit
        return hit

    def _mul_term(self, acc: dict, mP: Monomial, mQ: Monomial, fQ: Monomial, coeff: Scalar) -> None:
        d1 = mP.d
        if not any(d1):
            mono = Monomial(
                tuple(x + y for x, y in zip(mP.a, mQ.a)),
                tuple(
                    tuple(x + y for x, y in zip(bP, bQ))
                    for bP, bQ in zip(mP.beta, mQ.beta)
                ),
                tuple(
                    tuple(x + y for x, y in zip(gP, gQ))
                    for gP, gQ in zip(mP.gamma, mQ.gamma)
                ),
                mQ.d,
            )
            cur = acc.get(mono)
            acc[mono] = coeff if cur is None else cur + coeff
            return
        one = self.field.one
        for k, binom in self._kbinom(d1):
            cbin = coeff if binom == 1 else coeff * binom
            for fm, fc in self._diff_pow_mono(fQ, k):
                mono = Monomial(
                    tuple(x + y for x, y in zip(mP.a, fm.a)),
                    tuple(
                        tuple(x + y for x, y in zip(bP, bF))
                        for bP, bF in zip(mP.beta, fm.beta)
                    ),
                    tuple(
                        tuple(x + y for x, y in zip(gP, gF))
                        for gP, gF in zip(mP.gamma, fm.gamma)
                    ),
                    tuple(di - ki + dQi for di, ki, dQi in zip(d1, k, mQ.d)),
                )
                c = cbin if fc is one else cbin * fc
                cur = acc.get(mono)
                acc[mono] = c if cur is None else cur + c

    def commutator(self, P: Element, Q: Element) -> Element:
        return self.mul(P, Q) + (-self.mul(Q, P))

    def __repr__(self):
        sig = self.signature
        extra = ""
        if sig.hbar_order is not None:
            extra += f", hbar<={sig.hbar_order}"
        if sig.t_shift:
            extra += ", t-shift"
        return f"WeylAlgebra(n={sig.n}, rank={sig.rank}, p={sig.p}, t={sig.t}{extra})"
