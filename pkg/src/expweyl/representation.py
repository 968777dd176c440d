"""Differential-operator action of the algebra on its function ring.

The action is computed directly: each monomial E^a e^{bx} x^g D^d acts on a
function element f by first applying the derivative rule d times and then
multiplying by the function part through plain componentwise exponent
addition.  The normal-ordering engine is never invoked, so equality of
act(mul(P,Q), f) and act(P, act(Q, f)) is an independent check on mul rather
than a restatement of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import Element, Monomial, WeylAlgebra, monomial_sort_key
from .errors import (
    NotAFunction,
    SignatureMismatch,
    UnsupportedElement,
    ZeroElement,
)
from .scalars import Scalar

__all__ = [
    "act",
    "augment",
    "faithfulness_probe",
    "noetherian_witness",
    "reduce_to_constant",
    "ProbeReport",
    "NoetherianReport",
]


def _check_same(algebra: WeylAlgebra, e: Element) -> None:
    if not isinstance(e, Element) or e.algebra is not algebra:
        raise SignatureMismatch("element belongs to a different algebra")


def act(P: Element, f: Element) -> Element:
    """Apply P as a differential operator to the function element f."""
    algebra = P.algebra
    _check_same(algebra, f)
    if not f.is_function_element:
        raise NotAFunction("the action is defined on function elements")
    acc: dict[Monomial, Scalar] = {}
    for m, c in P.terms.items():
        g = f
        for i0, k in enumerate(m.d):
            for _ in range(k):
                g = algebra.diff_function(g, i0 + 1)
        for mg, cg in g.terms.items():
            mono = Monomial(
                tuple(x + y for x, y in zip(m.a, mg.a)),
                tuple(
                    tuple(x + y for x, y in zip(bm, bg))
                    for bm, bg in zip(m.beta, mg.beta)
                ),
                tuple(
                    tuple(x + y for x, y in zip(gm, gg))
                    for gm, gg in zip(m.gamma, mg.gamma)
                ),
                mg.d,
            )
            v = c * cg
            cur = acc.get(mono)
            acc[mono] = v if cur is None else cur + v
    return Element(algebra, acc)


def augment(P: Element) -> Element:
    """Drop every term carrying a derivative (evaluation against the constant 1)."""
    return Element(P.algebra, {m: c for m, c in P.terms.items() if m.is_function})


@dataclass(frozen=True)
class ProbeReport:
    zero: bool
    witness_input: Element | None
    witness_output: Element | None


def faithfulness_probe(P: Element, maxdeg: int) -> ProbeReport:
    """Evaluate P on the power test functions x^g for g in {0..maxdeg}^n.

    Test exponents are scanned in ascending graded-lex order and the first
    non-vanishing value is reported.  zero=False certifies P != 0.  When every
    derivative multi-index of P is bounded by maxdeg, zero=True certifies
    P = 0: the matrix of the evaluation map is triangular in the derivative
    exponents, so all coefficients are recoverable.
    """
    algebra = P.algebra
    n = algebra.signature.n
    grid = sorted(product(range(maxdeg + 1), repeat=n), key=lambda g: (sum(g), g))
    for gamma in grid:
        f = algebra.one
        for i, gi in enumerate(gamma, start=1):
            f = f * algebra.x(i, gi)
        v = act(P, f)
        if not v.is_zero:
            return ProbeReport(zero=False, witness_input=f, witness_output=v)
    return ProbeReport(zero=True, witness_input=None, witness_output=None)


@dataclass(frozen=True)
class NoetherianReport:
    n: int
    value_n: Scalar
    value_n_plus_1: Scalar
    certified: bool

    def as_pair(self) -> tuple[Fraction, Fraction]:
        return (self.value_n.as_rational(), self.value_n_plus_1.as_rational())

    def as_text(self) -> str:
        a, b = self.as_pair()
        return f"({a}, {b})"


def noetherian_witness(algebra: WeylAlgebra, n: int) -> NoetherianReport:
    """Certify D^n notin A*D^(n+1) by acting on x^n: values (n!, 0)."""
    if n < 1:
        raise SignatureMismatch("witness index must be >= 1")
    xn = algebra.x(1, n)
    vn = act(algebra.D(1, n), xn).as_scalar()
    vn1 = act(algebra.D(1, n + 1), xn).as_scalar()
    ok = (
        vn is not None
        and vn1 is not None
        and vn == algebra.field.from_rational(math.factorial(n))
        and vn1.is_zero
    )
    return NoetherianReport(n=n, value_n=vn, value_n_plus_1=vn1, certified=ok)


def reduce_to_constant(f: Element) -> tuple[int, ...]:
    """Derivative multi-index g with act(D^g, f) a nonzero constant.

    Defined for genuine polynomials only: no E factors, no exponential
    factors, and all power exponents natural multiples of the unit generator.
    Chooses the graded-lex maximal exponent; every other exponent of equal or
    lower total degree then loses some variable, so the value is g! times the
    leading coefficient.
    """
    algebra = f.algebra
    if f.is_zero:
        raise ZeroElement("cannot reduce the zero element")
    exps = []
    for m in f.terms:
        if any(m.a) or any(m.d):
            raise UnsupportedElement("only polynomial elements reduce to constants")
        if any(any(row) for row in m.beta):
            raise UnsupportedElement("exponential factors never reduce to constants")
        for row in m.gamma:
            if any(row[1:]) or row[0] < 0:
                raise UnsupportedElement("power exponents must be natural multiples of the unit")
        exps.append(tuple(row[0] for row in m.gamma))
    gamma = max(exps, key=lambda e: (sum(e), e))
    op = algebra.one
    for i, gi in enumerate(gamma, start=1):
        op = op * algebra.D(i, gi)
    value = act(op, f)
    got = value.as_scalar()
    if got is None or got.is_zero:
        raise UnsupportedElement("reduction did not land on a nonzero constant")
    return gamma
