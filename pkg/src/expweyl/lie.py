"""Witt-type derivations, bracket-closed spans, and their cohomology.

A derivation is a first-order operator sum(f_i * D_i) with function
coefficients; the bracket is [f D_i, g D_j] = f (D_i g) D_j - g (D_j f) D_i.
Cohomology is computed on finite bracket-closed spans with adjoint
coefficients.  On a graded span every 2-cocycle of nonzero ad-degree d has
the explicit primitive phi = (1/d) * omega(h, -), h the grading element;
``euler_integrate`` builds it and verifies d(phi) = omega exactly.  The
per-degree prescription phi(x) = (1/(d - deg x)) * omega(h, x) is kept as
an opt-in replay; it does not integrate every cocycle, so failures raise
IntegrationFailed carrying the residual.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .algebra import Element, WeylAlgebra
from .errors import (
    DegreeZero,
    IntegrationFailed,
    KernelError,
    NotAFunction,
    NotAntisymmetric,
    NotClosed,
    NotHomogeneous,
    NotIndependent,
    ResonantDegree,
    SignatureMismatch,
    UnsupportedElement,
)
from .linalg import combination, independent
from .scalars import Scalar


class DerivationElement:
    """First-order operator sum(f_i * D_i); ``coeffs[i]`` multiplies D_{i+1}."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: WeylAlgebra, coeffs):
        coeffs = tuple(coeffs)
        n = algebra.signature.n
        if len(coeffs) != n:
            raise SignatureMismatch(f"need {n} coefficients, got {len(coeffs)}")
        for f in coeffs:
            if not isinstance(f, Element) or f.algebra.signature != algebra.signature:
                raise SignatureMismatch("coefficient signature differs from the algebra")
            if not f.is_function_element:
                raise NotAFunction("derivation coefficients must be derivative free")
        self.algebra = algebra
        self.coeffs = coeffs

    def _check(self, other: "DerivationElement") -> None:
        if self.algebra.signature != other.algebra.signature:
            raise SignatureMismatch("derivations over different signatures")

    def __add__(self, other: "DerivationElement") -> "DerivationElement":
        self._check(other)
        return DerivationElement(
            self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __sub__(self, other: "DerivationElement") -> "DerivationElement":
        self._check(other)
        return DerivationElement(
            self.algebra, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self) -> "DerivationElement":
        return DerivationElement(self.algebra, [-a for a in self.coeffs])

    def scale(self, c) -> "DerivationElement":
        return DerivationElement(self.algebra, [f * c for f in self.coeffs])

    def __rmul__(self, c) -> "DerivationElement":
        return self.scale(c)

    @property
    def is_zero(self) -> bool:
        return all(f.is_zero for f in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DerivationElement):
            return NotImplemented
        return (
            self.algebra.signature == other.algebra.signature
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def as_element(self) -> Element:
        """The same operator as a plain algebra element sum(f_i * D_i)."""
        acc = self.algebra.scalar_element(0)
        for i, f in enumerate(self.coeffs):
            if not f.is_zero:
                acc = acc + f * self.algebra.D(i + 1)
        return acc

    def __str__(self) -> str:
        return str(self.as_element())

    def __repr__(self) -> str:
        return f"DerivationElement({self})"


def derivation_from_element(P: Element) -> DerivationElement:
    """Split a first-order operator with no zeroth-order part into f D_i form."""
    alg = P.algebra
    n = alg.signature.n
    coeffs = [alg.scalar_element(0) for _ in range(n)]
    for m, c in P.terms.items():
        if sum(m.d) != 1:
            raise UnsupportedElement("element is not a pure first-order operator")
        i = m.d.index(1)
        coeffs[i] = coeffs[i] + alg.from_term(m.function_part(), c)
    return DerivationElement(alg, coeffs)


def witt_bracket(u: DerivationElement, v: DerivationElement) -> DerivationElement:
    """[f D_i, g D_j] = f (D_i g) D_j - g (D_j f) D_i, expanded per coordinate."""
    u._check(v)
    alg = u.algebra
    n = alg.signature.n
    out = []
    for k in range(n):
        acc = alg.scalar_element(0)
        for i in range(n):
            if not u.coeffs[i].is_zero:
                acc = acc + u.coeffs[i] * alg.diff_function(v.coeffs[k], i + 1)
            if not v.coeffs[i].is_zero:
                acc = acc - v.coeffs[i] * alg.diff_function(u.coeffs[k], i + 1)
        out.append(acc)
    return DerivationElement(alg, out)


def _vectorize(u: DerivationElement) -> dict:
    vec = {}
    for i, f in enumerate(u.coeffs):
        for m, c in f.terms.items():
            vec[(i, m)] = c
    return vec


class LieSpan:
    """Finite ordered basis of derivations, verified bracket-closed.

    Structure constants are cached for i < j; antisymmetry and Jacobi are
    checked on the basis at construction.  An optional grading element
    (given by basis index) must act diagonally with integer eigenvalues,
    which become the degree labels.
    """

    def __init__(self, basis, *, grading: int | None = None):
        basis = tuple(basis)
        if not basis:
            raise NotIndependent("empty basis")
        algebra = basis[0].algebra
        for b in basis[1:]:
            basis[0]._check(b)
        self.algebra = algebra
        self.field = algebra.field
        self.basis = basis
        self.dim = len(basis)
        self._vectors = [_vectorize(b) for b in basis]
        if not independent(self._vectors, self.field):
            raise NotIndependent("basis is linearly dependent")
        self._struct: dict[tuple[int, int], tuple[Scalar, ...]] = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                w = witt_bracket(basis[i], basis[j])
                if not (w + witt_bracket(basis[j], basis[i])).is_zero:
                    raise KernelError("bracket antisymmetry failed on the basis")
                coords = combination(self._vectors, _vectorize(w), self.field)
                if coords is None:
                    raise NotClosed(
                        f"bracket of basis {i} and basis {j} leaves the span",
                        pair=(i, j),
                        residual=w,
                    )
                self._struct[(i, j)] = tuple(coords)
        for i, j, k in combinations(range(self.dim), 3):
            jac = (
                witt_bracket(witt_bracket(basis[i], basis[j]), basis[k])
                + witt_bracket(witt_bracket(basis[j], basis[k]), basis[i])
                + witt_bracket(witt_bracket(basis[k], basis[i]), basis[j])
            )
            if not jac.is_zero:
                raise KernelError("Jacobi identity failed on the basis")
        self.grading = grading
        self.degrees: tuple[int, ...] | None = None
        if grading is not None:
            if not 0 <= grading < self.dim:
                raise SignatureMismatch("grading index out of range")
            degs = []
            for j in range(self.dim):
                c = self.bracket_coords(grading, j)
                lam = None
                for k, ck in enumerate(c):
                    if ck.is_zero:
                        continue
                    if k != j:
                        raise NotHomogeneous(
                            "grading element does not act diagonally on the basis"
                        )
                    lam = ck.as_rational()
                    if lam is None:
                        raise NotHomogeneous("grading eigenvalue is not rational")
                if lam is None:
                    lam = Fraction(0)
                if lam.denominator != 1:
                    raise NotHomogeneous("grading eigenvalue is not an integer")
                degs.append(int(lam))
            self.degrees = tuple(degs)

    # coordinate helpers -------------------------------------------------

    @property
    def zero_coords(self) -> tuple[Scalar, ...]:
        return (self.field.zero,) * self.dim

    def unit_coords(self, j: int) -> tuple[Scalar, ...]:
        return tuple(
            self.field.one if k == j else self.field.zero for k in range(self.dim)
        )

    def coords(self, values) -> tuple[Scalar, ...]:
        """Coerce a sequence of scalars / ints / fractions to a coordinate tuple."""
        out = []
        for v in values:
            out.append(v if isinstance(v, Scalar) else self.field.from_rational(v))
        if len(out) != self.dim:
            raise SignatureMismatch(f"need {self.dim} coordinates, got {len(out)}")
        return tuple(out)

    def add_coords(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def scale_coords(self, u, c):
        return tuple(a * c for a in u)

    def coordinates(self, u: DerivationElement) -> tuple[Scalar, ...]:
        coords = combination(self._vectors, _vectorize(u), self.field)
        if coords is None:
            raise NotClosed("element lies outside the span")
        return tuple(coords)

    def element(self, coords) -> DerivationElement:
        acc = DerivationElement(
            self.algebra, [self.algebra.scalar_element(0)] * self.algebra.signature.n
        )
        for c, b in zip(coords, self.basis):
            if not (isinstance(c, Scalar) and c.is_zero):
                acc = acc + b.scale(c)
        return acc

    # bracket in coordinates ----------------------------------------------

    def bracket_coords(self, i: int, j: int) -> tuple[Scalar, ...]:
        if i == j:
            return self.zero_coords
        if i < j:
            return self._struct[(i, j)]
        return tuple(-c for c in self._struct[(j, i)])

    def bracket(self, u, v) -> tuple[Scalar, ...]:
        acc = list(self.zero_coords)
        for i in range(self.dim):
            if u[i].is_zero:
                continue
            for j in range(self.dim):
                if i == j or v[j].is_zero:
                    continue
                c = u[i] * v[j]
                for k, sk in enumerate(self.bracket_coords(i, j)):
                    if not sk.is_zero:
                        acc[k] = acc[k] + c * sk
        return tuple(acc)

    def ad(self, i: int, v) -> tuple[Scalar, ...]:
        """Coordinates of [basis_i, element(v)]."""
        acc = list(self.zero_coords)
        for j in range(self.dim):
            if v[j].is_zero:
                continue
            for k, sk in enumerate(self.bracket_coords(i, j)):
                if not sk.is_zero:
                    acc[k] = acc[k] + v[j] * sk
        return tuple(acc)

    def degree_of(self, coords) -> int | None:
        """Common degree label of the support; None for zero coordinates."""
        if self.degrees is None:
            raise NotHomogeneous("span has no grading element")
        deg = None
        for j, c in enumerate(coords):
            if c.is_zero:
                continue
            if deg is None:
                deg = self.degrees[j]
            elif deg != self.degrees[j]:
                raise NotHomogeneous("coordinates mix degrees")
        return deg

    def __repr__(self):
        return f"LieSpan(dim={self.dim}, graded={self.degrees is not None})"


def make_span(basis, *, grading: int | None = None) -> LieSpan:
    """Verified bracket-closed span; see LieSpan."""
    return LieSpan(basis, grading=grading)


def _poly_derivation(algebra: WeylAlgebra, power: int, var: int = 1) -> DerivationElement:
    coeffs = [algebra.scalar_element(0)] * algebra.signature.n
    coeffs[var - 1] = algebra.x(var, power) if power else algebra.scalar_element(1)
    return DerivationElement(algebra, coeffs)


def borel(algebra: WeylAlgebra) -> LieSpan:
    """Span of {D, x D} on variable 1, graded by x D."""
    return make_span(
        [_poly_derivation(algebra, 0), _poly_derivation(algebra, 1)], grading=1
    )


def sl2like(algebra: WeylAlgebra) -> LieSpan:
    """Span of {D, x D, x^2 D} on variable 1, graded by x D."""
    return make_span(
        [_poly_derivation(algebra, k) for k in range(3)], grading=1
    )


PRESETS = {"borel": borel, "sl2like": sl2like}


def _sorted_key(key: tuple[int, ...]) -> tuple[tuple[int, ...] | None, int]:
    """Sort a cochain argument tuple, tracking the permutation sign.

    Returns (None, 0) when an index repeats.
    """
    items = list(key)
    sign = 1
    for a in range(1, len(items)):
        b = a
        while b > 0 and items[b - 1] > items[b]:
            items[b - 1], items[b] = items[b], items[b - 1]
            sign = -sign
            b -= 1
    for a in range(1, len(items)):
        if items[a - 1] == items[a]:
            return None, 0
    return tuple(items), sign


class Cochain:
    """Alternating k-linear map on a span, tabulated on basis k-tuples.

    ``table`` maps strictly increasing index tuples to coordinate tuples;
    degree-0 cochains use the single key ().  Unsorted keys are folded in
    with the permutation sign.
    """

    __slots__ = ("span", "degree", "table")

    def __init__(self, span: LieSpan, degree: int, table):
        if degree < 0:
            raise SignatureMismatch("cochain degree must be >= 0")
        norm: dict[tuple[int, ...], tuple[Scalar, ...]] = {}
        for key, val in table.items():
            key = tuple(key)
            if len(key) != degree:
                raise SignatureMismatch("table key arity differs from the degree")
            coords = span.coords(val)
            skey, sign = _sorted_key(key)
            if skey is None:
                if any(not c.is_zero for c in coords):
                    raise NotAntisymmetric(
                        "nonzero value on a repeated argument tuple"
                    )
                continue
            for i in skey:
                if not 0 <= i < span.dim:
                    raise SignatureMismatch("basis index out of range")
            if sign < 0:
                coords = tuple(-c for c in coords)
            if skey in norm:
                coords = span.add_coords(norm[skey], coords)
            norm[skey] = coords
        self.span = span
        self.degree = degree
        self.table = {
            k: v for k, v in norm.items() if any(not c.is_zero for c in v)
        }

    def value(self, key: tuple[int, ...]) -> tuple[Scalar, ...]:
        """Evaluate on a basis index tuple (any order; repeats give zero)."""
        if len(key) != self.degree:
            raise SignatureMismatch("argument arity differs from the degree")
        skey, sign = _sorted_key(tuple(key))
        if skey is None:
            return self.span.zero_coords
        val = self.table.get(skey)
        if val is None:
            return self.span.zero_coords
        return val if sign > 0 else tuple(-c for c in val)

    @property
    def is_zero(self) -> bool:
        return not self.table

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.span is other.span
            and self.degree == other.degree
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.table))))

    def __add__(self, other: "Cochain") -> "Cochain":
        if self.span is not other.span or self.degree != other.degree:
            raise SignatureMismatch("cochain spans or degrees differ")
        table = dict(self.table)
        for k, v in other.table.items():
            table[k] = self.span.add_coords(table[k], v) if k in table else v
        return Cochain(self.span, self.degree, table)

    def __neg__(self) -> "Cochain":
        return Cochain(
            self.span,
            self.degree,
            {k: tuple(-c for c in v) for k, v in self.table.items()},
        )

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def scale(self, c) -> "Cochain":
        return Cochain(
            self.span,
            self.degree,
            {k: self.span.scale_coords(v, c) for k, v in self.table.items()},
        )

    def items(self):
        return sorted(self.table.items())

    def __repr__(self):
        return f"Cochain(degree={self.degree}, entries={len(self.table)})"


def zero_cochain(span: LieSpan, degree: int) -> Cochain:
    return Cochain(span, degree, {})


def identity_cochain(span: LieSpan) -> Cochain:
    """The 1-cochain x -> x."""
    return Cochain(span, 1, {(j,): span.unit_coords(j) for j in range(span.dim)})


def ce_differential(omega: Cochain) -> Cochain:
    """Chevalley-Eilenberg differential with adjoint coefficients.

    With 1-based argument positions,
    (d w)(x_1,...,x_{k+1}) = sum_{a<b} (-1)^{a+b} w([x_a,x_b], ..., ^x_a, ..., ^x_b, ...)
                           + sum_a (-1)^{a+1} [x_a, w(..., ^x_a, ...)].
    """
    span = omega.span
    k = omega.degree
    table = {}
    for idx in combinations(range(span.dim), k + 1):
        acc = span.zero_coords
        for a in range(k + 1):
            for b in range(a + 1, k + 1):
                # positions a+1, b+1 in the 1-based formula: (-1)^{a+b+2}
                sign = 1 if (a + b) % 2 == 0 else -1
                rest = idx[:a] + idx[a + 1 : b] + idx[b + 1 :]
                br = span.bracket_coords(idx[a], idx[b])
                for m, cm in enumerate(br):
                    if cm.is_zero:
                        continue
                    val = omega.value((m,) + rest)
                    coeff = cm if sign > 0 else -cm
                    acc = span.add_coords(acc, span.scale_coords(val, coeff))
            sign = 1 if a % 2 == 0 else -1  # (-1)^{(a+1)+1}
            rest = idx[:a] + idx[a + 1 :]
            acted = span.ad(idx[a], omega.value(rest))
            if sign < 0:
                acted = tuple(-c for c in acted)
            acc = span.add_coords(acc, acted)
        if any(not c.is_zero for c in acc):
            table[idx] = acc
    return Cochain(span, k + 1, table)


def is_cocycle(omega: Cochain) -> bool:
    return ce_differential(omega).is_zero


def ad_degree(omega: Cochain) -> int | None:
    """Uniform degree shift of the cochain on a graded span; None when zero."""
    span = omega.span
    if span.degrees is None:
        raise NotHomogeneous("span has no grading element")
    d = None
    for key, val in omega.table.items():
        shift = span.degree_of(val) - sum(span.degrees[i] for i in key)
        if d is None:
            d = shift
        elif d != shift:
            raise NotHomogeneous("cochain is not homogeneous for the grading")
    return d


def euler_integrate(omega: Cochain, *, per_degree: bool = False) -> Cochain:
    """Primitive of a homogeneous 2-cocycle of nonzero ad-degree.

    Default: phi = (1/d) * omega(h, -) with h the grading element, which
    satisfies d(phi) = omega for every cocycle of ad-degree d != 0.  With
    ``per_degree=True`` the division is by (d - deg x) per basis element
    instead; that variant is replayed, not trusted, so the result is
    verified either way and IntegrationFailed carries the residual.
    """
    span = omega.span
    if omega.degree != 2:
        raise UnsupportedElement("only 2-cochains are integrated")
    if span.degrees is None or span.grading is None:
        raise NotHomogeneous("span has no grading element")
    if omega.is_zero:
        return zero_cochain(span, 1)
    d = ad_degree(omega)
    if d == 0:
        raise DegreeZero("cochain has ad-degree zero")
    h = span.grading
    table = {}
    if per_degree:
        for j, degj in enumerate(span.degrees):
            if degj == d:
                raise ResonantDegree(
                    f"basis element {j} has degree {d}, the cochain degree"
                )
        for j in range(span.dim):
            val = omega.value((h, j))
            if any(not c.is_zero for c in val):
                factor = span.field.from_rational(Fraction(1, d - span.degrees[j]))
                table[(j,)] = span.scale_coords(val, factor)
    else:
        factor = span.field.from_rational(Fraction(1, d))
        for j in range(span.dim):
            val = omega.value((h, j))
            if any(not c.is_zero for c in val):
                table[(j,)] = span.scale_coords(val, factor)
    phi = Cochain(span, 1, table)
    residual = ce_differential(phi) - omega
    if not residual.is_zero:
        raise IntegrationFailed("primitive check d(phi) = omega failed", residual=residual)
    return phi
