"""Exact scalar arithmetic for the kernel.

Scalars form the field Q(g_2, ..., g_r): multivariate rational functions over Q
in the independent symbols attached to the exponent-lattice generators
(g_1 = 1 always, so rank 1 means plain rationals).  A field may additionally
carry a truncated hbar series mode: scalars are then polynomials in hbar cut
off above a fixed order, with componentwise addition, convolution product, and
division by series with invertible constant term.

Representation: a scalar holds one payload per hbar slot.  At rank 1 a payload
is a gmpy2 rational; at rank >= 2 it is a reduced numerator/denominator pair of
polynomials (gcd cancelled, denominator primitive with integer coefficients and
positive leading coefficient), so structural equality is canonical-form
equality.  Polynomial arithmetic is delegated to sympy's dense ring elements;
everything above that layer is defined here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy.polys.domains import QQ
from sympy.polys.rings import ring as _sympy_ring

from .errors import (
    DivisionByZero,
    HbarModeOff,
    NonInvertibleSeries,
    SignatureMismatch,
)

__all__ = ["GroupElement", "Scalar", "ScalarField"]


# ---------------------------------------------------------------------------
# Exponent lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """Element of the exponent lattice, as integer coordinates over g_1..g_r."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("group element needs rank >= 1")
        if not all(isinstance(c, int) for c in self.coords):
            raise TypeError("coordinates must be integers")

    @staticmethod
    def zero(rank: int) -> "GroupElement":
        return GroupElement((0,) * rank)

    @staticmethod
    def unit(j: int, rank: int) -> "GroupElement":
        """The generator g_j (1-based)."""
        if not 1 <= j <= rank:
            raise SignatureMismatch(f"generator index {j} out of range 1..{rank}")
        return GroupElement(tuple(1 if k == j - 1 else 0 for k in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: "GroupElement") -> None:
        if self.rank != other.rank:
            raise SignatureMismatch("group elements of different rank")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple(-a for a in self.coords))

    def scale(self, k: int) -> "GroupElement":
        return GroupElement(tuple(k * a for a in self.coords))

    def l1(self) -> int:
        return sum(abs(a) for a in self.coords)

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.coords) + ")"


# ---------------------------------------------------------------------------
# Payload adapters: one per coefficient representation
# ---------------------------------------------------------------------------

class _RationalOps:
    """Rank-1 payloads: gmpy2 rationals via the QQ domain."""

    def __init__(self):
        self.zero = QQ.zero
        self.one = QQ.one

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def div(self, x, y):
        if not y:
            raise DivisionByZero("scalar division by zero")
        return x / y

    def is_zero(self, x) -> bool:
        return not x

    def from_mpq(self, q):
        return q

    def gen(self, j: int):
        raise SignatureMismatch("rank-1 field has no symbolic generators")


class _RatPoly:
    """Reduced fraction of ring polynomials; canonical by construction."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def __eq__(self, other):
        return (
            isinstance(other, _RatPoly)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        # PolyElement caches its own hash and sympy mutates polys in place
        # during construction, so hash the term content directly.
        num = tuple(sorted(self.num.items(), key=lambda kv: kv[0]))
        den = tuple(sorted(self.den.items(), key=lambda kv: kv[0]))
        return hash((num, den))

    def __repr__(self):
        return f"_RatPoly({self.num}, {self.den})"


class _RatPolyOps:
    """Rank >= 2 payloads.

    A payload is either a gmpy2 rational (constant values, the common case in
    kernel arithmetic) or a reduced _RatPoly pair over Q[g_2..g_r].  Constants
    are always demoted to the rational form, so representations stay canonical
    and the polynomial machinery only runs when symbols are actually present.
    """

    def __init__(self, names: Sequence[str]):
        created = _sympy_ring(",".join(names), QQ)
        self.ring = created[0]
        self.zero = QQ.zero
        self.one = QQ.one
        # canonical pairs reuse this exact object for trivial denominators,
        # so hot paths can test `den is self.pone` instead of polynomial ==
        self.pone = self.ring.one

    def _lift(self, x):
        if isinstance(x, _RatPoly):
            return x
        return _RatPoly(self.ring.ground_new(x), self.pone)

    def _demote(self, x: _RatPoly):
        if x.den is self.pone:
            if not x.num:
                return QQ.zero
            if x.num.is_ground:
                return next(iter(x.num.values()))
        return x

    def _new(self, num, den):
        one = self.pone
        if not num:
            return QQ.zero
        if den is not one:
            g = num.gcd(den)
            if not g.is_ground:
                num = num.quo(g)
                den = den.quo(g)
            if den.is_ground:
                q = next(iter(den.values()))
                if q != QQ.one:
                    num = num.mul_ground(QQ.one / q)
                den = one
            else:
                c = den.content()
                if den.LC < 0:
                    c = -c
                if c != QQ.one:
                    inv = QQ.one / QQ.convert(c)
                    num = num.mul_ground(inv)
                    den = den.mul_ground(inv)
        return self._demote(_RatPoly(num, den))

    def add(self, x, y):
        xp, yp = isinstance(x, _RatPoly), isinstance(y, _RatPoly)
        if not xp and not yp:
            return x + y
        if xp != yp:
            # constant + reduced pair: numerator shift keeps the pair reduced
            if xp:
                x, y = y, x
            if not x:
                return y
            if y.den is self.pone:
                return _RatPoly(y.num + self.ring.ground_new(x), self.pone)
            num = y.num + y.den.mul_ground(x)
            if not num:
                return QQ.zero
            return _RatPoly(num, y.den)
        if x.den is self.pone and y.den is self.pone:
            num = x.num + y.num
            if not num:
                return QQ.zero
            if num.is_ground:
                return next(iter(num.values()))
            return _RatPoly(num, self.pone)
        if x.den == y.den:
            return self._new(x.num + y.num, x.den)
        return self._new(x.num * y.den + y.num * x.den, x.den * y.den)

    def neg(self, x):
        if not isinstance(x, _RatPoly):
            return -x
        return _RatPoly(-x.num, x.den)

    def mul(self, x, y):
        xp, yp = isinstance(x, _RatPoly), isinstance(y, _RatPoly)
        if not xp and not yp:
            return x * y
        if xp != yp:
            # scaling a reduced pair by a constant cannot create a common factor
            if xp:
                x, y = y, x
            if not x:
                return QQ.zero
            return _RatPoly(y.num.mul_ground(x), y.den)
        if x.den is self.pone and y.den is self.pone:
            return _RatPoly(x.num * y.num, self.pone)
        return self._new(x.num * y.num, x.den * y.den)

    def div(self, x, y):
        if not isinstance(y, _RatPoly):
            if not y:
                raise DivisionByZero("scalar division by zero")
            if not isinstance(x, _RatPoly):
                return x / y
            return _RatPoly(x.num.mul_ground(QQ.one / y), x.den)
        x = self._lift(x)
        if not y.num:
            raise DivisionByZero("scalar division by zero")
        return self._new(x.num * y.den, x.den * y.num)

    def is_zero(self, x) -> bool:
        if isinstance(x, _RatPoly):
            return not x.num
        return not x

    def from_mpq(self, q):
        return q

    def gen(self, j: int) -> _RatPoly:
        return _RatPoly(self.ring.gens[j - 2], self.pone)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

class Scalar:
    """Immutable field element; a tuple of payloads, one per hbar power."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "ScalarField", coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise SignatureMismatch("scalars from different fields")
            return other
        if isinstance(other, int):
            return self.field.from_rational(other)
        if isinstance(other, Fraction):
            return self.field.from_rational(other)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ops = self.field._ops
        a, b = self.coeffs, o.coeffs
        if len(a) == 1:
            return Scalar(self.field, (ops.add(a[0], b[0]),))
        return Scalar(self.field, tuple(ops.add(x, y) for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        ops = self.field._ops
        return Scalar(self.field, tuple(ops.neg(a) for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        ops = self.field._ops
        a, b = self.coeffs, o.coeffs
        slots = len(a)
        if slots == 1:
            return Scalar(self.field, (ops.mul(a[0], b[0]),))
        out = []
        for k in range(slots):
            acc = ops.zero
            for i in range(k + 1):
                ai, bj = a[i], b[k - i]
                if not (ops.is_zero(ai) or ops.is_zero(bj)):
                    acc = ops.add(acc, ops.mul(ai, bj))
            out.append(acc)
        return Scalar(self.field, tuple(out))

    __rmul__ = __mul__

    def _inverse(self) -> "Scalar":
        ops = self.field._ops
        b = self.coeffs
        if all(ops.is_zero(c) for c in b):
            raise DivisionByZero("scalar division by zero")
        if ops.is_zero(b[0]):
            raise NonInvertibleSeries("series has zero constant term")
        slots = len(b)
        inv = [ops.div(ops.one, b[0])]
        for k in range(1, slots):
            acc = ops.zero
            for j in range(1, k + 1):
                if not ops.is_zero(b[j]):
                    acc = ops.add(acc, ops.mul(b[j], inv[k - j]))
            inv.append(ops.neg(ops.div(acc, b[0])))
        return Scalar(self.field, tuple(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o._inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self._inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self._inverse() ** (-e)
        out = self.field.one
        for _ in range(e):
            out = out * self
        return out

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return other.field is self.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    @property
    def is_zero(self) -> bool:
        ops = self.field._ops
        return all(ops.is_zero(c) for c in self.coeffs)

    @property
    def is_unit(self) -> bool:
        """Invertible: nonzero constant term (equivalently nonzero at rank of 1 slot)."""
        return not self.field._ops.is_zero(self.coeffs[0])

    def hbar_coefficient(self, k: int) -> "Scalar":
        """Coefficient of hbar^k, as a scalar of the hbar-free base field."""
        if not 0 <= k < len(self.coeffs):
            raise HbarModeOff(f"no hbar^{k} slot in this field")
        return Scalar(self.field.base, (self.coeffs[k],))

    def as_rational(self) -> Fraction | None:
        """The value as a plain rational, if it is one; else None."""
        ops = self.field._ops
        for c in self.coeffs[1:]:
            if not ops.is_zero(c):
                return None
        c0 = self.coeffs[0]
        if isinstance(c0, _RatPoly):
            # canonical pairs are never constant (they would be demoted)
            return None
        return Fraction(int(c0.numerator), int(c0.denominator))

    def payload_data(self, k: int):
        """Slot-k payload as primitive data for renderers.

        Returns ("rat", Fraction) for rational payloads and
        ("poly", num_terms, den_terms) for symbolic ones, where each terms
        tuple lists (exponents over g_2.., coefficient) descending.
        """
        p = self.coeffs[k]
        if isinstance(p, _RatPoly):
            return ("poly", _poly_terms(p.num), _poly_terms(p.den))
        return ("rat", Fraction(int(p.numerator), int(p.denominator)))

    # -- text ----------------------------------------------------------------

    def to_text(self) -> str:
        return _scalar_text(self)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Scalar({self.to_text()!r})"


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------

class ScalarField:
    """Context object: rank, generator names, optional hbar truncation order."""

    def __init__(
        self,
        rank: int = 1,
        hbar_order: int | None = None,
        names: Sequence[str] | None = None,
        _ops=None,
        _base: "ScalarField | None" = None,
    ):
        if rank < 1:
            raise SignatureMismatch("rank must be >= 1")
        if hbar_order is not None and hbar_order < 0:
            raise SignatureMismatch("hbar order must be >= 0")
        if names is None:
            names = tuple(f"g_{j}" for j in range(1, rank + 1))
        names = tuple(names)
        if len(names) != rank:
            raise SignatureMismatch("need one generator name per rank")
        self.rank = rank
        self.names = names
        self.hbar_order = hbar_order
        self.slots = 1 if hbar_order is None else hbar_order + 1
        if _ops is not None:
            self._ops = _ops
        elif rank == 1:
            self._ops = _RationalOps()
        else:
            self._ops = _RatPolyOps(names[1:])
        self._base = _base
        self._int_cache: dict[int, Scalar] = {}
        self._embed_cache: dict[tuple[int, ...], Scalar] = {}
        self.zero = Scalar(self, (self._ops.zero,) * self.slots)
        one = [self._ops.one] + [self._ops.zero] * (self.slots - 1)
        self.one = Scalar(self, tuple(one))
        self._int_cache[0] = self.zero
        self._int_cache[1] = self.one

    @property
    def base(self) -> "ScalarField":
        """The hbar-free field with the same rank, sharing payload arithmetic."""
        if self.hbar_order is None:
            return self
        if self._base is None:
            self._base = ScalarField(self.rank, None, self.names, _ops=self._ops)
        return self._base

    def with_hbar(self, order: int) -> "ScalarField":
        """An hbar-truncated twin of this field (payloads interoperable)."""
        return ScalarField(self.rank, order, self.names, _ops=self._ops, _base=self.base)

    def lift(self, s: Scalar) -> Scalar:
        """Reinterpret a scalar from an ops-sharing twin inside this field."""
        if s.field is self:
            return s
        if s.field._ops is not self._ops or len(s.coeffs) > self.slots:
            raise SignatureMismatch("scalar does not lift into this field")
        return Scalar(self, s.coeffs + (self._ops.zero,) * (self.slots - len(s.coeffs)))

    @property
    def hbar(self) -> Scalar:
        if self.hbar_order is None:
            raise HbarModeOff("field has no hbar (enable a truncation order)")
        if self.hbar_order == 0:
            return self.zero
        coeffs = [self._ops.zero] * self.slots
        coeffs[1] = self._ops.one
        return Scalar(self, tuple(coeffs))

    def from_rational(self, value) -> Scalar:
        if isinstance(value, int):
            cached = self._int_cache.get(value)
            if cached is not None:
                return cached
            q = QQ(value)
        elif isinstance(value, str):
            f = Fraction(value)
            q = QQ(f.numerator, f.denominator)
        elif isinstance(value, Fraction):
            q = QQ(value.numerator, value.denominator)
        else:
            q = QQ.convert(value)
        coeffs = [self._ops.from_mpq(q)] + [self._ops.zero] * (self.slots - 1)
        s = Scalar(self, tuple(coeffs))
        if isinstance(value, int) and -64 <= value <= 256:
            self._int_cache[value] = s
        return s

    def generator(self, j: int) -> Scalar:
        """The scalar g_j (1-based); g_1 is the unit."""
        if not 1 <= j <= self.rank:
            raise SignatureMismatch(f"generator index {j} out of range 1..{self.rank}")
        if j == 1:
            return self.one
        coeffs = [self._ops.gen(j)] + [self._ops.zero] * (self.slots - 1)
        return Scalar(self, tuple(coeffs))

    def embed(self, ge: GroupElement) -> Scalar:
        """Lattice embedding: sum of coords[j] * g_j (g_1 = 1)."""
        if ge.rank != self.rank:
            raise SignatureMismatch("group element rank does not match field")
        hit = self._embed_cache.get(ge.coords)
        if hit is not None:
            return hit
        out = self.zero
        for j, c in enumerate(ge.coords, start=1):
            if c:
                out = out + self.generator(j) * c
        self._embed_cache[ge.coords] = out
        return out

    def __repr__(self):
        hb = f", hbar<= {self.hbar_order}" if self.hbar_order is not None else ""
        return f"ScalarField(rank={self.rank}{hb})"


# ---------------------------------------------------------------------------
# Canonical text form
# ---------------------------------------------------------------------------

def _poly_terms(p) -> tuple:
    out = []
    for monom, coeff in p.terms():
        out.append((tuple(monom), Fraction(int(coeff.numerator), int(coeff.denominator))))
    out.sort(reverse=True)
    return tuple(out)


def _term_text(coeff: int, exps: tuple[int, ...], k: int, names: Sequence[str]) -> str:
    parts = []
    for j, e in enumerate(exps):
        if e:
            name = names[j + 1]
            parts.append(name if e == 1 else f"{name}^{e}")
    if k:
        parts.append("hbar" if k == 1 else f"hbar^{k}")
    if not parts:
        return str(coeff)
    body = "*".join(parts)
    if coeff == 1:
        return body
    if coeff == -1:
        return "-" + body
    return f"{coeff}*{body}"


def _join_terms(texts: Iterable[str]) -> str:
    out = ""
    for t in texts:
        if not out:
            out = t
        elif t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


def _scalar_text(s: Scalar) -> str:
    field = s.field
    ops = field._ops
    if s.is_zero:
        return "0"
    if isinstance(ops, _RationalOps):
        dens = [int(c.denominator) for c in s.coeffs if c]
        d = math.lcm(*dens) if dens else 1
        terms = []
        for k, c in enumerate(s.coeffs):
            if c:
                terms.append((k, (), int(c.numerator) * (d // int(c.denominator))))
    else:
        one = ops.pone
        lifted = [None if ops.is_zero(c) else ops._lift(c) for c in s.coeffs]
        d_poly = one
        for c in lifted:
            if c is not None and c.den != one:
                g = d_poly.gcd(c.den)
                d_poly = (d_poly * c.den).quo(g)
        m = 1
        scaled = []
        for k, c in enumerate(lifted):
            if c is None:
                scaled.append(None)
                continue
            p = c.num * d_poly.quo(c.den)
            scaled.append(p)
            for _, q in p.terms():
                m = math.lcm(m, int(q.denominator))
        terms = []
        for k, p in enumerate(scaled):
            if p is None:
                continue
            for exps, q in p.terms():
                terms.append((k, tuple(exps), int(q.numerator) * (m // int(q.denominator))))
        if d_poly == one:
            d = m
        else:
            den_terms = [((), tuple(e), int(q) * m) for e, q in d_poly.terms()]
            den_terms.sort(key=lambda t: (sum(t[1]), t[1]), reverse=True)
            den_text = _join_terms(_term_text(c, e, 0, field.names) for _, e, c in den_terms)
            terms.sort(key=lambda t: (t[0], -sum(t[1]), tuple(-x for x in t[1])))
            num_text = _join_terms(_term_text(c, e, k, field.names) for k, e, c in terms)
            return f"({num_text})/({den_text})"

    terms.sort(key=lambda t: (t[0], -sum(t[1]), tuple(-x for x in t[1])))
    num_text = _join_terms(_term_text(c, e, k, field.names) for k, e, c in terms)
    symbolic = len(terms) > 1 or terms[0][1] or terms[0][0]
    if d == 1:
        return f"({num_text})" if len(terms) > 1 else num_text
    if not symbolic:
        return f"{num_text}/{d}"
    return f"({num_text})/({d})"
