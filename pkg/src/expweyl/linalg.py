"""Exact linear algebra over the scalar field.

Vectors live in free modules indexed by arbitrary hashable keys (monomials,
tensor tuples, (variable, monomial) pairs) and are stored sparsely as
mappings.  Everything reduces to fraction-field Gauss-Jordan elimination
with pivoting by the first nonzero entry; no numerics anywhere.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from .scalars import Scalar, ScalarField


def key_order(vectors: Sequence[Mapping]) -> list:
    """All keys appearing in ``vectors``, ordered by first appearance."""
    keys: list = []
    seen = set()
    for v in vectors:
        for k in v:
            if k not in seen:
                seen.add(k)
                keys.append(k)
    return keys


def to_rows(vectors: Sequence[Mapping], keys: Sequence, field: ScalarField) -> list[list[Scalar]]:
    zero = field.zero
    return [[v.get(k, zero) for k in keys] for v in vectors]


def rref(rows: Sequence[Sequence[Scalar]], field: ScalarField) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form, exact.

    The pivot in each column is the first remaining row with a nonzero
    entry there.  Returns the reduced matrix (zero rows dropped) and the
    list of pivot column indices.
    """
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = None
        for i in range(r, nrows):
            if not mat[i][c].is_zero:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = field.one / mat[r][c]
        mat[r] = [inv * x for x in mat[r]]
        for i in range(nrows):
            if i != r and not mat[i][c].is_zero:
                f = mat[i][c]
                row_i, row_r = mat[i], mat[r]
                mat[i] = [row_i[j] - f * row_r[j] for j in range(ncols)]
        pivots.append(c)
        r += 1
    return mat[:r], pivots


def span_rank(vectors: Sequence[Mapping], field: ScalarField) -> int:
    keys = key_order(vectors)
    _, pivots = rref(to_rows(vectors, keys, field), field)
    return len(pivots)


def independent(vectors: Sequence[Mapping], field: ScalarField) -> bool:
    return span_rank(vectors, field) == len(vectors)


def combination(
    vectors: Sequence[Mapping], target: Mapping, field: ScalarField
) -> list[Scalar] | None:
    """Coefficients c with sum(c_i * vectors[i]) = target, or None.

    Solved by eliminating the column matrix [v_1 ... v_m | target]; free
    columns receive coefficient zero, so the answer is the canonical one
    relative to the pivot set.
    """
    keys = key_order(list(vectors) + [target])
    zero = field.zero
    m = len(vectors)
    # column-style matrix: one row per key, one column per vector, then target
    rows = [[v.get(k, zero) for v in vectors] + [target.get(k, zero)] for k in keys]
    if not rows:
        return [zero] * m
    reduced, pivots = rref(rows, field)
    if m in pivots:
        return None
    coeffs = [zero] * m
    for r, c in enumerate(pivots):
        coeffs[c] = reduced[r][m]
    return coeffs


def kernel_basis(vectors: Sequence[Mapping], field: ScalarField) -> list[list[Scalar]]:
    """Basis of {c : sum(c_i * vectors[i]) = 0}, one generator per free column."""
    keys = key_order(vectors)
    zero, one = field.zero, field.one
    m = len(vectors)
    rows = [[v.get(k, zero) for v in vectors] for k in keys]
    if not rows:
        # every combination vanishes
        return [
            [one if j == f else zero for j in range(m)] for f in range(m)
        ]
    reduced, pivots = rref(rows, field)
    pivot_set = set(pivots)
    basis = []
    for f in range(m):
        if f in pivot_set:
            continue
        gen = [zero] * m
        gen[f] = one
        for r, c in enumerate(pivots):
            gen[c] = -reduced[r][f]
        basis.append(gen)
    return basis
