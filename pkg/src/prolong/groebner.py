"""Exact ideal arithmetic and linear algebra.

Buchberger's algorithm over a field with the normal selection strategy,
reduced bases, ideal membership and equality, plus exact row reduction for
rank and kernel computations.  Base-ring generators participate as ordinary
ring variables (ordered after the scheme variables by the context), so ideal
identities over a polynomial base ring become ideal identities here.

A configurable pair cap turns runaway computations into an explicit
:class:`EngineLimitError` instead of a wrong or slow answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .polynomials import MONOMIAL_ORDERS, Monomial, MultiPoly, RingContext
from .scalars import Field

DEFAULT_PAIR_LIMIT = 50000


class EngineLimitError(RuntimeError):
    """Raised when the pair-reduction cap is hit; the answer is inconclusive."""

    def __init__(self, limit: int):
        super().__init__(
            f"Groebner computation exceeded {limit} pair reductions; inconclusive"
        )
        self.limit = limit


@dataclass(frozen=True)
class GroebnerBasis:
    gens: tuple[MultiPoly, ...]
    order: str
    reduced: bool = True

    @property
    def ctx(self) -> RingContext:
        if not self.gens:
            raise ValueError("empty basis has no context")
        return self.gens[0].ctx

    def normal_form(self, poly: MultiPoly) -> MultiPoly:
        return normal_form(poly, self.gens, self.order)

    def contains(self, poly: MultiPoly) -> bool:
        return self.normal_form(poly).is_zero()


def _leading(poly: MultiPoly, order: str) -> tuple[Monomial, object]:
    key = MONOMIAL_ORDERS[order]
    lm = poly.leading_monomial(key)
    return lm, poly.coeffs[lm]


def normal_form(
    poly: MultiPoly, basis: Sequence[MultiPoly], order: str = "grevlex"
) -> MultiPoly:
    """Remainder of ``poly`` under multivariate division by ``basis``.

    Divisors are tried in list order (first divisible leading monomial wins),
    which makes the result deterministic for any basis and canonical when the
    basis is a reduced Groebner basis.
    """
    key = MONOMIAL_ORDERS[order]
    field = poly.ctx.field
    table = [(g.leading_monomial(key), g) for g in basis if not g.is_zero()]
    nvars = poly.ctx.nvars

    work = dict(poly.coeffs)
    remainder: dict[Monomial, object] = {}
    while work:
        lm = max(work, key=lambda m: key(m, nvars))
        lc = work.pop(lm)
        for gm, g in table:
            if gm.divides(lm):
                shift = lm.divide(gm)
                factor = field.div(lc, g.coeffs[gm])
                for m, c in g.coeffs.items():
                    if m == gm:
                        continue
                    mono = m.mul(shift)
                    value = field.sub(
                        work.get(mono, field.zero), field.mul(factor, c)
                    )
                    if field.is_zero(value):
                        work.pop(mono, None)
                    else:
                        work[mono] = value
                break
        else:
            remainder[lm] = lc
    return MultiPoly(poly.ctx, remainder)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: str = "grevlex") -> MultiPoly:
    fm, fc = _leading(f, order)
    gm, gc = _leading(g, order)
    lcm = fm.lcm(gm)
    field = f.ctx.field
    left = MultiPoly(f.ctx, {lcm.divide(fm): field.inv(fc)}) * f
    right = MultiPoly(g.ctx, {lcm.divide(gm): field.inv(gc)}) * g
    return left - right


def _monic(poly: MultiPoly, order: str) -> MultiPoly:
    _, lc = _leading(poly, order)
    return poly.scale(poly.ctx.field.inv(lc))


def groebner(
    gens: Iterable[MultiPoly],
    order: str = "grevlex",
    pair_limit: int = DEFAULT_PAIR_LIMIT,
) -> GroebnerBasis:
    """Reduced Groebner basis via Buchberger.

    Pair selection follows the normal strategy: smallest lcm total degree
    first, ties broken by pair index.  Pairs with coprime leading monomials
    are discarded.  Raises :class:`EngineLimitError` after ``pair_limit``
    S-polynomial reductions.
    """
    if order not in MONOMIAL_ORDERS:
        raise ValueError(f"unknown monomial order {order!r}")
    basis = [g for g in gens if not g.is_zero()]
    if not basis:
        return GroebnerBasis((), order)
    ctx = basis[0].ctx
    if any(g.ctx != ctx for g in basis):
        raise ValueError("generators from different contexts")
    basis = [_monic(g, order) for g in basis]
    key = MONOMIAL_ORDERS[order]
    lms = [g.leading_monomial(key) for g in basis]

    pairs: set[tuple[int, int]] = {
        (i, j) for j in range(len(basis)) for i in range(j)
    }
    reductions = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (lms[p[0]].lcm(lms[p[1]]).degree(), p))
        pairs.remove((i, j))
        if lms[i].coprime(lms[j]):
            continue
        reductions += 1
        if reductions > pair_limit:
            raise EngineLimitError(pair_limit)
        remainder = normal_form(s_polynomial(basis[i], basis[j], order), basis, order)
        if remainder.is_zero():
            continue
        remainder = _monic(remainder, order)
        basis.append(remainder)
        lms.append(remainder.leading_monomial(key))
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))

    # minimize: drop generators whose leading monomial another one divides
    keep: list[int] = []
    for i in range(len(basis)):
        lm = lms[i]
        redundant = any(
            k != i and lms[k].divides(lm) and (lms[k] != lm or k < i)
            for k in range(len(basis))
        )
        if not redundant:
            keep.append(i)
    minimal = [basis[i] for i in keep]

    # tail-reduce each against the others
    reduced: list[MultiPoly] = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        reduced.append(_monic(normal_form(g, others, order), order))
    nvars = ctx.nvars
    reduced.sort(key=lambda g: key(g.leading_monomial(key), nvars), reverse=True)
    return GroebnerBasis(tuple(reduced), order)


def _as_basis(gens, order: str, pair_limit: int) -> GroebnerBasis:
    if isinstance(gens, GroebnerBasis):
        return gens
    return groebner(gens, order, pair_limit)


def ideal_member(
    poly: MultiPoly,
    gens,
    order: str = "grevlex",
    pair_limit: int = DEFAULT_PAIR_LIMIT,
) -> bool:
    """Exact ideal membership via zero normal form."""
    gb = _as_basis(gens, order, pair_limit)
    if not gb.gens:
        return poly.is_zero()
    return gb.contains(poly)


def ideal_equal(
    gens_a,
    gens_b,
    order: str = "grevlex",
    pair_limit: int = DEFAULT_PAIR_LIMIT,
) -> bool:
    """Ideal equality as mutual membership of generators."""
    gb_a = _as_basis(gens_a, order, pair_limit)
    gb_b = _as_basis(gens_b, order, pair_limit)
    a_gens = gb_a.gens
    b_gens = gb_b.gens
    return all(ideal_member(g, gb_b, order, pair_limit) for g in a_gens) and all(
        ideal_member(g, gb_a, order, pair_limit) for g in b_gens
    )


# -- exact linear algebra -------------------------------------------------------


class ExactMatrix:
    """Dense matrix of exact field scalars with optional labels."""

    __slots__ = ("field", "rows", "ncols", "row_labels", "col_labels")

    def __init__(
        self,
        field: Field,
        rows: Sequence[Sequence[object]],
        ncols: int | None = None,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ):
        coerced = [[field.coerce(v) for v in row] for row in rows]
        if ncols is None:
            if col_labels is not None:
                ncols = len(col_labels)
            elif coerced:
                ncols = len(coerced[0])
            else:
                ncols = 0
        for row in coerced:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        if row_labels is not None and len(row_labels) != len(coerced):
            raise ValueError("row label count mismatch")
        if col_labels is not None and len(col_labels) != ncols:
            raise ValueError("column label count mismatch")
        self.field = field
        self.rows = coerced
        self.ncols = ncols
        self.row_labels = tuple(row_labels) if row_labels is not None else None
        self.col_labels = tuple(col_labels) if col_labels is not None else None

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols} over {self.field!r})"


def _clear_denominators(field: Field, row: list) -> list:
    if not field.is_rational:
        return row
    denom = 1
    for v in row:
        denom = denom * v.denominator // _gcd(denom, v.denominator)
    if denom == 1:
        return row
    return [v * denom for v in row]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _rref(field: Field, rows: Sequence[Sequence[object]], ncols: int):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    work = [_clear_denominators(field, list(r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next(
            (i for i in range(r, len(work)) if not field.is_zero(work[i][c])), None
        )
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = field.inv(work[r][c])
        work[r] = [field.mul(v, inv) for v in work[r]]
        for i in range(len(work)):
            if i == r or field.is_zero(work[i][c]):
                continue
            factor = work[i][c]
            work[i] = [
                field.sub(v, field.mul(factor, w)) for v, w in zip(work[i], work[r])
            ]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank(matrix: ExactMatrix) -> int:
    _, pivots = _rref(matrix.field, matrix.rows, matrix.ncols)
    return len(pivots)


def kernel_basis(matrix: ExactMatrix) -> list[list]:
    """Canonical kernel basis: one vector per free column, ascending, with a
    one in its free column and zeros in the other free columns."""
    field = matrix.field
    echelon, pivots = _rref(field, matrix.rows, matrix.ncols)
    pivot_set = set(pivots)
    free = [c for c in range(matrix.ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [field.zero] * matrix.ncols
        vec[f] = field.one
        for r, c in enumerate(pivots):
            vec[c] = field.neg(echelon[r][f])
        basis.append(vec)
    return basis


def solve_linear(matrix: ExactMatrix, rhs: Sequence[object]):
    """One exact solution of M x = rhs, or None when inconsistent."""
    field = matrix.field
    if len(rhs) != matrix.nrows:
        raise ValueError("right-hand side length mismatch")
    augmented = [
        list(row) + [field.coerce(v)] for row, v in zip(matrix.rows, rhs)
    ]
    echelon, pivots = _rref(field, augmented, matrix.ncols + 1)
    if matrix.ncols in pivots:
        return None
    solution = [field.zero] * matrix.ncols
    for r, c in enumerate(pivots):
        solution[c] = echelon[r][matrix.ncols]
    return solution


def matrix_product(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.ncols != b.nrows:
        raise ValueError("shape mismatch")
    field = a.field
    rows = []
    for row in a.rows:
        out = [field.zero] * b.ncols
        for k, v in enumerate(row):
            if field.is_zero(v):
                continue
            brow = b.rows[k]
            for j in range(b.ncols):
                out[j] = field.add(out[j], field.mul(v, brow[j]))
        rows.append(out)
    return ExactMatrix(field, rows, ncols=b.ncols)


def apply_matrix(matrix: ExactMatrix, vector: Sequence[object]) -> list:
    field = matrix.field
    if len(vector) != matrix.ncols:
        raise ValueError("vector length mismatch")
    vec = [field.coerce(v) for v in vector]
    out = []
    for row in matrix.rows:
        acc = field.zero
        for v, x in zip(row, vec):
            acc = field.add(acc, field.mul(v, x))
        out.append(acc)
    return out
