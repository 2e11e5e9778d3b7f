"""Finite free algebra schemes presented by structure constants.

An :class:`AlgebraScheme` of rank ``l`` is the data of basis labels
``e_0, ..., e_{l-1}`` and a multiplication table ``c[i][j][k]`` with
``e_i * e_j = sum_k c[i][j][k] e_k``.  The unit is always ``e_0``; tables are
validated for the unit law, commutativity, and associativity on construction.
Structure constants are rationals and are coerced into the working field at
the point of use, so one algebra value serves every coefficient field whose
characteristic does not divide a denominator.

Builtins cover truncated polynomial algebras (jets of order n), finite
products of the base (difference/period structures), and the one-parameter
family interpolating between differential and difference operators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .polynomials import MultiPoly, RingContext, exponents_up_to


class AlgebraValidationError(ValueError):
    """A structure-constant table violating one of the ring axioms."""


def _fractionize(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot read structure constant {value!r}")


class AlgebraScheme:
    """Finite free algebra scheme with a fixed unit-first basis."""

    __slots__ = ("rank", "labels", "table", "name")

    def __init__(
        self,
        labels: Sequence[str],
        table: Sequence[Sequence[Sequence[object]]],
        name: str = "custom",
    ):
        rank = len(labels)
        if rank < 1:
            raise AlgebraValidationError("rank must be at least 1")
        tab = tuple(
            tuple(tuple(_fractionize(v) for v in cell) for cell in row)
            for row in table
        )
        if len(tab) != rank or any(
            len(row) != rank or any(len(cell) != rank for cell in row) for row in tab
        ):
            raise AlgebraValidationError("structure table is not rank x rank x rank")
        self.rank = rank
        self.labels = tuple(str(s) for s in labels)
        self.table = tab
        self.name = name
        self._validate()

    def _validate(self) -> None:
        rank, tab = self.rank, self.table
        for j in range(rank):
            for k in range(rank):
                want = Fraction(1 if j == k else 0)
                if tab[0][j][k] != want:
                    raise AlgebraValidationError(
                        f"unit law violated: e_0*e_{j} has coefficient"
                        f" {tab[0][j][k]} on e_{k}"
                    )
                if tab[j][0][k] != want:
                    raise AlgebraValidationError(
                        f"unit law violated: e_{j}*e_0 has coefficient"
                        f" {tab[j][0][k]} on e_{k}"
                    )
        for i in range(rank):
            for j in range(i):
                if tab[i][j] != tab[j][i]:
                    raise AlgebraValidationError(
                        f"commutativity violated at (e_{i}, e_{j})"
                    )
        for i in range(rank):
            for j in range(rank):
                for m in range(rank):
                    left = [Fraction(0)] * rank
                    right = [Fraction(0)] * rank
                    for k in range(rank):
                        cij = tab[i][j][k]
                        if cij:
                            for n in range(rank):
                                left[n] += cij * tab[k][m][n]
                        cjm = tab[j][m][k]
                        if cjm:
                            for n in range(rank):
                                right[n] += cjm * tab[i][k][n]
                    if left != right:
                        raise AlgebraValidationError(
                            f"associativity violated at (e_{i}, e_{j}, e_{m})"
                        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AlgebraScheme)
            and self.labels == other.labels
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.table))

    def __repr__(self) -> str:
        return f"AlgebraScheme({self.name!r}, rank={self.rank})"

    def multiply_vectors(self, a: Sequence[Fraction], b: Sequence[Fraction]):
        """Rational coefficient vectors multiplied through the table."""
        out = [Fraction(0)] * self.rank
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                cell = self.table[i][j]
                for k in range(self.rank):
                    if cell[k]:
                        out[k] += ai * bj * cell[k]
        return out

    # -- elements -------------------------------------------------------------

    def element(self, ctx: RingContext, slots: Sequence) -> "AlgebraElement":
        if len(slots) != self.rank:
            raise ValueError(
                f"expected {self.rank} slots, got {len(slots)}"
            )
        polys = tuple(
            s if isinstance(s, MultiPoly) else ctx.const(_reduce(ctx, s))
            for s in slots
        )
        return AlgebraElement(self, ctx, polys)

    def unit(self, ctx: RingContext) -> "AlgebraElement":
        return self.element(ctx, [ctx.one()] + [ctx.zero()] * (self.rank - 1))

    def scalar(self, ctx: RingContext, poly: MultiPoly) -> "AlgebraElement":
        """Image of a base element under the standard inclusion s."""
        return self.element(ctx, [poly] + [ctx.zero()] * (self.rank - 1))


def _reduce(ctx: RingContext, value):
    if isinstance(value, Fraction):
        return ctx.field.from_fraction(value)
    return ctx.field.coerce(value)


class AlgebraElement:
    """Element of E(R): one polynomial per basis slot."""

    __slots__ = ("algebra", "ctx", "slots")

    def __init__(
        self, algebra: AlgebraScheme, ctx: RingContext, slots: tuple[MultiPoly, ...]
    ):
        if len(slots) != algebra.rank:
            raise ValueError("slot count does not match algebra rank")
        if any(s.ctx != ctx for s in slots):
            raise ValueError("slot polynomials from different contexts")
        self.algebra = algebra
        self.ctx = ctx
        self.slots = slots

    def _check(self, other: "AlgebraElement") -> None:
        if self.algebra != other.algebra:
            raise ValueError("elements of different algebras")
        if self.ctx != other.ctx:
            raise ValueError("elements over different contexts")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(
            self.algebra,
            self.ctx,
            tuple(a + b for a, b in zip(self.slots, other.slots)),
        )

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.ctx, tuple(-a for a in self.slots))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        algebra = self.algebra
        field = self.ctx.field
        out = [self.ctx.zero() for _ in range(algebra.rank)]
        for i, a in enumerate(self.slots):
            if a.is_zero():
                continue
            for j, b in enumerate(other.slots):
                if b.is_zero():
                    continue
                ab = a * b
                for k, c in enumerate(algebra.table[i][j]):
                    if c:
                        out[k] = out[k] + ab.scale(field.from_fraction(c))
        return AlgebraElement(algebra, self.ctx, tuple(out))

    def scale(self, poly) -> "AlgebraElement":
        if isinstance(poly, MultiPoly):
            return AlgebraElement(
                self.algebra, self.ctx, tuple(s * poly for s in self.slots)
            )
        return AlgebraElement(
            self.algebra, self.ctx, tuple(s.scale(poly) for s in self.slots)
        )

    def __pow__(self, n: int) -> "AlgebraElement":
        if n < 0:
            raise ValueError("negative power of an algebra element")
        out = self.algebra.unit(self.ctx)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.slots)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.algebra == other.algebra
            and self.ctx == other.ctx
            and self.slots == other.slots
        )

    def __hash__(self) -> int:
        return hash((self.algebra, self.slots))

    def __repr__(self) -> str:
        body = ", ".join(str(s) for s in self.slots)
        return f"<{self.algebra.name} element ({body})>"


def evaluate_in_algebra(
    poly: MultiPoly,
    assignment: Mapping[str, AlgebraElement],
    algebra: AlgebraScheme,
    ctx: RingContext,
) -> AlgebraElement:
    """Ring evaluation of a polynomial with algebra-element arguments.

    Every variable occurring in ``poly`` must be assigned; coefficients map
    through the unit.  Powers are cached per variable.
    """
    if poly.ctx.field != ctx.field:
        raise ValueError("coefficient fields differ")
    powers: dict[tuple[str, int], AlgebraElement] = {}

    def power(name: str, e: int) -> AlgebraElement:
        got = powers.get((name, e))
        if got is None:
            got = assignment[name] ** e
            powers[(name, e)] = got
        return got

    names = poly.ctx.all_vars
    total = algebra.element(ctx, [ctx.zero()] * algebra.rank)
    for m, c in poly.coeffs.items():
        term = algebra.scalar(ctx, ctx.const(c))
        for i, e in m.exps:
            name = names[i]
            if name not in assignment:
                raise ValueError(f"no algebra value assigned to {name!r}")
            term = term * power(name, e)
        total = total + term
    return total


# -- builtins -------------------------------------------------------------------


def trivial_algebra() -> AlgebraScheme:
    return AlgebraScheme(("1",), (((Fraction(1),),),), name="trivial")


def _monomial_label(exp: tuple[int, ...], names: Sequence[str]) -> str:
    if not any(exp):
        return "1"
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def truncated_algebra(nvars: int, order: int) -> AlgebraScheme:
    """Polynomial algebra in ``nvars`` nilpotents truncated above ``order``."""
    if nvars < 1 or order < 0:
        raise ValueError("need at least one variable and nonnegative order")
    exps = exponents_up_to(nvars, order, include_zero=True)
    index = {e: k for k, e in enumerate(exps)}
    names = ["h"] if nvars == 1 else [f"h{i + 1}" for i in range(nvars)]
    labels = [_monomial_label(e, names) for e in exps]
    rank = len(exps)
    table = []
    for a in exps:
        row = []
        for b in exps:
            cell = [Fraction(0)] * rank
            total = tuple(x + y for x, y in zip(a, b))
            if sum(total) <= order:
                cell[index[total]] = Fraction(1)
            row.append(cell)
        table.append(row)
    return AlgebraScheme(labels, table, name=f"truncated({nvars},{order})")


def dual_numbers() -> AlgebraScheme:
    return truncated_algebra(1, 1)


def product_algebra(n: int) -> AlgebraScheme:
    """n-fold product of the base, re-based so the unit comes first.

    With idempotent coordinates f_0, ..., f_{n-1}, the stored basis is
    e_0 = f_0 + ... + f_{n-1} (the unit) and e_j = f_j for j >= 1, so
    e_j * e_m = delta_jm * e_j off the unit row.
    """
    if n < 1:
        raise ValueError("need at least one factor")
    labels = ["1"] + [f"u{j}" for j in range(1, n)]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            cell = [Fraction(0)] * n
            if i == 0:
                cell[j] = Fraction(1)
            elif j == 0:
                cell[i] = Fraction(1)
            elif i == j:
                cell[i] = Fraction(1)
            row.append(cell)
        table.append(row)
    return AlgebraScheme(labels, table, name=f"product({n})")


def dring_algebra(c) -> AlgebraScheme:
    """Rank-2 algebra with e_1^2 = c*e_1; c = 0 gives the dual numbers."""
    c = _fractionize(c)
    table = (
        ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
        ((Fraction(0), Fraction(1)), (Fraction(0), c)),
    )
    return AlgebraScheme(("1", "d"), table, name=f"dring({c})")


def custom_algebra(labels, table, name: str = "custom") -> AlgebraScheme:
    return AlgebraScheme(labels, table, name=name)


def make_builtin(spec) -> AlgebraScheme:
    """Algebra from a JSON-shaped spec dict (see fixture schema)."""
    if isinstance(spec, AlgebraScheme):
        return spec
    if not isinstance(spec, dict):
        raise ValueError(f"cannot read algebra spec {spec!r}")
    if "builtin" in spec:
        kind = spec["builtin"]
        if kind == "trivial":
            return trivial_algebra()
        if kind == "truncated":
            return truncated_algebra(int(spec["vars"]), int(spec["order"]))
        if kind == "product":
            return product_algebra(int(spec["n"]))
        if kind == "dring":
            return dring_algebra(spec["c"])
        raise ValueError(f"unknown builtin algebra {kind!r}")
    if "basis" in spec and "mult" in spec:
        return custom_algebra(spec["basis"], spec["mult"], name=spec.get("name", "custom"))
    raise ValueError("algebra spec needs either 'builtin' or 'basis'+'mult'")


# -- tensor products --------------------------------------------------------------


def _tensor_labels(e: AlgebraScheme, f: AlgebraScheme) -> list[str]:
    left = list(e.labels)
    right = list(f.labels)
    clash = {a for a in left if a != "1"} & {b for b in right if b != "1"}
    if clash:
        left = [a if a == "1" else f"{a}1" for a in left]
        right = [b if b == "1" else f"{b}2" for b in right]
    out = []
    for a in left:
        for b in right:
            if a == "1" and b == "1":
                out.append("1")
            elif a == "1":
                out.append(b)
            elif b == "1":
                out.append(a)
            else:
                out.append(f"{a}*{b}")
    return out


def tensor(e: AlgebraScheme, f: AlgebraScheme) -> AlgebraScheme:
    """Tensor product with basis e_j (x) f_j' ordered (j, j')-lexicographically,
    so the flat index of (j, j') is j*rank(F) + j'."""
    le, lf = e.rank, f.rank
    rank = le * lf
    table = []
    for i in range(le):
        for ip in range(lf):
            row = []
            for j in range(le):
                for jp in range(lf):
                    cell = [Fraction(0)] * rank
                    ce = e.table[i][j]
                    cf = f.table[ip][jp]
                    for k in range(le):
                        if not ce[k]:
                            continue
                        for kp in range(lf):
                            if cf[kp]:
                                cell[k * lf + kp] = ce[k] * cf[kp]
                    row.append(cell)
            table.append(row)
    return AlgebraScheme(
        _tensor_labels(e, f), table, name=f"tensor({e.name},{f.name})"
    )


def tensor_swap_permutation(e: AlgebraScheme, f: AlgebraScheme) -> list[int]:
    """Permutation carrying tensor(E,F) coordinates to tensor(F,E): position
    j*rank(F) + j' maps to position j'*rank(E) + j."""
    return [
        jp * e.rank + j for j in range(e.rank) for jp in range(f.rank)
    ]


def basis_power_expansion(e: AlgebraScheme, gamma: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients of prod_j e_j^(gamma_j) in the basis."""
    if len(gamma) != e.rank:
        raise ValueError("exponent vector length does not match rank")
    vec = [Fraction(1)] + [Fraction(0)] * (e.rank - 1)
    basis_vec = [Fraction(0)] * e.rank
    for j, g in enumerate(gamma):
        if g < 0:
            raise ValueError("negative exponent")
        if g == 0:
            continue
        basis_vec = [Fraction(0)] * e.rank
        basis_vec[j] = Fraction(1)
        for _ in range(g):
            vec = e.multiply_vectors(vec, basis_vec)
    return tuple(vec)
