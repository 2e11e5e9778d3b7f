"""Sparse multivariate polynomials over an exact coefficient field.

A :class:`RingContext` fixes the coefficient field, the base-ring generator
names (coefficients may be polynomials in these), and the scheme variable
names.  The total variable order is scheme variables first, base generators
after them; monomials index into that order.  Polynomials are sparse maps
from monomials to nonzero scalars.

Everything here is immutable after construction and all operations are pure,
so values can be shared freely across threads.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .scalars import Field

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Monomial:
    """Sparse exponent vector; zero exponents are never stored."""

    __slots__ = ("exps",)

    def __init__(self, exps: Iterable[tuple[int, int]] = ()):
        pairs = tuple(sorted((i, e) for i, e in exps if e != 0))
        for i, e in pairs:
            if i < 0 or e < 0:
                raise ValueError(f"bad monomial entry ({i}, {e})")
        self.exps = pairs

    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def get(self, index: int) -> int:
        for i, e in self.exps:
            if i == index:
                return e
        return 0

    def is_one(self) -> bool:
        return not self.exps

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.exps)

    def mul(self, other: "Monomial") -> "Monomial":
        out = dict(self.exps)
        for i, e in other.exps:
            out[i] = out.get(i, 0) + e
        return Monomial(out.items())

    def divides(self, other: "Monomial") -> bool:
        return all(other.get(i) >= e for i, e in self.exps)

    def divide(self, other: "Monomial") -> "Monomial":
        """Return self / other; other must divide self."""
        out = dict(self.exps)
        for i, e in other.exps:
            have = out.get(i, 0) - e
            if have < 0:
                raise ValueError("monomial does not divide")
            out[i] = have
        return Monomial(out.items())

    def lcm(self, other: "Monomial") -> "Monomial":
        out = dict(self.exps)
        for i, e in other.exps:
            out[i] = max(out.get(i, 0), e)
        return Monomial(out.items())

    def coprime(self, other: "Monomial") -> bool:
        mine = set(self.indices())
        return not any(i in mine for i in other.indices())

    def dense(self, nvars: int) -> tuple[int, ...]:
        out = [0] * nvars
        for i, e in self.exps:
            out[i] = e
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return hash(self.exps)

    def __repr__(self) -> str:
        return f"Monomial({list(self.exps)!r})"


MONOMIAL_ONE = Monomial()


def grlex_key(m: Monomial, nvars: int) -> tuple:
    """Graded lexicographic key; larger key means larger monomial."""
    return (m.degree(), m.dense(nvars))


def grevlex_key(m: Monomial, nvars: int) -> tuple:
    """Graded reverse lexicographic key; larger key means larger monomial."""
    dense = m.dense(nvars)
    return (m.degree(), tuple(-e for e in reversed(dense)))


MONOMIAL_ORDERS: dict[str, Callable[[Monomial, int], tuple]] = {
    "grlex": grlex_key,
    "grevlex": grevlex_key,
}


class RingContext:
    """Names and order of variables plus the coefficient field.

    ``scheme_vars`` come first in the variable order, ``base_gens`` after
    them; Groebner computations therefore treat base generators as the
    smallest variables.  Names must be distinct identifiers.
    """

    __slots__ = ("field", "base_gens", "scheme_vars", "_index")

    def __init__(
        self,
        field: Field,
        base_gens: Sequence[str] = (),
        scheme_vars: Sequence[str] = (),
    ):
        base_gens = tuple(base_gens)
        scheme_vars = tuple(scheme_vars)
        seen: set[str] = set()
        for name in scheme_vars + base_gens:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad variable name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate variable name {name!r}")
            seen.add(name)
        self.field = field
        self.base_gens = base_gens
        self.scheme_vars = scheme_vars
        self._index = {name: i for i, name in enumerate(scheme_vars + base_gens)}

    @property
    def all_vars(self) -> tuple[str, ...]:
        return self.scheme_vars + self.base_gens

    @property
    def nvars(self) -> int:
        return len(self.scheme_vars) + len(self.base_gens)

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def is_base_index(self, index: int) -> bool:
        return index >= len(self.scheme_vars)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RingContext)
            and self.field == other.field
            and self.base_gens == other.base_gens
            and self.scheme_vars == other.scheme_vars
        )

    def __hash__(self) -> int:
        return hash((self.field, self.base_gens, self.scheme_vars))

    def __repr__(self) -> str:
        return (
            f"RingContext({self.field!r}, base={list(self.base_gens)},"
            f" vars={list(self.scheme_vars)})"
        )

    # -- polynomial constructors -------------------------------------------

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return MultiPoly(self, {MONOMIAL_ONE: self.field.one})

    def const(self, value) -> "MultiPoly":
        c = self.field.coerce(value)
        return MultiPoly(self, {MONOMIAL_ONE: c} if not self.field.is_zero(c) else {})

    def var(self, name: str) -> "MultiPoly":
        i = self.var_index(name)
        return MultiPoly(self, {Monomial(((i, 1),)): self.field.one})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "MultiPoly":
        m = Monomial((self.var_index(n), e) for n, e in exps.items())
        c = self.field.coerce(coeff)
        return MultiPoly(self, {m: c} if not self.field.is_zero(c) else {})


class MultiPoly:
    """Polynomial as a sparse monomial-to-coefficient map.

    Treat instances as immutable; arithmetic returns new values.  Mixed
    arithmetic with ints (and Fractions over the rationals) is supported.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: RingContext, coeffs: Mapping[Monomial, object]):
        field = ctx.field
        self.ctx = ctx
        self.coeffs = {m: c for m, c in coeffs.items() if not field.is_zero(c)}

    # -- helpers ------------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ctx != self.ctx:
                raise ValueError("polynomials from different contexts")
            return other
        return self.ctx.const(other)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(m.is_one() for m in self.coeffs)

    def constant_value(self):
        """Scalar value of a constant polynomial."""
        if not self.coeffs:
            return self.ctx.field.zero
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.coeffs[MONOMIAL_ONE]

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        if not self.coeffs:
            return -1
        return max(m.degree() for m in self.coeffs)

    def degree_in(self, indices: Iterable[int]) -> int:
        idx = set(indices)
        if not self.coeffs:
            return -1
        return max(
            sum(e for i, e in m.exps if i in idx) for m in self.coeffs
        )

    def coefficient(self, m: Monomial):
        return self.coeffs.get(m, self.ctx.field.zero)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self.coeffs:
            out.update(m.indices())
        return out

    def leading_monomial(self, key: Callable[[Monomial, int], tuple]) -> Monomial:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading monomial")
        n = self.ctx.nvars
        return max(self.coeffs, key=lambda m: key(m, n))

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        """Terms in descending graded lexicographic order."""
        n = self.ctx.nvars
        return sorted(
            self.coeffs.items(), key=lambda t: grlex_key(t[0], n), reverse=True
        )

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        field = self.ctx.field
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = field.add(out.get(m, field.zero), c)
        return MultiPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        field = self.ctx.field
        return MultiPoly(self.ctx, {m: field.neg(c) for m, c in self.coeffs.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        field = self.ctx.field
        out: dict[Monomial, object] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = m1.mul(m2)
                out[m] = field.add(out.get(m, field.zero), field.mul(c1, c2))
        return MultiPoly(self.ctx, out)

    def __rmul__(self, other) -> "MultiPoly":
        return self.scale(other)

    def scale(self, scalar) -> "MultiPoly":
        field = self.ctx.field
        c0 = field.coerce(scalar)
        return MultiPoly(self.ctx, {m: field.mul(c, c0) for m, c in self.coeffs.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiPoly):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.ctx.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        return poly_to_str(self)

    def __repr__(self) -> str:
        return f"<poly {poly_to_str(self)}>"


# -- printing ----------------------------------------------------------------


def _monomial_str(ctx: RingContext, m: Monomial) -> str:
    parts = []
    for i, e in m.exps:
        name = ctx.all_vars[i]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _term_body(ctx: RingContext, c, m: Monomial) -> str:
    if m.is_one():
        return ctx.field.format(c)
    if c == ctx.field.one:
        return _monomial_str(ctx, m)
    return f"{ctx.field.format(c)}*{_monomial_str(ctx, m)}"


def poly_to_str(poly: MultiPoly) -> str:
    """Canonical rendering; terms in descending graded lexicographic order.

    The output always parses back to the same polynomial.
    """
    terms = poly.sorted_terms()
    if not terms:
        return "0"
    ctx = poly.ctx
    rational = ctx.field.is_rational
    pieces = [_term_body(ctx, terms[0][1], terms[0][0])]
    for m, c in terms[1:]:
        if rational and c < 0:
            pieces.append(f" - {_term_body(ctx, -c, m)}")
        else:
            pieces.append(f" + {_term_body(ctx, c, m)}")
    return "".join(pieces)


# -- parsing -----------------------------------------------------------------


class ParseError(ValueError):
    """Syntax error in polynomial text; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ParseError):
    """An identifier that is not a variable of the context."""

    def __init__(self, name: str, offset: int):
        ParseError.__init__(self, f"unknown identifier {name!r}", offset)
        self.name = name


class _Parser:
    # Grammar:
    #   expr   := term (('+' | '-') term)*
    #   term   := factor ('*' factor)*
    #   factor := base ('^' uint)?
    #   base   := rational | identifier | '(' expr ')'
    #   rational := int ('/' uint)?
    # Multiplication is always explicit; whitespace is insignificant.

    def __init__(self, text: str, ctx: RingContext):
        self.text = text
        self.ctx = ctx
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)

    def parse(self) -> MultiPoly:
        value = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected character {self.text[self.pos]!r}")
        return value

    def parse_expr(self) -> MultiPoly:
        value = self.parse_term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                value = value + self.parse_term()
            elif ch == "-":
                self.pos += 1
                value = value - self.parse_term()
            else:
                return value

    def parse_term(self) -> MultiPoly:
        value = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> MultiPoly:
        base = self.parse_base()
        if self.peek() == "^":
            self.pos += 1
            return base ** self.parse_uint()
        return base

    def parse_base(self) -> MultiPoly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.parse_expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return value
        if ch.isdigit() or ch == "-":
            return self.parse_rational()
        if ch.isalpha():
            start = self.pos
            name = self.parse_identifier()
            try:
                index = self.ctx.var_index(name)
            except ValueError:
                raise UnknownIdentifierError(name, start) from None
            return MultiPoly(
                self.ctx, {Monomial(((index, 1),)): self.ctx.field.one}
            )
        raise self.error("expected a number, variable, or '('")

    def parse_identifier(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start : self.pos]

    def parse_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected an unsigned integer")
        return int(self.text[start : self.pos])

    def parse_rational(self) -> MultiPoly:
        self.skip_ws()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        num_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == num_start:
            raise self.error("expected digits")
        num = int(self.text[start : self.pos])
        den = 1
        if self.peek() == "/":
            self.pos += 1
            den = self.parse_uint()
            if den == 0:
                raise ParseError("zero denominator", start)
        try:
            value = self.ctx.field.from_fraction(Fraction(num, den))
        except ZeroDivisionError:
            raise ParseError(f"denominator {den} is not invertible", start) from None
        return self.ctx.const(value)


def parse_poly(text: str, ctx: RingContext) -> MultiPoly:
    """Parse polynomial text against a context.

    Raises :class:`ParseError` with a byte offset on syntax errors and
    :class:`UnknownIdentifierError` naming the token for unknown variables.
    """
    return _Parser(text, ctx).parse()


# -- substitution and transport ----------------------------------------------


def transport(
    poly: MultiPoly,
    target_ctx: RingContext,
    rename: Mapping[str, str] | None = None,
) -> MultiPoly:
    """Re-index a polynomial into another context, matching variables by name.

    ``rename`` maps source names to target names before lookup.  Coefficient
    fields must agree.
    """
    if poly.ctx.field != target_ctx.field:
        raise ValueError("cannot transport between different coefficient fields")
    rename = rename or {}
    src_names = poly.ctx.all_vars
    mapping: dict[int, int] = {}
    out: dict[Monomial, object] = {}
    field = target_ctx.field
    for m, c in poly.coeffs.items():
        pairs = []
        for i, e in m.exps:
            j = mapping.get(i)
            if j is None:
                name = src_names[i]
                j = target_ctx.var_index(rename.get(name, name))
                mapping[i] = j
            pairs.append((j, e))
        mono = Monomial(pairs)
        out[mono] = field.add(out.get(mono, field.zero), c)
    return MultiPoly(target_ctx, out)


def substitute(
    poly: MultiPoly,
    assignment: Mapping[str, MultiPoly],
    target_ctx: RingContext,
) -> MultiPoly:
    """Substitute polynomials for variables.

    Assigned variables are replaced by their images (which must live in
    ``target_ctx``); unassigned variables must exist in ``target_ctx`` under
    the same name.
    """
    if poly.ctx.field != target_ctx.field:
        raise ValueError("cannot substitute between different coefficient fields")
    src_names = poly.ctx.all_vars
    powers: dict[tuple[str, int], MultiPoly] = {}

    def power(name: str, e: int) -> MultiPoly:
        got = powers.get((name, e))
        if got is None:
            got = assignment[name] ** e
            powers[(name, e)] = got
        return got

    total = target_ctx.zero()
    for m, c in poly.coeffs.items():
        kept: list[tuple[int, int]] = []
        assigned: list[tuple[str, int]] = []
        for i, e in m.exps:
            name = src_names[i]
            if name in assignment:
                assigned.append((name, e))
            else:
                kept.append((target_ctx.var_index(name), e))
        term = MultiPoly(target_ctx, {Monomial(kept): c})
        for name, e in assigned:
            term = term * power(name, e)
        total = total + term
    return total


def evaluate(poly: MultiPoly, assignment: Mapping[str, object]):
    """Evaluate at scalar values for every variable; returns a scalar."""
    ctx = poly.ctx
    scalars = {name: ctx.field.coerce(v) for name, v in assignment.items()}
    consts = {name: ctx.const(v) for name, v in scalars.items()}
    missing = [
        ctx.all_vars[i]
        for i in sorted(poly.variables())
        if ctx.all_vars[i] not in consts
    ]
    if missing:
        raise ValueError(f"missing values for {missing}")
    return substitute(poly, consts, ctx).constant_value()


# -- divided powers ------------------------------------------------------------


def hasse_derivative(poly: MultiPoly, alpha: Monomial) -> MultiPoly:
    """Divided-power derivative: x^b maps to binom(b, a) x^(b-a) componentwise.

    Binomials are computed over the integers and then reduced into the
    coefficient field, so the operator is correct in every characteristic.
    """
    field = poly.ctx.field
    out: dict[Monomial, object] = {}
    for m, c in poly.coeffs.items():
        if not alpha.divides(m):
            continue
        mult = 1
        for i, a in alpha.exps:
            mult *= comb(m.get(i), a)
        coeff = field.mul(c, field.from_int(mult))
        if field.is_zero(coeff):
            continue
        mono = m.divide(alpha)
        out[mono] = field.add(out.get(mono, field.zero), coeff)
    return MultiPoly(poly.ctx, out)


def compositions(total: int, slots: int) -> list[tuple[int, ...]]:
    """All length-``slots`` tuples of nonnegative ints summing to ``total``,
    in descending lexicographic order (weight drains from earlier slots)."""
    if slots == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, slots - 1):
            out.append((first,) + rest)
    return out


def exponents_up_to(slots: int, bound: int, include_zero: bool = False) -> list[tuple[int, ...]]:
    """Exponent tuples with 0 < total <= bound (or 0 <= total if asked),
    ordered by total degree then descending lexicographically."""
    start = 0 if include_zero else 1
    out: list[tuple[int, ...]] = []
    for d in range(start, bound + 1):
        out.extend(compositions(d, slots))
    return out


def taylor_shift(poly: MultiPoly, bound: int) -> list[tuple[Monomial, MultiPoly]]:
    """Divided-power coefficients of the shift P(x + z) up to total degree
    ``bound`` in the scheme variables.

    Returns (alpha, D^alpha P) pairs ordered by degree then lexicographically;
    zero derivatives beyond alpha = 0 are dropped.
    """
    ctx = poly.ctx
    nscheme = len(ctx.scheme_vars)
    out: list[tuple[Monomial, MultiPoly]] = [(MONOMIAL_ONE, poly)]
    for exp in exponents_up_to(nscheme, bound):
        alpha = Monomial((i, e) for i, e in enumerate(exp))
        d = hasse_derivative(poly, alpha)
        if not d.is_zero():
            out.append((alpha, d))
    return out


# -- seeded random polynomials --------------------------------------------------


def random_poly(
    ctx: RingContext,
    rng,
    max_degree: int = 3,
    max_terms: int = 4,
    names: Sequence[str] | None = None,
    allow_zero: bool = False,
) -> MultiPoly:
    """Deterministic random polynomial driven by a seeded ``random.Random``."""
    if names is None:
        names = ctx.all_vars
    indices = [ctx.var_index(n) for n in names]
    for _ in range(64):
        field = ctx.field
        coeffs: dict[Monomial, object] = {}
        for _ in range(rng.randrange(1, max_terms + 1)):
            degree = rng.randrange(0, max_degree + 1)
            counts: dict[int, int] = {}
            if indices:
                for _ in range(degree):
                    i = indices[rng.randrange(len(indices))]
                    counts[i] = counts.get(i, 0) + 1
            m = Monomial(counts.items())
            if field.is_rational:
                c = field.coerce(Fraction(rng.randrange(-4, 5), rng.randrange(1, 4)))
            else:
                c = field.from_int(rng.randrange(field.p))
            coeffs[m] = field.add(coeffs.get(m, field.zero), c)
        candidate = MultiPoly(ctx, coeffs)
        if allow_zero or not candidate.is_zero():
            return candidate
    return ctx.one()
