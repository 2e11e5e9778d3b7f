"""Affine schemes, their points, and Weil restriction of scalars.

A scheme is a ring context plus a generating set for its ideal.  Two
coefficient modes exist: plain (generators are polynomials over the base)
and algebra-valued (generators are elements of E(k)[y], stored slotwise as
:class:`AlgebraElement` values whose slots are polynomials in the scheme
variables and the base generators).

Weil restriction substitutes y_i = sum_j y_ij e_j into every generator,
expands through the structure constants, and collects basis components.
Output variables and generators are ordered input-major, slot-minor, and all
rank-many components are kept (zeros included) so downstream constructions
can index components positionally.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .algebra import AlgebraElement, AlgebraScheme, evaluate_in_algebra
from .groebner import DEFAULT_PAIR_LIMIT, groebner, ideal_member
from .operators import RingOperator
from .polynomials import MultiPoly, RingContext, poly_to_str, substitute, transport


class PointError(ValueError):
    """A coordinate assignment that does not satisfy the scheme's ideal."""

    def __init__(self, residuals: list):
        index, residual = residuals[0]
        super().__init__(
            f"not a point: generator {index} leaves residual {_render(residual)}"
        )
        self.residuals = residuals


def _render(value) -> str:
    if isinstance(value, MultiPoly):
        return poly_to_str(value)
    return "(" + ", ".join(poly_to_str(s) for s in value.slots) + ")"


class AffineScheme:
    """Affine scheme of finite type presented by ideal generators."""

    __slots__ = ("ctx", "generators", "algebra")

    def __init__(
        self,
        ctx: RingContext,
        generators: Sequence,
        algebra: AlgebraScheme | None = None,
    ):
        generators = tuple(generators)
        if algebra is None:
            for g in generators:
                if not isinstance(g, MultiPoly) or g.ctx != ctx:
                    raise ValueError("plain-mode generators must share the context")
        else:
            for g in generators:
                if not isinstance(g, AlgebraElement) or g.algebra != algebra:
                    raise ValueError(
                        "algebra-mode generators must be elements of the algebra"
                    )
                if g.ctx != ctx:
                    raise ValueError("generators must share the context")
        self.ctx = ctx
        self.generators = generators
        self.algebra = algebra

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ctx.scheme_vars

    @property
    def is_algebra_mode(self) -> bool:
        return self.algebra is not None

    def point(self, assignment: Mapping) -> "SchemePoint":
        return SchemePoint(self, assignment)

    def __repr__(self) -> str:
        mode = f" over {self.algebra.name}" if self.algebra else ""
        return (
            f"AffineScheme(vars={list(self.variables)},"
            f" gens={len(self.generators)}{mode})"
        )


def _base_only(scheme: AffineScheme, poly: MultiPoly) -> bool:
    return all(scheme.ctx.is_base_index(i) for i in poly.variables())


class SchemePoint:
    """Validated point: scheme variables assigned base-ring values.

    Values are polynomials in the base generators (plain mode) or algebra
    elements with such slots (algebra mode), so parametrized families count
    as points; validation demands exactly zero residuals as polynomials.
    """

    __slots__ = ("scheme", "assignment")

    def __init__(self, scheme: AffineScheme, assignment: Mapping):
        ctx = scheme.ctx
        values = {}
        for name in scheme.variables:
            if name not in assignment:
                raise ValueError(f"missing coordinate {name!r}")
            values[name] = _coerce_value(scheme, assignment[name])
        extra = set(assignment) - set(scheme.variables)
        if extra:
            raise ValueError(f"unknown coordinates {sorted(extra)}")
        residuals = []
        if scheme.is_algebra_mode:
            full = dict(values)
            for g in ctx.base_gens:
                full[g] = scheme.algebra.scalar(ctx, ctx.var(g))
            for i, gen in enumerate(scheme.generators):
                acc = None
                for j, slot in enumerate(gen.slots):
                    term = evaluate_in_algebra(slot, full, scheme.algebra, ctx)
                    ej = [ctx.zero()] * scheme.algebra.rank
                    ej[j] = ctx.one()
                    term = term * scheme.algebra.element(ctx, ej)
                    acc = term if acc is None else acc + term
                if acc is not None and not acc.is_zero():
                    residuals.append((i, acc))
        else:
            for i, gen in enumerate(scheme.generators):
                value = substitute(gen, values, ctx)
                if not value.is_zero():
                    residuals.append((i, value))
        if residuals:
            raise PointError(residuals)
        self.scheme = scheme
        self.assignment = values

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SchemePoint)
            and self.scheme is other.scheme
            and self.assignment == other.assignment
        )

    def __repr__(self) -> str:
        body = ", ".join(
            f"{k}={_render(v)}" for k, v in sorted(self.assignment.items())
        )
        return f"<point {body}>"


def _coerce_value(scheme: AffineScheme, value):
    ctx = scheme.ctx
    if scheme.is_algebra_mode:
        if isinstance(value, AlgebraElement):
            if value.algebra != scheme.algebra:
                raise ValueError("coordinate value in the wrong algebra")
            slots = tuple(
                s if s.ctx == ctx else transport(s, ctx) for s in value.slots
            )
            value = AlgebraElement(scheme.algebra, ctx, slots)
        else:
            value = scheme.algebra.element(ctx, value)
        for s in value.slots:
            if not _base_only(scheme, s):
                raise ValueError("coordinate values must lie in the base ring")
        return value
    if not isinstance(value, MultiPoly):
        value = ctx.const(value)
    elif value.ctx != ctx:
        value = transport(value, ctx)
    if not _base_only(scheme, value):
        raise ValueError("coordinate values must lie in the base ring")
    return value


# -- Weil restriction -----------------------------------------------------------


def restriction_context(scheme: AffineScheme, rank: int) -> RingContext:
    new_vars = [f"{y}_{j}" for y in scheme.variables for j in range(rank)]
    return RingContext(
        scheme.ctx.field, base_gens=scheme.ctx.base_gens, scheme_vars=new_vars
    )


def weil_restrict(scheme: AffineScheme, algebra: AlgebraScheme) -> AffineScheme:
    """Restriction of scalars along the standard inclusion.

    For each generator, substitute y_i = sum_j y_ij e_j, expand, and emit the
    rank-many basis components in order.  The variable naming "<y>_<j>" must
    not collide with existing names; a collision raises.
    """
    if not scheme.is_algebra_mode:
        raise ValueError("mode mismatch: weil_restrict needs an algebra-mode scheme")
    if scheme.algebra != algebra:
        raise ValueError("scheme coefficients live in a different algebra")
    rank = algebra.rank
    out_ctx = restriction_context(scheme, rank)
    hats = {
        y: AlgebraElement(
            algebra,
            out_ctx,
            tuple(out_ctx.var(f"{y}_{j}") for j in range(rank)),
        )
        for y in scheme.variables
    }
    for g in scheme.ctx.base_gens:
        hats[g] = algebra.scalar(out_ctx, out_ctx.var(g))
    generators = []
    for gen in scheme.generators:
        total = None
        for j, slot in enumerate(gen.slots):
            value = evaluate_in_algebra(slot, hats, algebra, out_ctx)
            ej = [out_ctx.zero()] * rank
            ej[j] = out_ctx.one()
            value = value * algebra.element(out_ctx, ej)
            total = value if total is None else total + value
        if total is None:
            total = algebra.element(out_ctx, [out_ctx.zero()] * rank)
        generators.extend(total.slots)
    return AffineScheme(out_ctx, generators)


def point_down(point: SchemePoint, restricted: AffineScheme) -> SchemePoint:
    """Slot read-off carrying an algebra-valued point to the restriction."""
    scheme = point.scheme
    if not scheme.is_algebra_mode:
        raise ValueError("point_down starts from an algebra-mode point")
    assignment = {}
    for y in scheme.variables:
        for j, slot in enumerate(point.assignment[y].slots):
            assignment[f"{y}_{j}"] = transport(slot, restricted.ctx)
    return SchemePoint(restricted, assignment)


def point_up(point: SchemePoint, original: AffineScheme) -> SchemePoint:
    """Reassemble sum_j y_ij e_j; inverse of :func:`point_down`."""
    if not original.is_algebra_mode:
        raise ValueError("point_up lands on an algebra-mode scheme")
    rank = original.algebra.rank
    assignment = {}
    for y in original.variables:
        slots = tuple(
            transport(point.assignment[f"{y}_{j}"], original.ctx)
            for j in range(rank)
        )
        assignment[y] = AlgebraElement(original.algebra, original.ctx, slots)
    return SchemePoint(original, assignment)


# -- base change ------------------------------------------------------------------


def base_change_scheme(
    scheme: AffineScheme,
    phi,
    target_ctx: RingContext | None = None,
) -> AffineScheme:
    """Transport every generator's coefficients through a base-ring map.

    ``phi`` is either a :class:`RingOperator` (producing an algebra-mode
    scheme: coefficients pushed into E(k)) or a mapping base-generator ->
    polynomial over ``target_ctx`` (producing the same mode, coefficients
    substituted; used for specialization t -> q).
    """
    if isinstance(phi, RingOperator):
        if scheme.is_algebra_mode:
            raise ValueError("operator base change starts from a plain scheme")
        ctx = scheme.ctx
        if phi.ctx.base_gens != ctx.base_gens or phi.ctx.field != ctx.field:
            raise ValueError("operator is defined over a different base ring")
        images = {x: phi.algebra.scalar(ctx, ctx.var(x)) for x in scheme.variables}
        for g in ctx.base_gens:
            images[g] = phi.image_in(ctx, g)
        generators = [
            evaluate_in_algebra(gen, images, phi.algebra, ctx)
            for gen in scheme.generators
        ]
        return AffineScheme(ctx, generators, algebra=phi.algebra)

    images = dict(phi)
    if target_ctx is None:
        target_ctx = next(
            (v.ctx for v in images.values() if isinstance(v, MultiPoly)),
            scheme.ctx,
        )
    unknown = set(images) - set(scheme.ctx.base_gens)
    if unknown:
        raise ValueError(f"base change may only move base generators: {sorted(unknown)}")
    images = {
        g: v if isinstance(v, MultiPoly) else target_ctx.const(v)
        for g, v in images.items()
    }
    if scheme.is_algebra_mode:
        generators = [
            AlgebraElement(
                scheme.algebra,
                target_ctx,
                tuple(substitute(s, images, target_ctx) for s in gen.slots),
            )
            for gen in scheme.generators
        ]
        return AffineScheme(target_ctx, generators, algebra=scheme.algebra)
    generators = [substitute(gen, images, target_ctx) for gen in scheme.generators]
    return AffineScheme(target_ctx, generators)


def specialize_base(scheme: AffineScheme, values: Mapping[str, object]) -> AffineScheme:
    """Specialize named base generators to constants, dropping them from the
    context; remaining base generators survive."""
    ctx = scheme.ctx
    remaining = tuple(g for g in ctx.base_gens if g not in values)
    target = RingContext(ctx.field, base_gens=remaining, scheme_vars=ctx.scheme_vars)
    images = {g: target.const(v) for g, v in values.items()}
    return base_change_scheme(scheme, images, target)


# -- morphisms --------------------------------------------------------------------


class PolyMorphism:
    """Polynomial map between plain affine schemes over one base ring.

    The assignment gives, per target variable, its pullback in the source
    coordinate ring.  Whether target generators pull back into the source
    ideal is checked on demand (it costs a Groebner run).
    """

    __slots__ = ("source", "target", "assignment")

    def __init__(
        self,
        source: AffineScheme,
        target: AffineScheme,
        assignment: Mapping[str, MultiPoly],
    ):
        if source.is_algebra_mode or target.is_algebra_mode:
            raise ValueError("morphisms connect plain-mode schemes")
        if set(assignment) != set(target.variables):
            raise ValueError("assignment must cover exactly the target variables")
        if not set(target.ctx.base_gens) <= set(source.ctx.base_gens):
            raise ValueError("target base ring must map into the source base ring")
        values = {}
        for name, poly in assignment.items():
            if not isinstance(poly, MultiPoly):
                poly = source.ctx.const(poly)
            elif poly.ctx != source.ctx:
                poly = transport(poly, source.ctx)
            values[name] = poly
        self.source = source
        self.target = target
        self.assignment = values

    def pullback(self, poly: MultiPoly) -> MultiPoly:
        """Image of a target-ring polynomial in the source ring."""
        return substitute(poly, self.assignment, self.source.ctx)

    def is_morphism(self, pair_limit: int = DEFAULT_PAIR_LIMIT) -> bool:
        gb = groebner(self.source.generators, pair_limit=pair_limit)
        return all(
            ideal_member(self.pullback(g), gb, pair_limit=pair_limit)
            for g in self.target.generators
        )

    def validate(self, pair_limit: int = DEFAULT_PAIR_LIMIT) -> None:
        gb = groebner(self.source.generators, pair_limit=pair_limit)
        for i, g in enumerate(self.target.generators):
            if not ideal_member(self.pullback(g), gb, pair_limit=pair_limit):
                raise ValueError(
                    f"target generator {i} does not pull back into the source"
                    f" ideal: {poly_to_str(self.pullback(g))}"
                )

    def apply_to_point(self, point: SchemePoint) -> SchemePoint:
        if point.scheme is not self.source and point.scheme.ctx != self.source.ctx:
            raise ValueError("point does not lie on the source scheme")
        values = {}
        for name, poly in self.assignment.items():
            image = substitute(poly, point.assignment, self.source.ctx)
            values[name] = transport(image, self.target.ctx)
        return SchemePoint(self.target, values)

    def compose(self, inner: "PolyMorphism") -> "PolyMorphism":
        """self after inner: for inner: X -> Y and self: Y -> Z, the result
        maps X -> Z."""
        if inner.target.ctx != self.source.ctx:
            raise ValueError("composition mismatch: inner target is not the source")
        assignment = {
            name: substitute(poly, inner.assignment, inner.source.ctx)
            for name, poly in self.assignment.items()
        }
        return PolyMorphism(inner.source, self.target, assignment)

    @staticmethod
    def identity(scheme: AffineScheme) -> "PolyMorphism":
        return PolyMorphism(
            scheme, scheme, {v: scheme.ctx.var(v) for v in scheme.variables}
        )

    def equals_mod_ideal(
        self, other: "PolyMorphism", pair_limit: int = DEFAULT_PAIR_LIMIT
    ) -> bool:
        """Coordinate-wise agreement modulo the source ideal."""
        if self.source.ctx != other.source.ctx or self.target.ctx != other.target.ctx:
            return False
        gb = groebner(self.source.generators, pair_limit=pair_limit)
        for name in self.target.variables:
            delta = self.assignment[name] - other.assignment[name]
            if delta.is_zero():
                continue
            if not gb.gens or not gb.contains(delta):
                return False
        return True

    def __repr__(self) -> str:
        body = ", ".join(
            f"{k} -> {poly_to_str(v)}" for k, v in sorted(self.assignment.items())
        )
        return f"PolyMorphism({body})"
