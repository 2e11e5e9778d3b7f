"""Prolongation spaces: Weil restriction of a scheme after base change along
a ring operator, the induced maps on points and morphisms, comparison maps
between different operators, and composite prolongations over tensor algebras.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .algebra import (
    AlgebraElement,
    AlgebraScheme,
    _fractionize,
    tensor_swap_permutation,
)
from .operators import RingOperator, compose_operators, expand_with_operator
from .polynomials import RingContext
from .weil import (
    AffineScheme,
    PolyMorphism,
    SchemePoint,
    base_change_scheme,
    weil_restrict,
)


@dataclass(frozen=True)
class Prolongation:
    """A prolongation space together with the data that produced it.

    ``substitution`` is the generic-point expansion used throughout: each
    original variable as an algebra element whose slots are the new
    coordinates, x_i -> sum_j x_i_j e_j.  It is simultaneously the pullback
    of the canonical map back to the original scheme.
    """

    scheme: AffineScheme
    source: AffineScheme
    algebra: AlgebraScheme
    operator: RingOperator
    substitution: Mapping[str, AlgebraElement]

    @property
    def ctx(self) -> RingContext:
        return self.scheme.ctx


@dataclass(frozen=True)
class ComposedProlongation(Prolongation):
    """Prolongation along a tensor algebra with the composite operator.

    ``renaming`` sends each variable here to the name it carries in the
    iterated prolongation (first along the left factor, then the right),
    under which the two generator ideals agree.
    """

    factors: tuple[RingOperator, RingOperator]
    renaming: Mapping[str, str]


def prolong(scheme: AffineScheme, operator: RingOperator) -> Prolongation:
    """Restrict the operator base change of the scheme back to the base.

    For an ambient space with r variables and an algebra of rank l the
    result lives in r*l variables named with slot suffixes.
    """
    if scheme.is_algebra_mode:
        raise ValueError("prolongation starts from a plain-mode scheme")
    changed = base_change_scheme(scheme, operator)
    restricted = weil_restrict(changed, operator.algebra)
    ctx = restricted.ctx
    algebra = operator.algebra
    substitution = {}
    for name in scheme.variables:
        slots = [ctx.var(f"{name}_{j}") for j in range(algebra.rank)]
        substitution[name] = algebra.element(ctx, slots)
    return Prolongation(restricted, scheme, algebra, operator, substitution)


def _claimed(
    result: Prolongation | None, scheme: AffineScheme, operator: RingOperator
) -> Prolongation:
    if result is None:
        return prolong(scheme, operator)
    if result.source is not scheme or result.operator is not operator:
        raise ValueError("prolongation was computed from different data")
    return result


def nabla(
    scheme: AffineScheme,
    operator: RingOperator,
    point,
    result: Prolongation | None = None,
) -> SchemePoint:
    """The canonical point of the prolongation over a point of the scheme.

    Every coordinate value is expanded through the operator and its slots
    become the new coordinates.  Validation that the image satisfies the
    prolongation ideal is inherited from point construction, so membership
    is a checked fact rather than an assumption.
    """
    result = _claimed(result, scheme, operator)
    if not isinstance(point, SchemePoint):
        point = SchemePoint(scheme, point)
    if point.scheme is not scheme:
        raise ValueError("point lies on a different scheme")
    assignment = {}
    for name in scheme.variables:
        expanded = operator.extend(point.assignment[name])
        for j, slot in enumerate(expanded.slots):
            assignment[f"{name}_{j}"] = slot
    return SchemePoint(result.scheme, assignment)


def prolong_morphism(
    morphism: PolyMorphism,
    operator: RingOperator,
    source_result: Prolongation | None = None,
    target_result: Prolongation | None = None,
) -> PolyMorphism:
    """The induced morphism between prolongations.

    Each coordinate polynomial of the morphism is evaluated at the generic
    slot expansion of the source variables, with base coefficients pushed
    through the operator; slot components give the new coordinate map.
    """
    source_result = _claimed(source_result, morphism.source, operator)
    target_result = _claimed(target_result, morphism.target, operator)
    ctx = source_result.ctx
    assignment = {}
    for name in morphism.target.variables:
        expanded = expand_with_operator(
            morphism.assignment[name], operator, source_result.substitution, ctx
        )
        for j, slot in enumerate(expanded.slots):
            assignment[f"{name}_{j}"] = slot
    return PolyMorphism(source_result.scheme, target_result.scheme, assignment)


def _rows_times(matrix: list[list[Fraction]], vector) -> list[Fraction]:
    return [
        sum((row[j] * Fraction(v) for j, v in enumerate(vector)), Fraction(0))
        for row in matrix
    ]


def validate_algebra_map(
    matrix, e: RingOperator, f: RingOperator
) -> list[list[Fraction]]:
    """Check that a rational matrix is a unital algebra morphism intertwining
    the two operators; returns the fraction-normalized matrix.

    The matrix acts on basis columns: column j is the image of the j-th
    source basis vector in target coordinates.
    """
    ea, fa = e.algebra, f.algebra
    rows = [[_fractionize(v) for v in row] for row in matrix]
    if len(rows) != fa.rank or any(len(row) != ea.rank for row in rows):
        raise ValueError(f"matrix must be {fa.rank}x{ea.rank} for these algebras")
    if e.ctx != f.ctx:
        raise ValueError("operators live over different base rings")
    unit = [rows[jp][0] for jp in range(fa.rank)]
    expected_unit = [Fraction(1)] + [Fraction(0)] * (fa.rank - 1)
    if unit != expected_unit:
        raise ValueError(f"unit is not preserved: image of e_0 is {unit}")
    columns = [[rows[jp][j] for jp in range(fa.rank)] for j in range(ea.rank)]
    for i in range(ea.rank):
        for j in range(ea.rank):
            left = _rows_times(rows, ea.table[i][j])
            right = [Fraction(v) for v in fa.multiply_vectors(columns[i], columns[j])]
            if left != right:
                raise ValueError(
                    f"not multiplicative at (e_{i}, e_{j}): "
                    f"image of product is {left}, product of images is {right}"
                )
    field = e.ctx.field
    for g in e.ctx.base_gens:
        slots = e.images[g].slots
        for jp in range(fa.rank):
            combo = e.ctx.zero()
            for j in range(ea.rank):
                if rows[jp][j]:
                    combo = combo + slots[j].scale(field.from_fraction(rows[jp][j]))
            if combo != f.images[g].slots[jp]:
                raise ValueError(
                    f"operators are not intertwined at generator {g!r}, "
                    f"slot {jp}: mapped image is {combo}, "
                    f"expected {f.images[g].slots[jp]}"
                )
    return rows


def compare_map(
    scheme: AffineScheme,
    alpha,
    e: RingOperator,
    f: RingOperator,
    source_result: Prolongation | None = None,
    target_result: Prolongation | None = None,
) -> PolyMorphism:
    """The comparison morphism between prolongations along an algebra map.

    ``alpha`` is a rational matrix with one row per target basis vector and
    one column per source basis vector; it must preserve the unit, be
    multiplicative, and carry the first operator to the second.  The induced
    coordinate map is linear slotwise: z_i_j' pulls back to the alpha-weighted
    combination of the y_i_j.
    """
    rows = validate_algebra_map(alpha, e, f)
    source_result = _claimed(source_result, scheme, e)
    target_result = _claimed(target_result, scheme, f)
    ctx = source_result.ctx
    field = ctx.field
    assignment = {}
    for name in scheme.variables:
        for jp in range(f.algebra.rank):
            acc = ctx.zero()
            for j in range(e.algebra.rank):
                if rows[jp][j]:
                    acc = acc + ctx.var(f"{name}_{j}").scale(
                        field.from_fraction(rows[jp][j])
                    )
            assignment[f"{name}_{jp}"] = acc
    return PolyMorphism(source_result.scheme, target_result.scheme, assignment)


def prolong_composed(
    scheme: AffineScheme, e: RingOperator, f: RingOperator
) -> ComposedProlongation:
    """Prolongation along the tensor of two operators' algebras.

    Its ideal matches the iterated prolongation (first along e, then f)
    after the exposed renaming x_{j*lf+j'} -> x_j_j', which identifies the
    flat tensor slot with the nested slot pair.
    """
    _, ef = compose_operators(e, f)
    base = prolong(scheme, ef)
    lf = f.algebra.rank
    renaming = {}
    for name in scheme.variables:
        for j in range(e.algebra.rank):
            for jp in range(lf):
                renaming[f"{name}_{j * lf + jp}"] = f"{name}_{j}_{jp}"
    return ComposedProlongation(
        base.scheme,
        base.source,
        base.algebra,
        base.operator,
        base.substitution,
        (e, f),
        renaming,
    )


def swap_renaming(
    scheme: AffineScheme, e: RingOperator, f: RingOperator
) -> dict[str, str]:
    """Variable renaming induced by the tensor swap on composed prolongations.

    Sends each variable of the (e, f)-composed prolongation to the matching
    variable of the (f, e)-composed one.  The underlying permutation is an
    algebra isomorphism, but it exchanges the two composite operators only
    when the slot operators commute, so ideal agreement under this renaming
    is a property of commuting pairs rather than a general fact.
    """
    perm = tensor_swap_permutation(e.algebra, f.algebra)
    renaming = {}
    for name in scheme.variables:
        for q, target in enumerate(perm):
            renaming[f"{name}_{q}"] = f"{name}_{target}"
    return renaming
