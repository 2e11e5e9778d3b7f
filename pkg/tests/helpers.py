"""Independent re-implementations used to cross-check library output.

Everything here is written naively (recursion over dict entries, factorials,
term-by-term expansion) and on purpose shares no code with the package.
"""

from fractions import Fraction
from math import factorial

from prolong.polynomials import Monomial, MultiPoly


def partial_derivative(poly: MultiPoly, index: int) -> MultiPoly:
    field = poly.ctx.field
    out = {}
    for m, c in poly.coeffs.items():
        e = m.get(index)
        if e == 0:
            continue
        lowered = dict(m.exps)
        lowered[index] = e - 1
        mono = Monomial(lowered.items())
        coeff = field.mul(c, field.from_int(e))
        if not field.is_zero(coeff):
            out[mono] = field.add(out.get(mono, field.zero), coeff)
    return MultiPoly(poly.ctx, out)


def iterated_derivative(poly: MultiPoly, alpha: Monomial) -> MultiPoly:
    out = poly
    for i, e in alpha.exps:
        for _ in range(e):
            out = partial_derivative(out, i)
    return out


def alpha_factorial(alpha: Monomial) -> int:
    n = 1
    for _, e in alpha.exps:
        n *= factorial(e)
    return n


def divided_power_oracle(poly: MultiPoly, alpha: Monomial) -> MultiPoly:
    """D^alpha over the rationals via iterated d/dx divided by alpha!."""
    if not poly.ctx.field.is_rational:
        raise ValueError("oracle only valid in characteristic zero")
    return iterated_derivative(poly, alpha).scale(Fraction(1, alpha_factorial(alpha)))


def local_quotient_dimension(scheme, point, order: int) -> int:
    """dim of m/(m^(order+1) + I) at a scalar point, by standard monomials.

    Translates the point to the origin, saturates with all monomials of the
    next degree, and counts monomials not divisible by any leading term of a
    reduced basis.  Entirely independent of the jet construction.
    """
    from prolong.groebner import groebner
    from prolong.polynomials import (
        MONOMIAL_ORDERS,
        compositions,
        exponents_up_to,
        substitute,
        transport,
    )
    from prolong.weil import SchemePoint

    ctx = scheme.ctx
    if ctx.base_gens:
        raise ValueError("specialize the base before taking local dimensions")
    if not isinstance(point, SchemePoint):
        point = SchemePoint(scheme, point)
    names = scheme.variables
    shift = {n: ctx.var(n) + transport(point.assignment[n], ctx) for n in names}
    gens = [substitute(p, shift, ctx) for p in scheme.generators]
    for exp in compositions(order + 1, len(names)):
        gens.append(ctx.monomial({n: e for n, e in zip(names, exp) if e}))
    basis = groebner(gens)
    key = MONOMIAL_ORDERS[basis.order]
    leading = [g.leading_monomial(key) for g in basis.gens]
    standard = 0
    for exp in exponents_up_to(len(names), order, include_zero=True):
        m = Monomial((i, e) for i, e in enumerate(exp) if e)
        if not any(lm.divides(m) for lm in leading):
            standard += 1
    return standard - 1


def augmented_jet_fiber(scheme, order: int, point):
    """Jet fiber of the generating set enlarged by shifted monomial multiples.

    Adjoining g * (x - p)^mu for small mu makes the linear system see the
    whole ideal image in the truncated local ring, not just the generators.
    """
    from prolong.jets import jet_fiber
    from prolong.polynomials import exponents_up_to, transport
    from prolong.weil import AffineScheme, SchemePoint

    ctx = scheme.ctx
    if not isinstance(point, SchemePoint):
        point = SchemePoint(scheme, point)
    names = scheme.variables
    enlarged = []
    for exp in exponents_up_to(len(names), max(order - 1, 0), include_zero=True):
        mono = ctx.one()
        for n, e in zip(names, exp):
            if e:
                mono = mono * (ctx.var(n) - transport(point.assignment[n], ctx)) ** e
        for p in scheme.generators:
            enlarged.append(p * mono)
    ambient = AffineScheme(ctx, enlarged)
    return jet_fiber(ambient, order, dict(point.assignment))
