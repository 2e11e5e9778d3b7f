"""Fixture files for the command line front end.

One JSON file carries a scheme plus whatever algebras, operators, points,
morphisms, and point families the commands and suites need.  Loading is
eager: bad cross-references fail here, not halfway through a suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .algebra import AlgebraScheme, make_builtin
from .operators import RingOperator
from .polynomials import MultiPoly, RingContext, parse_poly, substitute
from .scalars import QQ
from .weil import AffineScheme, PolyMorphism, SchemePoint


class FixtureError(ValueError):
    pass


def make_operator(algebra: AlgebraScheme, base_ctx: RingContext, spec) -> RingOperator:
    """Operator from its JSON spec: per-generator slot vectors of polynomial
    strings; generators left unlisted map through the unit slot."""
    if spec is None:
        spec = {}
    if "operator" in spec:
        spec = spec["operator"]
    images = {}
    for g, slots in spec.get("images", {}).items():
        if not isinstance(slots, (list, tuple)) or len(slots) != algebra.rank:
            raise FixtureError(
                f"image of {g!r} needs {algebra.rank} slot strings"
            )
        polys = [parse_poly(str(s), base_ctx) for s in slots]
        images[g] = algebra.element(base_ctx, polys)
    for g in base_ctx.base_gens:
        if g not in images:
            images[g] = algebra.scalar(base_ctx, base_ctx.var(g))
    return RingOperator(algebra, base_ctx, images)


@dataclass(frozen=True)
class PointFamily:
    """Rational family of points: coordinates are num/den polynomial pairs in
    the family parameters, sampled at seeded rational parameter values."""

    ctx: RingContext
    values: tuple

    def sample(self, scheme: AffineScheme, rng) -> SchemePoint:
        for _ in range(64):
            params = {
                v: Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                for v in self.ctx.scheme_vars
            }
            constants = {v: self.ctx.const(c) for v, c in params.items()}
            assignment = {}
            bad = False
            for coord, num, den in self.values:
                value = substitute(num, constants, self.ctx).constant_value()
                if den is not None:
                    lower = substitute(den, constants, self.ctx).constant_value()
                    if lower == 0:
                        bad = True
                        break
                    value = value / lower
                assignment[coord] = value
            if not bad:
                return SchemePoint(scheme, assignment)
        raise FixtureError("point family kept hitting zero denominators")


@dataclass
class Fixture:
    name: str
    scheme: AffineScheme
    algebra: AlgebraScheme | None
    operator: RingOperator | None
    second_algebra: AlgebraScheme | None
    second_operator: RingOperator | None
    alpha: list | None
    morphism: PolyMorphism | None
    family: PointFamily | None
    points: list
    law: str | None
    expect: str
    dim: int | None
    raw: dict


def _parse_alpha(rows) -> list:
    return [[Fraction(str(x)) for x in row] for row in rows]


def _parse_family(data, base, scheme) -> PointFamily | None:
    spec = data.get("point_family")
    if spec is None:
        return None
    fctx = RingContext(QQ, scheme_vars=tuple(spec["vars"]))
    values = []
    for coord in scheme.variables:
        entry = spec["values"].get(coord)
        if entry is None:
            raise FixtureError(f"point family misses coordinate {coord!r}")
        if isinstance(entry, str):
            values.append((coord, parse_poly(entry, fctx), None))
        else:
            num = parse_poly(str(entry["num"]), fctx)
            den = parse_poly(str(entry["den"]), fctx) if "den" in entry else None
            values.append((coord, num, den))
    return PointFamily(fctx, tuple(values))


def load_fixture(path) -> Fixture:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise FixtureError(f"{path}: not valid JSON ({err})") from err
    name = data.get("name", path.stem)
    base = tuple(data.get("base", ()))
    ctx = RingContext(QQ, scheme_vars=tuple(data.get("vars", ())), base_gens=base)
    base_ctx = RingContext(QQ, base_gens=base)
    algebra = operator = None
    if "algebra" in data:
        algebra = make_builtin(data["algebra"])
        operator = make_operator(algebra, base_ctx, data.get("operator"))
    entries = data.get("ideal", ())
    if any(not isinstance(e, str) for e in entries):
        # slot-vector entries present: the scheme itself has coefficients
        # in the algebra and only the restriction command can use it
        if algebra is None:
            raise FixtureError(f"{name}: slot-vector ideal entries need an algebra")
        generators = []
        for entry in entries:
            if isinstance(entry, str):
                slots = [parse_poly(entry, ctx)]
                slots += [ctx.zero()] * (algebra.rank - 1)
            else:
                if len(entry) != algebra.rank:
                    raise FixtureError(
                        f"{name}: slot vectors need {algebra.rank} entries"
                    )
                slots = [parse_poly(str(s), ctx) for s in entry]
            generators.append(algebra.element(ctx, slots))
        scheme = AffineScheme(ctx, generators, algebra=algebra)
    else:
        scheme = AffineScheme(ctx, [parse_poly(e, ctx) for e in entries])
    second_algebra = second_operator = None
    if "second" in data:
        second_algebra = make_builtin(data["second"]["algebra"])
        second_operator = make_operator(
            second_algebra, base_ctx, data["second"].get("operator")
        )
    alpha = _parse_alpha(data["alpha"]) if "alpha" in data else None
    morphism = None
    if "morphism" in data:
        spec = data["morphism"]
        mctx = RingContext(QQ, scheme_vars=tuple(spec["vars"]), base_gens=base)
        space = AffineScheme(mctx, [])
        assignment = {
            k: parse_poly(str(v), mctx) for k, v in spec["assignment"].items()
        }
        morphism = PolyMorphism(space, scheme, assignment)
        if not morphism.is_morphism():
            raise FixtureError(f"{name}: morphism does not land on the scheme")
    family = _parse_family(data, base, scheme)
    points = [
        SchemePoint(scheme, {k: parse_poly(str(v), ctx) for k, v in entry.items()})
        for entry in data.get("points", ())
    ]
    return Fixture(
        name=name,
        scheme=scheme,
        algebra=algebra,
        operator=operator,
        second_algebra=second_algebra,
        second_operator=second_operator,
        alpha=alpha,
        morphism=morphism,
        family=family,
        points=points,
        law=data.get("law"),
        expect=data.get("expect", "pass"),
        dim=data.get("dim"),
        raw=data,
    )


def load_fixtures(path) -> list[Fixture]:
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise FixtureError(f"{path}: no fixture files")
        return [load_fixture(f) for f in files]
    return [load_fixture(path)]


def fixture_points(fixture: Fixture, rng, count: int) -> list[SchemePoint]:
    """Explicit points first, then family samples up to ``count``."""
    points = list(fixture.points[:count])
    if fixture.family is not None:
        while len(points) < count:
            points.append(fixture.family.sample(fixture.scheme, rng))
    return points
