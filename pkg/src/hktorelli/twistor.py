"""Positive three-spaces, twistor lines and their genericity certificates.

A twistor line T_W is represented by a basis (w1, w2, w3) of the positive
three-space W; its points are the oriented planes inside W, i.e. the oriented
normal directions of W (a 2-sphere).  Membership ignores orientation: x and
its conjugate lie on the same lines.

A line is generic when W^perp meets the lattice only in 0.  Over Q this never
happens once rank >= 4, so generic lines need irrational coordinates, and
three vectors over a degree-d field give at most 3d rational conditions:
``genericize`` therefore requires 3d >= rank.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import intlinalg
from .errors import (
    AlphaNotInW,
    AlphaNotPositive,
    BudgetExhausted,
    DependentSpan,
    DimensionMismatch,
    FieldDegreeTooSmall,
    NotPositiveDefinite,
)
from .lattice import IntVector, QuadLattice, constraint_rows
from .period import PeriodPoint, make_period, random_field_vector, same_point
from .scalar import (
    FVector,
    NumberField,
    as_fvector,
    common_field,
    det,
    leading_minors,
    rank,
    sign,
    solve_in_span,
)


@dataclass(frozen=True, eq=False)
class ThreeSpace:
    lattice: QuadLattice
    basis: tuple[FVector, FVector, FVector]
    minors: tuple

    @property
    def field(self) -> NumberField:
        return common_field(*(w.field for w in self.basis))

    def gram(self) -> list[list]:
        return self.lattice.gram_of(self.basis)


def make_three_space(lattice: QuadLattice, w1, w2, w3) -> ThreeSpace:
    """Positive three-space with its leading principal minors as certificate."""
    vs = [as_fvector(w) for w in (w1, w2, w3)]
    f = common_field(*(v.field for v in vs))
    vs = [v.lift(f) for v in vs]
    if any(len(v) != lattice.rank for v in vs):
        raise DimensionMismatch(f"basis vectors must have length {lattice.rank}")
    if rank(vs) < 3:
        raise DependentSpan("three-space basis is linearly dependent")
    minors = leading_minors(lattice.gram_of(vs))
    if any(sign(m) <= 0 for m in minors):
        raise NotPositiveDefinite("q restricted to W is not positive definite")
    return ThreeSpace(lattice, tuple(vs), tuple(minors))


@dataclass(frozen=True)
class GenericWitness:
    """Smith data for the constraint matrix A: left @ A @ right == diag, rank(diag) == b."""

    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    diagonal: tuple[int, ...]


@dataclass(frozen=True)
class NonGenericWitness:
    """A nonzero lattice vector orthogonal to all of W."""

    vector: IntVector


Genericity = Union[GenericWitness, NonGenericWitness, None]


@dataclass(frozen=True, eq=False)
class TwistorLine:
    space: ThreeSpace
    genericity: Genericity = None

    @property
    def lattice(self) -> QuadLattice:
        return self.space.lattice

    @property
    def basis(self) -> tuple[FVector, FVector, FVector]:
        return self.space.basis

    @property
    def is_generic(self) -> bool | None:
        if self.genericity is None:
            return None
        return isinstance(self.genericity, GenericWitness)


def line_through(lattice: QuadLattice, w1, w2, w3) -> TwistorLine:
    return TwistorLine(make_three_space(lattice, w1, w2, w3))


def check_generic(line: TwistorLine) -> TwistorLine:
    """Resolve genericity and attach a witness."""
    lat = line.lattice
    rows = constraint_rows(lat, line.basis)
    kernel = intlinalg.integer_kernel(rows, lat.rank)
    if kernel:
        return TwistorLine(line.space, NonGenericWitness(tuple(kernel[0])))
    u, d, v = intlinalg.smith_normal_form(rows)
    diag = tuple(d[i][i] for i in range(min(len(d), lat.rank)))
    return TwistorLine(
        line.space,
        GenericWitness(tuple(map(tuple, u)), tuple(map(tuple, v)), diag),
    )


def contains(line: TwistorLine, p: PeriodPoint) -> bool:
    """Whether the plane of p lies in W (orientation is not constrained)."""
    if p.lattice != line.lattice:
        return False
    basis = line.basis
    return solve_in_span(basis, p.a) is not None and solve_in_span(basis, p.b) is not None


@dataclass(frozen=True)
class NoCommonLine:
    reason: str


@dataclass(frozen=True)
class SamePlane:
    """Both points span the same plane: every line through it contains both."""


def common_line(x: PeriodPoint, y: PeriodPoint) -> TwistorLine | NoCommonLine | SamePlane:
    if x.lattice != y.lattice:
        raise DimensionMismatch("points on different lattices")
    vs = [x.a, x.b, y.a, y.b]
    r = rank(vs)
    if r == 2:
        return SamePlane()
    if r == 4:
        return NoCommonLine("planes span a four-dimensional space")
    third = y.a if rank([x.a, x.b, y.a]) == 3 else y.b
    try:
        return line_through(x.lattice, x.a, x.b, third)
    except NotPositiveDefinite:
        return NoCommonLine("the spanned three-space is not positive definite")


@dataclass(frozen=True, eq=False)
class Genericized:
    line: TwistorLine
    magnitude: Fraction
    attempts: int


def genericize(
    line: TwistorLine, field: NumberField, seed: int, budget: int = 50
) -> Genericized:
    """Perturb the basis by small field-irrational vectors until the line is generic.

    w3 is perturbed first, then w2 and w1 as far as the rank count demands
    (each rational vector contributes one rational condition, an irrational
    one up to ``deg(field)``), escalating after a non-generic outcome.  The
    returned magnitude strictly bounds the max-norm change of every basis
    vector.
    """
    lat = line.lattice
    n = lat.rank
    field = common_field(field, line.space.field)
    d = field.degree
    if 3 * d < n:
        raise FieldDegreeTooSmall(f"3 * {d} < {n}: no three-space over this field can be generic")
    if budget < 1:
        raise BudgetExhausted("genericization budget is zero")
    basis = [w.lift(field) for w in line.basis]
    rng = random.Random(seed)
    contrib = [1 if w.is_rational else d for w in basis]
    k = 1
    while k < 3 and sum(contrib[: 3 - k]) + k * d < n:
        k += 1
    size = max(w.max_abs_upper_bound() for w in basis)
    step = Fraction(size) / 32 if size else Fraction(1, 32)
    for attempt in range(1, budget + 1):
        new = list(basis)
        bound = Fraction(0)
        for i in (2, 1, 0)[:k]:
            delta = random_field_vector(rng, field, n, spread=2).scale(step)
            bound = max(bound, delta.max_abs_upper_bound())
            new[i] = basis[i] + delta
        try:
            space = make_three_space(lat, *new)
        except (NotPositiveDefinite, DependentSpan):
            step /= 2
            continue
        checked = check_generic(TwistorLine(space))
        if checked.is_generic:
            return Genericized(checked, _round_up(bound + step / 1024), attempt)
        k = min(k + 1, 3)
    raise BudgetExhausted(f"no generic perturbation found in {budget} attempts")


def _round_up(x: Fraction, bits: int = 40) -> Fraction:
    """Smallest dyadic k / 2^bits that is >= x."""
    return Fraction(-((-x.numerator * 2**bits) // x.denominator), 2**bits)


def sphere_point(line: TwistorLine, alpha) -> PeriodPoint:
    """The oriented plane alpha^perp inside W, with (alpha, a, b) positively oriented
    relative to the stored basis order of W."""
    lat = line.lattice
    alpha = as_fvector(alpha)
    basis = line.basis
    x = solve_in_span(basis, alpha)
    if x is None:
        raise AlphaNotInW("alpha does not lie in the three-space")
    if sign(lat.norm(alpha)) <= 0:
        raise AlphaNotPositive("q(alpha) <= 0")
    ell = [lat.pair(alpha, w) for w in basis]
    k = max(i for i in range(3) if ell[i] != 0)
    i, j = (m for m in range(3) if m != k)
    y1 = [0, 0, 0]
    y2 = [0, 0, 0]
    y1[i], y1[k] = 1, -ell[i] / ell[k]
    y2[j], y2[k] = 1, -ell[j] / ell[k]
    orient = sign(det([[x[r], y1[r], y2[r]] for r in range(3)]))
    if orient < 0:
        y2 = [-c for c in y2]
    f = common_field(alpha.field, line.space.field)
    u = _combine(basis, y1, f)
    v = _combine(basis, y2, f)
    return make_period(lat, u, v)


def _combine(basis: Sequence[FVector], coeffs: Sequence, field: NumberField) -> FVector:
    out = basis[0].lift(field).scale(0)
    for c, w in zip(coeffs, basis):
        if c != 0:
            out = out + w.lift(field).scale(c)
    return out


def normal_of(line: TwistorLine, p: PeriodPoint) -> FVector:
    """The vector alpha in W with sphere_point(line, alpha) == p (up to positive scale)."""
    lat = line.lattice
    a, b = p.a, p.b
    basis = line.basis
    # Gram-Schmidt the basis against the plane; the surviving vector is the normal
    for w in reversed(basis):
        cand = w - a.scale(lat.pair(w, a) / lat.norm(a)) - b.scale(lat.pair(w, b) / lat.norm(b))
        if not cand.is_zero():
            break
    q = sphere_point(line, cand)
    return cand if same_point(q, p) else -cand

