"""Period points as oriented positive planes.

A period x = [sigma] in P(L tensor C) with q(x) = 0 and q(x, xbar) > 0 is
stored as its oriented real plane P(x) = <Re x, Im x>.  The stored pair
(a, b) is q-orthogonal but not norm-equalized: the projective point is
``sqrt(q(b)) * a + i * sqrt(q(a)) * b``, whose float rendering is available
from :meth:`PeriodPoint.display`.  Equality of points is tested at the level
of oriented planes.

The isometry action is the induced one on periods; the marking-level
question of whether (S, phi) and (S, -phi) are the same marked manifold is
not modeled.  Note that -id fixes every oriented plane.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    BudgetExhausted,
    DependentSpan,
    DimensionMismatch,
    NotOrthogonal,
    NotPositive,
    PreconditionError,
)
from .lattice import LatticeIsometry, QuadLattice, Sublattice, integral_kernel
from .scalar import QQ, FVector, NumberField, as_fvector, common_field, rank, sign


@dataclass(frozen=True, eq=False)
class PeriodPoint:
    lattice: QuadLattice
    a: FVector
    b: FVector

    def __post_init__(self):
        n = self.lattice.rank
        if len(self.a) != n or len(self.b) != n:
            raise DimensionMismatch(f"period vectors must have length {n}")
        if self.lattice.pair(self.a, self.b) != 0:
            raise NotOrthogonal("stored representative must satisfy q(a, b) = 0")
        if sign(self.lattice.norm(self.a)) <= 0 or sign(self.lattice.norm(self.b)) <= 0:
            raise NotPositive("plane is not positive definite")

    @property
    def field(self) -> NumberField:
        return common_field(self.a.field, self.b.field)

    def conjugate(self) -> "PeriodPoint":
        return PeriodPoint(self.lattice, self.b, self.a)

    def display(self) -> dict:
        qa = float(self.lattice.norm(self.a))
        qb = float(self.lattice.norm(self.b))
        return {
            "re": [math.sqrt(qb) * x for x in self.a.to_float()],
            "im": [math.sqrt(qa) * x for x in self.b.to_float()],
        }

    def to_json(self) -> dict:
        f = self.field
        return {
            "lattice": self.lattice.to_json(),
            "field": f.to_json(),
            "a": self.a.lift(f).to_json(),
            "b": self.b.lift(f).to_json(),
        }

    @classmethod
    def from_json(cls, doc, lattice: QuadLattice | None = None) -> "PeriodPoint":
        lat = lattice if lattice is not None else QuadLattice.from_json(doc["lattice"])
        f = NumberField.from_json(doc["field"]) if "field" in doc else QQ
        return make_period(lat, FVector.from_json(doc["a"], f), FVector.from_json(doc["b"], f))


def make_period(lattice: QuadLattice, a, b) -> PeriodPoint:
    """Oriented plane <a, b>, orthogonalized by b <- b - (q(a,b)/q(a)) a."""
    a, b = as_fvector(a), as_fvector(b)
    f = common_field(a.field, b.field)
    a, b = a.lift(f), b.lift(f)
    if len(a) != lattice.rank or len(b) != lattice.rank:
        raise DimensionMismatch(f"period vectors must have length {lattice.rank}")
    if rank([a, b]) < 2:
        raise DependentSpan("a and b are linearly dependent")
    qa = lattice.norm(a)
    if sign(qa) <= 0:
        raise NotPositive("q(a) <= 0")
    qab = lattice.pair(a, b)
    if qab != 0:
        b = b - a.scale(qab / qa)
    if sign(lattice.norm(b)) <= 0:
        raise NotPositive("plane is not positive definite")
    return PeriodPoint(lattice, a, b)


def _plane_coords(p: PeriodPoint, v: FVector):
    """Coefficients of v in the orthogonal basis (a, b) of p, or None if v is outside."""
    lat = p.lattice
    alpha = lat.pair(v, p.a) / lat.norm(p.a)
    beta = lat.pair(v, p.b) / lat.norm(p.b)
    if p.a.scale(alpha) + p.b.scale(beta) != v:
        return None
    return alpha, beta


def same_point(p1: PeriodPoint, p2: PeriodPoint) -> bool:
    """Equal spans and positive change-of-basis determinant."""
    if p1.lattice != p2.lattice:
        return False
    ca = _plane_coords(p1, p2.a)
    if ca is None:
        return False
    cb = _plane_coords(p1, p2.b)
    if cb is None:
        return False
    return sign(ca[0] * cb[1] - ca[1] * cb[0]) > 0


def same_plane(p1: PeriodPoint, p2: PeriodPoint) -> bool:
    return p1.lattice == p2.lattice and _plane_coords(p1, p2.a) is not None and _plane_coords(p1, p2.b) is not None


def picard_lattice(p: PeriodPoint) -> Sublattice:
    """L cap P(x)^perp: the integral classes orthogonal to the period plane."""
    return integral_kernel(p.lattice, [p.a, p.b])


def is_generic_period(p: PeriodPoint) -> bool:
    return picard_lattice(p).rank == 0


def random_field_vector(rng: random.Random, field: NumberField, n: int, spread: int = 3) -> FVector:
    """Coordinates with power-basis coefficients drawn uniformly from [-spread, spread]."""
    d = field.degree
    return FVector(
        (field.element(rng.randint(-spread, spread) for _ in range(d)) for _ in range(n)), field
    )


def random_period(
    lattice: QuadLattice, field: NumberField, rng: random.Random, step: Fraction | None = None, tries: int = 25
) -> PeriodPoint:
    """Positive-frame plane plus small field-valued noise (halved on failure)."""
    frame = lattice.positive_frame()
    if len(frame) < 2:
        raise PreconditionError("lattice has fewer than two positive directions")
    p1, p2 = (FVector(v, field) for v in frame[:2])
    if step is None:
        size = max(max(abs(x) for x in frame[0]), max(abs(x) for x in frame[1]))
        step = Fraction(1, 32 * size)
    n = lattice.rank
    for _ in range(tries):
        ra = random_field_vector(rng, field, n)
        rb = random_field_vector(rng, field, n)
        try:
            return make_period(lattice, p1 + ra.scale(step), p2 + rb.scale(step))
        except (NotPositive, DependentSpan):
            step /= 2
    raise BudgetExhausted("no positive random plane found")


def random_generic_period(
    lattice: QuadLattice, field: NumberField, seed: int, max_tries: int = 25
) -> tuple[PeriodPoint, int]:
    """Seeded period point with trivial Picard lattice; returns (point, attempts used).

    Needs 2 * deg(field) >= rank to have any chance: two constraints expand
    into at most 2d rational equations.
    """
    rng = random.Random(seed)
    for attempt in range(1, max_tries + 1):
        p = random_period(lattice, field, rng)
        if is_generic_period(p):
            return p, attempt
    raise BudgetExhausted(f"no generic period found in {max_tries} attempts")


def act(phi: LatticeIsometry, p: PeriodPoint) -> PeriodPoint:
    if phi.lattice != p.lattice:
        raise DimensionMismatch("isometry and period live on different lattices")
    return make_period(p.lattice, phi.apply(p.a), phi.apply(p.b))


@dataclass(frozen=True, eq=False)
class PositiveConeRef:
    """One component of {v in P(x)^perp : q(v) > 0}, selected by ``ref``.

    ``plane`` may be None for a lattice of signature (1, k) used on its own,
    where the component lives in the whole space.
    """

    lattice: QuadLattice
    plane: PeriodPoint | None
    ref: FVector

    def __post_init__(self):
        ref = as_fvector(self.ref)
        object.__setattr__(self, "ref", ref)
        if len(ref) != self.lattice.rank:
            raise DimensionMismatch("reference vector has the wrong length")
        if self.plane is not None:
            if self.lattice.pair(ref, self.plane.a) != 0 or self.lattice.pair(ref, self.plane.b) != 0:
                raise NotOrthogonal("reference vector is not orthogonal to the plane")
        if sign(self.lattice.norm(ref)) <= 0:
            raise NotPositive("reference vector must have q(ref) > 0")


def in_positive_cone(v, cone: PositiveConeRef) -> bool:
    v = as_fvector(v)
    lat = cone.lattice
    if cone.plane is not None:
        if lat.pair(v, cone.plane.a) != 0 or lat.pair(v, cone.plane.b) != 0:
            raise NotOrthogonal("vector is not orthogonal to the period plane")
    return sign(lat.norm(v)) > 0 and sign(lat.pair(v, cone.ref)) > 0


def orthogonal_projection(lattice: QuadLattice, basis: Sequence[FVector], v: FVector) -> FVector:
    """q-orthogonal projection of v onto span(basis); the basis must be q-orthogonal."""
    out = v.scale(0)
    for w in basis:
        c = lattice.pair(v, w) / lattice.norm(w)
        if c != 0:
            out = out + w.scale(c)
    return out
