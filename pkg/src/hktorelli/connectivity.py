"""Chains of twistor lines between period points.

Three constructions:

* ``connect_weak``: the three-line chain <a,b,c>, <a,b',c>, <a',b',c> with
  c a positive vector orthogonal to P(x), valid when y is close to x.
* ``connect_strong_in_ball``: the four-line chain through <a,c>, <a,b'>,
  <d,b'> with c = b + t w, d = a + t w and both perturbed until all four
  lines are generic, recorded with affine segment witnesses inside a ball.
* ``connect_global``: bisection along a path of planes, falling back to the
  detour x -> proj(x) -> proj(y) -> y through a maximal positive
  three-space W0 (W0^perp is negative definite, so the straight path from a
  plane to its q-orthogonal projection onto W0 stays positive, and every
  plane inside W0 lies on the single line T_W0).

Balls are taken in the max-norm on ordered spanning pairs relative to the
center's stored representative, so membership is decided exactly and balls
are convex.  Chain points keep their orthogonalized representatives; the
segment witnesses connect consecutive representatives affinely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    BudgetExhausted,
    DependentSpan,
    DimensionMismatch,
    FieldDegreeTooSmall,
    NoPositiveThreeSpace,
    NotPositive,
    PreconditionError,
    SubdivisionBudgetExhausted,
)
from .lattice import QuadLattice
from .period import (
    PeriodPoint,
    make_period,
    orthogonal_projection,
    random_field_vector,
    same_plane,
    same_point,
)
from .scalar import FVector, NumberField, common_field, sign
from .twistor import TwistorLine, check_generic, genericize, line_through

Pair = tuple[FVector, FVector]


# ---------------------------------------------------------------------------
# balls
# ---------------------------------------------------------------------------


def _within(v: FVector, c: FVector, eps: Fraction, strict: bool) -> bool:
    for x, y in zip(v.coords, c.coords):
        diff = x - y
        lo, hi = sign(eps + diff), sign(eps - diff)
        if strict and (lo <= 0 or hi <= 0):
            return False
        if not strict and (lo < 0 or hi < 0):
            return False
    return True


@dataclass(frozen=True, eq=False)
class Ball:
    """{<a', b'> : |a' - a0|_max < r and |b' - b0|_max < r} around center (a0, b0)."""

    center: PeriodPoint
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def contains_pair(self, a: FVector, b: FVector, closed: bool = False) -> bool:
        c = self.center
        return _within(a, c.a, self.radius, not closed) and _within(b, c.b, self.radius, not closed)

    def contains(self, p: PeriodPoint, closed: bool = False) -> bool:
        return self.contains_pair(p.a, p.b, closed)

    def on_boundary(self, p: PeriodPoint) -> bool:
        return self.contains(p, closed=True) and not self.contains(p)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    """Affine path (1-s)*start + s*end of spanning pairs, inside line ``line_index``."""

    line_index: int
    start: Pair
    end: Pair


@dataclass(frozen=True, eq=False)
class ChainCertificate:
    source: PeriodPoint
    target: PeriodPoint
    points: tuple[PeriodPoint, ...]
    lines: tuple[TwistorLine, ...]
    generic_required: tuple[bool, ...]
    ball: Ball | None = None
    segments: tuple[Segment, ...] = ()
    boundary_start: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.lines)

    @property
    def lattice(self) -> QuadLattice:
        return self.source.lattice


@dataclass(frozen=True)
class NotNearEnough:
    reason: str


def empty_chain(x: PeriodPoint, y: PeriodPoint | None = None, ball: Ball | None = None) -> ChainCertificate:
    return ChainCertificate(x, y if y is not None else x, (x,), (), (), ball)


def concatenate(parts: Sequence[ChainCertificate], source: PeriodPoint, target: PeriodPoint) -> ChainCertificate:
    points = [source]
    lines, flags = [], []
    for part in parts:
        if part.length == 0:
            continue
        if not same_point(points[-1], part.points[0]):
            raise ValueError("chain pieces do not join")
        points.extend(part.points[1:])
        lines.extend(part.lines)
        flags.extend(part.generic_required)
    return ChainCertificate(source, target, tuple(points), tuple(lines), tuple(flags))


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _float_ratio(lat: QuadLattice, v: FVector) -> float:
    fl = v.to_float()
    nrm = sum(x * x for x in fl)
    return float(lat.norm(v)) / nrm if nrm else 0.0


def _normalize(v: FVector) -> FVector:
    """Rescale by a rational so the max coordinate is about 1."""
    m = max(abs(x) for x in v.to_float())
    s = Fraction(1 / m).limit_denominator(64) if m else Fraction(1)
    return v.scale(s)


def normal_candidates(x: PeriodPoint, extra: Sequence[FVector] = (), limit: int = 8) -> list[FVector]:
    """Positive vectors q-orthogonal to P(x), most positive first.

    Obtained by projecting the positive frame, the extra vectors and the
    standard basis to P(x)^perp.  The ordering uses a float heuristic only.
    """
    lat = x.lattice
    n = lat.rank
    f = x.field
    trial = [FVector(v, f) for v in lat.positive_frame()]
    trial += [v.lift(common_field(v.field, f)) for v in extra]
    trial += [FVector([int(i == j) for j in range(n)], f) for i in range(n)]
    out = []
    for v in trial:
        c = v - orthogonal_projection(lat, (x.a, x.b), v)
        if c.is_zero() or sign(lat.norm(c)) <= 0:
            continue
        out.append(c)
    out.sort(key=lambda c: -_float_ratio(lat, c))
    if not out:
        c = positive_in_complement(x)
        if c is not None:
            out.append(c)
    return [_normalize(c) for c in out[:limit]]


def positive_in_complement(x: PeriodPoint) -> FVector | None:
    """A positive vector of P(x)^perp found by exact congruence diagonalization."""
    lat = x.lattice
    n = lat.rank
    vs = []
    for i in range(n):
        e = FVector([int(i == j) for j in range(n)], x.field)
        v = e - orthogonal_projection(lat, (x.a, x.b), e)
        if not v.is_zero():
            vs.append(v)
    while vs:
        piv = next((v for v in vs if lat.norm(v) != 0), None)
        if piv is None:
            # all isotropic: v + w or v - w has norm +-2 q(v, w)
            for i, v in enumerate(vs):
                for w in vs[i + 1 :]:
                    s = sign(lat.pair(v, w))
                    if s:
                        return v + w if s > 0 else v - w
            return None
        if sign(lat.norm(piv)) > 0:
            return piv
        qp = lat.norm(piv)
        vs = [v - piv.scale(lat.pair(v, piv) / qp) for v in vs if v is not piv]
        vs = [v for v in vs if not v.is_zero()]
    return None


def _combine(u: FVector, v: FVector, s: Fraction) -> FVector:
    return u.scale(1 - s) + v.scale(s)


# ---------------------------------------------------------------------------
# the three-line construction
# ---------------------------------------------------------------------------


def connect_weak(x: PeriodPoint, y: PeriodPoint) -> ChainCertificate | NotNearEnough:
    """Three twistor lines through <a,b,c>, <a,b',c>, <a',b',c>."""
    if x.lattice != y.lattice:
        raise DimensionMismatch("points on different lattices")
    if same_point(x, y):
        return empty_chain(x, y)
    lat = x.lattice
    a, b = x.a, x.b
    a2, b2 = y.a, y.b
    for c in normal_candidates(x, extra=(a2, b2)):
        try:
            t1 = line_through(lat, a, b, c)
            t2 = line_through(lat, a, b2, c)
            t3 = line_through(lat, a2, b2, c)
            x2 = make_period(lat, a, c)
            x3 = make_period(lat, b2, c)
        except (NotPositive, DependentSpan):
            continue
        return ChainCertificate(x, y, (x, x2, x3, y), (t1, t2, t3), (False, False, False))
    return NotNearEnough("no positive three-spaces <a,b',c>, <a',b',c> for the candidate c")


# ---------------------------------------------------------------------------
# the four-generic-line construction
# ---------------------------------------------------------------------------


def _perturb(rng: random.Random, field: NumberField, v: FVector, eta: Fraction) -> FVector:
    return v.lift(common_field(field, v.field)) + random_field_vector(rng, field, len(v), spread=2).scale(eta)


def _four_spaces(lat, a, b, a2, b2, c, d) -> tuple[TwistorLine, ...] | None:
    try:
        return (
            line_through(lat, a, b, c),
            line_through(lat, a, b2, c),
            line_through(lat, a, b2, d),
            line_through(lat, a2, b2, d),
        )
    except (NotPositive, DependentSpan):
        return None


def _four_points(lat, x, y, c, d) -> tuple[PeriodPoint, ...] | None:
    try:
        return (
            x,
            make_period(lat, x.a, c),
            make_period(lat, x.a, y.b),
            make_period(lat, d, y.b),
            y,
        )
    except (NotPositive, DependentSpan):
        return None


def _segments(points: Sequence[PeriodPoint]) -> tuple[Segment, ...]:
    return tuple(
        Segment(i, (points[i].a, points[i].b), (points[i + 1].a, points[i + 1].b))
        for i in range(len(points) - 1)
    )


def _four_line_step(
    x: PeriodPoint,
    y: PeriodPoint,
    field: NumberField,
    rng: random.Random,
    budget: int,
    ball: Ball | None = None,
) -> ChainCertificate | NotNearEnough:
    lat = x.lattice
    if same_point(x, y):
        return empty_chain(x, y, ball)
    a, b, a2, b2 = x.a, x.b, y.a, y.b
    if ball is not None:
        scale = ball.radius
    else:
        scale = max(a.max_abs_upper_bound(), b.max_abs_upper_bound())
    # pick w and the largest t for which the unperturbed chain is valid
    chosen = None
    for w in normal_candidates(x, extra=(a2, b2), limit=4):
        for j in range(1, 10):
            t = scale / 2**j
            c0, d0 = b + w.scale(t), a + w.scale(t)
            if _four_spaces(lat, a, b, a2, b2, c0, d0) is None:
                continue
            pts = _four_points(lat, x, y, c0, d0)
            if pts is None:
                continue
            if ball is not None and not all(ball.contains(p) for p in pts):
                continue
            chosen = (t, c0, d0)
            break
        if chosen:
            break
    if chosen is None:
        return NotNearEnough("no t makes all four three-spaces positive")
    t, c0, d0 = chosen
    eta = t / 64
    for attempt in range(budget):
        c = _perturb(rng, field, c0, eta)
        d = _perturb(rng, field, d0, eta)
        spaces = _four_spaces(lat, a, b, a2, b2, c, d)
        pts = _four_points(lat, x, y, c, d) if spaces else None
        if pts is None or (ball is not None and not all(ball.contains(p) for p in pts)):
            eta /= 2
            continue
        lines = tuple(check_generic(s) for s in spaces)
        if not all(ln.is_generic for ln in lines):
            continue
        return ChainCertificate(
            x,
            y,
            pts,
            lines,
            (True,) * 4,
            ball,
            _segments(pts) if ball is not None else (),
            notes={"t": t, "perturbation": eta, "attempts": attempt + 1},
        )
    raise BudgetExhausted(f"four generic lines not found in {budget} attempts")


def _check_strong_feasible(p: PeriodPoint, field: NumberField):
    d = field.degree
    n = p.lattice.rank
    if 3 * d < n:
        raise FieldDegreeTooSmall(f"3 * {d} < {n}")
    contrib = sum(1 if v.is_rational else d for v in (p.a, p.b)) + d
    if contrib < n:
        raise FieldDegreeTooSmall(
            f"every line through this point has at most {contrib} < {n} rational conditions"
        )


def max_distance_bound(p: PeriodPoint, q: PeriodPoint) -> Fraction:
    """Rational upper bound for max(|a - a'|, |b - b'|) in the max-norm."""
    return max((p.a - q.a).max_abs_upper_bound(), (p.b - q.b).max_abs_upper_bound())


def connect_strong_in_ball(
    x: PeriodPoint,
    y: PeriodPoint,
    ball: Ball,
    field: NumberField,
    seed: int,
    budget: int = 50,
) -> ChainCertificate | NotNearEnough:
    """Four generic lines from x to y whose points and segments stay in ``ball``."""
    if x.lattice != y.lattice or x.lattice != ball.center.lattice:
        raise DimensionMismatch("points and ball live on different lattices")
    if not ball.contains(x) or not ball.contains(y):
        raise PreconditionError("both points must lie in the open ball")
    field = common_field(field, x.field, y.field)
    _check_strong_feasible(x, field)
    result = _four_line_step(x, y, field, random.Random(seed), budget, ball)
    if isinstance(result, ChainCertificate):
        result.notes["delta"] = max_distance_bound(x, y)
    return result


# ---------------------------------------------------------------------------
# global chains
# ---------------------------------------------------------------------------


def _detour_frame(
    lat: QuadLattice, f: NumberField, strong_field: NumberField | None, seed: int, budget: int
) -> tuple[TwistorLine, list[FVector]]:
    """The detour three-space W0 with a q-orthogonal basis.

    W0 is spanned by the lattice's positive frame; for strong chains it is
    first genericized, since planes inside a rational W0 lie on no generic line
    once rank > 3 + deg.
    """
    frame = lat.positive_frame()
    if len(frame) < 3:
        raise NoPositiveThreeSpace("lattice has fewer than three positive directions")
    line = line_through(lat, *(FVector(v, f) for v in frame[:3]))
    if strong_field is not None:
        line = genericize(line, strong_field, seed, budget).line
    ortho: list[FVector] = []
    for w in line.basis:
        ortho.append(w - orthogonal_projection(lat, ortho, w))
    return line, ortho


def _project_to(lat: QuadLattice, frame: Sequence[FVector], p: PeriodPoint) -> Pair:
    return orthogonal_projection(lat, frame, p.a), orthogonal_projection(lat, frame, p.b)


class _InvalidPath(Exception):
    pass


def _walk(
    path: Callable[[Fraction], PeriodPoint],
    p0: PeriodPoint,
    p1: PeriodPoint,
    step: Callable[[PeriodPoint, PeriodPoint], ChainCertificate | NotNearEnough],
    depth: int,
) -> list[ChainCertificate]:
    pieces: list[ChainCertificate] = []
    stack = [(Fraction(0), p0, Fraction(1), p1, depth)]
    while stack:
        s0, q0, s1, q1, dep = stack.pop()
        r = step(q0, q1)
        if isinstance(r, ChainCertificate):
            pieces.append(r)
            continue
        if dep == 0:
            raise SubdivisionBudgetExhausted("subdivision depth exhausted")
        sm = (s0 + s1) / 2
        try:
            qm = path(sm)
        except (NotPositive, DependentSpan) as exc:
            raise _InvalidPath(str(exc)) from exc
        stack.append((sm, qm, s1, q1, dep - 1))
        stack.append((s0, q0, sm, qm, dep - 1))
    return pieces


def _linear_path(lat: QuadLattice, start: Pair, end: Pair, perturb=None):
    def path(s: Fraction) -> PeriodPoint:
        a = _combine(start[0], end[0], s)
        b = _combine(start[1], end[1], s)
        if perturb is not None:
            a, b = perturb(a, b)
        return make_period(lat, a, b)

    return path


def connect_global(
    x: PeriodPoint,
    y: PeriodPoint,
    field: NumberField | None = None,
    seed: int = 0,
    max_subdivisions: int = 12,
    strong: bool = False,
    budget: int = 50,
) -> ChainCertificate:
    """Chain between arbitrary x and y by bisection along a path of planes.

    The straight path of spanning pairs is tried first; if a sample plane
    degenerates or the bisection depth runs out, the chain is rerouted
    x -> proj(x) -> proj(y) -> y through the detour space W0.  With
    ``strong`` every line is made generic using the four-line construction;
    interior samples then receive small field-irrational perturbations.
    """
    if x.lattice != y.lattice:
        raise DimensionMismatch("points on different lattices")
    lat = x.lattice
    if same_point(x, y):
        return empty_chain(x, y)
    rng = random.Random(seed)
    if strong:
        if field is None:
            raise FieldDegreeTooSmall("strong chains need an irrational field")
        field = common_field(field, x.field, y.field)
        _check_strong_feasible(x, field)
        _check_strong_feasible(y, field)

        def step(p, q):
            return _four_line_step(p, q, field, rng, budget)

        scale = Fraction(1, 2**12)

        def perturb(a, b):
            return _perturb(rng, field, a, scale), _perturb(rng, field, b, scale)
    else:
        step = connect_weak
        perturb = None

    try:
        pieces = _walk(_linear_path(lat, (x.a, x.b), (y.a, y.b), perturb), x, y, step, max_subdivisions)
        cert = concatenate(pieces, x, y)
        cert.notes["route"] = "direct"
        return cert
    except (_InvalidPath, SubdivisionBudgetExhausted):
        pass

    f = common_field(x.field, y.field)
    w0, frame = _detour_frame(lat, f, field if strong else None, rng.randrange(2**32), budget)
    px, py = _project_to(lat, frame, x), _project_to(lat, frame, y)
    x0 = make_period(lat, *px)
    y0 = make_period(lat, *py)
    pieces = []
    try:
        pieces += _walk(_linear_path(lat, (x.a, x.b), px, perturb), x, x0, step, max_subdivisions)
        if not same_point(x0, y0):
            pieces.append(ChainCertificate(x0, y0, (x0, y0), (w0,), (strong,)))
        pieces += _walk(_linear_path(lat, py, (y.a, y.b), perturb), y0, y, step, max_subdivisions)
    except _InvalidPath as exc:
        raise SubdivisionBudgetExhausted(f"rerouted path degenerated: {exc}") from exc
    cert = concatenate(pieces, x, y)
    cert.notes["route"] = "detour"
    return cert


# ---------------------------------------------------------------------------
# boundary of a ball
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundaryResult:
    line: TwistorLine
    y: PeriodPoint
    certificate: ChainCertificate


def _tight_signs(v: FVector, c: FVector, eps: Fraction) -> list[tuple[int, int]]:
    """(index, sign of v_i - c_i) for every coordinate at distance exactly eps."""
    out = []
    for i, (x, y) in enumerate(zip(v.coords, c.coords)):
        if sign(abs(x - y) - eps) == 0:
            out.append((i, sign(x - y)))
    return out


def _inward_point(x: PeriodPoint, ball: Ball, a: FVector, b: FVector, alpha: FVector) -> PeriodPoint | None:
    """A point of span(a, b, alpha) strictly inside the ball, other than x.

    Tries y = (a + h u, b + h v) with u, v small combinations of a, b, alpha.
    The first-order change of every tight coordinate (after make_period
    re-orthogonalizes b) must point inward; alpha must appear so the plane moves.
    """
    lat = x.lattice
    c = ball.center
    ta, tb = _tight_signs(a, c.a, ball.radius), _tight_signs(b, c.b, ball.radius)
    qa = lat.norm(a)
    coeffs = [(p, q, r) for p in (0, -1, 1) for q in (0, -1, 1) for r in (0, 1, -1, Fraction(1, 16), Fraction(-1, 16))]
    coeffs.sort(key=lambda t: sum(1 for z in t if z))
    dirs = [(t, a.scale(t[0]) + b.scale(t[1]) + alpha.scale(t[2])) for t in coeffs]
    inward_a = [(t, u) for t, u in dirs if all(sign(u.coords[i]) == -s for i, s in ta)]
    for tu, u in inward_a:
        for tv, v in dirs:
            if not (tu[2] or tv[2]):
                continue
            db = v - a.scale((lat.pair(u, b) + lat.pair(a, v)) / qa)
            if not all(sign(db.coords[i]) == -s for i, s in tb):
                continue
            for j in range(2, 16):
                h = ball.radius / 2**j
                try:
                    y = make_period(lat, a + u.scale(h), b + v.scale(h))
                except (NotPositive, DependentSpan):
                    continue
                if ball.contains(y) and not same_plane(x, y):
                    return y
    return None


def boundary_line(
    x: PeriodPoint, ball: Ball, field: NumberField, seed: int, budget: int = 50
) -> BoundaryResult:
    """A generic line through a boundary point x that reaches the interior of the ball."""
    if not ball.on_boundary(x):
        raise PreconditionError("x must lie on the boundary of the ball")
    lat = x.lattice
    field = common_field(field, x.field)
    n, d = lat.rank, field.degree
    contrib = sum(1 if v.is_rational else d for v in (x.a, x.b)) + d
    if contrib < n:
        raise FieldDegreeTooSmall(f"lines through x carry at most {contrib} < {n} conditions")
    rng = random.Random(seed)
    a, b = x.a.lift(field), x.b.lift(field)
    candidates = normal_candidates(x, limit=6)
    for attempt in range(budget):
        base = candidates[attempt % len(candidates)]
        noise = random_field_vector(rng, field, n, spread=2).scale(Fraction(1, 16))
        alpha = base + noise
        alpha = alpha - orthogonal_projection(lat, (a, b), alpha)
        if sign(lat.norm(alpha)) <= 0:
            continue
        try:
            line = check_generic(line_through(lat, a, b, alpha))
        except (NotPositive, DependentSpan):
            continue
        if not line.is_generic:
            continue
        y = _inward_point(x, ball, a, b, alpha)
        if y is not None:
            cert = ChainCertificate(
                x, y, (x, y), (line,), (True,), ball,
                (Segment(0, (x.a, x.b), (y.a, y.b)),),
                boundary_start=True,
                notes={"attempts": attempt + 1},
            )
            return BoundaryResult(line, y, cert)
    raise BudgetExhausted(f"no generic line into the interior found in {budget} attempts")
