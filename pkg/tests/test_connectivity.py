import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hktorelli.connectivity import (
    Ball,
    ChainCertificate,
    NotNearEnough,
    boundary_line,
    connect_global,
    connect_strong_in_ball,
    connect_weak,
    positive_in_complement,
)
from hktorelli.errors import FieldDegreeTooSmall, PreconditionError
from hktorelli.period import make_period, random_field_vector, random_period, same_point
from hktorelli.scalar import FVector
from hktorelli.serialize import chain_to_json
from hktorelli.twistor import contains
from hktorelli.verify import verify_chain
from helpers import rational_period, unit


def e(i, n=4):
    return unit(n, i)


def nearby(p, rng, field, scale):
    n = p.lattice.rank
    da = random_field_vector(rng, field, n, spread=1).scale(scale)
    db = random_field_vector(rng, field, n, spread=1).scale(scale)
    return make_period(p.lattice, p.a + da, p.b + db)


class TestBall:
    def test_membership(self, diag4):
        center = make_period(diag4, e(0), e(1))
        ball = Ball(center, Fraction(1, 4))
        assert ball.contains(center)
        edge = make_period(diag4, [1, 0, Fraction(1, 4), 0], e(1))
        assert ball.on_boundary(edge) and not ball.contains(edge)
        assert not ball.contains(make_period(diag4, [1, 0, Fraction(1, 2), 0], e(1)), closed=True)

    def test_radius_positive(self, diag4):
        with pytest.raises(ValueError):
            Ball(make_period(diag4, e(0), e(1)), 0)


class TestWeak:
    def test_same_point_gives_empty_chain(self, diag4):
        x = make_period(diag4, e(0), e(1))
        c = connect_weak(x, x)
        assert c.length == 0 and verify_chain(c).ok

    def test_nearby_points(self, diag4):
        x = make_period(diag4, e(0), e(1))
        y = make_period(diag4, e(0), [0, 1, Fraction(1, 10), 0])
        c = connect_weak(x, y)
        assert isinstance(c, ChainCertificate) and c.length == 3
        assert verify_chain(c).ok
        for i, line in enumerate(c.lines):
            assert contains(line, c.points[i]) and contains(line, c.points[i + 1])

    def test_reversed_b_still_has_a_positive_chain(self, diag4):
        # <a, -b, c> is positive, so the three spaces exist even though b' = -b
        x = make_period(diag4, e(0), e(1))
        y = make_period(diag4, e(0), [0, -1, 0, 0])
        c = connect_weak(x, y)
        assert isinstance(c, ChainCertificate) and verify_chain(c).ok

    def test_conjugate_is_not_near(self, diag4):
        x = make_period(diag4, e(0), e(1))
        assert isinstance(connect_weak(x, x.conjugate()), NotNearEnough)

    def test_far_points_are_not_near(self):
        from hktorelli.lattice import diagonal

        lat = diagonal(1, 1, 1, -1, -1)
        x = make_period(lat, unit(5, 0), unit(5, 1))
        y = make_period(lat, [0, 0, 3, 2, 2], [3, 0, 0, 2, -2])
        assert isinstance(connect_weak(x, y), NotNearEnough)


class TestGlobal:
    def test_empty(self, diag4):
        x = make_period(diag4, e(0), e(1))
        assert connect_global(x, x).length == 0

    def test_conjugate_pair(self, diag4, u3):
        for lat in (diag4, u3):
            x = rational_period(lat, random.Random(5))
            c = connect_global(x, x.conjugate())
            rep = verify_chain(c)
            assert rep.ok, rep.failures()
            assert same_point(c.points[-1], x.conjugate())

    @settings(max_examples=15)
    @given(st.integers(0, 100_000))
    def test_soundness(self, seed):
        from hktorelli.lattice import diagonal

        lat = diagonal(1, 1, 1, -1)
        rng = random.Random(seed)
        x, y = rational_period(lat, rng), rational_period(lat, rng)
        rep = verify_chain(connect_global(x, y, seed=seed))
        assert rep.ok, rep.failures()

    def test_deterministic(self, u3):
        rng = random.Random(2)
        x, y = rational_period(u3, rng), rational_period(u3, rng)
        a = json.dumps(chain_to_json(connect_global(x, y, seed=4)), sort_keys=True)
        b = json.dumps(chain_to_json(connect_global(x, y, seed=4)), sort_keys=True)
        assert a == b

    def test_strong_needs_irrational_points(self, u3, sqrt2):
        x = rational_period(u3, random.Random(1))
        with pytest.raises(FieldDegreeTooSmall):
            connect_global(x, x.conjugate(), sqrt2, strong=True)

    def test_strong_chain(self, u3, sqrt2):
        rng = random.Random(3)
        x, y = random_period(u3, sqrt2, rng), random_period(u3, sqrt2, rng)
        c = connect_global(x, y, sqrt2, seed=3, strong=True)
        assert all(line.is_generic for line in c.lines)
        assert verify_chain(c).ok

    def test_strong_chain_to_conjugate(self, u3, sqrt2):
        x = random_period(u3, sqrt2, random.Random(8))
        c = connect_global(x, x.conjugate(), sqrt2, seed=8, strong=True)
        assert all(line.is_generic for line in c.lines)
        assert verify_chain(c).ok


class TestStrongInBall:
    def test_example(self, u3, sqrt2):
        rng = random.Random(0)
        center = random_period(u3, sqrt2, rng)
        ball = Ball(center, Fraction(1, 4))
        y = nearby(center, rng, sqrt2, Fraction(1, 300))
        c = connect_strong_in_ball(center, y, ball, sqrt2, seed=0)
        assert c.length == 4 and all(line.is_generic for line in c.lines)
        assert all(ball.contains(p) for p in c.points)
        assert len(c.segments) == 4
        assert verify_chain(c).ok
        assert c.notes["delta"] > 0

    def test_same_point(self, u3, sqrt2):
        center = random_period(u3, sqrt2, random.Random(1))
        c = connect_strong_in_ball(center, center, Ball(center, Fraction(1, 4)), sqrt2, 0)
        assert c.length == 0

    def test_outside(self, u3, sqrt2):
        center = random_period(u3, sqrt2, random.Random(1))
        far = make_period(u3, center.a + FVector([1, 0, 0, 0, 0, 0]), center.b)
        with pytest.raises(PreconditionError):
            connect_strong_in_ball(center, far, Ball(center, Fraction(1, 4)), sqrt2, 0)

    def test_rational_point_cannot_be_strong(self, u3, sqrt2):
        center = rational_period(u3, random.Random(1))
        with pytest.raises(FieldDegreeTooSmall):
            connect_strong_in_ball(center, center, Ball(center, Fraction(1, 4)), sqrt2, 0)


class TestBoundary:
    def test_example(self, diag4, sqrt2):
        center = make_period(diag4, e(0), e(1))
        ball = Ball(center, Fraction(1, 4))
        x = make_period(diag4, [1, 0, Fraction(1, 4), 0], e(1))
        res = boundary_line(x, ball, sqrt2, seed=0)
        assert res.line.is_generic
        assert ball.contains(res.y)
        assert contains(res.line, x) and contains(res.line, res.y)
        assert verify_chain(res.certificate).ok

    def test_tight_coordinate_in_b(self, diag4, sqrt2):
        # alpha is orthogonal to b, so b + s alpha alone cannot pull b_2 inward
        center = make_period(diag4, e(0), e(1))
        ball = Ball(center, Fraction(1, 4))
        x = make_period(diag4, [Fraction(15, 16), 0, 0, Fraction(-1, 16)], [0, Fraction(3, 4), 0, 0])
        res = boundary_line(x, ball, sqrt2, seed=16)
        assert ball.contains(res.y) and not same_point(res.y, x)
        assert verify_chain(res.certificate).ok

    def test_interior_rejected(self, diag4, sqrt2):
        center = make_period(diag4, e(0), e(1))
        with pytest.raises(PreconditionError):
            boundary_line(center, Ball(center, Fraction(1, 4)), sqrt2, 0)

    def test_outside_rejected(self, diag4, sqrt2):
        center = make_period(diag4, e(0), e(1))
        x = make_period(diag4, [1, 0, 1, 0], e(1))
        with pytest.raises(PreconditionError):
            boundary_line(x, Ball(center, Fraction(1, 4)), sqrt2, 0)


def test_positive_in_complement(diag4):
    x = make_period(diag4, [1, -1, 2, -1], [Fraction(6, 5), Fraction(19, 5), Fraction(-3, 5), Fraction(19, 5)])
    c = positive_in_complement(x)
    lat = x.lattice
    assert lat.norm(c) > 0 and lat.pair(c, x.a) == 0 and lat.pair(c, x.b) == 0
