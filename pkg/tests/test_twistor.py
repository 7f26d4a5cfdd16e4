import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hktorelli.errors import (
    AlphaNotInW,
    AlphaNotPositive,
    BudgetExhausted,
    DependentSpan,
    FieldDegreeTooSmall,
    NotPositiveDefinite,
)
from hktorelli.lattice import constraint_rows, diagonal, make_catalog
from hktorelli.period import make_period, same_plane, same_point
from hktorelli.scalar import QQ, FVector
from hktorelli.twistor import (
    GenericWitness,
    NoCommonLine,
    NonGenericWitness,
    SamePlane,
    check_generic,
    common_line,
    contains,
    genericize,
    line_through,
    make_three_space,
    normal_of,
    sphere_point,
)
from helpers import unit
from oracles import permutations_det


def e(i, n=4):
    return unit(n, i)


def u3_frame(u3):
    return [FVector(v) for v in u3.positive_frame()]


class TestThreeSpace:
    def test_standard_frame(self, diag4):
        w = make_three_space(diag4, e(0), e(1), e(2))
        assert w.minors == (1, 1, 1)

    def test_negative_direction(self, diag4):
        with pytest.raises(NotPositiveDefinite):
            make_three_space(diag4, e(0), e(1), e(3))

    def test_minors_against_determinant_oracle(self, diag4):
        w3 = [0, 1, Fraction(1, 2), 0]
        w = make_three_space(diag4, e(0), e(1), w3)
        g = diag4.gram_of([e(0), e(1), w3])
        assert w.minors == (g[0][0], permutations_det([r[:2] for r in g[:2]]), permutations_det(g))
        assert w.minors[2] == Fraction(1, 4)

    def test_dependent(self, diag4):
        with pytest.raises(DependentSpan):
            make_three_space(diag4, e(0), e(1), [1, 1, 0, 0])


class TestGenericity:
    def test_rational_space_is_not_generic(self, diag4):
        line = check_generic(line_through(diag4, e(0), e(1), e(2)))
        assert line.is_generic is False
        assert line.genericity == NonGenericWitness((0, 0, 0, 1))

    def test_irrational_space_in_3u(self, u3, sqrt2):
        t = sqrt2.gen()
        f1, f2, f3 = u3_frame(u3)
        w3 = f3 + FVector([0, t / 8, Fraction(1, 8), 0, t / 16, 0], sqrt2)
        w2 = f2 + FVector([t / 16, 0, 0, Fraction(1, 16), 0, 0], sqrt2)
        w1 = f1 + FVector([0, 0, 0, 0, 0, t / 16], sqrt2)
        line = check_generic(line_through(u3, w1, w2, w3))
        assert line.is_generic
        wit = line.genericity
        assert isinstance(wit, GenericWitness)
        # re-multiply: rows are the power-basis components of G w_i
        a = constraint_rows(u3, line.basis)
        left, right = [list(r) for r in wit.left], [list(r) for r in wit.right]
        la = [[sum(x * y for x, y in zip(r, c)) for c in zip(*a)] for r in left]
        d = [[sum(x * y for x, y in zip(r, c)) for c in zip(*right)] for r in la]
        assert all(d[i][j] == (wit.diagonal[i] if i == j else 0) for i in range(len(d)) for j in range(6))
        assert sum(1 for x in wit.diagonal if x) == 6

    @given(st.integers(4, 8), st.integers(0, 10_000))
    def test_rational_spaces_never_generic(self, n, seed):
        rng = random.Random(seed)
        lat = diagonal(1, 1, 1, *([-1] * (n - 3)))
        while True:
            ws = [[int(i == k) + Fraction(rng.randint(-2, 2), 5) for i in range(n)] for k in range(3)]
            try:
                line = check_generic(line_through(lat, *ws))
                break
            except (NotPositiveDefinite, DependentSpan):
                continue
        assert line.is_generic is False
        v = line.genericity.vector
        assert any(v) and all(lat.pair(v, FVector(w)) == 0 for w in ws)


class TestMembership:
    def test_examples(self, diag4):
        line = line_through(diag4, e(0), e(1), e(2))
        assert contains(line, make_period(diag4, e(0), e(1)))
        assert contains(line, make_period(diag4, [1, 1, 0, 0], e(2)))
        assert not contains(line, make_period(diag4, [1, 0, 0, Fraction(1, 2)], e(1)))

    def test_orientation_insensitive(self, diag4):
        line = line_through(diag4, e(0), e(1), e(2))
        p = make_period(diag4, e(0), e(1))
        assert contains(line, p) and contains(line, p.conjugate())


class TestCommonLine:
    def test_shared_vector(self, diag4):
        line = common_line(make_period(diag4, e(0), e(1)), make_period(diag4, e(0), e(2)))
        assert not isinstance(line, (NoCommonLine, SamePlane))
        assert contains(line, make_period(diag4, e(1), e(2)))

    def test_four_dimensional_span(self):
        lat = diagonal(1, 1, 1, -1, -1)
        x = make_period(lat, unit(5, 0), unit(5, 1))
        y = make_period(lat, unit(5, 2), [0, 1, 0, Fraction(1, 3), 0])
        assert isinstance(common_line(x, y), NoCommonLine)

    def test_same_plane(self, diag4):
        x = make_period(diag4, e(0), e(1))
        assert isinstance(common_line(x, x), SamePlane)
        assert isinstance(common_line(x, x.conjugate()), SamePlane)

    def test_indefinite_span(self, diag4):
        x = make_period(diag4, e(0), e(1))
        y = make_period(diag4, e(0), [0, 2, 0, 1])
        assert isinstance(common_line(x, y), NoCommonLine)


class TestGenericize:
    def test_frame_over_sqrt2(self, u3, sqrt2):
        line = line_through(u3, *u3_frame(u3))
        g = genericize(line, sqrt2, 3)
        assert g.line.is_generic
        for old, new in zip(line.basis, g.line.basis):
            assert (new - old.lift(sqrt2)).max_abs_upper_bound() < g.magnitude

    def test_rational_field_too_small(self, u3):
        with pytest.raises(FieldDegreeTooSmall):
            genericize(line_through(u3, *u3_frame(u3)), QQ, 3)

    def test_zero_budget(self, u3, sqrt2):
        with pytest.raises(BudgetExhausted):
            genericize(line_through(u3, *u3_frame(u3)), sqrt2, 3, budget=0)

    def test_deterministic(self, u3, sqrt2):
        line = line_through(u3, *u3_frame(u3))
        a, b = genericize(line, sqrt2, 11), genericize(line, sqrt2, 11)
        assert a.line.basis == b.line.basis and a.magnitude == b.magnitude


class TestSphere:
    def test_pinned_orientations(self, diag4):
        line = line_through(diag4, e(0), e(1), e(2))
        assert same_point(sphere_point(line, e(2)), make_period(diag4, e(0), e(1)))
        assert same_point(sphere_point(line, [0, 0, -1, 0]), make_period(diag4, e(1), e(0)))
        p = sphere_point(line, [1, 1, 0, 0])
        assert same_point(p, make_period(diag4, [1, -1, 0, 0], [0, 0, -1, 0]))

    def test_errors(self, diag4):
        line = line_through(diag4, e(0), e(1), e(2))
        with pytest.raises(AlphaNotInW):
            sphere_point(line, e(3))
        with pytest.raises(AlphaNotPositive):
            sphere_point(line, [0, 0, 0, 0])

    @given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
    def test_antipodes_and_normals(self, coeffs):
        if not any(coeffs):
            return
        lat = make_catalog("3u")
        line = line_through(lat, *u3_frame(lat))
        alpha = sum((w.scale(c) for w, c in zip(line.basis[1:], coeffs[1:])), line.basis[0].scale(coeffs[0]))
        p, q = sphere_point(line, alpha), sphere_point(line, -alpha)
        assert same_plane(p, q) and not same_point(p, q)
        assert contains(line, p)
        n = normal_of(line, p)
        assert same_point(sphere_point(line, n), p)
        # the normal is a positive multiple of alpha
        ratio = [x / y for x, y in zip(n.coords, alpha.coords) if y != 0]
        assert len(set(ratio)) == 1 and ratio[0] > 0
