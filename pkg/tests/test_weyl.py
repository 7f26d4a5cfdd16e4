import random

import pytest
from hypothesis import assume, given, strategies as st

from hktorelli.errors import NoPositiveThreeSpace, NotARoot, NotInCone, StepBudgetExhausted
from hktorelli.lattice import (
    LatticeIsometry,
    Sublattice,
    direct_sum,
    e8_negative,
    enumerate_norm_vectors,
    hyperbolic_plane,
    hyperbolic_sum,
    is_isometry,
    make_catalog,
    rank_one,
)
from hktorelli.period import PositiveConeRef, make_period, random_generic_period
from hktorelli.scalar import radical_field
from hktorelli.weyl import (
    ReflectionWord,
    Root,
    chamber_reduce,
    orient_roots,
    orientation_class,
    reflect,
    roots_of_picard,
)
from helpers import unit
from oracles import brute_norm_classes

# U (+) <-2> (+) <-2>: hyperbolic, with a finite but nontrivial root box
HYP = direct_sum(hyperbolic_plane(), rank_one(-2), rank_one(-2))
HYP_ROOTS = [Root(HYP, v) for v in enumerate_norm_vectors(Sublattice.full(HYP), -2, 2)]


def u_cone(ref=(1, 1)):
    return PositiveConeRef(hyperbolic_plane(), None, ref)


class TestRoot:
    def test_rejects_wrong_norm(self):
        with pytest.raises(NotARoot):
            Root(hyperbolic_plane(), (1, 1))

    def test_sign_canonical(self):
        assert Root(hyperbolic_plane(), (-1, 1)).vector == (1, -1)

    def test_root_goes_to_its_negative(self):
        d = Root(hyperbolic_plane(), (1, -1))
        assert reflect(d, d.vector) == (-1, 1)

    def test_mirror_is_fixed(self):
        d = Root(hyperbolic_plane(), (1, -1))
        assert reflect(d, (3, 3)) == (3, 3)

    @pytest.mark.parametrize("root", HYP_ROOTS, ids=str)
    def test_matrix_is_an_involutive_isometry(self, root):
        assert is_isometry(HYP, root.matrix()).ok
        m = root.isometry()
        assert (m @ m).matrix == LatticeIsometry.identity(HYP).matrix

    @given(st.sampled_from(HYP_ROOTS), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
    def test_reflection_preserves_the_form(self, root, v):
        w = reflect(root, v)
        assert HYP.norm(w) == HYP.norm(v)
        assert reflect(root, w) == tuple(v)
        assert root.isometry().apply(v) == w


class TestWord:
    def test_matrix_applies_left_to_right(self):
        r1, r2 = HYP_ROOTS[0], HYP_ROOTS[-1]
        w = ReflectionWord.of(HYP, [r1, r2])
        v = (2, 1, 0, 1)
        assert w.apply(v) == reflect(r2, reflect(r1, v))
        assert len(w) == 2 and w.to_json()["roots"] == [list(r1.vector), list(r2.vector)]


class TestChamber:
    def test_u_example(self):
        res = chamber_reduce((2, 1), [Root(hyperbolic_plane(), (1, -1))], u_cone())
        assert res.omega == (1, 2)
        assert len(res.word) == 1
        assert res.violated_history == (1, 0)

    def test_already_reduced(self):
        res = chamber_reduce((1, 2), [Root(hyperbolic_plane(), (1, -1))], u_cone())
        assert res.omega == (1, 2) and len(res.word) == 0

    def test_no_roots(self):
        res = chamber_reduce((5, 1), [], u_cone())
        assert res.omega == (5, 1) and len(res.word) == 0

    def test_wrong_cone(self):
        with pytest.raises(NotInCone):
            chamber_reduce((-2, -1), [Root(hyperbolic_plane(), (1, -1))], u_cone())

    def test_step_budget(self):
        with pytest.raises(StepBudgetExhausted) as info:
            chamber_reduce((2, 1), [Root(hyperbolic_plane(), (1, -1))], u_cone(), max_steps=0)
        assert info.value.partial_vector == (2, 1)
        assert len(info.value.partial_word) == 0

    def test_period_cone_requires_orthogonality(self, diag4):
        plane = make_period(diag4, unit(4, 0), unit(4, 1))
        cone = PositiveConeRef(diag4, plane, [0, 0, 2, 1])
        with pytest.raises(NotInCone):
            chamber_reduce((1, 0, 2, 1), [], cone)

    @given(st.lists(st.integers(-4, 4), min_size=2, max_size=2), st.integers(1, 6), st.integers(0, 6))
    def test_postconditions(self, tail, x, y):
        # no root wall passes through this reference vector
        ref = (3, 4, 1, 1)
        omega = (x + 6, y + 6, *tail)
        assume(HYP.norm(omega) > 0)
        cone = PositiveConeRef(HYP, None, ref)
        res = chamber_reduce(omega, HYP_ROOTS, cone)
        assert HYP.norm(res.omega) == HYP.norm(omega)
        assert res.word.apply(omega) == res.omega
        for d in orient_roots(HYP_ROOTS, ref):
            assert HYP.pair(res.omega, d) >= 0
        assert is_isometry(HYP, res.word.matrix).ok
        assert res.violated_history[-1] == 0


@pytest.fixture(scope="module")
def e8_point():
    # generic inside 3U, so the Picard lattice is exactly the E8 summand
    lat = direct_sum(hyperbolic_sum(3), e8_negative())
    p, _ = random_generic_period(hyperbolic_sum(3), radical_field(7), 3)
    pad = [0] * 8
    return make_period(lat, list(p.a.coords) + pad, list(p.b.coords) + pad)


class TestPicardRoots:

    def test_e8_picard(self, e8_point):
        roots = roots_of_picard(e8_point, None)
        assert len(roots) == 120
        assert all(r.vector[:6] == (0,) * 6 for r in roots)

    def test_box_against_brute_force(self, e8_point):
        from hktorelli.period import picard_lattice

        sub = picard_lattice(e8_point)
        boxed = roots_of_picard(e8_point, 1, method="box")
        assert len(boxed) == brute_norm_classes(sub.gram(), -2, 1)
        every = {r.vector for r in roots_of_picard(e8_point, None)}
        assert {r.vector for r in boxed} <= every

    def test_negative_four_has_no_roots(self):
        lat = direct_sum(hyperbolic_sum(3), rank_one(-4))
        p, _ = random_generic_period(hyperbolic_sum(3), radical_field(7), 3)
        q = make_period(lat, list(p.a.coords) + [0], list(p.b.coords) + [0])
        assert roots_of_picard(q, None) == []

    def test_generic_period(self, k3):
        p, _ = random_generic_period(k3, radical_field(11), 1)
        assert roots_of_picard(p, 3) == []


def _gen_isometries():
    lat = hyperbolic_sum(3)
    n = lat.rank
    swap = [[0] * n for _ in range(n)]
    for i in range(n):
        swap[i][i ^ 1] = 1
    neg_first = [[(-1 if i < 2 else 1) * int(i == j) for j in range(n)] for i in range(n)]
    cycle = [[int(j == (i + 2) % n) for j in range(n)] for i in range(n)]
    return lat, {
        "swap": LatticeIsometry(lat, swap),
        "neg": LatticeIsometry(lat, neg_first),
        "cycle": LatticeIsometry(lat, cycle),
    }


class TestOrientation:
    def test_identity_and_minus_identity(self, k3):
        assert orientation_class(LatticeIsometry.identity(k3)) == 1
        assert orientation_class(LatticeIsometry.minus_identity(k3)) == -1

    def test_reflections_preserve_orientation(self, k3):
        delta = Root(k3, [0, 0, 0, 0, 1, -1] + [0] * 16)
        assert orientation_class(delta.isometry()) == 1

    def test_generators(self):
        _, gens = _gen_isometries()
        # swapping the two isotropic vectors of each U fixes the positive frame
        assert orientation_class(gens["swap"]) == 1
        assert orientation_class(gens["neg"]) == -1
        assert orientation_class(gens["cycle"]) == 1

    @given(st.lists(st.sampled_from(["swap", "neg", "cycle"]), min_size=1, max_size=5),
           st.lists(st.sampled_from(["swap", "neg", "cycle"]), min_size=1, max_size=5))
    def test_homomorphism(self, w1, w2):
        lat, gens = _gen_isometries()
        a = b = LatticeIsometry.identity(lat)
        for g in w1:
            a = a @ gens[g]
        for g in w2:
            b = b @ gens[g]
        assert orientation_class(a @ b) == orientation_class(a) * orientation_class(b)
        assert orientation_class(a) == (-1) ** w1.count("neg")

    @given(st.sampled_from(["swap", "neg", "cycle"]), st.integers(0, 1000))
    def test_frame_independence(self, g, seed):
        lat, gens = _gen_isometries()
        rng = random.Random(seed)
        ks = [rng.randint(1, 4) for _ in range(3)]
        # (1, k) has norm 2k > 0 and the three blocks are orthogonal
        frame = [[0] * 6 for _ in range(3)]
        for i, k in enumerate(ks):
            frame[i][2 * i], frame[i][2 * i + 1] = 1, k
        assert orientation_class(gens[g], frame) == orientation_class(gens[g])

    def test_definite_lattice_has_no_frame(self):
        with pytest.raises(NoPositiveThreeSpace):
            orientation_class(LatticeIsometry.identity(make_catalog("u")))
