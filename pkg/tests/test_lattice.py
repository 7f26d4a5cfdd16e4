from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hktorelli.errors import DimensionMismatch, EnumerationTooLarge, NotAnIsometry
from hktorelli.lattice import (
    LatticeIsometry,
    QuadLattice,
    Sublattice,
    constraint_rows,
    direct_sum,
    e8_negative,
    enumerate_norm_vectors,
    hyperbolic_plane,
    integral_kernel,
    is_isometry,
    make_catalog,
    rank_one,
)
from hktorelli.scalar import FVector, quadratic_field
from oracles import brute_norm_classes, in_integer_span

K2 = quadratic_field(2)


class TestCatalog:
    @pytest.mark.parametrize(
        "kind, rank, sig",
        [
            ("k3", 22, (3, 19)),
            ("u", 2, (1, 1)),
            ("e8neg", 8, (0, 8)),
            ("hilb:2", 23, (3, 20)),
            ("kummer:3", 7, (3, 4)),
            ("rank1:-2", 1, (0, 1)),
            ("3u", 6, (3, 3)),
        ],
    )
    def test_rank_and_signature(self, kind, rank, sig):
        lat = make_catalog(kind)
        assert lat.rank == rank
        assert lat.signature() == sig

    def test_k3_is_even_unimodular(self, k3):
        assert k3.is_even
        assert abs(k3.determinant) == 1

    def test_e8_is_unimodular(self):
        assert e8_negative().determinant == 1

    def test_hilb_discriminant(self):
        # K3 (+) <-2(n-1)>: |det| = 2(n-1)
        assert abs(make_catalog("hilb:3").determinant) == 4

    def test_unknown_kind(self):
        with pytest.raises((KeyError, ValueError)):
            make_catalog("k4")

    def test_json_round_trip(self, k3):
        assert QuadLattice.from_json(k3.to_json()) == k3
        assert QuadLattice.from_json("u") == hyperbolic_plane()

    def test_positive_frame_is_orthogonal_and_positive(self, k3):
        frame = k3.positive_frame()
        g = k3.gram_of(frame)
        assert [g[i][i] > 0 for i in range(3)] == [True] * 3
        assert all(g[i][j] == 0 for i in range(3) for j in range(3) if i != j)


class TestKernel:
    def test_rational_plane_in_k3(self, k3):
        a = [1, 1] + [0] * 20
        b = [0, 0, 1, 1] + [0] * 18
        assert integral_kernel(k3, [a, b]).rank == 20

    def test_irrational_constraint_expands(self):
        u = hyperbolic_plane()
        t = K2.gen()
        w = FVector([1, t], K2)
        # q(alpha, w) = alpha_1 + sqrt2 alpha_0 = 0 forces alpha = 0
        assert constraint_rows(u, [w]) == [[0, 1], [1, 0]]
        assert integral_kernel(u, [w]).rank == 0

    def test_length_check(self, k3):
        with pytest.raises(DimensionMismatch):
            integral_kernel(k3, [[1, 2]])

    def test_sublattice_membership(self):
        u = hyperbolic_plane()
        sub = Sublattice.from_generators(u, [[2, 0], [0, 4], [2, 4]])
        assert sub.contains([4, 8]) and not sub.contains([1, 0])


class TestIsometries:
    def test_shear_is_not_an_isometry(self):
        u = hyperbolic_plane()
        check = is_isometry(u, [[1, 1], [0, 1]])
        assert not check.ok
        with pytest.raises(NotAnIsometry):
            LatticeIsometry(u, [[1, 1], [0, 1]])

    def test_swap_in_u(self):
        u = hyperbolic_plane()
        phi = LatticeIsometry(u, [[0, 1], [1, 0]])
        assert phi.apply((2, 1)) == (1, 2)
        assert (phi @ phi).matrix == LatticeIsometry.identity(u).matrix
        assert phi.inverse().matrix == phi.matrix

    @given(st.lists(st.sampled_from(["swap", "neg", "swap2"]), min_size=1, max_size=6))
    def test_composition_closes(self, word):
        lat = direct_sum(hyperbolic_plane(), hyperbolic_plane())
        gens = {
            "swap": [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
            "neg": [[-1 if i == j else 0 for j in range(4)] for i in range(4)],
            "swap2": [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
        }
        phi = LatticeIsometry.identity(lat)
        for g in word:
            phi = phi @ LatticeIsometry(lat, gens[g])
        assert (phi @ phi.inverse()).matrix == LatticeIsometry.identity(lat).matrix


class TestEnumeration:
    def test_u_roots(self):
        u = hyperbolic_plane()
        assert enumerate_norm_vectors(Sublattice.full(u), -2, 3) == [(1, -1)]

    def test_e8_root_count(self):
        e8 = e8_negative()
        assert len(enumerate_norm_vectors(Sublattice.full(e8), -2, None)) == 120

    def test_e8_box_matches_brute_force(self):
        e8 = e8_negative()
        full = Sublattice.full(e8)
        box = enumerate_norm_vectors(full, -2, 2, method="box")
        definite = enumerate_norm_vectors(full, -2, 2, method="definite")
        assert box == definite
        assert len(box) == brute_norm_classes([list(r) for r in e8.gram], -2, 2)

    def test_rank_one_has_no_roots(self):
        assert enumerate_norm_vectors(Sublattice.full(rank_one(-4)), -2, 5) == []

    def test_candidate_cap(self, k3):
        with pytest.raises(EnumerationTooLarge):
            enumerate_norm_vectors(Sublattice.full(k3), -2, 3, method="box")

    @given(st.integers(-6, -1), st.integers(1, 3))
    def test_indefinite_box_against_brute_force(self, target, bound):
        lat = direct_sum(hyperbolic_plane(), rank_one(-2))
        found = enumerate_norm_vectors(Sublattice.full(lat), target, bound)
        assert len(found) == brute_norm_classes([list(r) for r in lat.gram], target, bound)
        for v in found:
            assert lat.norm(v) == target
            assert next(x for x in v if x) > 0

    def test_results_are_in_ambient_coordinates(self):
        u = hyperbolic_plane()
        sub = Sublattice.from_generators(u, [[1, -1]])
        found = enumerate_norm_vectors(sub, -2, 2)
        assert found == [(1, -1)]
        assert all(in_integer_span([list(r) for r in sub.basis], v) for v in found)
