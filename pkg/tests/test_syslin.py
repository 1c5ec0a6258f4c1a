import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagwronski.errors import DimensionMismatch, PreconditionError, SingularMatrixError
from lagwronski.exact import Matrix, Poly, RatFun, charpoly, det
from lagwronski.exterior import Subspace, is_decomposable
from lagwronski.projection import center_meets_grassmannian
from lagwronski.symplectic import SymplecticSpace
from lagwronski.syslin import (
    StateSpace,
    curves_equivalent_by,
    demo_system,
    even_fiber_witness,
    feedback_plane,
    feedback_tensor,
    find_symplectic_structure,
    gain_from_plane,
    generic_gain,
    hermann_martin,
    hermann_martin_equivalence,
    hermann_martin_matrix,
    pairing_polynomial,
    pole_placement_projection,
    pole_polynomial,
    pole_polynomial_via_transfer,
    random_gain,
    random_system,
    state_feedback_transform,
    transfer_function,
)

from oracles import sym_charpoly

s = Poly.t()
one = Poly([1])


def scalar_system():
    return StateSpace(Matrix([[0]]), Matrix([[1]]), Matrix([[1]]))


def double_integrator_free():
    return StateSpace(Matrix.zeros(2, 2), Matrix.identity(2), Matrix.identity(2))


class TestStateSpace:
    def test_dimension_checks(self):
        with pytest.raises(DimensionMismatch):
            StateSpace(Matrix.identity(2), Matrix.identity(3), Matrix.identity(2))
        with pytest.raises(DimensionMismatch):
            StateSpace(Matrix.identity(2), Matrix.identity(2), Matrix.identity(3))

    def test_minimality(self):
        assert scalar_system().is_minimal()
        assert not StateSpace(Matrix.identity(2), Matrix([[1], [1]]), Matrix([[1, 1]])).is_minimal()


class TestTransferFunction:
    def test_scalar(self):
        G = transfer_function(scalar_system())
        assert G.entries[0][0] == RatFun(one, s)
        assert G.is_strictly_proper()

    def test_zero_input(self):
        G = transfer_function(StateSpace(Matrix.identity(2), Matrix.zeros(2, 1), Matrix([[1, 1]])))
        assert G.entries[0][0].is_zero()

    def test_identity_block(self):
        G = transfer_function(double_integrator_free())
        inv = RatFun(one, s)
        assert G.is_symmetric()
        assert [[G.entries[i][j] for j in range(2)] for i in range(2)] == [[inv, RatFun(Poly())], [RatFun(Poly()), inv]]

    def test_evaluation(self):
        sysm = demo_system(0)
        G = transfer_function(sysm)
        s0 = Fraction(7, 3)
        expect = sysm.C @ (Matrix.identity(4) * s0 - sysm.A).inverse() @ sysm.B
        assert G(s0) == expect


class TestPoles:
    def test_examples(self):
        k = Fraction(5, 2)
        assert pole_polynomial(scalar_system(), Matrix([[k]])) == s - k
        sysm = demo_system(1)
        assert pole_polynomial(sysm, Matrix.zeros(2, 2)) == charpoly(sysm.A)

    @given(st.integers(0, 10**6))
    @settings(max_examples=15)
    def test_oracles_agree(self, seed):
        rng = random.Random(seed)
        N, m, p = rng.randint(1, 4), rng.randint(1, 2), rng.randint(1, 2)
        sysm = random_system(rng, N, m, p)
        K = random_gain(m, p, rng)
        P = pole_polynomial(sysm, K)
        assert P == pole_polynomial_via_transfer(sysm, K)
        assert P == sym_charpoly(sysm.A + sysm.B @ K @ sysm.C)
        assert P.degree == N and P.lc == 1

    def test_bad_gain(self):
        with pytest.raises(DimensionMismatch):
            pole_polynomial(scalar_system(), Matrix.zeros(2, 1))


class TestHermannMartin:
    def test_scalar(self):
        hm = hermann_martin(scalar_system())
        assert hm.mcmillan_degree == 1
        assert hm.curve.tensor.to_vector() == (s, one)

    def test_identity_block(self):
        hm = hermann_martin(double_integrator_free())
        assert hm.mcmillan_degree == 2
        # minors of [s I; I] after clearing the denominator s^2
        assert dict(hm.curve.tensor.items()) == {(0, 1): s * s, (0, 3): s, (1, 2): -s, (2, 3): one}

    def test_constant_transfer_degenerates(self):
        sysm = StateSpace(Matrix.identity(2), Matrix.zeros(2, 1), Matrix.zeros(1, 2))
        assert hermann_martin(sysm).mcmillan_degree == 0

    @given(st.integers(0, 10**6))
    @settings(max_examples=10)
    def test_degree_is_state_dimension(self, seed):
        rng = random.Random(seed)
        N, m, p = rng.randint(1, 4), rng.randint(1, 2), rng.randint(1, 2)
        sysm = random_system(rng, N, m, p)
        hm = hermann_martin(sysm)
        assert hm.mcmillan_degree == N
        for _ in range(10):
            s0 = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
            v = hm.curve.at(s0)
            if v:
                assert is_decomposable(v)
        X = hermann_martin_matrix(sysm)
        assert X.shape == (m + p, m)


class TestFeedback:
    def test_planes(self):
        assert feedback_plane(Matrix.zeros(2, 2)) == Subspace.coordinate(4, [2, 3])
        assert feedback_plane(Matrix([[3]])) == Subspace.span([[3, 1]])
        K = Matrix([[2, 3], [5, 7]])
        v = feedback_tensor(K)
        assert v[(0, 1)] == det(K) and v[(2, 3)] == 1
        assert {v[(0, 2)], v[(0, 3)], v[(1, 2)], v[(1, 3)]} == {-3, 2, -7, 5}

    def test_gain_round_trip(self):
        rng = random.Random(0)
        for _ in range(10):
            K = random_gain(2, 3, rng)
            assert gain_from_plane(feedback_plane(K), 2) == K
        assert gain_from_plane(Subspace.coordinate(4, [0, 1]), 2) is None

    def test_scalar_pairing(self):
        hm = hermann_martin(scalar_system())
        k = Fraction(4)
        assert pairing_polynomial(hm.curve.tensor, feedback_tensor(Matrix([[k]]))) == s - k

    def test_projection_scalar(self):
        P, cert = pole_placement_projection(scalar_system(), trials=5)
        assert cert.constant == 1 and P.center.dim == 0

    def test_projection_demo(self):
        sysm = demo_system(0)
        P, cert = pole_placement_projection(sysm, trials=20, seed=3)
        assert P.quotient_dim == 5 and P.center.dim == 1
        assert center_meets_grassmannian(P.center).kind == "disjoint"
        omega = find_symplectic_structure(sysm)
        assert P.center.contains(SymplecticSpace(omega).theta_multiples)


class TestSymplecticStructure:
    def test_identity_block(self):
        sysm = double_integrator_free()
        omega = find_symplectic_structure(sysm)
        assert omega is not None and det(omega) and omega.T == -omega
        S = SymplecticSpace(omega)
        plus, _ = S.involution_eigenspaces
        tensor = hermann_martin(sysm).curve.tensor
        for d in range(3):
            coeffs = [(c if isinstance(c, Poly) else Poly([c])).coeff(d) for c in tensor.to_vector()]
            assert plus.contains(coeffs)

    def test_siso(self):
        rng = random.Random(1)
        omega = find_symplectic_structure(random_system(rng, 3, 1, 1))
        assert omega is not None and omega.shape == (2, 2)

    def test_symmetric_demo(self):
        for seed in range(3):
            assert find_symplectic_structure(demo_system(seed)) is not None

    def test_nonsymmetric_small_still_found(self):
        # with N = 4 and m = 2 the coefficient span is a proper subspace, so
        # a nondegenerate skew form can exist without symmetry of G
        rng = random.Random(2)
        sysm = random_system(rng, 4, 2, 2)
        assert not transfer_function(sysm).is_symmetric()
        assert find_symplectic_structure(sysm) is not None

    def test_nonsymmetric_none(self):
        rng = random.Random(3)
        for _ in range(3):
            sysm = random_system(rng, 5, 2, 2)
            assert not transfer_function(sysm).is_symmetric()
            assert find_symplectic_structure(sysm) is None

    def test_requires_square(self):
        with pytest.raises(PreconditionError):
            find_symplectic_structure(random_system(random.Random(0), 2, 1, 2))


class TestEquivalence:
    def test_identity(self):
        sysm = demo_system(0)
        I2, I4 = Matrix.identity(2), Matrix.identity(4)
        assert state_feedback_transform(sysm, I4, I2, I2, Matrix.zeros(2, 2)) == sysm

    def test_similarity_keeps_transfer(self):
        sysm = demo_system(0)
        L = Matrix([[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, 0], [3, 0, 0, 1]])
        I2 = Matrix.identity(2)
        s2 = state_feedback_transform(sysm, L, I2, I2, Matrix.zeros(2, 2))
        assert transfer_function(s2) == transfer_function(sysm)
        assert hermann_martin(s2).curve.tensor == hermann_martin(sysm).curve.tensor

    def test_full_transform(self):
        sysm = demo_system(0)
        L = Matrix([[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, 0], [3, 0, 0, 1]])
        W = Matrix([[2, 1], [1, 1]])
        T = Matrix([[1, 0], [3, 1]])
        Q = Matrix([[1, -2], [0, 4]])
        s2 = state_feedback_transform(sysm, L, W, T, Q)
        g = hermann_martin_equivalence(sysm, s2)
        assert g is not None and det(g)
        assert curves_equivalent_by(g, sysm, s2)
        assert not curves_equivalent_by(Matrix.identity(4), sysm, s2)

    def test_singular(self):
        sysm = demo_system(0)
        with pytest.raises(SingularMatrixError):
            state_feedback_transform(sysm, Matrix.zeros(4, 4), Matrix.identity(2), Matrix.identity(2), Matrix.zeros(2, 2))


class TestEvenFiber:
    def test_demo_partners(self):
        sysm = demo_system(0)
        omega = find_symplectic_structure(sysm)
        rng = random.Random(4)
        for _ in range(5):
            K = generic_gain(2, 2, rng, omega)
            w = even_fiber_witness(sysm, K, omega)
            assert w.transverse and w.distinct and w.same_poles

    def test_symmetric_gain_is_fixed(self):
        # omega = [[0, I], [-I, 0]] here, so [K; I] is Lagrangian iff K is symmetric
        sysm = demo_system(0)
        omega = find_symplectic_structure(sysm)
        assert omega == Matrix([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
        rng = random.Random(5)
        for _ in range(5):
            a, b, c = (Fraction(rng.randint(-5, 5)) for _ in range(3))
            K = Matrix([[a, b], [b, c]])
            assert SymplecticSpace(omega).is_lagrangian(feedback_plane(K))
            w = even_fiber_witness(sysm, K, omega)
            assert w.K_partner == K and not w.distinct and w.same_poles

    def test_partner_is_transpose(self):
        sysm = demo_system(0)
        omega = find_symplectic_structure(sysm)
        K = Matrix([[1, 2], [-3, 4]])
        w = even_fiber_witness(sysm, K, omega)
        assert w.K_partner == K.T
        assert pole_polynomial(sysm, K.T) == pole_polynomial(sysm, K)

    def test_scalar(self):
        w = even_fiber_witness(scalar_system(), Matrix([[3]]))
        assert w.K_partner == Matrix([[3]]) and w.same_poles

    def test_missing_structure(self):
        rng = random.Random(3)
        sysm = random_system(rng, 5, 2, 2)
        with pytest.raises(PreconditionError):
            even_fiber_witness(sysm, Matrix.zeros(2, 2))
