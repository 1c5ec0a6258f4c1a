import random
from fractions import Fraction
from math import comb

import pytest

from lagwronski.errors import GradeError, PreconditionError, SingularMatrixError
from lagwronski.exact import Matrix, rank
from lagwronski.exterior import ExteriorTensor, Subspace, plucker, wedge
from lagwronski.symplectic import SymplecticSpace, random_lagrangian, random_symplectic


def vec(S, **coords):
    """Vector from Darboux labels like e1=1, f2=-1."""
    v = [0] * S.n
    for label, c in coords.items():
        i = int(label[1:])
        v[S.e(i) if label[0] == "e" else S.f(i)] = c
    return v


def ef(S, *labels):
    """Wedge of Darboux basis vectors, e.g. ef(S, 'e1', 'f1')."""
    out = ExteriorTensor.scalar(S.n, 1)
    for lab in labels:
        out = wedge(out, ExteriorTensor.vector(vec(S, **{lab: 1})))
    return out


class TestDarboux:
    def test_m1(self):
        S = SymplecticSpace.darboux(1)
        assert S.omega == Matrix([[0, 1], [-1, 0]])
        assert S.theta == ef(S, "e1", "f1")
        assert S.volume.scale == 1

    def test_m2_volume_sign(self):
        S = SymplecticSpace.darboux(2)
        assert S.volume.scale == -1
        assert S.theta == ef(S, "e1", "f1") + ef(S, "e2", "f2")

    def test_psi_action(self):
        S = SymplecticSpace.darboux(3)
        for i in (1, 2, 3):
            # psi(e_i^*) = -f_i, psi(f_i^*) = e_i
            assert S.psi.column(S.e(i)) == tuple(Fraction(-x) for x in vec(S, **{f"f{i}": 1}))
            assert S.psi.column(S.f(i)) == tuple(Fraction(x) for x in vec(S, **{f"e{i}": 1}))
        assert len(S.theta) == 3 and all(c == 1 for _, c in S.theta.items())

    def test_validation(self):
        with pytest.raises(PreconditionError):
            SymplecticSpace(Matrix([[1, 0], [0, 1]]))
        with pytest.raises(SingularMatrixError):
            SymplecticSpace(Matrix.zeros(2, 2))
        with pytest.raises(PreconditionError):
            SymplecticSpace(Matrix.zeros(3, 3))

    def test_from_psi_round_trip(self):
        S = SymplecticSpace.darboux(2)
        assert SymplecticSpace.from_psi(S.psi) == S


class TestSubspaces:
    def test_annihilator_examples(self):
        S = SymplecticSpace.darboux(2)
        L = Subspace.span([vec(S, e1=1), vec(S, e2=1)])
        assert S.annihilator(L) == L
        H = Subspace.span([vec(S, e1=1)])
        assert S.annihilator(H) == Subspace.span([vec(S, e1=1), vec(S, e2=1), vec(S, f2=1)])

    def test_double_annihilator(self):
        rng = random.Random(1)
        for m in (1, 2, 3):
            S = SymplecticSpace.darboux(m)
            for _ in range(10):
                k = rng.randint(1, S.n - 1)
                H = Subspace(Matrix([[rng.randint(-3, 3) for _ in range(k)] for _ in range(S.n)], k))
                A = S.annihilator(H)
                assert A.dim == S.n - H.dim
                assert S.annihilator(A) == H

    def test_isotropic_examples(self):
        S = SymplecticSpace.darboux(2)
        assert S.is_lagrangian(Subspace.span([vec(S, e1=1), vec(S, e2=1)]))
        assert not S.is_isotropic(Subspace.span([vec(S, e1=1), vec(S, f1=1)]))
        u, w = vec(S, e1=1, f2=1), vec(S, e2=1, f1=-1)
        # oracle: omega(u, w) computed by hand from the Darboux pairing
        hand = u[S.e(1)] * w[S.f(1)] - u[S.f(1)] * w[S.e(1)] + u[S.e(2)] * w[S.f(2)] - u[S.f(2)] * w[S.e(2)]
        assert S.form(u, w) == hand == -2
        assert not S.is_isotropic(Subspace.span([u, w]))
        w2 = vec(S, e2=1, f1=1)
        assert S.form(u, w2) == 0 and S.is_lagrangian(Subspace.span([u, w2]))

    def test_random_lagrangian(self):
        rng = random.Random(2)
        for m in (1, 2, 3):
            S = SymplecticSpace.darboux(m)
            for _ in range(5):
                L = random_lagrangian(S, rng)
                assert S.is_lagrangian(L) and S.annihilator(L) == L

    def test_random_symplectic(self):
        rng = random.Random(3)
        S = SymplecticSpace.darboux(2)
        g = random_symplectic(S, rng)
        assert g.T @ S.omega @ g == S.omega


class TestPrimitive:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_dimensions(self, m):
        S = SymplecticSpace.darboux(m)
        for k in range(m + 1):
            basis = S.primitive_subspace(k)
            expect = comb(2 * m, k) - (comb(2 * m, k - 2) if k >= 2 else 0)
            assert len(basis) == expect
            for t in basis[:10]:
                if k >= 2:
                    assert S.contract(t).is_zero()

    @pytest.mark.parametrize("m", [2, 3])
    def test_spanned_by_isotropic_planes(self, m):
        S = SymplecticSpace.darboux(m)
        rng = random.Random(m)
        H = S.primitive_subspace(m)
        vecs = [plucker(random_lagrangian(S, rng)).to_vector() for _ in range(3 * len(H))]
        span = Subspace.span(vecs, comb(2 * m, m))
        assert span.dim == len(H)
        assert span == Subspace.span([t.to_vector() for t in H], comb(2 * m, m))

    def test_contraction_example(self):
        S = SymplecticSpace.darboux(2)
        assert S.contract(S.theta) == ExteriorTensor.scalar(4, 2)
        assert S.contract(ef(S, "e1", "e2")).is_zero()
        with pytest.raises(GradeError):
            S.contract(ef(S, "e1"))

    def test_out_of_range(self):
        with pytest.raises(GradeError):
            SymplecticSpace.darboux(2).primitive_subspace(3)


class TestDecomposition:
    def test_isotropic_is_pure(self):
        S = SymplecticSpace.darboux(2)
        parts = S.decompose(ef(S, "e1", "e2"))
        assert parts[0] == ef(S, "e1", "e2") and parts[1].is_zero()

    def test_e1f1(self):
        S = SymplecticSpace.darboux(2)
        parts = S.decompose(ef(S, "e1", "f1"))
        half = Fraction(1, 2)
        assert parts[1] == S.theta * half
        assert parts[0] == (ef(S, "e1", "f1") - ef(S, "e2", "f2")) * half
        assert S.contract(parts[0]).is_zero()

    def test_theta_is_pure(self):
        S = SymplecticSpace.darboux(2)
        parts = S.decompose(S.theta)
        assert parts[0].is_zero() and parts[1] == S.theta

    def test_random_reassembles(self):
        rng = random.Random(4)
        S = SymplecticSpace.darboux(3)
        for k in range(4):
            v = ExteriorTensor.from_vector(6, k, [rng.randint(-3, 3) for _ in range(comb(6, k))])
            parts = S.decompose(v)
            total = ExteriorTensor.zero(6, k)
            for t in parts.values():
                total = total + t
            assert total == v

    def test_projections_idempotent(self):
        D = SymplecticSpace.darboux(2).decomposition(2)
        for P in D.projections.values():
            assert P @ P == P


class TestInvolution:
    def test_examples_m2(self):
        S = SymplecticSpace.darboux(2)
        assert S.lagrangian_involution(ef(S, "e1", "e2")) == ef(S, "e1", "e2")
        assert S.lagrangian_involution(ef(S, "e1", "f1")) == -ef(S, "e2", "f2")
        assert S.lagrangian_involution(S.theta) == -S.theta

    @pytest.mark.parametrize("m,plus,minus", [(1, 2, 0), (2, 5, 1), (3, 14, 6), (4, 43, 27)])
    def test_eigenspace_dims(self, m, plus, minus):
        P, M = SymplecticSpace.darboux(m).involution_eigenspaces
        assert (P.dim, M.dim) == (plus, minus)

    def test_minus_is_odd_summands(self):
        S = SymplecticSpace.darboux(3)
        _, minus = S.involution_eigenspaces
        odd = [t.to_vector() for p, b in S.decomposition(3).summands.items() if p % 2 for t in b]
        assert minus == Subspace.span(odd, 20)

    def test_sends_plane_to_annihilator(self):
        rng = random.Random(5)
        for m in (2, 3):
            S = SymplecticSpace.darboux(m)
            for _ in range(5):
                H = Subspace(Matrix([[rng.randint(-3, 3) for _ in range(m)] for _ in range(S.n)], m))
                if H.dim < m:
                    continue
                assert S.lagrangian_involution(plucker(H)).canonical() == plucker(S.annihilator(H))

    def test_non_standard_form(self):
        S0 = SymplecticSpace.darboux(2)
        g = Matrix([[1, 2, 0, 1], [0, 1, 3, 0], [2, 0, 1, 1], [1, 1, 0, 2]])
        S = SymplecticSpace(g.T @ S0.omega @ g)
        L = S.involution_matrix
        assert L @ L == Matrix.identity(6)
        assert rank(L + Matrix.identity(6)) == 5
        assert S.lagrangian_involution(S.theta) == -S.theta

    def test_wrong_grade(self):
        S = SymplecticSpace.darboux(2)
        with pytest.raises(GradeError):
            S.lagrangian_involution(ef(S, "e1"))

    def test_json(self):
        assert SymplecticSpace.darboux(2).to_json() == {"m": 2}
