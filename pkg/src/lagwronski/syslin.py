"""Linear systems, output feedback and the pole placement map.

For ``x' = Ax + Bu, y = Cx`` with m inputs and p outputs, the transfer
function is ``G = C adj(sI - A) B / det(sI - A)``.  The Hermann-Martin curve
is ``s -> colspan[I_m; G(s)]`` and feedback ``u = Ky`` corresponds to the
p-plane ``colspan[K; I_p]``; the pole polynomial is a linear function of the
Plücker point of that plane.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, PreconditionError, SingularMatrixError
from .exact import Matrix, Poly, RatFun, charpoly, det, kernel, rank, resolvent_adjugate
from .exterior import (
    ExteriorTensor,
    Subspace,
    exterior_power_apply,
    factor_decomposable,
    minors_tensor,
    multi_indices,
    plucker,
    wedge,
)
from .diffop import TensorCurve, content_normalize
from .projection import Center, ProjectionMap, center_meets_grassmannian
from .symplectic import SymplecticSpace


def _poly_matmul(X: Matrix, Y: Matrix) -> Matrix:
    return Matrix(
        [[sum((X[i, k] * Y[k, j] for k in range(X.ncols)), Poly()) for j in range(Y.ncols)] for i in range(X.nrows)],
        Y.ncols,
    )


def _as_poly(M: Matrix) -> Matrix:
    return M.map(lambda x: x if isinstance(x, Poly) else Poly([x]))


@dataclass(frozen=True)
class StateSpace:
    A: Matrix
    B: Matrix
    C: Matrix

    def __post_init__(self):
        N = self.A.nrows
        if not self.A.is_square():
            raise DimensionMismatch("A must be square")
        if self.B.nrows != N or self.C.ncols != N:
            raise DimensionMismatch(f"B needs {N} rows and C needs {N} columns")

    @property
    def N(self) -> int:
        return self.A.nrows

    @property
    def m(self) -> int:
        """Number of inputs."""
        return self.B.ncols

    @property
    def p(self) -> int:
        return self.C.nrows

    def controllability_matrix(self) -> Matrix:
        blocks, X = [], self.B
        for _ in range(self.N):
            blocks.append(X)
            X = self.A @ X
        out = blocks[0]
        for b in blocks[1:]:
            out = out.hstack(b)
        return out

    def observability_matrix(self) -> Matrix:
        return StateSpace(self.A.T, self.C.T, self.B.T).controllability_matrix().T

    def is_minimal(self) -> bool:
        return rank(self.controllability_matrix()) == self.N and rank(self.observability_matrix()) == self.N

    def numerator(self) -> Matrix:
        """``C adj(sI - A) B`` as a matrix of polynomials."""
        return _poly_matmul(_poly_matmul(_as_poly(self.C), resolvent_adjugate(self.A)), _as_poly(self.B))


@dataclass(frozen=True)
class TransferFunction:
    entries: Matrix  # of RatFun
    den: Poly

    def is_symmetric(self) -> bool:
        return self.entries == self.entries.T

    def is_strictly_proper(self) -> bool:
        return all(g.is_strictly_proper() for r in self.entries.rows for g in r)

    def __call__(self, s0) -> Matrix:
        return self.entries.map(lambda g: g(s0))


def transfer_function(sys: StateSpace) -> TransferFunction:
    d = charpoly(sys.A)
    N = sys.numerator()
    return TransferFunction(N.map(lambda q: RatFun(q, d)), d)


def _check_gain(sys: StateSpace, K: Matrix):
    if K.shape != (sys.m, sys.p):
        raise DimensionMismatch(f"feedback gain must be {sys.m} x {sys.p}")


def pole_polynomial(sys: StateSpace, K: Matrix) -> Poly:
    """``det(sI - (A + BKC))``."""
    _check_gain(sys, K)
    return charpoly(sys.A + sys.B @ K @ sys.C)


def pole_polynomial_via_transfer(sys: StateSpace, K: Matrix) -> Poly:
    """Independent route: ``det(sI - A) det(I_m - K G(s))``."""
    _check_gain(sys, K)
    G = transfer_function(sys).entries
    m = sys.m
    M = Matrix(
        [[RatFun(Poly([int(i == j)])) - sum((RatFun(Poly([K[i, k]])) * G[k, j] for k in range(sys.p)), RatFun(Poly()))
          for j in range(m)] for i in range(m)],
        m,
    )
    r = det(M) * RatFun(charpoly(sys.A))
    if r.den != Poly([1]):
        raise AssertionError("Schur determinant route left a denominator")
    return r.num


# ---------------------------------------------------------------------------
# curves and planes


@dataclass(frozen=True)
class HermannMartinCurve:
    curve: TensorCurve
    mcmillan_degree: int

    def basis_matrix(self, sys: StateSpace) -> Matrix:
        return hermann_martin_matrix(sys)


def hermann_martin_matrix(sys: StateSpace) -> Matrix:
    """``[d(s) I_m; C adj(sI - A) B]``, a polynomial basis of the curve's planes."""
    d = charpoly(sys.A)
    top = Matrix([[d if i == j else Poly() for j in range(sys.m)] for i in range(sys.m)], sys.m)
    return top.vstack(sys.numerator())


def hermann_martin(sys: StateSpace) -> HermannMartinCurve:
    t, g = content_normalize(minors_tensor(hermann_martin_matrix(sys)))
    curve = TensorCurve(t, g)
    return HermannMartinCurve(curve, curve.degree)


def feedback_matrix(K: Matrix) -> Matrix:
    return K.vstack(Matrix.identity(K.ncols))


def feedback_plane(K: Matrix) -> Subspace:
    """``colspan[K; I_p]``."""
    return Subspace(feedback_matrix(K))


def feedback_tensor(K: Matrix) -> ExteriorTensor:
    """Raw minors of ``[K; I_p]``; the coefficient on the last p indices is 1."""
    return minors_tensor(feedback_matrix(K))


def gain_from_plane(H: Subspace, m: int) -> Matrix | None:
    """K with ``H = colspan[K; I]``, or None when H is not transverse to ``span{e_1..e_m}``."""
    B = H.basis
    p = B.ncols
    X = B.submatrix(range(m), range(p))
    Y = B.submatrix(range(m, m + p), range(p))
    if not det(Y):
        return None
    return X @ Y.inverse()


def pairing_polynomial(curve: ExteriorTensor, beta: ExteriorTensor) -> Poly:
    """``s -> Omega(gamma(s) ^ beta)`` for the unit volume form."""
    n = curve.dim
    top = tuple(range(n))
    total = Poly()
    for I, c in curve.items():
        for J, b in beta.items():
            w = wedge(ExteriorTensor(n, len(I), {I: 1}), ExteriorTensor(n, len(J), {J: 1}))
            if w:
                total = total + c * (w[top] * b)
    return total


@dataclass(frozen=True)
class PairingCertificate:
    """``pairing(K) = constant * P(K)`` was checked for the listed gains."""

    constant: Fraction
    gains: tuple[Matrix, ...]


def random_gain(m: int, p: int, rng: random.Random, size: int = 5) -> Matrix:
    return Matrix([[Fraction(rng.randint(-size, size), rng.randint(1, 3)) for _ in range(p)] for _ in range(m)], p)


def generic_gain(m: int, p: int, rng: random.Random, omega: Matrix | None = None) -> Matrix:
    """A random gain off the branch locus: its plane is not ω-Lagrangian."""
    while True:
        K = random_gain(m, p, rng)
        if omega is None or not SymplecticSpace(omega).is_lagrangian(feedback_plane(K)):
            return K


def pole_placement_projection(sys: StateSpace, trials: int = 20, seed: int = 0) -> tuple[ProjectionMap, PairingCertificate]:
    """The pole placement map as a projection on p-planes in ``Q^(m+p)``.

    Quotient coordinate k is the coefficient of ``s^k`` of the pairing
    polynomial.  The constant relating it to the pole polynomial is found
    at K = 0 and then checked on random gains.
    """
    m, p = sys.m, sys.p
    gamma = hermann_martin(sys).curve.tensor
    n = m + p
    cols = []
    for J in multi_indices(n, p):
        cols.append(pairing_polynomial(gamma, ExteriorTensor(n, p, {J: 1})))
    D = max(c.degree for c in cols)
    M = Matrix([[c.coeff(k) for c in cols] for k in range(D + 1)], len(cols))
    P = ProjectionMap(Center.from_subspace(n, p, Subspace(kernel(M))), M)

    zero = Matrix.zeros(m, p)
    q, r = divmod(pairing_polynomial(gamma, feedback_tensor(zero)), pole_polynomial(sys, zero))
    assert r.is_zero() and q.degree == 0, "pairing is not proportional to the pole polynomial"
    c = q.coeff(0)
    rng = random.Random(seed)
    gains = [random_gain(m, p, rng) for _ in range(trials)]
    for K in gains:
        assert pairing_polynomial(gamma, feedback_tensor(K)) == pole_polynomial(sys, K) * c, "pairing failure"
    return P, PairingCertificate(c, tuple(gains))


# ---------------------------------------------------------------------------
# symmetric structure


def _skew_from_params(n: int, x: Sequence) -> Matrix:
    M = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for a in range(n):
        for b in range(a + 1, n):
            M[a][b], M[b][a] = x[k], -x[k]
            k += 1
    return Matrix(M, n)


def find_symplectic_structure(sys: StateSpace, seed: int = 0) -> Matrix | None:
    """A nondegenerate skew ω making every plane of the curve isotropic.

    ``X(s)^T ω X(s) = 0`` for the polynomial basis X is linear in ω.
    """
    if sys.m != sys.p:
        raise PreconditionError("needs as many inputs as outputs")
    X = hermann_martin_matrix(sys)
    n = X.nrows
    params = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rows = []
    for i in range(X.ncols):
        for j in range(i + 1, X.ncols):
            # sum_{a<b} w_ab (X_ai X_bj - X_bi X_aj)
            polys = [X[a, i] * X[b, j] - X[b, i] * X[a, j] for a, b in params]
            for k in range(max(q.degree for q in polys) + 1):
                rows.append([q.coeff(k) for q in polys])
    Kb = kernel(Matrix(rows, len(params))) if rows else Matrix.identity(len(params))
    if Kb.ncols == 0:
        return None
    cands = [_skew_from_params(n, c) for c in Kb.columns()]
    rng = random.Random(seed)
    for _ in range(50):
        cands.append(_skew_from_params(n, [sum(rng.randint(-9, 9) * c[i] for c in Kb.columns()) for i in range(len(params))]))
    return next((w for w in cands if det(w)), None)


def state_feedback_transform(sys: StateSpace, L: Matrix, W: Matrix, T: Matrix, Q: Matrix) -> StateSpace:
    """``(L^-1 (A + B Q T^-1 C) L, L^-1 B W, T^-1 C L)``."""
    for name, X in (("L", L), ("W", W), ("T", T)):
        if not X.is_square() or not det(X):
            raise SingularMatrixError(f"{name} must be invertible")
    Li, Ti = L.inverse(), T.inverse()
    A = Li @ (sys.A + sys.B @ Q @ Ti @ sys.C) @ L
    return StateSpace(A, Li @ sys.B @ W, Ti @ sys.C @ L)


def hermann_martin_equivalence(s1: StateSpace, s2: StateSpace, seed: int = 0) -> Matrix | None:
    """An invertible g with ``g H_1(s) = H_2(s)`` for all s.

    Solves ``Y_2(s)^T g X_1(s) = 0`` where ``Y_2 = [-N_2^T; d_2 I]`` spans the
    annihilator of the second curve's planes.
    """
    if (s1.m, s1.p) != (s2.m, s2.p):
        raise DimensionMismatch("systems have different input/output sizes")
    X1 = hermann_martin_matrix(s1)
    d2 = charpoly(s2.A)
    N2 = s2.numerator()
    p = s2.p
    Y2 = N2.T.map(lambda q: -q).vstack(
        Matrix([[d2 if i == j else Poly() for j in range(p)] for i in range(p)], p)
    )
    n = X1.nrows
    rows = []
    for a in range(Y2.ncols):
        for b in range(X1.ncols):
            polys = [Y2[i, a] * X1[j, b] for i in range(n) for j in range(n)]
            for k in range(max(q.degree for q in polys) + 1):
                rows.append([q.coeff(k) for q in polys])
    Kb = kernel(Matrix(rows, n * n))
    rng = random.Random(seed)

    def mat(x):
        return Matrix([x[i * n:(i + 1) * n] for i in range(n)], n)

    cands = [mat(c) for c in Kb.columns()]
    for _ in range(50 if Kb.ncols else 0):
        cands.append(mat([sum(rng.randint(-9, 9) * c[i] for c in Kb.columns()) for i in range(n * n)]))
    return next((g for g in cands if det(g)), None)


def curves_equivalent_by(g: Matrix, s1: StateSpace, s2: StateSpace) -> bool:
    """Whether ``wedge^m g`` carries the first curve onto the second at every s."""
    a = exterior_power_apply(g, hermann_martin(s1).curve.tensor).to_vector()
    b = hermann_martin(s2).curve.tensor.to_vector()
    a = [x if isinstance(x, Poly) else Poly([x]) for x in a]
    b = [x if isinstance(x, Poly) else Poly([x]) for x in b]
    if not any(a):
        return False
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))


@dataclass(frozen=True)
class FeedbackPartner:
    K: Matrix
    partner_plane: Subspace
    K_partner: Matrix | None  # None when the partner plane is not transverse
    same_poles: bool

    @property
    def transverse(self) -> bool:
        return self.K_partner is not None

    @property
    def distinct(self) -> bool:
        return self.K_partner is not None and self.K_partner != self.K


def even_fiber_witness(sys: StateSpace, K: Matrix, omega: Matrix | None = None,
                       check_center: bool = True) -> FeedbackPartner:
    """The Lagrangian-involution partner of a feedback law.

    With ω making the curve Lagrangian, the involution of ``(Q^2m, ω)``
    preserves the pole polynomial; the partner plane is converted back to a
    gain when it is transverse to ``span{e_1..e_m}``.
    """
    _check_gain(sys, K)
    if omega is None:
        omega = find_symplectic_structure(sys)
        if omega is None:
            raise PreconditionError("no symplectic structure makes the curve Lagrangian")
    S = SymplecticSpace(omega)
    if check_center:
        P, _ = pole_placement_projection(sys, trials=0)
        if not P.center.contains(S.theta_multiples):
            raise PreconditionError("center does not contain theta multiples")
        if center_meets_grassmannian(P.center).kind == "meets":
            raise PreconditionError("pole placement map is not proper")
    if sys.m == 1:
        # the involution of a 2-dimensional symplectic space fixes every line
        return FeedbackPartner(K, feedback_plane(K), K, True)
    w = S.lagrangian_involution(plucker(feedback_plane(K)))
    H = factor_decomposable(w)
    K2 = gain_from_plane(H, sys.m)
    same = K2 is not None and pole_polynomial(sys, K2) == pole_polynomial(sys, K)
    return FeedbackPartner(K, H, K2, same)


def demo_system(seed: int = 0, N: int = 4, m: int = 2) -> StateSpace:
    """A minimal symmetric system: A symmetric, C = B^T, small integers."""
    rng = random.Random(seed)
    while True:
        a = [[0] * N for _ in range(N)]
        for i in range(N):
            for j in range(i, N):
                a[i][j] = a[j][i] = rng.randint(-3, 3)
        B = Matrix([[rng.randint(-3, 3) for _ in range(m)] for _ in range(N)], m)
        sys = StateSpace(Matrix(a, N), B, B.T)
        if sys.is_minimal():
            return sys


def random_system(rng: random.Random, N: int, m: int, p: int) -> StateSpace:
    """A random minimal triple with small integer entries."""
    while True:
        A = Matrix([[rng.randint(-3, 3) for _ in range(N)] for _ in range(N)], N)
        B = Matrix([[rng.randint(-3, 3) for _ in range(m)] for _ in range(N)], m)
        C = Matrix([[rng.randint(-3, 3) for _ in range(N)] for _ in range(p)], N)
        sys = StateSpace(A, B, C)
        if sys.is_minimal():
            return sys
