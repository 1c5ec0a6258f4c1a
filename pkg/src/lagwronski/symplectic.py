"""Symplectic structure on a 2m-dimensional space and the Lagrangian involution.

Conventions (coordinates ``e_i -> 2i-2``, ``f_i -> 2i-1`` in a Darboux basis):

* ``omega`` is the matrix of the form, ``<u, v> = u^T omega v``;
* ``psi = -omega^{-1}`` is the isomorphism ``V^* -> V`` (so ``psi(e_i^*) = -f_i``
  and ``psi(f_i^*) = e_i`` in a Darboux basis);
* ``theta = psi(omega)`` in the second exterior power;
* the volume form is ``(-1)^C(m,2) / m! * omega^m``, whose value on the basis
  top tensor is ``(-1)^C(m,2)`` for a Darboux basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Sequence

from .errors import GradeError, PreconditionError, SingularMatrixError
from .exact import Matrix, det, kernel, rank, solve
from .exterior import (
    ExteriorTensor,
    Subspace,
    VolumeForm,
    dual_map,
    exterior_power_apply,
    index_positions,
    multi_indices,
    wedge,
    wedge_power,
)


class SymplecticSpace:
    """A symplectic vector space of dimension ``2m`` with fixed coordinates."""

    def __init__(self, omega: Matrix):
        n = omega.nrows
        if not omega.is_square() or n % 2:
            raise PreconditionError("symplectic form must be an even-dimensional square matrix")
        if omega.T != -omega:
            raise PreconditionError("symplectic form must be skew-symmetric")
        if not det(omega):
            raise SingularMatrixError("symplectic form is degenerate")
        self.m = n // 2
        self.n = n
        self.omega = omega
        self.psi = -omega.inverse()
        self.omega_tensor = ExteriorTensor(
            n, 2, {(a, b): omega[a, b] for a in range(n) for b in range(a + 1, n)}
        )
        self.theta = exterior_power_apply(self.psi, self.omega_tensor)
        top = wedge_power(self.omega_tensor, self.m)[tuple(range(n))]
        sign = -1 if comb(self.m, 2) % 2 else 1
        self.volume = VolumeForm(n, sign * top / factorial(self.m))

    @classmethod
    def darboux(cls, m: int) -> "SymplecticSpace":
        """The standard space with ``omega = sum e_i^* ^ f_i^*``."""
        if m < 1:
            raise ValueError("need m >= 1")
        n = 2 * m
        rows = [[0] * n for _ in range(n)]
        for j in range(m):
            rows[2 * j][2 * j + 1] = 1
            rows[2 * j + 1][2 * j] = -1
        return cls(Matrix(rows, n))

    @classmethod
    def from_psi(cls, psi: Matrix) -> "SymplecticSpace":
        """The space whose isomorphism ``V^* -> V`` is the skew matrix ``psi``."""
        return cls(-psi.inverse())

    def e(self, i: int) -> int:
        """Coordinate of the Darboux vector ``e_i`` (1-based)."""
        return 2 * i - 2

    def f(self, i: int) -> int:
        return 2 * i - 1

    def form(self, u: Sequence, v: Sequence):
        return sum((x * y for x, y in zip(u, self.omega @ v)), Fraction(0))

    # subspaces ------------------------------------------------------------

    def annihilator(self, H: Subspace) -> Subspace:
        """``{v : <v, w> = 0 for all w in H}``."""
        if H.dim == 0:
            return Subspace(Matrix.identity(self.n))
        return Subspace(kernel((self.omega @ H.basis).T))

    def is_isotropic(self, H: Subspace) -> bool:
        return (H.basis.T @ self.omega @ H.basis).is_zero()

    def is_lagrangian(self, H: Subspace) -> bool:
        return H.dim == self.m and self.is_isotropic(H)

    # exterior structure ---------------------------------------------------

    def contract(self, v: ExteriorTensor) -> ExteriorTensor:
        """``i_omega(v_1^...^v_k) = sum_{i<j} (-1)^(i+j-1) omega(v_i, v_j) v_1^..^v_k`` with v_i, v_j removed."""
        if v.grade < 2:
            raise GradeError("contraction needs grade >= 2")
        out = []
        om = self.omega
        for I, c in v.items():
            k = len(I)
            for a in range(k):
                for b in range(a + 1, k):
                    w = om[I[a], I[b]]
                    if not w:
                        continue
                    rest = I[:a] + I[a + 1 : b] + I[b + 1 :]
                    term = c * w
                    out.append((rest, term if (a + b) % 2 else -term))
        return ExteriorTensor(self.n, v.grade - 2, out)

    def contraction_matrix(self, k: int) -> Matrix:
        rows = index_positions(self.n, k - 2)
        cols = multi_indices(self.n, k)
        M = [[Fraction(0)] * len(cols) for _ in rows]
        for j, I in enumerate(cols):
            for K, c in self.contract(ExteriorTensor(self.n, k, {I: 1})).items():
                M[rows[K]][j] = c
        return Matrix(M, len(cols))

    def primitive_subspace(self, k: int) -> list[ExteriorTensor]:
        """Basis of the kernel of the contraction on grade k (the primitive part)."""
        if not 0 <= k <= self.m:
            raise GradeError(f"primitive part implemented for 0 <= k <= m, got k={k}")
        if k < 2:
            return [ExteriorTensor(self.n, k, {I: 1}) for I in multi_indices(self.n, k)]
        K = kernel(self.contraction_matrix(k))
        return [ExteriorTensor.from_vector(self.n, k, c) for c in K.columns()]

    def summand_basis(self, k: int, p: int) -> list[ExteriorTensor]:
        """Basis of ``theta^p ^ H(wedge^(k-2p))``."""
        tp = wedge_power(self.theta, p)
        return [wedge(tp, h) for h in self.primitive_subspace(k - 2 * p)]

    def decomposition(self, k: int) -> "Decomposition":
        return self._decompositions(k)

    def _decompositions(self, k: int) -> "Decomposition":
        cache = self.__dict__.setdefault("_decomp_cache", {})
        if k not in cache:
            if not 0 <= k <= self.m:
                raise GradeError(f"decomposition implemented for grades 0..m, got {k}")
            summands = {p: tuple(self.summand_basis(k, p)) for p in range(k // 2 + 1)}
            cache[k] = Decomposition(self.n, k, summands)
        return cache[k]

    def decompose(self, v: ExteriorTensor) -> dict[int, ExteriorTensor]:
        """Components of ``v`` in each summand ``theta^p ^ H(wedge^(k-2p))``."""
        return self.decomposition(v.grade).split(v)

    # the involution ---------------------------------------------------------

    def lagrangian_involution(self, v: ExteriorTensor) -> ExteriorTensor:
        """``(wedge^m psi)(*v)``; sends the Plücker point of H to that of its annihilator."""
        if v.grade != self.m or v.dim != self.n:
            raise GradeError(f"the involution acts on grade {self.m} in dimension {self.n}")
        return dual_map(v, self.psi, self.volume)

    @cached_property
    def involution_matrix(self) -> Matrix:
        cols = [
            self.lagrangian_involution(ExteriorTensor(self.n, self.m, {I: 1})).to_vector()
            for I in multi_indices(self.n, self.m)
        ]
        return Matrix.from_columns(cols, len(cols))

    @cached_property
    def involution_eigenspaces(self) -> tuple[Subspace, Subspace]:
        """Exact (+1, -1) eigenspaces of the involution on ``wedge^m V``."""
        L = self.involution_matrix
        I = Matrix.identity(L.nrows)
        return Subspace(kernel(L - I)), Subspace(kernel(L + I))

    @cached_property
    def theta_multiples(self) -> Subspace:
        """``theta ^ wedge^(m-2) V`` inside ``wedge^m V``."""
        N = comb(self.n, self.m)
        if self.m < 2:
            return Subspace(Matrix([[] for _ in range(N)], 0))
        vecs = [
            wedge(self.theta, ExteriorTensor(self.n, self.m - 2, {J: 1})).to_vector()
            for J in multi_indices(self.n, self.m - 2)
        ]
        return Subspace.span(vecs, N)

    def to_json(self) -> dict:
        from .serial import matrix_to_json

        if self == SymplecticSpace.darboux(self.m):
            return {"m": self.m}
        return {"m": self.m, "omega": matrix_to_json(self.omega)}

    def __eq__(self, other):
        if not isinstance(other, SymplecticSpace):
            return NotImplemented
        return self.omega == other.omega

    def __hash__(self):
        return hash(self.omega)

    def __repr__(self):
        return f"SymplecticSpace(m={self.m}, omega={self.omega!r})"


@dataclass(frozen=True)
class Decomposition:
    """Bases of the summands of ``wedge^k V`` and projections onto them."""

    n: int
    k: int
    summands: dict[int, tuple[ExteriorTensor, ...]]

    def dims(self) -> dict[int, int]:
        return {p: len(b) for p, b in self.summands.items()}

    @cached_property
    def _basis(self) -> tuple[Matrix, list[int]]:
        labels, cols = [], []
        for p, basis in sorted(self.summands.items()):
            for t in basis:
                labels.append(p)
                cols.append(t.to_vector())
        return Matrix.from_columns(cols, comb(self.n, self.k)), labels

    def is_direct_sum(self) -> bool:
        B, _ = self._basis
        return B.ncols == B.nrows and rank(B) == B.ncols

    def split(self, v: ExteriorTensor) -> dict[int, ExteriorTensor]:
        B, labels = self._basis
        x = solve(B, v.to_vector())
        if x is None:
            raise ValueError("summands do not span the exterior power")
        out = {p: ExteriorTensor.zero(self.n, self.k) for p in self.summands}
        for coeff, p, col in zip(x, labels, B.columns()):
            if coeff:
                out[p] = out[p] + ExteriorTensor.from_vector(self.n, self.k, col) * coeff
        return out

    @cached_property
    def projections(self) -> dict[int, Matrix]:
        B, labels = self._basis
        Binv = B.inverse()
        out = {}
        for p in self.summands:
            sel = [j for j, q in enumerate(labels) if q == p]
            Bp = B.submatrix(range(B.nrows), sel)
            out[p] = Bp @ Binv.submatrix(sel, range(B.nrows))
        return out


def random_symplectic(S: SymplecticSpace, rng: random.Random, steps: int = 8, size: int = 3) -> Matrix:
    """A random element of the symplectic group, as a product of transvections.

    Each factor is ``x -> x + c <v, x> v``, which preserves the form.
    """
    n = S.n
    g = Matrix.identity(n)
    for _ in range(steps):
        v = [rng.randint(-size, size) for _ in range(n)]
        c = Fraction(rng.randint(-size, size), rng.randint(1, size))
        ov = [sum(v[i] * S.omega[i, j] for i in range(n)) for j in range(n)]  # row v^T omega
        T = Matrix([[int(i == j) + c * v[i] * ov[j] for j in range(n)] for i in range(n)], n)
        g = T @ g
    return g


def random_lagrangian(S: SymplecticSpace, rng: random.Random) -> Subspace:
    """Image of the coordinate Lagrangian ``span{e_1..e_m}`` under a random symplectic map."""
    if S != SymplecticSpace.darboux(S.m):
        raise PreconditionError("random_lagrangian expects Darboux coordinates")
    g = random_symplectic(S, rng)
    base = Subspace.coordinate(S.n, [S.e(i) for i in range(1, S.m + 1)])
    return Subspace(g @ base.basis)
