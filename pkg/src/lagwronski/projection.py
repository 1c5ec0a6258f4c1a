"""Linear projections on Plücker space restricted to the Grassmannian.

A :class:`ProjectionMap` is any linear map on the m-th exterior power whose
kernel is the center ``Z``.  Projective outputs are normalized so the first
nonzero coordinate is 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import CenterPointError, DimensionMismatch, PreconditionError, ZeroTensorError
from .exact import Matrix, kernel, quadratic_roots, rank, solve
from .exterior import (
    ExteriorTensor,
    Subspace,
    factor_decomposable,
    is_decomposable,
    plucker,
    wedge,
)
from .symplectic import SymplecticSpace


def projective_normalize(vec: Sequence) -> tuple:
    """Scale a nonzero vector so its first nonzero entry is 1."""
    lead = next((x for x in vec if x), None)
    if lead is None:
        raise ZeroTensorError("the zero vector has no projective class")
    return tuple(x / lead if lead != 1 else x for x in vec)


@dataclass(frozen=True)
class Center:
    """A subspace ``Z`` of ``wedge^m V`` with a complement spanned by coordinate vectors."""

    n: int
    m: int
    Z: Subspace
    quotient_basis: Matrix = field(compare=False)

    @classmethod
    def from_subspace(cls, n: int, m: int, Z: Subspace) -> "Center":
        N = comb(n, m)
        if Z.ambient_dim != N:
            raise DimensionMismatch(f"center must live in dimension {N}")
        pivots = set()
        for col in Z.columns():
            pivots.add(next(i for i, x in enumerate(col) if x))
        free = [i for i in range(N) if i not in pivots]
        Q = Matrix([[1 if i == r else 0 for r in free] for i in range(N)], len(free))
        return cls(n, m, Z, Q)

    @classmethod
    def from_tensors(cls, n: int, m: int, tensors: Sequence[ExteriorTensor]) -> "Center":
        N = comb(n, m)
        if not tensors:
            return cls.from_subspace(n, m, Subspace(Matrix([[] for _ in range(N)], 0)))
        return cls.from_subspace(n, m, Subspace.span([t.to_vector() for t in tensors], N))

    @property
    def dim(self) -> int:
        return self.Z.dim

    def tensors(self) -> list[ExteriorTensor]:
        return [ExteriorTensor.from_vector(self.n, self.m, c) for c in self.Z.columns()]

    def contains(self, W: Subspace) -> bool:
        return self.Z.contains_subspace(W)


class ProjectionMap:
    """A linear map on ``wedge^m V`` with kernel exactly the center."""

    def __init__(self, center: Center, matrix: Matrix | None = None):
        N = comb(center.n, center.m)
        if matrix is None:
            B = center.Z.basis.hstack(center.quotient_basis)
            Binv = B.inverse()
            matrix = Binv.submatrix(range(center.dim, N), range(N))
        if matrix.ncols != N:
            raise DimensionMismatch(f"projection matrix needs {N} columns")
        if Subspace(kernel(matrix)) != center.Z:
            raise PreconditionError("projection kernel differs from the center")
        self.center = center
        self.matrix = matrix

    @property
    def quotient_dim(self) -> int:
        return rank(self.matrix)

    def apply(self, v: ExteriorTensor) -> tuple:
        """Quotient coordinates before projectivization (linear in v)."""
        if (v.dim, v.grade) != (self.center.n, self.center.m):
            raise DimensionMismatch("tensor does not live in this Plücker space")
        return self.matrix @ v.to_vector()


def project(P: ProjectionMap, v: ExteriorTensor) -> tuple:
    """Projective image of ``v``; raises on the zero tensor and on center points."""
    if v.is_zero():
        raise ZeroTensorError("cannot project the zero tensor")
    w = P.apply(v)
    if not any(w):
        raise CenterPointError("point lies in the center; the projection is undefined there")
    return projective_normalize(w)


def generalized_wronski(P: ProjectionMap, H: Subspace) -> tuple:
    return project(P, plucker(H))


# ---------------------------------------------------------------------------
# the Grassmannian of 2-planes in 4-space


def plucker_quadric(v: ExteriorTensor):
    """Coefficient of ``v ^ v`` on the top index (twice the Pfaffian)."""
    return wedge(v, v)[(0, 1, 2, 3)]


def plucker_polar(v: ExteriorTensor, w: ExteriorTensor):
    return wedge(v, w)[(0, 1, 2, 3)]


@dataclass(frozen=True)
class CenterVerdict:
    kind: str  # "disjoint" | "meets" | "undecided"
    witness: Subspace | None = None
    witness_tensor: ExteriorTensor | None = None
    exact: bool = True


def center_meets_grassmannian(C: Center, seed: int = 0, samples: int = 64) -> CenterVerdict:
    """Decide whether ``P(Z)`` meets the Grassmannian.

    Exact for ``Z = 0``, for projective space (m = 1) and for 2-planes in
    4-space, where a center of dimension >= 2 always meets the quadric over
    the complex numbers.  Other sizes sample ``P(Z)`` for decomposable
    points and answer "undecided" when none is found.
    """
    tensors = C.tensors()
    if not tensors:
        return CenterVerdict("disjoint")
    if C.m == 1 or C.m == C.n - 1:
        return CenterVerdict("meets", factor_decomposable(tensors[0]), tensors[0])
    if (C.m, C.n) == (2, 4):
        z1 = tensors[0]
        if not plucker_quadric(z1):
            return CenterVerdict("meets", factor_decomposable(z1), z1)
        if len(tensors) == 1:
            return CenterVerdict("disjoint")
        z2 = tensors[1]
        # q(z2 + x z1) = q(z2) + 2x B(z1, z2) + x^2 q(z1)
        x, _ = quadratic_roots(plucker_quadric(z1), 2 * plucker_polar(z1, z2), plucker_quadric(z2))[0]
        w = z2 + z1 * x
        return CenterVerdict("meets", factor_decomposable(w), w)
    for t in tensors:
        if is_decomposable(t):
            return CenterVerdict("meets", factor_decomposable(t), t, exact=True)
    rng = random.Random(seed)
    for _ in range(samples):
        w = ExteriorTensor.zero(C.n, C.m)
        for t in tensors:
            w = w + t * rng.randint(-5, 5)
        if w and is_decomposable(w):
            return CenterVerdict("meets", factor_decomposable(w), w)
    return CenterVerdict("undecided", exact=False)


def random_subspace(n: int, k: int, rng: random.Random, size: int = 4) -> Subspace:
    """A random k-plane with small integer spanning vectors."""
    while True:
        M = Matrix([[rng.randint(-size, size) for _ in range(k)] for _ in range(n)], k)
        if rank(M) == k:
            return Subspace(M)


# ---------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class FiberPair:
    partner: Subspace
    same_image: bool
    distinct: bool


def involution_fiber_pairing(P: ProjectionMap, S: SymplecticSpace, H: Subspace) -> FiberPair:
    """The involution partner of ``H``, which lies in the same fiber when Z
    contains the (-1)-eigenspace."""
    if (S.n, S.m) != (P.center.n, P.center.m):
        raise DimensionMismatch("symplectic space does not match the projection")
    _, minus = S.involution_eigenspaces
    if not P.center.contains(minus):
        raise PreconditionError("center does not contain minus-eigenspace")
    v = plucker(H)
    image = project(P, v)
    w = S.lagrangian_involution(v)
    assert is_decomposable(w), "involution image of a Plücker point must be decomposable"
    partner = factor_decomposable(w)
    return FiberPair(partner, project(P, w) == image, partner != H)


@dataclass(frozen=True)
class FiberReport:
    target: tuple
    points: tuple[Subspace, ...]
    tensors: tuple[ExteriorTensor, ...]
    multiplicities: tuple[int, ...]
    pairing: tuple[int | None, ...]
    complete: bool

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)


def fiber_solve_gr24(
    P: ProjectionMap, target: Sequence, S: SymplecticSpace | None = None
) -> FiberReport:
    """All 2-planes in 4-space mapping to ``target``, with multiplicity.

    The fiber is the pencil ``{v0 + x z}`` through a preimage ``v0`` and the
    center direction ``z``, cut by the Plücker quadric; the quadratic in x is
    solved exactly, over a quadratic extension when needed.
    """
    C = P.center
    if (C.m, C.n) != (2, 4):
        raise PreconditionError("exact fiber solving is implemented for 2-planes in 4-space")
    if C.dim != 1:
        raise PreconditionError("fiber solving needs a one-dimensional center")
    z = C.tensors()[0]
    if not plucker_quadric(z):
        raise PreconditionError("center meets the Grassmannian")
    target = tuple(Fraction(x) for x in target)
    if not any(target):
        raise ZeroTensorError("target must be a nonzero point")
    sol = solve(P.matrix, target)
    if sol is None:
        return FiberReport(target, (), (), (), (), True)
    v0 = ExteriorTensor.from_vector(4, 2, sol)
    roots = quadratic_roots(plucker_quadric(z), 2 * plucker_polar(v0, z), plucker_quadric(v0))
    tensors = tuple((v0 + z * x).canonical() for x, _ in roots)
    points = tuple(factor_decomposable(t) for t in tensors)
    mults = tuple(k for _, k in roots)
    pairing: tuple[int | None, ...] = tuple(None for _ in tensors)
    if S is not None:
        images = [S.lagrangian_involution(t).canonical() for t in tensors]
        pairing = tuple(next((j for j, t in enumerate(tensors) if t == im), None) for im in images)
    return FiberReport(projective_normalize(target), points, tensors, mults, pairing, True)


@dataclass(frozen=True)
class DegreeReport:
    min_fiber: int
    max_fiber: int
    fiber_sizes: tuple[int, ...]
    exact: bool


def degree_by_sampling(
    P: ProjectionMap, seed: int, samples: int = 20, S: SymplecticSpace | None = None
) -> DegreeReport:
    """Fiber cardinalities over images of random rational planes.

    Exact for lines (m = 1) and for 2-planes in 4-space.  Elsewhere the
    involution pairing gives lower bounds: 2 when the partner is distinct.
    """
    C = P.center
    rng = random.Random(seed)
    sizes = []
    if C.m == 1:
        if C.dim:
            raise PreconditionError("a nonzero center always meets projective space")
        return DegreeReport(1, 1, (1,) * samples, True)
    exact = (C.m, C.n) == (2, 4)
    if not exact and S is None:
        raise PreconditionError("need a symplectic structure to certify fibers beyond 2-planes in 4-space")
    while len(sizes) < samples:
        H = random_subspace(C.n, C.m, rng)
        v = plucker(H)
        if not any(P.apply(v)):
            continue
        if exact:
            sizes.append(len(fiber_solve_gr24(P, P.apply(v), S).points))
        else:
            sizes.append(2 if involution_fiber_pairing(P, S, H).distinct else 1)
    return DegreeReport(min(sizes), max(sizes), tuple(sizes), exact)


def eigenspace_containment(Z: Subspace, eigenspaces: Sequence[Subspace]) -> tuple[list[bool], bool]:
    """Which eigenspaces lie in Z, and whether all but exactly one do."""
    flags = [Z.contains_subspace(E) for E in eigenspaces]
    return flags, flags.count(False) == 1
