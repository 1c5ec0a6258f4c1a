"""Wronskians, differential operators with polynomial coefficients, and the
Wronski map as a linear projection.

A space of functions is given by a basis ``fs`` of polynomials.  Its
coordinates identify ``V = span(fs)`` with ``Q^n``; the evaluation curve
``ev(t) = sum f_i(t) f_i^*`` lives in the dual space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import DimensionMismatch, NotAdmissibleError, PreconditionError
from .exact import Matrix, Poly, RatFun, det, kernel, poly_gcd_many
from .exterior import (
    ExteriorTensor,
    Subspace,
    VolumeForm,
    hodge_star,
    minors_tensor,
)
from .projection import Center, ProjectionMap, projective_normalize, random_subspace
from .symplectic import SymplecticSpace


def _polys(fs: Sequence) -> list[Poly]:
    return [f if isinstance(f, Poly) else Poly(f) for f in fs]


def wronskian_matrix(fs: Sequence[Poly]) -> Matrix:
    """Row j holds the j-th derivatives of the functions."""
    fs = _polys(fs)
    n = len(fs)
    return Matrix([[f.derivative(j) for f in fs] for j in range(n)], n)


def wronskian(fs: Sequence[Poly]) -> Poly:
    if not fs:
        raise ValueError("the Wronskian needs at least one function")
    return det(wronskian_matrix(fs))


class PolyBasis:
    """A basis ``f_1..f_n`` of a space of polynomials with nonzero Wronskian."""

    def __init__(self, fs: Sequence):
        self.fs = tuple(_polys(fs))
        if not self.fs:
            raise ValueError("empty basis")
        self.wronskian = wronskian(self.fs)
        if self.wronskian.is_zero():
            raise NotAdmissibleError("functions are linearly dependent (zero Wronskian)")

    @classmethod
    def monomials(cls, n: int) -> "PolyBasis":
        return cls([Poly.monomial(k) for k in range(n)])

    def __len__(self):
        return len(self.fs)

    def __iter__(self):
        return iter(self.fs)

    def combine(self, coords: Sequence) -> Poly:
        """The function with coordinates ``coords`` in this basis."""
        return sum((f * c for f, c in zip(self.fs, coords)), Poly())


def _basis(fs) -> PolyBasis:
    return fs if isinstance(fs, PolyBasis) else PolyBasis(fs)


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class DiffOperator:
    """``y^(n) + a_{n-1} y^(n-1) + ... + a_0 y`` with polynomial ``a_j``."""

    coeffs: tuple[Poly, ...]

    def __init__(self, coeffs: Sequence):
        cs = tuple(_polys(coeffs))
        if not cs:
            raise ValueError("operator order must be at least 1")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def d(cls, n: int) -> "DiffOperator":
        """The pure derivative ``d^n``."""
        return cls([Poly()] * n)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def full_coeffs(self) -> list[Poly]:
        return list(self.coeffs) + [Poly([1])]

    def apply(self, y: Poly) -> Poly:
        return sum((a * y.derivative(j) for j, a in enumerate(self.full_coeffs())), Poly())

    def __str__(self):
        terms = []
        for j in range(self.order, -1, -1):
            a = self.full_coeffs()[j]
            if a.is_zero():
                continue
            d = "" if j == 0 else ("d" if j == 1 else f"d^{j}")
            if a == Poly([1]) and d:
                terms.append(d)
            else:
                terms.append(f"({a})" + (f"*{d}" if d else ""))
        return " + ".join(terms)


def operator_from_basis(fs) -> DiffOperator:
    """The monic operator whose solution space is ``span(fs)``.

    Cramer's rule on ``sum_j a_j f_i^(j) = -f_i^(n)``; the coefficients are
    polynomials because the Wronskian is required to be a nonzero constant.
    """
    fs = _basis(fs)
    W = fs.wronskian
    if not W.is_constant():
        raise NotAdmissibleError(f"basis not admissible over Q[t]: Wronskian {W} is not constant")
    n = len(fs)
    Wm = wronskian_matrix(fs.fs)
    top = [f.derivative(n) for f in fs.fs]
    coeffs = []
    for j in range(n):
        rows = [list(r) for r in Wm.rows]
        rows[j] = top
        coeffs.append(-det(Matrix(rows, n)) / W.coeff(0))
    return DiffOperator(coeffs)


def raw_adjoint(L: DiffOperator) -> list[Poly]:
    """Coefficients ``b_0..b_n`` of ``L* y = sum_i (-1)^i (a_i y)^(i)``."""
    a = L.full_coeffs()
    n = L.order
    out = []
    for k in range(n + 1):
        b = Poly()
        for i in range(k, n + 1):
            term = a[i].derivative(i - k) * comb(i, k)
            b = b - term if i % 2 else b + term
        out.append(b)
    return out


def formal_adjoint(L: DiffOperator) -> tuple[DiffOperator, int]:
    """Monic normalization of the adjoint and the sign ``(-1)^n`` of its raw leading term."""
    b = raw_adjoint(L)
    sign = -1 if L.order % 2 else 1
    return DiffOperator([c * sign for c in b[:-1]]), sign


def is_self_adjoint(L: DiffOperator) -> bool:
    adj, sign = formal_adjoint(L)
    return sign == 1 and adj == L


def is_anti_self_adjoint(L: DiffOperator) -> bool:
    adj, sign = formal_adjoint(L)
    return sign == -1 and adj == L


def adjoint_is_involutive(L: DiffOperator) -> bool:
    return formal_adjoint(formal_adjoint(L)[0])[0] == L


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class TensorCurve:
    """A polynomial curve in an exterior power, as a tensor with Poly coefficients."""

    tensor: ExteriorTensor
    content: Poly

    @property
    def grade(self) -> int:
        return self.tensor.grade

    @property
    def dim(self) -> int:
        return self.tensor.dim

    @property
    def degree(self) -> int:
        return max(c.degree for _, c in self.tensor.items())

    def at(self, t0) -> ExteriorTensor:
        return ExteriorTensor(self.dim, self.grade, [(I, c(t0)) for I, c in self.tensor.items()])

    def coefficient_matrix(self) -> Matrix:
        """Row k holds the coefficients of ``t^k``, one column per multi-index."""
        vec = self.tensor.to_vector()
        return Matrix(
            [[p.coeff(k) if p else Fraction(0) for p in vec] for k in range(self.degree + 1)],
            len(vec),
        )

    def coefficient_span(self) -> Subspace:
        return Subspace(self.coefficient_matrix().T)


def content_normalize(t: ExteriorTensor) -> tuple[ExteriorTensor, Poly]:
    g = poly_gcd_many(c for _, c in t.items())
    return ExteriorTensor(t.dim, t.grade, [(I, c / g) for I, c in t.items()]), g


def evaluation_tensor_curve(fs, m: int, normalize: bool = True) -> TensorCurve:
    """``ev ^ ev' ^ ... ^ ev^(m-1)``; the coefficient on I is ``Wr(f_I)``."""
    fs = _basis(fs)
    n = len(fs)
    if not 1 <= m <= n:
        raise DimensionMismatch(f"curve grade must lie in 1..{n}")
    t = minors_tensor(wronskian_matrix(fs.fs).submatrix(range(m), range(n)).T)
    assert not t.is_zero(), "evaluation curve vanishes identically"
    if normalize:
        t, g = content_normalize(t)
        return TensorCurve(t, g)
    return TensorCurve(t, Poly([1]))


def osculating_space(fs, i: int, t0) -> Subspace:
    """``E^(i)(t0) = span{ev(t0), ..., ev^(i)(t0)}`` in the dual coordinates."""
    fs = _basis(fs)
    return Subspace.span([[f.derivative(j)(t0) for f in fs.fs] for j in range(i + 1)], len(fs))


def wronski_projection(fs, m: int) -> ProjectionMap:
    """The Wronski map on m-planes of ``span(fs)`` as a projection.

    Output coordinate k is the coefficient of ``t^k`` of the Wronskian.
    """
    fs = _basis(fs)
    curve = evaluation_tensor_curve(fs, m, normalize=False)
    M = curve.coefficient_matrix()
    center = Center.from_subspace(len(fs), m, Subspace(kernel(M)))
    return ProjectionMap(center, M)


def wronski_center(fs, m: int) -> Center:
    return wronski_projection(fs, m).center


def wronski_of_subspace(fs, H: Subspace) -> Poly:
    """Wronskian of the functions whose coordinates are the columns of H."""
    fs = _basis(fs)
    return wronskian([fs.combine(c) for c in H.basis.columns()])


def verify_wronski_is_projection(fs, m: int, trials: int = 50, seed: int = 0,
                                 subspaces: Sequence[Subspace] = ()) -> bool:
    """Compare the Wronskian of H with the projection of its Plücker point."""
    fs = _basis(fs)
    P = wronski_projection(fs, m)
    rng = random.Random(seed)
    tests = list(subspaces) + [random_subspace(len(fs), m, rng) for _ in range(trials)]
    D = P.matrix.nrows
    for H in tests:
        w = wronski_of_subspace(fs, H)
        img = P.apply(minors_tensor(H.basis))
        if w.degree >= D or projective_normalize([w.coeff(k) for k in range(D)]) != projective_normalize(img):
            return False
    return True


# ---------------------------------------------------------------------------
# self-duality


@dataclass(frozen=True)
class SelfDualStructure:
    """``psi gamma(t) = mu(t) gamma*(t)`` with ``psi`` invertible."""

    psi: Matrix
    mu: RatFun
    kind: str  # "skew" for even n, "symmetric" for odd n
    solution_dim: int


def dual_curve(fs) -> list[Poly]:
    """Star of ``ev ^ ... ^ ev^(n-2)`` against the unit volume form, as a vector curve."""
    fs = _basis(fs)
    n = len(fs)
    g = evaluation_tensor_curve(fs, n - 1, normalize=False).tensor
    star = hodge_star(g, VolumeForm(n, Fraction(1)))
    return [star[(i,)] or Poly() for i in range(n)]


def self_dual_structure(fs, seed: int = 0) -> SelfDualStructure | None:
    """Find a constant ``psi`` with ``psi gamma(t)`` parallel to ``gamma*(t)``.

    Parallelism ``(psi gamma)_a g*_c = (psi gamma)_c g*_a`` is linear in
    psi, so no degree bound on mu is needed; mu is recovered afterwards.
    psi is sought skew when n is even and symmetric when n is odd.
    """
    fs = _basis(fs)
    n = len(fs)
    if n < 2:
        raise PreconditionError("self-duality needs at least two functions")
    gamma = list(fs.fs)
    gstar = dual_curve(fs)
    skew = n % 2 == 0
    params = [(a, b) for a in range(n) for b in range(a + 1 if skew else a, n)]

    def entry_coeffs(a: int) -> dict[int, list[tuple[int, int]]]:
        # (psi gamma)_a = sum_b psi[a][b] gamma_b, written in the parameters
        out = []
        for b in range(n):
            if a == b and skew:
                continue
            key = (min(a, b), max(a, b))
            s = -1 if (skew and a > b) else 1
            out.append((params.index(key), s, gamma[b]))
        return out

    rows = []
    for a in range(n):
        for c in range(a + 1, n):
            # coefficient of each power of t in (psi gamma)_a g*_c - (psi gamma)_c g*_a
            polys = [Poly() for _ in params]
            for k, s, gb in entry_coeffs(a):
                polys[k] = polys[k] + gb * gstar[c] * s
            for k, s, gb in entry_coeffs(c):
                polys[k] = polys[k] - gb * gstar[a] * s
            deg = max(p.degree for p in polys)
            for d in range(deg + 1):
                rows.append([p.coeff(d) for p in polys])
    K = kernel(Matrix(rows, len(params))) if rows else Matrix.identity(len(params))
    if K.ncols == 0:
        return None

    def to_matrix(x) -> Matrix:
        M = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), v in zip(params, x):
            M[a][b] = v
            M[b][a] = -v if skew else v
        return Matrix(M, n)

    cands = [to_matrix(c) for c in K.columns()]
    rng = random.Random(seed)
    for _ in range(50):
        cands.append(to_matrix([sum(rng.randint(-9, 9) * c[i] for c in K.columns()) for i in range(len(params))]))
    psi = next((M for M in cands if det(M)), None)
    if psi is None:
        return None
    pg = psi @ tuple(gamma)
    a = next(i for i in range(n) if gstar[i])
    mu = RatFun(pg[a], gstar[a])
    return SelfDualStructure(psi, mu, "skew" if skew else "symmetric", K.ncols)


def primitive_upper_bound(m: int) -> int:
    """``binom(2m, m) - binom(2m-2, m-2)``."""
    return comb(2 * m, m) - (comb(2 * m - 2, m - 2) if m >= 2 else 0)


@dataclass(frozen=True)
class CenterCheck:
    curve_primitive: bool
    curve_in_plus: bool
    theta_in_center: bool
    dim_U: int
    bound: int
    psi: Matrix

    @property
    def passed(self) -> bool:
        return self.curve_primitive and self.curve_in_plus and self.theta_in_center and self.dim_U <= self.bound


def self_adjoint_center_check(fs, m: int, sd: SelfDualStructure | None = None) -> CenterCheck:
    """Containments forced by a skew self-duality on a 2m-dimensional space.

    (a) the coefficient tensors of the curve are primitive for the form psi
    on the dual space (and so lie in the +1 part of the involution there);
    (b) ``theta ^ wedge^(m-2) V`` lies in the center, theta having matrix psi;
    (c) ``dim U`` is at most the primitive bound.
    """
    fs = _basis(fs)
    if len(fs) != 2 * m:
        raise DimensionMismatch(f"need 2m = {2 * m} functions")
    if sd is None:
        sd = self_dual_structure(fs)
    if sd is None or sd.kind != "skew":
        raise PreconditionError("no skew self-dual structure: missing psi")
    P = sd.psi
    curve = evaluation_tensor_curve(fs, m, normalize=False)
    U = curve.coefficient_span()
    dual_side = SymplecticSpace(P)
    tensors = [ExteriorTensor.from_vector(2 * m, m, c) for c in U.columns()]
    primitive = m < 2 or all(dual_side.contract(t).is_zero() for t in tensors)
    plus, _ = dual_side.involution_eigenspaces
    in_plus = plus.contains_subspace(U)
    Z = wronski_center(fs, m).Z
    theta_ok = Z.contains_subspace(SymplecticSpace.from_psi(P).theta_multiples)
    return CenterCheck(primitive, in_plus, theta_ok, U.dim, primitive_upper_bound(m), P)
