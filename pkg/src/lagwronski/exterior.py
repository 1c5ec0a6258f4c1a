"""Exterior powers of an n-dimensional space with a fixed basis.

A grade-k tensor is a sparse map from multi-indices (strictly increasing
k-tuples of basis positions) to exact coefficients.  Coefficients may be
Fractions, QuadraticNumbers or polynomials; everything here only uses ring
operations, plus division where a projective normal form is requested.

The dual-basis pairing is normalized so that ``e_I^*`` evaluates to 1 on
``e_I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

from .errors import DimensionMismatch, GradeError, SingularMatrixError, ZeroTensorError
from .exact import Matrix, det, kernel, rank, rref, scalar, _coerce_entry

MultiIndex = tuple[int, ...]

_ZERO = Fraction(0)


@lru_cache(maxsize=None)
def multi_indices(n: int, k: int) -> tuple[MultiIndex, ...]:
    """All k-subsets of range(n) in lexicographic order."""
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def index_positions(n: int, k: int) -> dict[MultiIndex, int]:
    return {I: pos for pos, I in enumerate(multi_indices(n, k))}


@lru_cache(maxsize=1 << 16)
def merge_sign(I: MultiIndex, J: MultiIndex) -> tuple[int, MultiIndex] | None:
    """Sign and index of ``e_I ^ e_J``, or None when they share a factor."""
    if set(I).intersection(J):
        return None
    inversions = sum(1 for j in J for i in I if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(I + J))


def complement(I: MultiIndex, n: int) -> MultiIndex:
    s = set(I)
    return tuple(i for i in range(n) if i not in s)


def complement_sign(I: MultiIndex, n: int) -> int:
    """Sign of ``e_I ^ e_{I^c}`` relative to ``e_0 ^ ... ^ e_{n-1}``."""
    return -1 if sum(i - a for a, i in enumerate(I)) % 2 else 1


class ExteriorTensor:
    """An element of the k-th exterior power of an n-dimensional space."""

    __slots__ = ("dim", "grade", "_coeffs", "_hash")

    def __init__(self, dim: int, grade: int, coeffs: Mapping | Iterable = ()):
        if not 0 <= grade <= dim:
            raise GradeError(f"grade {grade} outside 0..{dim}")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        data: dict[MultiIndex, Any] = {}
        for I, c in items:
            I = tuple(I)
            if len(I) != grade or any(b <= a for a, b in zip(I, I[1:])):
                raise GradeError(f"{I} is not a strictly increasing {grade}-index")
            if I and not (0 <= I[0] and I[-1] < dim):
                raise DimensionMismatch(f"{I} out of range for dimension {dim}")
            c = _coerce_entry(c)
            if I in data:
                c = data[I] + c
            if c:
                data[I] = c
            else:
                data.pop(I, None)
        self.dim = dim
        self.grade = grade
        self._coeffs = data
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def basis(cls, dim: int, index: Sequence[int]) -> "ExteriorTensor":
        """``e_{i1} ^ ... ^ e_{ik}`` for any ordering of distinct indices."""
        index = tuple(index)
        out = cls.scalar(dim, 1)
        for i in index:
            out = out ^ cls(dim, 1, {(i,): 1})
        return out

    @classmethod
    def scalar(cls, dim: int, c) -> "ExteriorTensor":
        return cls(dim, 0, {(): c})

    @classmethod
    def zero(cls, dim: int, grade: int) -> "ExteriorTensor":
        return cls(dim, grade)

    @classmethod
    def vector(cls, v: Sequence) -> "ExteriorTensor":
        return cls(len(v), 1, {(i,): c for i, c in enumerate(v)})

    @classmethod
    def from_vector(cls, dim: int, grade: int, vec: Sequence) -> "ExteriorTensor":
        idx = multi_indices(dim, grade)
        if len(vec) != len(idx):
            raise DimensionMismatch(f"expected {len(idx)} coordinates, got {len(vec)}")
        return cls(dim, grade, zip(idx, vec))

    # access -------------------------------------------------------------

    def __getitem__(self, I) -> Any:
        return self._coeffs.get(tuple(I), _ZERO)

    def items(self) -> list[tuple[MultiIndex, Any]]:
        return sorted(self._coeffs.items())

    def support(self) -> list[MultiIndex]:
        return sorted(self._coeffs)

    def to_vector(self) -> tuple:
        return tuple(self._coeffs.get(I, _ZERO) for I in multi_indices(self.dim, self.grade))

    def __len__(self):
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "ExteriorTensor"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"ambient dimensions {self.dim} and {other.dim}")

    def __add__(self, other: "ExteriorTensor") -> "ExteriorTensor":
        if not isinstance(other, ExteriorTensor):
            return NotImplemented
        self._check(other)
        if self.grade != other.grade:
            raise GradeError(f"cannot add grades {self.grade} and {other.grade}")
        return ExteriorTensor(self.dim, self.grade, list(self._coeffs.items()) + list(other._coeffs.items()))

    def __neg__(self):
        return ExteriorTensor(self.dim, self.grade, {I: -c for I, c in self._coeffs.items()})

    def __sub__(self, other: "ExteriorTensor") -> "ExteriorTensor":
        return self + (-other)

    def __mul__(self, c) -> "ExteriorTensor":
        if isinstance(c, ExteriorTensor):
            return NotImplemented
        c = _coerce_entry(c)
        return ExteriorTensor(self.dim, self.grade, {I: x * c for I, x in self._coeffs.items()})

    def __rmul__(self, c) -> "ExteriorTensor":
        c = _coerce_entry(c)
        return ExteriorTensor(self.dim, self.grade, {I: c * x for I, x in self._coeffs.items()})

    def __truediv__(self, c) -> "ExteriorTensor":
        c = _coerce_entry(c)
        return ExteriorTensor(self.dim, self.grade, {I: x / c for I, x in self._coeffs.items()})

    def __xor__(self, other: "ExteriorTensor") -> "ExteriorTensor":
        return wedge(self, other)

    def map(self, f) -> "ExteriorTensor":
        return ExteriorTensor(self.dim, self.grade, {I: f(x) for I, x in self._coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, ExteriorTensor):
            return NotImplemented
        return (self.dim, self.grade) == (other.dim, other.grade) and self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, self.grade, tuple(self.items())))
        return self._hash

    def canonical(self) -> "ExteriorTensor":
        """Projective representative: first nonzero coefficient scaled to 1."""
        if not self._coeffs:
            raise ZeroTensorError("the zero tensor has no projective class")
        lead = self._coeffs[min(self._coeffs)]
        return self if lead == 1 else self / lead

    def __repr__(self):
        terms = " + ".join(f"{c}*e{list(I)}" for I, c in self.items()) or "0"
        return f"ExteriorTensor(dim={self.dim}, grade={self.grade}: {terms})"


def wedge(a: ExteriorTensor, b: ExteriorTensor) -> ExteriorTensor:
    """Exterior product with signs from transposition counts."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"ambient dimensions {a.dim} and {b.dim}")
    if a.grade + b.grade > a.dim:
        raise GradeError(f"grade {a.grade}+{b.grade} exceeds dimension {a.dim}")
    out: dict[MultiIndex, Any] = {}
    for I, x in a._coeffs.items():
        for J, y in b._coeffs.items():
            m = merge_sign(I, J)
            if m is None:
                continue
            s, K = m
            term = x * y if s > 0 else -(x * y)
            out[K] = out[K] + term if K in out else term
    return ExteriorTensor(a.dim, a.grade + b.grade, out)


def wedge_all(vectors: Iterable[ExteriorTensor], dim: int) -> ExteriorTensor:
    out = ExteriorTensor.scalar(dim, 1)
    for v in vectors:
        out = wedge(out, v)
    return out


def wedge_power(v: ExteriorTensor, p: int) -> ExteriorTensor:
    """``v ^ v ^ ... ^ v`` (p factors); ``p = 0`` gives the unit scalar."""
    out = ExteriorTensor.scalar(v.dim, 1)
    for _ in range(p):
        out = wedge(out, v)
    return out


@dataclass(frozen=True)
class VolumeForm:
    """A volume form, given by its value on ``e_0 ^ ... ^ e_{n-1}``."""

    dim: int
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if not self.scale:
            raise ValueError("volume form scale must be nonzero")

    def __call__(self, top: ExteriorTensor):
        if top.grade != self.dim:
            raise GradeError("volume form evaluates top-degree tensors only")
        return self.scale * top[tuple(range(self.dim))]


class Subspace:
    """A linear subspace, stored by its reduced column echelon basis.

    Two subspaces are equal iff their canonical basis matrices are equal.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, spanning: Matrix):
        R, r = rref(spanning)
        self.ambient_dim = spanning.nrows
        self.basis = R.submatrix(range(R.nrows), range(r))

    @classmethod
    def span(cls, vectors: Sequence[Sequence], ambient_dim: int | None = None) -> "Subspace":
        vectors = list(vectors)
        if ambient_dim is None:
            ambient_dim = len(vectors[0])
        return cls(Matrix.from_columns(vectors, ambient_dim))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls.span([[1 if i == j else 0 for i in range(n)] for j in indices], n)

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def columns(self) -> list[tuple]:
        return self.basis.columns()

    def contains(self, v: Sequence) -> bool:
        M = self.basis.hstack(Matrix.from_columns([v], self.ambient_dim))
        return rank(M) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return rank(self.basis.hstack(other.basis)) == self.dim

    def annihilator(self) -> "Subspace":
        """The annihilator in dual coordinates (the kernel of the basis transpose)."""
        return Subspace(kernel(self.basis.T))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.ambient_dim}, basis={self.basis!r})"


def minors_tensor(M: Matrix) -> ExteriorTensor:
    """The k x k row minors of an n x k matrix, i.e. the wedge of its columns."""
    n, k = M.shape
    coeffs = {}
    for I in multi_indices(n, k):
        d = det(M.submatrix(I, range(k)))
        if d:
            coeffs[I] = d
    return ExteriorTensor(n, k, coeffs)


def plucker(H: Subspace) -> ExteriorTensor:
    """Plücker point of ``H``, scaled so the first nonzero coordinate is 1."""
    if H.dim == 0:
        raise ZeroTensorError("Plücker coordinates of the zero subspace")
    return minors_tensor(H.basis).canonical()


def interior(J: MultiIndex, v: ExteriorTensor) -> ExteriorTensor:
    """Contraction of ``v`` by ``e_J^*`` from the left.

    ``e_I = s * e_J ^ e_{I-J}`` gives ``s * e_{I-J}``.
    """
    out: dict[MultiIndex, Any] = {}
    Jset = set(J)
    for I, c in v._coeffs.items():
        if not Jset.issubset(I):
            continue
        rest = tuple(i for i in I if i not in Jset)
        s, _ = merge_sign(tuple(J), rest)
        out[rest] = c if s > 0 else -c
    return ExteriorTensor(v.dim, v.grade - len(J), out)


def wedge_annihilator(v: ExteriorTensor) -> Subspace:
    """``{w in V : w ^ v = 0}``; for nonzero decomposable v this is the plane of v."""
    n, k = v.dim, v.grade
    if k == n:
        return Subspace(Matrix.identity(n))
    rows_idx = index_positions(n, k + 1)
    M = [[_ZERO] * n for _ in rows_idx]
    for i in range(n):
        for I, c in v._coeffs.items():
            m = merge_sign((i,), I)
            if m is None:
                continue
            s, K = m
            M[rows_idx[K]][i] += c if s > 0 else -c
    return Subspace(kernel(Matrix(M, n)))


def is_decomposable(v: ExteriorTensor) -> bool:
    """Whether ``v = w_1 ^ ... ^ w_k`` for some vectors.

    Grade 2 uses ``v ^ v = 0``; other grades use the contraction criterion
    ``(i_phi v) ^ v = 0`` over a basis of ``(k-1)``-forms.
    """
    if v.is_zero():
        raise ZeroTensorError("the zero tensor is neither decomposable nor indecomposable")
    k = v.grade
    if k <= 1 or k >= v.dim - 1:
        return True
    if k == 2:
        return wedge(v, v).is_zero()
    for J in multi_indices(v.dim, k - 1):
        w = interior(J, v)
        if w and not wedge(w, v).is_zero():
            return False
    return True


def factor_decomposable(v: ExteriorTensor) -> Subspace:
    """The plane ``H`` with ``wedge^k H`` spanned by ``v``."""
    if v.is_zero():
        raise ZeroTensorError("cannot factor the zero tensor")
    if v.grade == 0:
        return Subspace(Matrix([[] for _ in range(v.dim)], 0))
    H = wedge_annihilator(v)
    if H.dim != v.grade:
        raise ValueError("tensor is not decomposable")
    return H


def hodge_star(v: ExteriorTensor, volume: VolumeForm) -> ExteriorTensor:
    """The functional ``beta -> volume(v ^ beta)`` in dual coordinates.

    The result has grade ``n - k`` and is indexed by complementary
    multi-indices of the dual basis.
    """
    n = v.dim
    if volume.dim != n:
        raise DimensionMismatch("volume form dimension")
    out = {}
    for I, c in v._coeffs.items():
        Ic = complement(I, n)
        s = complement_sign(I, n)
        out[Ic] = volume.scale * c if s > 0 else -(volume.scale * c)
    return ExteriorTensor(n, n - v.grade, out)


def exterior_power_apply(M: Matrix, v: ExteriorTensor) -> ExteriorTensor:
    """Apply ``wedge^k M`` to a grade-k tensor (columns of M are images of basis vectors)."""
    if M.ncols != v.dim:
        raise DimensionMismatch(f"matrix with {M.ncols} columns applied in dimension {v.dim}")
    n_out = M.nrows
    cols = [ExteriorTensor.vector(M.column(j)) for j in range(M.ncols)]
    out = ExteriorTensor.zero(n_out, v.grade)
    cache: dict[MultiIndex, ExteriorTensor] = {(): ExteriorTensor.scalar(n_out, 1)}

    def image(J: MultiIndex) -> ExteriorTensor:
        if J not in cache:
            cache[J] = wedge(image(J[:-1]), cols[J[-1]])
        return cache[J]

    for J, c in v.items():
        out = out + image(J) * c
    return out


def exterior_power_matrix(M: Matrix, k: int) -> Matrix:
    """Matrix of ``wedge^k M`` in lexicographic multi-index bases."""
    n_out, n_in = M.shape
    cols = []
    for J in multi_indices(n_in, k):
        cols.append(exterior_power_apply(M, ExteriorTensor(n_in, k, {J: 1})).to_vector())
    return Matrix.from_columns(cols, comb(n_out, k))


def dual_map(v: ExteriorTensor, psi: Matrix, volume: VolumeForm) -> ExteriorTensor:
    """``v -> (wedge^(n-k) psi)(*v)`` for an isomorphism ``psi: V^* -> V``.

    On Plücker points this is ``H -> psi(H^perp)``.
    """
    if psi.shape != (v.dim, v.dim):
        raise DimensionMismatch("psi must be n x n")
    if not det(psi):
        raise SingularMatrixError("psi is singular")
    return exterior_power_apply(psi, hodge_star(v, volume))


def dual_subspace(H: Subspace, psi: Matrix) -> Subspace:
    """``H^psi = psi(H^perp)``, computed without exterior algebra."""
    return Subspace(psi @ H.annihilator().basis)


def dual_square_map(psi: Matrix) -> Matrix:
    """``A = psi o chi`` where ``u(chi(v)) = v(psi^{-1}(u))``; in coordinates ``psi psi^{-T}``."""
    return psi @ psi.inverse().T


def grassmannian_degree(m: int, n: int) -> int:
    """Degree of the Grassmannian of m-planes in n-space in its Plücker embedding."""
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    num = factorial(m * (n - m)) * prod(factorial(i) for i in range(1, n - m))
    den = prod(factorial(i) for i in range(m, n))
    q, r = divmod(num, den)
    assert r == 0
    return q


class EigenWitness(NamedTuple):
    eigenvalue: Fraction
    witness: Subspace
    eigenspace: tuple[MultiIndex, ...]


def eigenspace_meets_grassmannian(eigenvalues: Sequence, m: int) -> list[EigenWitness]:
    """For diagonal psi, a coordinate m-plane in every eigenspace of ``wedge^m psi``.

    Eigenvalues of ``wedge^m psi`` are the products over m-subsets; each
    eigenspace is spanned by basis tensors, which are Plücker points.
    """
    lams = [scalar(x) for x in eigenvalues]
    n = len(lams)
    groups: dict[Fraction, list[MultiIndex]] = {}
    for I in multi_indices(n, m):
        groups.setdefault(prod((lams[i] for i in I), start=Fraction(1)), []).append(I)
    return [
        EigenWitness(lam, Subspace.coordinate(n, idx[0]), tuple(idx)) for lam, idx in groups.items()
    ]
