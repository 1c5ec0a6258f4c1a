"""Exact scalars, polynomials, rational functions and dense matrices.

Scalars are :class:`fractions.Fraction`.  Complex and irrational points only
appear when solving quadratics, and are represented by
:class:`QuadraticNumber`, an element ``a + b*sqrt(d)`` of a quadratic
extension of the rationals (``d = -1`` gives the Gaussian rationals).

The linear algebra here is generic: it only uses ``+ - * /`` and comparison
with zero, so the same routines run over ``Fraction`` and over a fixed
quadratic extension.  Determinants use fraction-free elimination and also
work for matrices of :class:`Poly`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import isqrt
from typing import Any, Iterable, Sequence

from .errors import DimensionMismatch, DomainError, SingularMatrixError

Scalar = Fraction


def scalar(x) -> Fraction:
    """Coerce an int, string ``"p/q"`` or Fraction to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def _coerce_entry(x):
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return Fraction(x)
    return x


# ---------------------------------------------------------------------------
# quadratic extensions


_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))]


def square_split(n: int) -> tuple[int, int]:
    """Write ``n = c*c*d`` with ``d`` free of small square factors.

    Only primes below 1000 are stripped, so ``d`` is canonical for the
    sizes produced at desk scale but not guaranteed square-free in general.
    """
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    r = isqrt(n)
    if r * r == n:
        return r, sign
    c = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            c *= p
    r = isqrt(n)
    if r * r == n:
        return c * r, sign
    return c, sign * n


class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational ``a, b`` and integer non-square ``d``.

    Arithmetic collapses to a plain Fraction whenever the irrational part
    cancels, so rational results keep their ordinary type.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = scalar(a)
        self.b = scalar(b)
        self.d = int(d)
        r = isqrt(abs(self.d))
        if self.d >= 0 and r * r == self.d:
            raise DomainError(f"{d} is a perfect square")

    @staticmethod
    def make(a, b, d: int):
        if b == 0:
            return scalar(a)
        return QuadraticNumber(a, b, d)

    def _parts(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise DomainError(f"cannot mix sqrt({self.d}) and sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadraticNumber.make(self.a + p[0], self.b + p[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadraticNumber.make(self.a - p[0], self.b - p[1], self.d)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return QuadraticNumber.make(p[0] - self.a, p[1] - self.b, self.d)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        return QuadraticNumber.make(
            self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        return QuadraticNumber.make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        if isinstance(other, QuadraticNumber):
            return self * other.inverse()
        return QuadraticNumber.make(self.a / p[0], self.b / p[0], self.d)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return self.inverse() * p[0]

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out: Any = Fraction(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __str__(self):
        if self.a == 0:
            return f"{self.b}*sqrt({self.d})"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt({self.d})"

    def __repr__(self):
        return f"QuadraticNumber({self.a!s}, {self.b!s}, {self.d})"


def gaussian(a, b) -> Any:
    """The Gaussian rational ``a + b*i``."""
    return QuadraticNumber.make(a, b, -1)


def sqrt_rational(q) -> Any:
    """Exact square root of a rational: a Fraction or a QuadraticNumber."""
    q = scalar(q)
    if q == 0:
        return Fraction(0)
    c, d = square_split(q.numerator * q.denominator)
    if d == 1:
        return Fraction(c, q.denominator)
    return QuadraticNumber(0, Fraction(c, q.denominator), d)


def quadratic_roots(a, b, c) -> list[tuple[Any, int]]:
    """Roots of ``a x^2 + b x + c`` with multiplicities, exactly.

    Degenerate leading coefficient falls back to the linear equation.
    Returns ``[]`` for a nonzero constant and raises for the zero polynomial.
    """
    a, b, c = scalar(a), scalar(b), scalar(c)
    if a == 0:
        if b == 0:
            if c == 0:
                raise ValueError("zero polynomial has every root")
            return []
        return [(-c / b, 1)]
    disc = b * b - 4 * a * c
    if disc == 0:
        return [(-b / (2 * a), 2)]
    r = sqrt_rational(disc)
    return [((-b + r) / (2 * a), 1), ((-b - r) / (2 * a), 1)]


# ---------------------------------------------------------------------------
# univariate polynomials


class Poly:
    """Immutable univariate polynomial with rational coefficients.

    ``coeffs`` is ascending by degree with no trailing zeros; the zero
    polynomial has ``coeffs == ()`` and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def t(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def _lift(cls, x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return cls([x])
        return None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else Fraction(0))
        return hash(self.coeffs)

    def __add__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in itertools.zip_longest(a, b, fillvalue=0)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        if not o.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = o.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(o.coeffs) - 1] / lead
            quo[k] = c
            if c:
                for j, y in enumerate(o.coeffs):
                    rem[k + j] -= c * y
        return Poly(quo), Poly(rem[: len(o.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        """Division by a scalar, or exact division by a polynomial."""
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            return Poly([c / other for c in self.coeffs])
        if isinstance(other, Poly):
            q, r = divmod(self, other)
            if r:
                raise ValueError(f"{other} does not divide {self}")
            return q
        return NotImplemented

    def __call__(self, x):
        acc: Any = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self, order: int = 1) -> "Poly":
        cs = list(self.coeffs)
        for _ in range(order):
            cs = [k * c for k, c in enumerate(cs)][1:]
        return Poly(cs)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self / self.lc

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mon:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}*{mon}")
        return " + ".join(reversed(terms)).replace("+ -", "- ")


def poly_derivative(p: Poly, order: int = 1) -> Poly:
    return p.derivative(order)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_gcd_many(ps: Iterable[Poly]) -> Poly:
    return reduce(poly_gcd, ps, Poly())


class RatFun:
    """Reduced quotient of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = Poly._lift(num) if not isinstance(num, Poly) else num
        den = Poly([1]) if den is None else (Poly._lift(den) if not isinstance(den, Poly) else den)
        if num is None or den is None:
            raise TypeError("RatFun needs polynomial numerator and denominator")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly([1])
            return
        g = poly_gcd(num, den)
        num, den = num / g, den / g
        lead = den.lc
        self.num, self.den = num / lead, den / lead

    @classmethod
    def _lift(cls, x):
        if isinstance(x, RatFun):
            return x
        p = Poly._lift(x)
        return None if p is None else cls(p)

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("rational function division by zero")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = RatFun._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def is_strictly_proper(self) -> bool:
        return self.num.degree < self.den.degree

    def __repr__(self):
        return f"RatFun({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


# ---------------------------------------------------------------------------
# matrices


def _sum(items, zero=Fraction(0)):
    it = iter(items)
    try:
        acc = next(it)
    except StopIteration:
        return zero
    for x in it:
        acc = acc + x
    return acc


class Matrix:
    """Immutable dense matrix over an exact ring (usually the rationals)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(_coerce_entry(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls([[0] * c for _ in range(r)], c)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        columns = [tuple(c) for c in columns]
        if nrows is None:
            if not columns:
                raise ValueError("need nrows for an empty column list")
            nrows = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(nrows)], len(columns))

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            i, j = ij
            return self.rows[i][j]
        return self.rows[ij]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionMismatch("hstack row mismatch")
        return Matrix([a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise DimensionMismatch("vstack column mismatch")
        return Matrix(self.rows + other.rows, self.ncols)

    def map(self, f) -> "Matrix":
        return Matrix([[f(x) for x in r] for r in self.rows], self.ncols)

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape}")
        return Matrix([[x + y for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape}")
        return Matrix([[x - y for x, y in zip(a, b)] for a, b in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return NotImplemented
        c = _coerce_entry(c)
        return self.map(lambda x: x * c)

    def __rmul__(self, c) -> "Matrix":
        c = _coerce_entry(c)
        return self.map(lambda x: c * x)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Matrix(
                [[_sum(x * y for x, y in zip(r, c) if x and y) for c in cols] for r in self.rows],
                other.ncols,
            )
        v = tuple(_coerce_entry(x) for x in other)
        if len(v) != self.ncols:
            raise DimensionMismatch(f"cannot apply {self.shape} to a vector of length {len(v)}")
        return tuple(_sum(x * y for x, y in zip(r, v) if x and y) for r in self.rows)

    def det(self):
        return det(self)

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    def trace(self):
        return _sum(self.rows[i][i] for i in range(self.nrows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def row_reduce(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns, over any exact field."""
    a = [list(r) for r in M.rows]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        if r >= M.nrows:
            break
        p = next((i for i in range(r, M.nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r]
        inv = 1 / piv[c] if not isinstance(piv[c], Fraction) else Fraction(piv[c].denominator, piv[c].numerator)
        if piv[c] != 1:
            a[r] = piv = [x * inv if x else x for x in piv]
        support = [j for j in range(c, M.ncols) if piv[j]]
        for i in range(M.nrows):
            if i != r:
                f = a[i][c]
                if f:
                    row = a[i]
                    for j in support:
                        row[j] = row[j] - f * piv[j]
        pivots.append(c)
        r += 1
    return Matrix(a, M.ncols), tuple(pivots)


def rref(M: Matrix) -> tuple[Matrix, int]:
    """Reduced column echelon form and rank; the column span is unchanged.

    The nonzero columns come first.  Two matrices have the same column span
    iff their reduced column echelon forms agree.
    """
    R, piv = row_reduce(M.T)
    return R.T, len(piv)


def rank(M: Matrix) -> int:
    return len(row_reduce(M)[1])


def kernel(M: Matrix) -> Matrix:
    """Basis of the right null space, as the columns of an ``ncols x d`` matrix."""
    R, piv = row_reduce(M)
    free = [j for j in range(M.ncols) if j not in set(piv)]
    cols = []
    zero = Fraction(0)
    for f in free:
        v = [zero] * M.ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R.rows[i][f]
        cols.append(v)
    return Matrix.from_columns(cols, M.ncols) if cols else Matrix([[] for _ in range(M.ncols)], 0)


def solve(M: Matrix, b: Sequence) -> tuple | None:
    """One solution of ``M x = b``, or None when the system is inconsistent."""
    if len(b) != M.nrows:
        raise DimensionMismatch("right-hand side length")
    aug = Matrix([list(r) + [_coerce_entry(x)] for r, x in zip(M.rows, b)], M.ncols + 1)
    R, piv = row_reduce(aug)
    if piv and piv[-1] == M.ncols:
        return None
    x = [Fraction(0)] * M.ncols
    for i, p in enumerate(piv):
        x[p] = R.rows[i][M.ncols]
    return tuple(x)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise DimensionMismatch("inverse of a non-square matrix")
    n = M.nrows
    R, piv = row_reduce(M.hstack(Matrix.identity(n)))
    if piv[:n] != tuple(range(n)):
        raise SingularMatrixError("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))


def det(M: Matrix):
    """Determinant by fraction-free (Bareiss) elimination.

    Works for any commutative ring whose exact quotients are computed by
    ``/``; in particular rationals, quadratic numbers and :class:`Poly`.
    """
    if not M.is_square():
        raise DimensionMismatch("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in M.rows]
    sign = 1
    prev: Any = 1
    for k in range(n - 1):
        if not a[k][k]:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return a[k][k] - a[k][k]
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
        prev = akk
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def charpoly_and_adjugate(A: Matrix) -> tuple[Poly, list[Matrix]]:
    """Faddeev-LeVerrier: ``det(sI - A)`` and matrices ``M_k`` with
    ``adj(sI - A) = sum_k M_k s^(N-k)`` for ``k = 1..N``."""
    if not A.is_square():
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    n = A.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = Matrix.zeros(n, n)
    I = Matrix.identity(n)
    mats = []
    for k in range(1, n + 1):
        Mk = A @ Mk + I * coeffs[n - k + 1]
        mats.append(Mk)
        coeffs[n - k] = -(A @ Mk).trace() / k
    return Poly(coeffs), mats


def charpoly(A: Matrix) -> Poly:
    return charpoly_and_adjugate(A)[0]


def resolvent_adjugate(A: Matrix) -> Matrix:
    """``adj(sI - A)`` as a matrix of polynomials in ``s``."""
    _, mats = charpoly_and_adjugate(A)
    n = A.nrows
    return Matrix(
        [[Poly([mats[n - 1 - d].rows[i][j] for d in range(n)]) for j in range(n)] for i in range(n)],
        n,
    )


def poly_matrix_coefficients(M: Matrix) -> list[Matrix]:
    """Split a matrix of polynomials into its coefficient matrices by degree."""
    deg = max((p.degree for r in M.rows for p in r), default=-1)
    return [
        Matrix([[p.coeff(d) for p in r] for r in M.rows], M.ncols) for d in range(deg + 1)
    ]
