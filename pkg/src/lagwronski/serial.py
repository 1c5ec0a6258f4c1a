"""JSON conventions shared by the library and the CLI.

Scalars are strings ``"p/q"`` (``"p"`` when q = 1), polynomials ascending
coefficient arrays, matrices row-major nested arrays, tensors lists of
``{"index": [...], "coeff": "p/q"}`` in ascending lexicographic index order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .errors import GradeError
from .exact import Matrix, Poly, QuadraticNumber, RatFun
from .exterior import ExteriorTensor, Subspace


def scalar_to_json(x) -> Any:
    if isinstance(x, Poly):
        return poly_to_json(x)
    if isinstance(x, RatFun):
        return {"num": poly_to_json(x.num), "den": poly_to_json(x.den)}
    if isinstance(x, (Fraction, int, QuadraticNumber)):
        return str(x)
    raise TypeError(f"cannot serialize {x!r}")


def scalar_from_json(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise ValueError(f"expected a scalar string or integer, got {x!r}")


def poly_to_json(p: Poly) -> list[str]:
    return [str(c) for c in p.coeffs]


def poly_from_json(data) -> Poly:
    if not isinstance(data, list):
        raise ValueError(f"expected a coefficient array, got {data!r}")
    return Poly(scalar_from_json(c) for c in data)


def matrix_to_json(M: Matrix) -> list[list]:
    return [[scalar_to_json(x) for x in r] for r in M.rows]


def matrix_from_json(data, ncols: int | None = None) -> Matrix:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ValueError("expected a row-major nested array")
    return Matrix([[scalar_from_json(x) for x in r] for r in data], ncols)


def tensor_to_json(t: ExteriorTensor) -> list[dict]:
    return [{"index": list(I), "coeff": scalar_to_json(c)} for I, c in t.items()]


def tensor_from_json(data, dim: int, grade: int | None = None) -> ExteriorTensor:
    if not isinstance(data, list):
        raise ValueError("expected a list of {index, coeff} entries")
    items = []
    for entry in data:
        if not isinstance(entry, dict) or "index" not in entry or "coeff" not in entry:
            raise ValueError(f"malformed tensor entry {entry!r}")
        items.append((tuple(int(i) for i in entry["index"]), scalar_from_json(entry["coeff"])))
    if grade is None:
        if not items:
            raise GradeError("cannot infer the grade of an empty tensor")
        grade = len(items[0][0])
    return ExteriorTensor(dim, grade, items)


def subspace_to_json(H: Subspace) -> list[list]:
    return matrix_to_json(H.basis)


def to_json(obj) -> Any:
    """Recursively convert library values into JSON-ready structures."""
    if isinstance(obj, ExteriorTensor):
        return tensor_to_json(obj)
    if isinstance(obj, Subspace):
        return subspace_to_json(obj)
    if isinstance(obj, Matrix):
        return matrix_to_json(obj)
    if isinstance(obj, (Poly, RatFun, Fraction, QuadraticNumber)):
        return scalar_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    return obj
