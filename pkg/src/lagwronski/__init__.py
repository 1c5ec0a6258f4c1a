"""Exact exterior algebra, Lagrangian involutions, Wronski maps and pole placement."""

__version__ = "0.1.0"

from .errors import (
    CenterPointError,
    DimensionMismatch,
    DomainError,
    GradeError,
    LWError,
    NotAdmissibleError,
    PreconditionError,
    SingularMatrixError,
    ZeroTensorError,
)
from .exact import Matrix, Poly, QuadraticNumber, RatFun, kernel, rank, rref
from .exterior import ExteriorTensor, Subspace, VolumeForm, dual_map, hodge_star, plucker, wedge
from .symplectic import SymplecticSpace
from .projection import Center, ProjectionMap, project
from .diffop import DiffOperator, PolyBasis, wronskian
from .syslin import StateSpace

__all__ = [
    "CenterPointError", "DimensionMismatch", "DomainError", "GradeError", "LWError",
    "NotAdmissibleError", "PreconditionError", "SingularMatrixError", "ZeroTensorError",
    "Matrix", "Poly", "QuadraticNumber", "RatFun", "kernel", "rank", "rref",
    "ExteriorTensor", "Subspace", "VolumeForm", "dual_map", "hodge_star", "plucker", "wedge",
    "SymplecticSpace", "Center", "ProjectionMap", "project",
    "DiffOperator", "PolyBasis", "wronskian", "StateSpace",
]
