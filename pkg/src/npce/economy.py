"""Linear structure of the economy: balance matrix A and technology matrix B."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._linalg import perron_root
from .errors import DimensionMismatch, NegativeEntry, NotProductive, ZeroRowOrColumn

TOL_RHO = 1e-9
TOL_ENTRY = 1e-10


@dataclass(frozen=True)
class ProductivityReport:
    spectral_radius: float
    is_productive: bool
    leontief_inverse: Optional[np.ndarray]
    min_inverse_entry: float


@dataclass(frozen=True, eq=False)
class Economy:
    """Validated economy with ``n`` products and ``m`` factors.

    ``A[i, j]`` is the amount of product i used per unit of product j, and
    ``B[i, j]`` the amount of factor i used per unit of product j.  Build
    instances with :func:`validate_economy`.
    """

    A: np.ndarray
    B: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[0]

    @property
    def I_minus_A(self) -> np.ndarray:
        return np.eye(self.n) - self.A

    def profit(self, lam):
        """Per-unit profit ``(I - A)^T lam`` at product prices ``lam``."""
        return self.I_minus_A.T @ np.asarray(lam, dtype=float)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def productivity_report(A) -> ProductivityReport:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"balance matrix must be square, got shape {A.shape}")
    rho = perron_root(A)
    productive = rho < 1.0 - TOL_RHO
    inv = None
    min_entry = float("nan")
    if productive:
        inv = np.linalg.solve(np.eye(A.shape[0]) - A, np.eye(A.shape[0]))
        inv.setflags(write=False)
        min_entry = float(inv.min())
    return ProductivityReport(rho, bool(productive), inv, min_entry)


def _check_structure(name, M):
    if not np.all(np.isfinite(M)):
        raise DimensionMismatch(f"{name} has non-finite entries")
    if np.any(M < 0):
        i, j = np.argwhere(M < 0)[0]
        raise NegativeEntry(f"{name}[{i},{j}] = {M[i, j]} < 0")
    zero_rows = np.flatnonzero(~M.any(axis=1))
    zero_cols = np.flatnonzero(~M.any(axis=0))
    if zero_rows.size or zero_cols.size:
        raise ZeroRowOrColumn(
            f"{name} has zero rows {zero_rows.tolist()} / columns {zero_cols.tolist()}"
        )


def validate_economy(A, B) -> Economy:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"A must be square, got shape {A.shape}")
    if B.ndim != 2 or B.shape[1] != A.shape[0]:
        raise DimensionMismatch(f"B must be m x {A.shape[0]}, got shape {B.shape}")
    _check_structure("A", A)
    _check_structure("B", B)
    report = productivity_report(A)
    if not report.is_productive:
        raise NotProductive(
            f"spectral radius {report.spectral_radius:.12g} is not below 1 - {TOL_RHO:g}"
        )
    return Economy(_frozen(A), _frozen(B))
