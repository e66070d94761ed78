"""Affine production, consumption and factor operators and their moduli.

Each operator is ``u -> M u + b``.  When ``M`` is symmetric this is the
gradient of ``0.5 u^T M u + b^T u``; nonsymmetric ``M`` is accepted too, the
moduli only depend on the symmetric part ``(M + M^T) / 2``.
"""

from dataclasses import dataclass

import numpy as np

from ._linalg import spectral_norm
from .errors import DimensionMismatch, WrongSign

TOL_EIG = 1e-10

INCREASING = "increasing"
DECREASING = "decreasing"


@dataclass(frozen=True, eq=False)
class AffineOperator:
    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        M = np.atleast_2d(np.array(self.matrix, dtype=float))
        b = np.atleast_1d(np.array(self.offset, dtype=float))
        if M.ndim != 2 or M.shape[0] != M.shape[1] or b.shape != (M.shape[0],):
            raise DimensionMismatch(
                f"operator needs a square matrix and matching offset, got {M.shape} and {b.shape}"
            )
        if not (np.all(np.isfinite(M)) and np.all(np.isfinite(b))):
            raise DimensionMismatch("operator data must be finite")
        M.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "offset", b)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, u):
        return eval_operator(self, u)

    def with_offset(self, offset) -> "AffineOperator":
        return AffineOperator(self.matrix, offset)


@dataclass(frozen=True, eq=False)
class OperatorTriple:
    """Production cost ``p(x)``, consumption ``c(lam)`` and factor supply ``r(v)``."""

    p: AffineOperator
    c: AffineOperator
    r: AffineOperator

    def __post_init__(self):
        if self.p.dim != self.c.dim:
            raise DimensionMismatch(f"p has dim {self.p.dim} but c has dim {self.c.dim}")

    def check(self, eco):
        if self.p.dim != eco.n or self.r.dim != eco.m:
            raise DimensionMismatch(
                f"operators sized (n={self.p.dim}, m={self.r.dim}) for economy (n={eco.n}, m={eco.m})"
            )


@dataclass(frozen=True)
class ModulusBundle:
    alpha: float
    beta: float
    gamma: float
    delta: float
    L: float
    kappa: float

    def as_dict(self):
        return {k: getattr(self, k) for k in ("alpha", "beta", "gamma", "delta", "L", "kappa")}


def eval_operator(op: AffineOperator, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (op.dim,):
        raise DimensionMismatch(f"expected vector of length {op.dim}, got shape {u.shape}")
    return op.matrix @ u + op.offset


def monotonicity_modulus(op: AffineOperator, orientation: str) -> float:
    """Strong monotonicity modulus of ``op`` in the given orientation.

    Increasing operators return the smallest eigenvalue of the symmetric part,
    decreasing ones the negated largest eigenvalue.  Values within ``TOL_EIG``
    of the wrong sign are clamped to zero.
    """
    sym = 0.5 * (op.matrix + op.matrix.T)
    eig = np.linalg.eigvalsh(sym)
    if orientation == INCREASING:
        mod = float(eig[0])
    elif orientation == DECREASING:
        mod = -float(eig[-1])
    else:
        raise ValueError(f"orientation must be {INCREASING!r} or {DECREASING!r}")
    if mod < -TOL_EIG:
        raise WrongSign(f"operator is not monotone {orientation} (modulus {mod:.3g})")
    return mod if mod > 0 else 0.0


def g_matrix(eco, ops: OperatorTriple) -> np.ndarray:
    """Jacobian of the pseudo-gradient, rows ordered (x, lam, v)."""
    ops.check(eco)
    n, m = eco.n, eco.m
    IA = eco.I_minus_A
    M = np.zeros((2 * n + m, 2 * n + m))
    M[:n, :n] = -ops.p.matrix
    M[:n, n:2 * n] = IA.T
    M[:n, 2 * n:] = -eco.B.T
    M[n:2 * n, :n] = -IA
    M[n:2 * n, n:2 * n] = ops.c.matrix
    M[2 * n:, :n] = eco.B
    M[2 * n:, 2 * n:] = -ops.r.matrix
    return M


def g_offset(ops: OperatorTriple) -> np.ndarray:
    """Pseudo-gradient at the origin: ``(-q, d, -s)``."""
    return np.concatenate([-ops.p.offset, ops.c.offset, -ops.r.offset])


def lipschitz_of_g(eco, ops: OperatorTriple) -> float:
    return spectral_norm(g_matrix(eco, ops))


def modulus_bundle(eco, ops: OperatorTriple) -> ModulusBundle:
    alpha = monotonicity_modulus(ops.p, INCREASING)
    beta = monotonicity_modulus(ops.c, DECREASING)
    gamma = monotonicity_modulus(ops.r, INCREASING)
    delta = min(alpha, beta, gamma)
    L = lipschitz_of_g(eco, ops)
    # delta <= L always; guard against power-iteration rounding
    assert delta <= L * (1 + 1e-9), (delta, L)
    kappa = min(delta / L, 1.0)
    return ModulusBundle(alpha, beta, gamma, delta, L, kappa)
