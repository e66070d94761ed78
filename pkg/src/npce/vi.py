"""Pseudo-gradient operator, projection onto the nonnegative orthant and
equilibrium certificates.

The composite variable is ``y = (x, lam, v)``: production, product prices and
factor prices.  An equilibrium is a point of the orthant with ``g(y) <= 0``
and ``<y, g(y)> = 0``.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import DimensionMismatch, NonpositiveStep, NotInOmega


@dataclass(frozen=True, eq=False)
class Point:
    x: np.ndarray
    lam: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("x", "lam", "v"):
            a = np.atleast_1d(np.array(getattr(self, name), dtype=float))
            if a.ndim != 1:
                raise DimensionMismatch(f"{name} must be a vector")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if self.x.shape != self.lam.shape:
            raise DimensionMismatch("x and lam must have the same length")

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def m(self) -> int:
        return self.v.size

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.x, self.lam, self.v])

    @classmethod
    def unflatten(cls, y, n: int) -> "Point":
        y = np.asarray(y, dtype=float)
        if y.ndim != 1 or y.size < 2 * n:
            raise DimensionMismatch(f"vector of length {y.size} cannot hold n={n}")
        return cls(y[:n], y[n:2 * n], y[2 * n:])

    @classmethod
    def ones(cls, n: int, m: int) -> "Point":
        return cls(np.ones(n), np.ones(n), np.ones(m))

    def as_dict(self):
        return {"x": self.x.tolist(), "lambda": self.lam.tolist(), "v": self.v.tolist()}


def _coerce(y, eco) -> Point:
    if not isinstance(y, Point):
        y = Point.unflatten(y, eco.n)
    if y.n != eco.n or y.m != eco.m:
        raise DimensionMismatch(
            f"point sized (n={y.n}, m={y.m}) for economy (n={eco.n}, m={eco.m})"
        )
    return y


def pseudo_gradient(eco, ops, y) -> np.ndarray:
    """Stacked ``((I-A)^T lam - p(x) - B^T v; c(lam) - (I-A) x; B x - r(v))``."""
    ops.check(eco)
    y = _coerce(y, eco)
    IA = eco.I_minus_A
    gx = IA.T @ y.lam - ops.p(y.x) - eco.B.T @ y.v
    glam = ops.c(y.lam) - IA @ y.x
    gv = eco.B @ y.x - ops.r(y.v)
    return np.concatenate([gx, glam, gv])


def project_onto_omega(y_raw, n: int) -> Point:
    return Point.unflatten(np.maximum(np.asarray(y_raw, dtype=float), 0.0), n)


def natural_residual(eco, ops, y, t: float) -> float:
    if not t > 0:
        raise NonpositiveStep(f"step must be positive, got {t}")
    y = _coerce(y, eco)
    yf = y.flatten()
    g = pseudo_gradient(eco, ops, y)
    return float(np.linalg.norm(yf - np.maximum(yf + t * g, 0.0)))


@dataclass(frozen=True)
class ConstraintRow:
    """One complementarity pair: slack is the g-component, multiplier the y-component."""

    label: str
    slack: float
    multiplier: float
    product: float


@dataclass(frozen=True)
class Certificate:
    feasibility_violation: float
    complementarity_gap: float
    budget_gap: float
    natural_residual: float
    t0: float
    per_constraint: List[ConstraintRow] = field(default_factory=list)

    def gaps(self) -> Tuple[float, float, float, float]:
        return (self.feasibility_violation, self.complementarity_gap,
                self.budget_gap, self.natural_residual)

    def max_gap(self) -> float:
        return max(self.gaps())

    def as_dict(self):
        return {
            "feasibility_violation": self.feasibility_violation,
            "complementarity_gap": self.complementarity_gap,
            "budget_gap": self.budget_gap,
            "natural_residual": self.natural_residual,
            "t0": self.t0,
            "per_constraint": [
                {"index": r.label, "slack": r.slack, "multiplier": r.multiplier,
                 "product": r.product}
                for r in self.per_constraint
            ],
        }


def component_labels(n: int, m: int) -> List[str]:
    return ([f"x{j + 1}" for j in range(n)] + [f"lambda{j + 1}" for j in range(n)]
            + [f"v{i + 1}" for i in range(m)])


def budget_terms(eco, ops, y):
    """Return ``(<c(lam), lam>, <p(x), x>, <r(v), v>)``."""
    y = _coerce(y, eco)
    return (float(ops.c(y.lam) @ y.lam), float(ops.p(y.x) @ y.x),
            float(ops.r(y.v) @ y.v))


def certify(eco, ops, y, t0: float) -> Certificate:
    y = _coerce(y, eco)
    yf = y.flatten()
    if np.any(yf < 0):
        raise NotInOmega("certify expects a point with nonnegative components")
    g = pseudo_gradient(eco, ops, y)
    consumption, production, factors = budget_terms(eco, ops, y)
    rows = [ConstraintRow(lbl, float(s), float(mu), float(s * mu))
            for lbl, s, mu in zip(component_labels(eco.n, eco.m), g, yf)]
    return Certificate(
        feasibility_violation=max(0.0, float(g.max())),
        complementarity_gap=abs(float(yf @ g)),
        budget_gap=abs(consumption - production - factors),
        natural_residual=natural_residual(eco, ops, y, t0),
        t0=float(t0),
        per_constraint=rows,
    )
