"""Brute-force equilibrium oracle for tiny affine instances.

With affine operators the equilibrium conditions ``y >= 0``, ``g(y) <= 0``,
``<y, g(y)> = 0`` form a linear complementarity problem.  Every solution has
some set ``S`` of components pinned at zero with ``g_i(y) = 0`` off ``S``, so
trying all ``2**(2n+m)`` subsets finds every solution whose free subsystem is
nonsingular.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple

import numpy as np

from .errors import TooLarge
from .operators import g_matrix, g_offset, modulus_bundle
from .solvers import reference_step
from .vi import Point, certify, component_labels

MAX_DIM = 16
TOL_ORACLE = 1e-9
COND_LIMIT = 1e12
DEDUP_TOL = 1e-8


@dataclass
class OracleSolution:
    points: List[Point]
    active_sets: List[Tuple[str, ...]]
    residuals: List[dict]

    @property
    def unique(self) -> bool:
        return len(self.points) == 1


def _subsets(k):
    # all subsets, ordered by size then lexicographically
    for size in range(k + 1):
        yield from combinations(range(k), size)


def enumerate_equilibria(eco, ops, tol_oracle: float = TOL_ORACLE) -> OracleSolution:
    k = 2 * eco.n + eco.m
    if k > MAX_DIM:
        raise TooLarge(f"2n+m = {k} exceeds the enumeration cap {MAX_DIM}")
    M = g_matrix(eco, ops)
    b = g_offset(ops)
    labels = component_labels(eco.n, eco.m)

    found = []  # (active index tuple, y)
    for active in _subsets(k):
        free = np.setdiff1d(np.arange(k), active)
        y = np.zeros(k)
        if free.size:
            sub = M[np.ix_(free, free)]
            if np.linalg.cond(sub) > COND_LIMIT:
                continue
            y[free] = np.linalg.solve(sub, -b[free])
            if np.any(y[free] < -tol_oracle):
                continue
            y[free] = np.maximum(y[free], 0.0)
        g = M @ y + b
        if active and np.any(g[list(active)] > tol_oracle):
            continue
        if g.max() > tol_oracle or abs(y @ g) > tol_oracle:
            continue
        if any(np.linalg.norm(y - other) <= DEDUP_TOL for _, other in found):
            continue
        found.append((active, y))

    found.sort(key=lambda item: [labels[i] for i in item[0]])
    points, sets, residuals = [], [], []
    for active, y in found:
        pt = Point.unflatten(y, eco.n)
        cert = certify(eco, ops, pt, 1.0)
        points.append(pt)
        sets.append(tuple(labels[i] for i in active))
        residuals.append({
            "feasibility_violation": cert.feasibility_violation,
            "complementarity_gap": cert.complementarity_gap,
            "budget_gap": cert.budget_gap,
        })
    return OracleSolution(points, sets, residuals)


@dataclass
class CrossCheck:
    ok: bool
    distance: float
    via: str
    oracle: OracleSolution


def cross_validate(eco, ops, solver_point: Point, tol: float, unique=None) -> CrossCheck:
    """Compare a solver output with the oracle.

    ``unique`` says whether the solution set is a single point; by default
    it is taken from strong monotonicity (``delta > 0``).  For
    non-unique sets the oracle only sees vertex-type solutions, so the point
    is accepted when its own certificate gaps are within ``tol``.
    """
    sol = enumerate_equilibria(eco, ops)
    y = solver_point.flatten()
    dists = [float(np.linalg.norm(y - p.flatten())) for p in sol.points]
    best = min(dists) if dists else float("inf")
    if best <= tol:
        return CrossCheck(True, best, "distance", sol)
    moduli = modulus_bundle(eco, ops)
    if unique is None:
        unique = moduli.delta > 0
    if not unique:
        cert = certify(eco, ops, solver_point, reference_step(moduli))
        gaps = (cert.feasibility_violation, cert.complementarity_gap, cert.budget_gap,
                cert.natural_residual)
        return CrossCheck(max(gaps) <= tol, best, "certificate", sol)
    return CrossCheck(False, best, "distance", sol)
