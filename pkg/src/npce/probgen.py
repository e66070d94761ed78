"""Seeded generation of test economies.

All randomness comes from :class:`npce.rng.SplitMix64`.  For a
``GenSpec`` the draws happen in this order:

1. balance matrix A (:func:`random_productive`): a permutation of ``n``
   marking one forced entry per row/column, then for every cell in
   row-major order two uniforms (presence, value in [0.1, 1)), then one
   uniform scale in [0.5, 0.9] applied to ``A / max_row_sum``;
2. technology matrix B: permutations of ``m`` and ``n`` marking forced
   entries ``(perm_m[k % m], perm_n[k % n])`` for ``k < max(m, n)``, then the
   same two uniforms per cell;
3. orthogonal factors for P, C, R in that order, each the product of
   ``dim`` Householder reflections with standard normal vectors;
4. the planted point: x, lam, v uniform in [0.5, 5];
5. for boundary planting, a permutation of ``2n+m`` whose first entries are
   pinned at zero, then one slack in [0.5, 2] per pinned component.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .economy import Economy, validate_economy
from .errors import BadModuli
from .instance import Instance
from .operators import AffineOperator, OperatorTriple, g_matrix, modulus_bundle
from .rng import SplitMix64
from .vi import Point

GENERATOR_VERSION = "npce-splitmix64/1"
RELAXATION_NOTE = ("operators are affine and need not map the orthant into itself; "
                   "nonnegativity of p, c, r holds near the planted point only")

INTERIOR = "interior"
BOUNDARY = "boundary"
NONE = "none"

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    seed: int = 0
    density: float = 0.5
    target_moduli: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    planting: str = INTERIOR
    boundary_fraction: float = 0.25
    spread: float = 3.0  # eigenvalue spread relative to the target modulus

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if not 0 < self.density <= 1:
            raise ValueError("density must be in (0, 1]")
        if self.planting not in (INTERIOR, BOUNDARY, NONE):
            raise ValueError(f"unknown planting {self.planting!r}")
        if not 0 <= self.seed <= _SEED_MASK:
            raise ValueError("seed must be an unsigned 64-bit integer")


def _random_nonneg(rng, rows, cols, density, forced):
    M = np.zeros((rows, cols))
    for i in range(rows):
        for j in range(cols):
            present = rng.uniform() < density
            value = rng.uniform(0.1, 1.0)
            if present or (i, j) in forced:
                M[i, j] = value
    return M


def _productive(rng, n, density):
    perm = rng.permutation(n)
    A = _random_nonneg(rng, n, n, density, {(i, perm[i]) for i in range(n)})
    scale = rng.uniform(0.5, 0.9)
    return A * (scale / A.sum(axis=1).max())


def random_productive(n: int, density: float = 0.5, seed: int = 0) -> np.ndarray:
    """Nonnegative n x n matrix with no zero row/column and ``rho(A) <= 0.9``.

    The largest row sum is scaled to a value in [0.5, 0.9], and the spectral
    radius of a nonnegative matrix never exceeds its largest row sum.
    """
    return _productive(SplitMix64(seed), n, density)


def _technology(rng, m, n, density):
    pm, pn = rng.permutation(m), rng.permutation(n)
    forced = {(pm[k % m], pn[k % n]) for k in range(max(m, n))}
    return _random_nonneg(rng, m, n, density, forced)


def _orthogonal(rng, dim):
    Q = np.eye(dim)
    for _ in range(dim):
        w = np.array([rng.normal() for _ in range(dim)])
        w /= np.linalg.norm(w)
        Q = Q - 2.0 * np.outer(Q @ w, w)
    return Q


def _shaped(Q, low, spread):
    dim = Q.shape[0]
    if dim == 1:
        eig = np.array([low])
    else:
        eig = low + spread * low * np.arange(dim) / (dim - 1)
    S = Q.T @ np.diag(eig) @ Q
    return 0.5 * (S + S.T)


def plant_offsets(eco: Economy, P, C, R, planted: Point, slack=None) -> OperatorTriple:
    """Offsets that make ``planted`` an equilibrium of ``(P, C, R)``.

    Without ``slack`` every pseudo-gradient component vanishes at the planted
    point.  ``slack`` is a length ``2n+m`` vector of nonnegative values; a
    positive entry makes that component strictly negative (an inactive
    constraint) and must sit where the planted point is zero.
    """
    IA = eco.I_minus_A
    x, lam, v = planted.x, planted.lam, planted.v
    q = IA.T @ lam - eco.B.T @ v - P @ x
    d = IA @ x - C @ lam
    s = eco.B @ x - R @ v
    if slack is not None:
        slack = np.asarray(slack, dtype=float)
        n = eco.n
        if np.any(slack < 0) or np.any((slack > 0) & (planted.flatten() != 0)):
            raise ValueError("slack must be nonnegative and sit on zero components")
        q = q + slack[:n]
        d = d - slack[n:2 * n]
        s = s + slack[2 * n:]
    return OperatorTriple(AffineOperator(P, q), AffineOperator(C, d), AffineOperator(R, s))


def _planted_point(rng, n, m):
    return (np.array([rng.uniform(0.5, 5.0) for _ in range(n)]),
            np.array([rng.uniform(0.5, 5.0) for _ in range(n)]),
            np.array([rng.uniform(0.5, 5.0) for _ in range(m)]))


def _draw(spec: GenSpec):
    rng = SplitMix64(spec.seed)
    A = _productive(rng, spec.n, spec.density)
    B = _technology(rng, spec.m, spec.n, spec.density)
    eco = validate_economy(A, B)
    Qp, Qc, Qr = _orthogonal(rng, spec.n), _orthogonal(rng, spec.n), _orthogonal(rng, spec.m)
    y = np.concatenate(_planted_point(rng, spec.n, spec.m))
    slack = np.zeros_like(y)
    if spec.planting == BOUNDARY:
        k = y.size
        count = min(k, max(1, round(spec.boundary_fraction * k)))
        pinned = sorted(rng.permutation(k)[:count])
        for i in pinned:
            y[i] = 0.0
            slack[i] = rng.uniform(0.5, 2.0)
    return rng, eco, (Qp, Qc, Qr), Point.unflatten(y, spec.n), slack


def _meta(spec: GenSpec, **extra):
    meta = {"seed": spec.seed, "generator-version": GENERATOR_VERSION,
            "notes": RELAXATION_NOTE, "planting": spec.planting,
            "density": spec.density, "target_moduli": list(spec.target_moduli)}
    meta.update(extra)
    return meta


def planted_instance(spec: GenSpec) -> Instance:
    """Economy and affine operators with a known equilibrium.

    P, R are symmetric positive definite and C negative definite, with
    extreme eigenvalues equal to the target moduli.  For ``planting="none"``
    the offsets are random and no equilibrium is recorded.
    """
    alpha, beta, gamma = spec.target_moduli
    if spec.planting != NONE and min(alpha, beta, gamma) <= 0:
        raise BadModuli(f"planting needs positive moduli, got {spec.target_moduli}")
    if min(alpha, beta, gamma) < 0:
        raise BadModuli("moduli must be nonnegative")
    rng, eco, (Qp, Qc, Qr), planted, slack = _draw(spec)
    P = _shaped(Qp, alpha, spec.spread)
    C = -_shaped(Qc, beta, spec.spread)
    R = _shaped(Qr, gamma, spec.spread)
    if spec.planting == NONE:
        n, m = spec.n, spec.m
        q = np.array([rng.uniform(0.0, 1.0) for _ in range(n)])
        d = np.array([rng.uniform(1.0, 5.0) for _ in range(n)])
        s = np.array([rng.uniform(0.0, 1.0) for _ in range(m)])
        ops = OperatorTriple(AffineOperator(P, q), AffineOperator(C, d), AffineOperator(R, s))
        return Instance(eco, ops, None, _meta(spec))
    ops = plant_offsets(eco, P, C, R, planted, slack)
    return Instance(eco, ops, planted, _meta(spec))


def shaped_instance(n: int, m: int, seed: int, kappa: float, spread: float = 0.25,
                    density: float = 0.5, tol: float = 0.05) -> Instance:
    """Interior planted instance whose condition number ``delta/L`` is ``kappa``.

    All three moduli equal a common scale ``delta`` found by bisection;
    ``delta/L`` is nondecreasing in ``delta`` and tends to ``1/(1+spread)``,
    so larger targets are unreachable.  Misses beyond relative ``tol`` raise
    :class:`BadModuli`.
    """
    if not 0 < kappa < 1:
        raise BadModuli(f"kappa target must be in (0, 1), got {kappa}")
    spec = GenSpec(n, m, seed, density, (1.0, 1.0, 1.0), INTERIOR, spread=spread)
    _, eco, (Qp, Qc, Qr), planted, _ = _draw(spec)
    P1, C1, R1 = _shaped(Qp, 1.0, spread), -_shaped(Qc, 1.0, spread), _shaped(Qr, 1.0, spread)

    def build(delta):
        return plant_offsets(eco, delta * P1, delta * C1, delta * R1, planted)

    def cond(delta):
        return delta / np.linalg.norm(g_matrix(eco, build(delta)), 2)

    lo, hi = -20.0, 20.0  # log10 of delta
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cond(10.0 ** mid) < kappa:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    ops = build(10.0 ** (0.5 * (lo + hi)))
    got = modulus_bundle(eco, ops).kappa
    if abs(got - kappa) > tol * kappa:
        raise BadModuli(f"could not shape kappa={kappa}: reached {got:.4g} "
                        f"(limit {1 / (1 + spread):.4g} for spread {spread})")
    meta = _meta(spec, kappa_target=kappa, spread=spread)
    return Instance(eco, ops, planted, meta)


def monotone_only_instance(n: int, m: int, seed: int, offsets=None,
                           density: float = 0.5) -> Instance:
    """Economy with zero operator matrices, so ``delta = 0``.

    ``offsets`` is ``(q, d, s)``; the caller must make sure an equilibrium
    exists.  Without it one is planted: offsets are chosen so that a random
    positive point zeroes the pseudo-gradient; the instance records no
    planted point because the solution set is not a singleton in general.
    """
    rng = SplitMix64(seed)
    eco = validate_economy(_productive(rng, n, density), _technology(rng, m, n, density))
    Zn, Zm = np.zeros((n, n)), np.zeros((m, m))
    if offsets is None:
        point = Point(*_planted_point(rng, n, m))
        ops = plant_offsets(eco, Zn, Zn, Zm, point)
    else:
        q, d, s = offsets
        ops = OperatorTriple(AffineOperator(Zn, q), AffineOperator(Zn, d), AffineOperator(Zm, s))
    meta = {"seed": seed, "generator-version": GENERATOR_VERSION,
            "notes": RELAXATION_NOTE, "planting": "monotone-only"}
    return Instance(eco, ops, None, meta)
