"""Projected pseudo-gradient (PGP) and extra pseudo-gradient (EPG) iterations.

PGP:  y+ = P(y + t g(y))
EPG:  y^ = P(y + t g(y)),  y+ = P(y + t g(y^))

where ``P`` clamps every component at zero.  Both methods stop on the natural
residual ``||y - P(y + t g(y))||`` at their own step, which for PGP is the
length of the step just taken and for EPG the predictor displacement.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from .errors import NonpositiveStep, NotInOmega, StepInadmissible, ZeroDelta
from .operators import ModulusBundle, g_matrix, g_offset, modulus_bundle
from .vi import Certificate, Point, certify, project_onto_omega, pseudo_gradient

log = logging.getLogger(__name__)

PGP = "pgp"
EPG = "epg"
METHODS = (PGP, EPG)

# keeps the monotone-only EPG step strictly inside (0, 1/(sqrt(2) L))
EPG_SAFETY = 0.99


@dataclass(frozen=True)
class SolverConfig:
    method: str
    step: Union[str, float] = "auto"
    tol: float = 1e-8
    max_iters: int = 200_000
    log_every: int = 1
    start: Optional[Point] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.step != "auto" and not float(self.step) > 0:
            raise NonpositiveStep(f"step must be positive, got {self.step}")
        if not self.tol > 0 or self.max_iters < 1 or self.log_every < 1:
            raise ValueError("tol, max_iters and log_every must be positive")


@dataclass(frozen=True)
class HistoryRow:
    iter: int
    natural_residual: float
    dist_to_reference: Optional[float]


@dataclass(frozen=True)
class RateCertificate:
    method: str
    t: float
    q: float
    kappa: float
    formula_id: str


@dataclass
class SolveResult:
    final: Point
    iterations: int
    converged: bool
    residual_history: List[HistoryRow]
    step_used: float
    theoretical_ratio: Optional[float]
    certificate: Certificate
    method: str
    start: Point
    moduli: ModulusBundle
    rate: Optional[RateCertificate] = None
    wall_time: float = field(default=0.0, compare=False)


def step_bound(method: str, moduli: ModulusBundle) -> float:
    """Open upper end of the admissible step interval."""
    if method == PGP:
        return 2.0 * moduli.delta / moduli.L ** 2
    return 1.0 / (math.sqrt(2.0) * moduli.L)


def default_step(method: str, moduli: ModulusBundle) -> float:
    if method == PGP:
        if moduli.delta <= 0:
            raise ZeroDelta("PGP has no convergence guarantee when delta = 0; "
                            "pass a fixed step or use EPG")
        return moduli.delta / moduli.L ** 2
    if moduli.delta > 0:
        return 1.0 / (2.0 * moduli.L)
    return EPG_SAFETY / (math.sqrt(2.0) * moduli.L)


def reference_step(moduli: ModulusBundle) -> float:
    """Step at which certificates report the natural residual."""
    if moduli.delta > 0:
        return default_step(PGP, moduli)
    return 1.0 / (2.0 * moduli.L)


def check_step(method: str, t: float, moduli: ModulusBundle) -> None:
    if not t > 0:
        raise NonpositiveStep(f"step must be positive, got {t}")
    if method == PGP and moduli.delta <= 0:
        return  # no bound applies; the caller opted out of guarantees
    bound = step_bound(method, moduli)
    if not t < bound:
        raise StepInadmissible(f"{method} step {t:.6g} is not below the bound {bound:.6g}")


def rate_certificate(method: str, t: float, moduli: ModulusBundle) -> RateCertificate:
    """Predicted per-iteration contraction of the distance to the equilibrium."""
    if moduli.delta <= 0:
        raise ZeroDelta("rate certificates need delta > 0")
    check_step(method, t, moduli)
    d, L = moduli.delta, moduli.L
    if method == PGP:
        q = math.sqrt(1.0 - 2.0 * t * d + (t * L) ** 2)
        fid = "pgp:sqrt(1-2t*delta+t^2*L^2)"
    else:
        nu = 1.0 + 2.0 * d * t - 2.0 * (t * L) ** 2
        q = math.sqrt(1.0 - 2.0 * d * t + 4.0 * (d * t) ** 2 / nu)
        fid = "epg:sqrt(1-2*delta*t+4*(delta*t)^2/nu(t))"
    return RateCertificate(method, t, q, moduli.kappa, fid)


def _check_step_arg(t):
    if not t > 0:
        raise NonpositiveStep(f"step must be positive, got {t}")


def pgp_step(eco, ops, y: Point, t: float) -> Point:
    _check_step_arg(t)
    return project_onto_omega(y.flatten() + t * pseudo_gradient(eco, ops, y), eco.n)


def epg_step(eco, ops, y: Point, t: float):
    """Return ``(predictor, corrector)``."""
    _check_step_arg(t)
    yf = y.flatten()
    pred = project_onto_omega(yf + t * pseudo_gradient(eco, ops, y), eco.n)
    corr = project_onto_omega(yf + t * pseudo_gradient(eco, ops, pred), eco.n)
    return pred, corr


def resolve_step(config: SolverConfig, moduli: ModulusBundle) -> float:
    if config.step == "auto":
        return default_step(config.method, moduli)
    t = float(config.step)
    check_step(config.method, t, moduli)
    return t


def solve(eco, ops, config: SolverConfig, reference: Optional[Point] = None,
          moduli: Optional[ModulusBundle] = None) -> SolveResult:
    """Run PGP or EPG until the natural residual drops to ``config.tol``.

    Hitting ``max_iters`` is not an error: the result comes back with
    ``converged=False`` and the full history.  ``reference`` (typically a
    planted equilibrium) adds a distance column to the history.
    """
    moduli = moduli or modulus_bundle(eco, ops)
    t = resolve_step(config, moduli)
    start = config.start or Point.ones(eco.n, eco.m)
    y = start.flatten().copy()
    if y.size != 2 * eco.n + eco.m:
        raise NotInOmega("start point has the wrong dimension")
    if np.any(y < 0):
        raise NotInOmega("start point must have nonnegative components")
    ref = None if reference is None else reference.flatten()

    M = g_matrix(eco, ops)
    b = g_offset(ops)
    extra = config.method == EPG
    history: List[HistoryRow] = []

    def record(s, res):
        dist = None if ref is None else float(np.linalg.norm(y - ref))
        history.append(HistoryRow(s, res, dist))

    t_begin = time.perf_counter()
    s = 0
    converged = False
    while True:
        pred = np.maximum(y + t * (M @ y + b), 0.0)
        res = float(np.linalg.norm(y - pred))
        done = res <= config.tol or s >= config.max_iters
        if s % config.log_every == 0 or done:
            record(s, res)
        if done:
            converged = res <= config.tol
            break
        if extra:
            y = np.maximum(y + t * (M @ pred + b), 0.0)
        else:
            y = pred
        s += 1
    elapsed = time.perf_counter() - t_begin

    final = Point.unflatten(y, eco.n)
    rate = rate_certificate(config.method, t, moduli) if moduli.delta > 0 else None
    if not converged:
        log.info("%s stopped after %d iterations with residual %.3g", config.method, s, res)
    return SolveResult(
        final=final,
        iterations=s,
        converged=converged,
        residual_history=history,
        step_used=t,
        theoretical_ratio=None if rate is None else rate.q,
        certificate=certify(eco, ops, final, reference_step(moduli)),
        method=config.method,
        start=start,
        moduli=moduli,
        rate=rate,
        wall_time=elapsed,
    )
