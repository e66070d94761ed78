"""Iteration-count experiments behind the complexity claims.

PGP at ``t = delta/L^2`` contracts like ``sqrt(1 - kappa^2)`` and EPG at
``t = 1/(2L)`` like ``sqrt((1 + kappa)/(1 + 2 kappa))``, so iteration counts
should grow like ``kappa^-2`` and ``kappa^-1`` respectively.
"""

import csv
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from .errors import NonpositiveStep, StepInadmissible
from .operators import modulus_bundle
from .probgen import shaped_instance
from .solvers import EPG, PGP, SolverConfig, default_step, rate_certificate, solve

RATE_COLUMNS = ("kappa", "method", "step", "iters_to_tol", "predicted_q", "observed_q")
RUN_LOG_COLUMNS = ("iter", "natural_residual", "dist_to_planted", "step")
OBSERVED_WINDOW = 50


@dataclass(frozen=True)
class RateRow:
    kappa: float
    method: str
    step: float
    iters_to_tol: int
    predicted_q: float
    observed_q: float
    converged: bool

    def csv_values(self):
        return [repr(self.kappa), self.method, repr(self.step), self.iters_to_tol,
                repr(self.predicted_q), repr(self.observed_q)]


def observed_ratio(distances: Sequence[float], window: int = OBSERVED_WINDOW) -> float:
    """Geometric mean of consecutive distance ratios over the last ``window`` steps."""
    d = [x for x in distances if x is not None]
    if len(d) < 2:
        return float("nan")
    k = min(window, len(d) - 1)
    first, last = d[-1 - k], d[-1]
    if first <= 0 or last <= 0:
        return 0.0
    return math.exp((math.log(last) - math.log(first)) / k)


def rate_rows(inst, kappa_label: float, tol: float, max_iters: int = 1_000_000,
              step_scales: Iterable[float] = (1.0,), methods=(PGP, EPG)) -> List[RateRow]:
    """Solve ``inst`` with each method at scaled default steps.

    Steps that are not admissible for the method are skipped silently, so
    the table only holds runs covered by a rate guarantee.
    """
    moduli = modulus_bundle(inst.eco, inst.ops)
    rows = []
    for method in methods:
        for scale in step_scales:
            t = scale * default_step(method, moduli)
            try:
                cert = rate_certificate(method, t, moduli)
            except (StepInadmissible, NonpositiveStep):
                continue
            res = solve(inst.eco, inst.ops,
                        SolverConfig(method, step=t, tol=tol, max_iters=max_iters),
                        reference=inst.planted, moduli=moduli)
            dists = [h.dist_to_reference for h in res.residual_history]
            rows.append(RateRow(kappa_label, method, t, res.iterations, cert.q,
                                observed_ratio(dists), res.converged))
    return rows


def rates_table(kappas: Sequence[float], n: int, m: int, seed: int, tol: float,
                spread: float = 0.25, max_iters: int = 1_000_000,
                step_scales: Iterable[float] = (1.0,)) -> List[RateRow]:
    """Rows in kappa-then-method order, one shaped instance per kappa."""
    step_scales = tuple(step_scales)
    rows = []
    for kappa in kappas:
        inst = shaped_instance(n, m, seed, kappa, spread=spread)
        rows.extend(rate_rows(inst, kappa, tol, max_iters, step_scales))
    return rows


def write_rates_csv(rows: Sequence[RateRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RATE_COLUMNS)
    for row in rows:
        w.writerow(row.csv_values())


def write_run_log(result, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RUN_LOG_COLUMNS)
    for h in result.residual_history:
        dist = "" if h.dist_to_reference is None else repr(h.dist_to_reference)
        w.writerow([h.iter, repr(h.natural_residual), dist, repr(result.step_used)])


def read_run_log(fh):
    rows = []
    for rec in csv.DictReader(fh):
        rows.append({
            "iter": int(rec["iter"]),
            "natural_residual": float(rec["natural_residual"]),
            "dist_to_planted": float(rec["dist_to_planted"]) if rec["dist_to_planted"] else None,
            "step": float(rec["step"]),
        })
    return rows


def iteration_growth(rows: Sequence[RateRow], method: str):
    """Ratios of iteration counts between consecutive kappa values of ``method``."""
    its = [r.iters_to_tol for r in rows if r.method == method]
    return np.array(its[1:], dtype=float) / np.array(its[:-1], dtype=float)
