"""Hand-checkable one-product, one-factor reference instances.

R1: A=0.5, B=1, p(x)=x+1, c(lam)=10-lam, r(v)=v+1; equilibrium (20/9, 80/9, 11/9).
R2: R1 with r(v)=v+5; equilibrium (3.2, 8.4, 0) with factor slack -1.8.
R3: R1's economy with p=1, c=1, r=2 constant (delta = 0); equilibria form
    the ray x=2, lam=2+2w, v=w for w >= 0.
"""

import numpy as np

from .economy import validate_economy
from .instance import Instance
from .operators import AffineOperator, OperatorTriple
from .vi import Point


def _eco():
    return validate_economy([[0.5]], [[1.0]])


def _affine(P, C, R, q, d, s):
    return OperatorTriple(AffineOperator([[P]], [q]), AffineOperator([[C]], [d]),
                          AffineOperator([[R]], [s]))


def r1() -> Instance:
    return Instance(_eco(), _affine(1.0, -1.0, 1.0, 1.0, 10.0, 1.0),
                    Point([20 / 9], [80 / 9], [11 / 9]), {"notes": "reference instance R1"})


def r2() -> Instance:
    return Instance(_eco(), _affine(1.0, -1.0, 1.0, 1.0, 10.0, 5.0),
                    Point([3.2], [8.4], [0.0]), {"notes": "reference instance R2"})


def r3(scale: float = 1.0) -> Instance:
    return Instance(_eco(), _affine(0.0, 0.0, 0.0, scale, scale, 2.0 * scale),
                    None, {"notes": "reference instance R3 (monotone only)"})


PRESETS = {"r1": r1, "r2": r2, "r3": r3}


def r3_solution_projection(y: Point, scale: float = 1.0) -> Point:
    """Nearest point of R3's solution ray {(2c, 2c + 2w, w): w >= 0}, c = scale."""
    x0 = 2.0 * scale
    w = max(0.0, (2.0 * (y.lam[0] - x0) + y.v[0]) / 5.0)
    return Point([x0], [x0 + 2.0 * w], [w])


def r3_distance(y: Point, scale: float = 1.0) -> float:
    return float(np.linalg.norm(y.flatten() - r3_solution_projection(y, scale).flatten()))
