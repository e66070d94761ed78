"""Spectral radius (power iteration) and spectral norm helpers."""

import numpy as np

from .errors import PowerIterationStall

MAX_ITERS = 10_000
REL_TOL = 1e-12


def perron_root(A, max_iters=MAX_ITERS, rel_tol=REL_TOL):
    """Spectral radius of a nonnegative square matrix.

    Power iteration on ``S = A + I``: for nonnegative ``A`` the Perron root
    ``rho`` maps to ``rho + 1``, which is then the unique eigenvalue of
    maximal modulus, so imprimitive matrices such as ``[[0, a], [a, 0]]`` do
    not oscillate.  Each iteration also squares (and rescales) the operator
    applied to the vector, so step ``k`` acts like ``S^(2^k)``.  A gap ratio
    ``r`` between the two largest eigenvalues then shrinks like ``r^(2^k)``;
    plain iteration would need about ``30/(1-r)`` steps, which exceeds the
    cap for nearly double roots of reducible matrices.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    S = A + np.eye(n)
    T = S.copy()
    x = np.full(n, 1.0 / np.sqrt(n))
    mu_old = None
    for _ in range(max_iters):
        w = T @ x
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        x = w / nw
        mu = float(np.linalg.norm(S @ x))
        if mu_old is not None and abs(mu - mu_old) <= rel_tol * mu:
            return max(mu - 1.0, 0.0)
        mu_old = mu
        T = T @ T
        T /= np.abs(T).max()
    raise PowerIterationStall(
        f"spectral radius estimate did not settle within {max_iters} iterations"
    )


def spectral_norm(M):
    """Largest singular value of ``M`` (LAPACK SVD).

    Power iteration on ``M^T M`` is not used here: generated Jacobians can
    have two top singular values within 1e-4 of each other, where it needs
    far more than ``MAX_ITERS`` steps and undershoots until it settles.
    """
    return float(np.linalg.norm(np.asarray(M, dtype=float), 2))
