"""Active-set solver for nonnegative (optionally mass-constrained) least squares.

Solves::

    min  ||A c - y||^2 + reg ||c||^2   subject to   c >= 0  [, w . c = M]

through its normal equations ``G = A^T A + reg I``, ``g = A^T y``.  This is
the Lawson-Hanson scheme written as a primal active-set method: the free
subsystem is solved with a Cholesky factorisation, a step that would make a
free coefficient negative is cut short at the boundary and that coefficient
joins the zero set, and a zero coefficient with a negative gradient is
released.  With the equality constraint the free subsystem is solved through
a Lagrange multiplier and the iteration starts from the uniform feasible
point instead of zero.
"""

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import NoConvergence, RankDeficient

KKT_TOL = 1e-10


def _free_solve(G, g, free, w, mass):
    GF = G[np.ix_(free, free)]
    try:
        cho = cho_factor(GF, lower=False, check_finite=True)
    except LinAlgError as exc:
        raise RankDeficient("free subsystem is not positive definite") from exc
    piv = np.abs(np.diag(cho[0]))
    if piv.min() ** 2 <= 1e3 * np.finfo(float).eps * piv.max() ** 2:
        raise RankDeficient("free subsystem is numerically singular")
    u = cho_solve(cho, g[free])
    if w is None:
        return u, 0.0
    v = cho_solve(cho, w[free])
    wv = float(w[free] @ v)
    if wv <= 0:
        raise RankDeficient("mass constraint is degenerate on the free set")
    nu = (float(w[free] @ u) - mass) / wv
    return u - nu * v, nu


def solve_normal(G, g, w=None, mass=None, tol=KKT_TOL, maxiter=None):
    """Active-set solution of ``min 1/2 c.G.c - g.c`` with ``c >= 0``.

    Parameters
    ----------
    G : ndarray, shape (n, n)
        Symmetric positive (semi)definite matrix.
    g : ndarray, shape (n,)
    w : ndarray, shape (n,), optional
        Positive weights of the equality constraint ``w . c = mass``.
    mass : float, optional
    tol : float
        KKT tolerance on the gradient of fixed coefficients, scaled by
        ``max(1, |g|_inf)``.
    maxiter : int, optional
        Defaults to ``100 * n``.

    Returns
    -------
    c : ndarray
    iterations : int
    """
    G = np.asarray(G, dtype=float)
    g = np.asarray(g, dtype=float)
    n = len(g)
    if maxiter is None:
        maxiter = 100 * n
    gtol = tol * max(1.0, float(np.abs(g).max(initial=0.0)))

    if w is None:
        x = np.zeros(n)
        fixed = np.ones(n, dtype=bool)
    else:
        w = np.asarray(w, dtype=float)
        if np.any(w <= 0) or mass is None or mass < 0:
            raise ValueError("mass constraint needs positive weights and mass >= 0")
        x = np.full(n, mass / w.sum())
        fixed = np.zeros(n, dtype=bool)

    for it in range(1, maxiter + 1):
        free = np.flatnonzero(~fixed)
        z = np.zeros(n)
        nu = 0.0
        if len(free):
            zf, nu = _free_solve(G, g, free, w, mass)
            z[free] = zf
        if len(free) == 0 or z[free].min() >= 0.0:
            x = z
            grad = G @ x - g
            if w is not None:
                grad = grad + nu * w
            cand = np.flatnonzero(fixed)
            if len(cand) == 0 or grad[cand].min() >= -gtol:
                return x, it
            fixed[cand[np.argmin(grad[cand])]] = False
            continue
        # Move towards z until the first free coefficient hits zero.
        neg = free[z[free] < 0.0]
        ratios = x[neg] / (x[neg] - z[neg])
        alpha = float(ratios.min())
        x = x + alpha * (z - x)
        hit = neg[ratios <= alpha]
        x[hit] = 0.0
        x[free[x[free] <= 0.0]] = 0.0
        fixed[x == 0.0] = True
        if w is not None and fixed.all():
            raise RankDeficient("mass constraint cannot hold with every coefficient at zero")
    raise NoConvergence(f"active set did not settle within {maxiter} iterations")


def nnls(A, y, reg=0.0, w=None, mass=None, tol=KKT_TOL, maxiter=None):
    """Nonnegative least squares on ``A c ~ y`` with Tikhonov weight ``reg``.

    Returns
    -------
    c : ndarray
    iterations : int
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    G = A.T @ A
    if reg:
        G = G + reg * np.eye(A.shape[1])
    return solve_normal(G, A.T @ y, w=w, mass=mass, tol=tol, maxiter=maxiter)
