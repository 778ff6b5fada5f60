"""Vectorised adaptive Gauss-Legendre rules.

Every integrator here works on a batch of targets at once: the integrand is
called as ``f(nodes, idx)`` and must return an array of shape
``(len(idx), len(nodes))`` or ``(len(idx), len(nodes), c)`` holding the
integrand at ``nodes`` for the targets ``idx``.  Targets whose panels have
converged are dropped from further refinement, so a batch costs roughly as
much as its hardest member.

The refinement rule is panel bisection: a panel is accepted once the order-16
rule on the panel and the sum over its two halves agree within the panel's
share of the global tolerance.  The reported error is the sum of those
inter-level differences plus a roundoff floor.
"""

import numpy as np

from .errors import NonConvergent

ORDER = 16
MAX_DEPTH = 100
NEGLIGIBLE = 256.0
TRI_MAX_DEPTH = 30

_EPS = np.finfo(float).eps


def gauss_legendre(order=ORDER):
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


_T, _W = gauss_legendre()


def _as3(v):
    v = np.asarray(v, dtype=float)
    if v.ndim == 2:
        return v[:, :, None]
    return v


def _panel(f, a, b, idx):
    h = b - a
    vals = _as3(f(a + h * _T, idx))
    wv = _W[None, :, None] * vals
    return h * wv.sum(axis=1), h * np.abs(wv).sum(axis=1)


def adaptive_gl(f, a, b, ntargets, rtol=1e-10, atol=0.0, breaks=None):
    """Integrate ``f`` over ``[a, b]`` for ``ntargets`` targets.

    Parameters
    ----------
    f : callable
        ``f(t, idx)`` as described in the module docstring.
    a, b : float
        Integration limits.
    ntargets : int
        Number of targets in the batch.
    rtol : float
        Tolerance relative to the integral of ``|f|``.
    atol : float
        Absolute tolerance floor.
    breaks : sequence of float, optional
        Interior points where the integrand is not smooth; used as initial
        panel boundaries.

    Returns
    -------
    value : ndarray, shape (ntargets,) or (ntargets, c)
    error : ndarray, shape (ntargets,)
    """
    edges = [a]
    if breaks is not None:
        edges.extend(sorted(t for t in breaks if a < t < b))
    edges.append(b)
    full = b - a
    idx_all = np.arange(ntargets)

    # Scale for the relative tolerance: crude integral of |f| on the panels.
    scale = None
    first = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, mag = _panel(f, lo, hi, idx_all)
        first.append(val)
        scale = mag if scale is None else scale + mag
    ncomp = scale.shape[1]
    scale = scale.max(axis=1)

    total = np.zeros((ntargets, ncomp))
    err = 64.0 * _EPS * scale
    stack = [(lo, hi, idx_all, v, 0) for lo, hi, v in zip(edges[:-1], edges[1:], first)]
    while stack:
        lo, hi, idx, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left, lmag = _panel(f, lo, mid, idx)
        right, rmag = _panel(f, mid, hi, idx)
        fine = left + right
        diff = np.abs(fine - coarse).max(axis=1)
        share = (hi - lo) / full
        budget = np.maximum(rtol * scale[idx], atol)
        mag = (lmag + rmag).max(axis=1)
        tol = np.maximum(budget * share, 100.0 * _EPS * mag)
        ok = diff <= tol
        # Next to an endpoint singularity the error shrinks more slowly than
        # the panel share; such panels are accepted once their whole mass is
        # negligible, and that mass is charged to the error.
        tiny = ~ok & (mag <= budget / NEGLIGIBLE)
        total[idx[ok | tiny]] += fine[ok | tiny]
        err[idx[ok]] += diff[ok]
        err[idx[tiny]] += mag[tiny]
        ok = ok | tiny
        if ok.all():
            continue
        if depth >= MAX_DEPTH:
            raise NonConvergent(
                f"adaptive quadrature did not converge on [{lo!r}, {hi!r}]"
            )
        bad = ~ok
        sub = idx[bad]
        stack.append((lo, mid, sub, left[bad], depth + 1))
        stack.append((mid, hi, sub, right[bad], depth + 1))
    if ncomp == 1:
        total = total[:, 0]
    return total, err


# Collapsed (Duffy) tensor rule on the reference triangle (0,0),(1,0),(1,1):
# y = A + u (B - A) + u v (C - B), Jacobian 2 |T| u.
_U, _V = np.meshgrid(_T, _T, indexing="ij")
_U = _U.ravel()
_V = _V.ravel()
_WT = np.outer(_W, _W).ravel() * _U


def _tri_nodes(A, B, C):
    pts = A + _U[:, None] * (B - A) + (_U * _V)[:, None] * (C - B)
    area = 0.5 * abs((B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]))
    return pts, 2.0 * area * _WT


def _tri_panel(f, tri, idx):
    pts, w = _tri_nodes(*tri)
    vals = np.asarray(f(pts, idx), dtype=float)
    wv = w[None, :] * vals
    return wv.sum(axis=1), np.abs(wv).sum(axis=1)


def _split(tri):
    A, B, C = tri
    ab, bc, ca = 0.5 * (A + B), 0.5 * (B + C), 0.5 * (C + A)
    return [(A, ab, ca), (ab, B, bc), (ca, bc, C), (ab, bc, ca)]


def adaptive_triangles(f, triangles, ntargets, rtol=1e-10, atol=0.0):
    """Integrate ``f(points, idx)`` over a list of triangles.

    The first vertex of each triangle is the collapsed corner of the Duffy
    map, so an integrable point singularity there is damped by the Jacobian.
    Refinement splits a triangle into its four midpoint children; the child
    containing the first vertex keeps it first.

    Returns
    -------
    value, error : ndarray, shape (ntargets,)
    """
    idx_all = np.arange(ntargets)
    tris = [tuple(np.asarray(p, dtype=float) for p in t) for t in triangles]
    first = []
    scale = np.zeros(ntargets)
    for t in tris:
        v, m = _tri_panel(f, t, idx_all)
        first.append(v)
        scale += m
    full = sum(_tri_area(t) for t in tris)

    total = np.zeros(ntargets)
    err = 64.0 * _EPS * scale
    stack = [(t, idx_all, v, 0) for t, v in zip(tris, first)]
    while stack:
        tri, idx, coarse, depth = stack.pop()
        kids = _split(tri)
        panels = [_tri_panel(f, k, idx) for k in kids]
        parts = [p[0] for p in panels]
        fine = sum(parts)
        diff = np.abs(fine - coarse)
        tol = np.maximum(rtol * scale[idx], atol) * (_tri_area(tri) / full)
        tol = np.maximum(tol, 100.0 * _EPS * sum(p[1] for p in panels))
        ok = diff <= tol
        total[idx[ok]] += fine[ok]
        err[idx[ok]] += diff[ok]
        if ok.all():
            continue
        if depth >= TRI_MAX_DEPTH:
            raise NonConvergent("triangle quadrature did not converge")
        bad = ~ok
        sub = idx[bad]
        for k, p in zip(kids, parts):
            stack.append((k, sub, p[bad], depth + 1))
    return total, err


def _tri_area(t):
    A, B, C = t
    return 0.5 * abs((B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]))
