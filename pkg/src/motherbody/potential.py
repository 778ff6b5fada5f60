"""Newtonian and logarithmic potentials.

Kernels are normalised so that ``-Laplace E = delta``:

* n = 1: ``E(x) = -|x| / 2``
* n = 2: ``E(x) = -log|x| / (2 pi)``
* n = 3: ``E(x) = 1 / (4 pi |x|)``

Atomic measures are evaluated atom by atom (segments by adaptive
Gauss-Legendre); bodies by quadrature that exploits their shape: fan
triangulation or a polar reduction for polygons, polar coordinates for
disks, and ring decomposition with complete elliptic integrals for
rotationally symmetric 3D bodies.  The closed forms for the shell,
cylinder, line and cone live at the bottom of the module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ellipkm1

from . import _quad
from .errors import (
    InsideShell,
    InvalidRadius,
    OnBoundary,
    OnSupport,
    SingularPoint,
)
from .geometry import ConvexPolygon, Disk, SymmetricBody3D, faces, segment_distance
from .measure import AtomicMeasure, BodyMeasure, PointMass

SUPPORT_TOL = 1e-12
EPS0_SI = 8.85e-12


@dataclass(frozen=True)
class Kernel:
    n: int = 2

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError("kernel dimension must be 1, 2 or 3")

    @property
    def c2(self):
        return 1.0 / (2.0 * math.pi)

    @property
    def c3(self):
        return 1.0 / (4.0 * math.pi)

    def of_distance(self, r):
        """Kernel value as a function of ``|x|``."""
        r = np.asarray(r, dtype=float)
        if self.n == 1:
            return -0.5 * r
        if self.n == 2:
            return -self.c2 * np.log(r)
        return self.c3 / r


@dataclass(frozen=True)
class ElectroConstants:
    """Coulomb constant ``kappa = 1 / (4 pi eps0)``."""

    kappa: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")

    @classmethod
    def from_eps0(cls, eps0):
        return cls(1.0 / (4.0 * math.pi * eps0))

    @classmethod
    def si(cls):
        return cls.from_eps0(EPS0_SI)

    @property
    def eps0(self):
        return 1.0 / (4.0 * math.pi * self.kappa)


@dataclass(frozen=True)
class PotentialSample:
    x: tuple
    value: float
    estimated_error: float


def kernel_eval(k, x):
    """Evaluate the kernel at ``x`` (a point or an array of points).

    Raises
    ------
    SingularPoint
        If any ``x`` is the origin.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    r = np.linalg.norm(x, axis=-1)
    if np.any(r == 0):
        raise SingularPoint("kernel is singular at the origin")
    out = k.of_distance(r)
    return float(out) if out.ndim == 0 else out


class _Neumaier:
    """Compensated running sum over arrays, in call order."""

    def __init__(self, shape):
        self.s = np.zeros(shape)
        self.c = np.zeros(shape)

    def add(self, v):
        t = self.s + v
        big = np.abs(self.s) >= np.abs(v)
        self.c += np.where(big, (self.s - t) + v, (v - t) + self.s)
        self.s = t

    @property
    def value(self):
        return self.s + self.c


# ---------------------------------------------------------------------------
# segments

def segment_integrals(k, p, q, X, rtol=1e-10, weights=None):
    """Integrals of the two linear hat weights on ``[p, q]`` against the kernel.

    Returns
    -------
    values : ndarray, shape (m, 2)
        ``int (1 - t) E(x - y(t)) ds`` and ``int t E(x - y(t)) ds``.  With
        ``weights=(w0, w1)`` the single combination ``w0 * first + w1 *
        second`` is integrated instead and the shape is (m,).
    error : ndarray, shape (m,)
    """
    p = np.asarray(p, dtype=float)
    e = np.asarray(q, dtype=float) - p
    L = float(np.linalg.norm(e))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if L == 0.0:
        shape = (len(X),) if weights is not None else (len(X), 2)
        return np.zeros(shape), np.zeros(len(X))

    def f(t, idx):
        y = p + t[:, None] * e
        r = np.linalg.norm(X[idx][:, None, :] - y[None, :, :], axis=2)
        ker = L * k.of_distance(r)
        if weights is not None:
            return (weights[0] * (1.0 - t) + weights[1] * t) * ker
        return np.stack([(1.0 - t) * ker, t * ker], axis=2)

    # Break at the foot of the perpendicular so near-singular panels are
    # resolved from both sides.
    foot = np.clip((X - p) @ e / (L * L), 0.0, 1.0)
    if len(X) == 1 and 0.0 < foot[0] < 1.0:
        breaks = [float(foot[0])]
    else:
        breaks = None
    return _quad.adaptive_gl(f, 0.0, 1.0, len(X), rtol=rtol, breaks=breaks)


def _check_segment_support(a, X):
    """Raise if a point lies on a piece carrying density, away from a zero endpoint."""
    for p, q, l0, l1 in a.pieces():
        if l0 == 0.0 and l1 == 0.0:
            continue
        bad = segment_distance(X, p, q) <= SUPPORT_TOL
        for x in X[bad]:
            at0 = math.dist(x, p) <= SUPPORT_TOL and l0 == 0.0
            at1 = math.dist(x, q) <= SUPPORT_TOL and l1 == 0.0
            if not (at0 or at1):
                raise OnSupport(f"point {x.tolist()} lies on a segment atom")


def atomic_potential_many(k, m, X, rtol=1e-10):
    """Potential of an atomic measure at points ``X``; returns ``(values, errors)``.

    A point coinciding with a segment endpoint where the density vanishes is
    accepted: the integrand stays bounded there.

    Raises
    ------
    OnSupport
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    acc = _Neumaier(len(X))
    err = np.zeros(len(X))
    for a in m.atoms:
        if isinstance(a, PointMass):
            r = np.linalg.norm(X - np.asarray(a.x), axis=1)
            if np.any(r <= SUPPORT_TOL):
                raise OnSupport(f"point coincides with point atom at {a.x}")
            acc.add(a.m * k.of_distance(r))
            continue
        _check_segment_support(a, X)
        for p, q, l0, l1 in a.pieces():
            if l0 == 0.0 and l1 == 0.0:
                continue
            vals, e = segment_integrals(k, p, q, X, rtol=rtol, weights=(l0, l1))
            acc.add(vals)
            err += e
    return acc.value, err


def potential_atomic(k, m, x, rtol=1e-10):
    """Potential of an atomic measure at a single point."""
    val, err = atomic_potential_many(k, m, np.asarray(x, dtype=float)[None, :], rtol=rtol)
    return PotentialSample(tuple(float(c) for c in x), float(val[0]), float(err[0]))


# ---------------------------------------------------------------------------
# 2D bodies

def _log_radial(rho):
    """``int_0^rho -log(r) r dr / (2 pi)``."""
    rho = np.asarray(rho, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -(0.5 * rho**2 * np.log(rho) - 0.25 * rho**2) / (2.0 * math.pi)
    return np.where(rho > 0, v, 0.0)


def _polygon_interior(poly, x, rtol):
    """Area potential at an interior point by polar reduction around ``x``."""
    normals, offsets = poly.halfplanes()
    h = normals @ x - offsets  # distances to the edge lines, all > 0
    v = poly.array() - x
    angles = np.sort(np.mod(np.arctan2(v[:, 1], v[:, 0]), 2 * math.pi))

    def f(theta, idx):
        u = np.column_stack([np.cos(theta), np.sin(theta)])
        nu = u @ normals.T
        with np.errstate(divide="ignore"):
            t = np.where(nu < 0, h[None, :] / -nu, np.inf)
        rho = t.min(axis=1)
        return np.broadcast_to(_log_radial(rho), (len(idx), len(theta)))

    val, err = _quad.adaptive_gl(f, 0.0, 2 * math.pi, 1, rtol=rtol, breaks=angles)
    return val[0], err[0]


def _polygon_exterior(k, poly, X, rtol):
    c = poly.centroid
    v = poly.array()
    tris = [(c, v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def f(y, idx):
        r = np.linalg.norm(X[idx][:, None, :] - y[None, :, :], axis=2)
        return k.of_distance(r)

    return _quad.adaptive_triangles(f, tris, len(X), rtol=rtol)


def _disk_interior(disk, x, rtol):
    w = x - disk.centroid
    R = disk.radius

    def f(theta, idx):
        wu = w[0] * np.cos(theta) + w[1] * np.sin(theta)
        rho = -wu + np.sqrt(wu * wu - w @ w + R * R)
        return np.broadcast_to(_log_radial(rho), (len(idx), len(theta)))

    val, err = _quad.adaptive_gl(f, 0.0, 2 * math.pi, 1, rtol=rtol)
    return val[0], err[0]


def _ring_2d(k, centre, radius, X, idx, rtol):
    """Integral of E over the circle of given radius (per unit length), for X[idx]."""
    def g(theta, jdx):
        y = centre + radius * np.column_stack([np.cos(theta), np.sin(theta)])
        r = np.linalg.norm(X[idx][jdx][:, None, :] - y[None, :, :], axis=2)
        return radius * k.of_distance(r)

    return _quad.adaptive_gl(g, 0.0, 2 * math.pi, len(idx), rtol=rtol)


def _disk_exterior(k, disk, X, rtol):
    c = disk.centroid
    # the outer estimate never sees inner errors; length * sup bounds their integral
    inner = np.zeros(len(X))

    def f(r, idx):
        cols = []
        for ri in r:
            v, e = _ring_2d(k, c, ri, X, idx, rtol * 1e-2)
            inner[idx] = np.maximum(inner[idx], e)
            cols.append(v)
        return np.column_stack(cols)

    val, err = _quad.adaptive_gl(f, 0.0, disk.radius, len(X), rtol=rtol)
    return val, err + disk.radius * inner


# ---------------------------------------------------------------------------
# 3D symmetric bodies

def ring_potential(rho, z, P):
    """Potential at points ``P`` of unit-mass rings (radius ``rho``, height ``z``).

    Broadcasts ``rho``/``z`` (q,) against ``P`` (m, 3) to shape (m, q).
    """
    P = np.atleast_2d(P)
    rp = np.hypot(P[:, 0], P[:, 1])[:, None]
    zp = P[:, 2][:, None]
    rho = np.asarray(rho, dtype=float)[None, :]
    z = np.asarray(z, dtype=float)[None, :]
    D2 = (rho + rp) ** 2 + (z - zp) ** 2
    # 1 - m from the near distance directly; forming m first cancels digits
    # next to the singular ring.
    d2 = (rho - rp) ** 2 + (z - zp) ** 2
    p = np.where(D2 > 0, d2 / np.where(D2 > 0, D2, 1.0), 1.0)
    return (2.0 / math.pi) * ellipkm1(p) / (4.0 * math.pi * np.sqrt(D2))


def _curve_integral(X, rho_of, z_of, dmass, a0, a1, rtol, breaks=None):
    """``int ring(rho(t), z(t)) dmass(t) dt`` over ``[a0, a1]``."""
    def f(t, idx):
        return ring_potential(rho_of(t), z_of(t), X[idx]) * dmass(t)[None, :]

    return _quad.adaptive_gl(f, a0, a1, len(X), rtol=rtol, breaks=breaks)


def _region_integral(X, outer, inner, rtol):
    """Integrate over a meridian region ``{(rho, z): z in outer, rho in inner(z)}``.

    Ring mass per unit area is ``2 pi rho``.  Evaluated point by point so
    that the singular ring through each point is a panel break; the radial
    integrals for all outer nodes run as one batch, split at the point's
    radius.
    """
    vals = np.zeros(len(X))
    errs = np.zeros(len(X))
    for i, P in enumerate(X):
        Pi = P[None, :]
        rp = math.hypot(P[0], P[1])
        zp = P[2]

        sup = [0.0]

        def f(zs, idx, Pi=Pi, rp=rp, sup=sup):
            lims = np.array([inner(zv) for zv in zs], dtype=float)
            lo, hi = lims[:, 0], np.maximum(lims[:, 1], lims[:, 0])
            mid = np.clip(rp, lo, hi)
            total = np.zeros(len(zs))
            terr = np.zeros(len(zs))
            for a, b in ((lo, mid), (mid, hi)):
                w = b - a

                def g(t, jdx, a=a, w=w):
                    rho = a[jdx, None] + t[None, :] * w[jdx, None]
                    z = np.broadcast_to(zs[jdx, None], rho.shape)
                    ker = ring_potential(rho.ravel(), z.ravel(), Pi).reshape(rho.shape)
                    return ker * (2.0 * math.pi * rho * w[jdx, None])

                v, e = _quad.adaptive_gl(g, 0.0, 1.0, len(zs), rtol=rtol * 1e-2)
                total += v
                terr += e
            sup[0] = max(sup[0], float(terr.max(initial=0.0)))
            return np.broadcast_to(total, (len(idx), len(zs)))

        v, e = _quad.adaptive_gl(f, outer[0], outer[1], 1, rtol=rtol, breaks=[zp])
        vals[i] = v[0]
        errs[i] = e[0] + (outer[1] - outer[0]) * sup[0]
    return vals, errs


def _symmetric_body(bm, X, rtol):
    body, a, b = bm.body, bm.a, bm.b
    R = body.R
    acc = _Neumaier(len(X))
    err = np.zeros(len(X))

    def add(res, w):
        acc.add(w * res[0])
        err[:] += abs(w) * res[1]

    if body.kind in ("sphere-shell", "solid-ball"):
        if a:
            # ring at polar angle phi: radius R sin phi, width R dphi
            add(_curve_integral(
                X, lambda t: R * np.sin(t), lambda t: R * np.cos(t),
                lambda t: 2 * math.pi * R * R * np.sin(t), 0.0, math.pi, rtol), a)
        if b:
            add(_region_integral(
                X, (-R, R), lambda z: (0.0, math.sqrt(max(R * R - z * z, 0.0))), rtol), b)
    elif body.kind == "solid-cylinder":
        half = 0.5 * body.L
        if a:
            add(_curve_integral(
                X, lambda t: np.full_like(t, R), lambda t: t,
                lambda t: np.full_like(t, 2 * math.pi * R), -half, half, rtol), a)
            for zc in (-half, half):
                add(_curve_integral(
                    X, lambda t: t, lambda t, zc=zc: np.full_like(t, zc),
                    lambda t: 2 * math.pi * t, 0.0, R, rtol), a)
        if b:
            add(_region_integral(X, (-half, half), lambda z: (0.0, R), rtol), b)
    else:
        h, s = body.h, body.slant
        if a:
            add(_curve_integral(
                X, lambda t: R * t / s, lambda t: h * t / s,
                lambda t: 2 * math.pi * R * t / s, 0.0, s, rtol), a)
        if b:
            add(_region_integral(X, (0.0, h), lambda z: (0.0, R * z / h), rtol), b)
    return acc.value, err


# ---------------------------------------------------------------------------
# dispatch

def _check_boundary(body, X, allow=None):
    d = body.boundary_distance(X)
    scale = max(body.diameter, 1.0)
    bad = d <= SUPPORT_TOL * scale
    if allow is not None:
        bad &= ~allow
    if bad.any():
        raise OnBoundary(f"point {X[bad][0].tolist()} lies on the body boundary")


def body_potential_many(k, bm, X, rtol=1e-8):
    """Quadrature potential of a body measure; returns ``(values, errors)``.

    Raises
    ------
    OnBoundary
        For points on the charged boundary (the cone apex is admitted).
    NonConvergent
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    body = bm.body
    if body.dim != k.n or X.shape[1] != k.n:
        raise ValueError("kernel, body and points must share a dimension")
    if isinstance(body, SymmetricBody3D):
        allow = None
        if body.kind == "cone-surface":
            allow = np.linalg.norm(X, axis=1) <= SUPPORT_TOL
        _check_boundary(body, X, allow)
        return _symmetric_body(bm, X, rtol)

    _check_boundary(body, X)
    acc = _Neumaier(len(X))
    err = np.zeros(len(X))
    if bm.b:
        inside = body.contains(X)
        vals = np.zeros(len(X))
        errs = np.zeros(len(X))
        if (~inside).any():
            ext = X[~inside]
            if isinstance(body, ConvexPolygon):
                v, e = _polygon_exterior(k, body, ext, rtol)
            else:
                v, e = _disk_exterior(k, body, ext, rtol)
            vals[~inside] = v
            errs[~inside] = e
        for i in np.flatnonzero(inside):
            if isinstance(body, ConvexPolygon):
                vals[i], errs[i] = _polygon_interior(body, X[i], rtol)
            else:
                vals[i], errs[i] = _disk_interior(body, X[i], rtol)
        acc.add(bm.b * vals)
        err += bm.b * errs
    if bm.a:
        if isinstance(body, ConvexPolygon):
            for p, q in faces(body):
                v, e = segment_integrals(k, p, q, X, rtol=rtol, weights=(1.0, 1.0))
                acc.add(bm.a * v)
                err += bm.a * e
        else:
            v, e = _ring_2d(k, body.centroid, body.radius, X, np.arange(len(X)), rtol)
            acc.add(bm.a * v)
            err += bm.a * e
    return acc.value, err


def potential_body_quadrature(k, bm, x, rtol=1e-8):
    """Quadrature potential of a body measure at one point."""
    val, err = body_potential_many(k, bm, np.asarray(x, dtype=float)[None, :], rtol=rtol)
    return PotentialSample(tuple(float(c) for c in x), float(val[0]), float(err[0]))


def potential_many(k, m, X, rtol=None):
    """Potential of any supported measure (or a list of them, summed)."""
    if isinstance(m, (list, tuple)):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        acc = _Neumaier(len(X))
        err = np.zeros(len(X))
        for part in m:
            v, e = potential_many(k, part, X, rtol)
            acc.add(v)
            err += e
        return acc.value, err
    if isinstance(m, BodyMeasure):
        return body_potential_many(k, m, X, rtol=1e-8 if rtol is None else rtol)
    if isinstance(m, AtomicMeasure):
        return atomic_potential_many(k, m, X, rtol=1e-10 if rtol is None else rtol)
    raise TypeError(f"cannot evaluate potential of {type(m).__name__}")


# ---------------------------------------------------------------------------
# closed forms

def shell_potential_closed(R, sigma, r, c=ElectroConstants()):
    """Exterior potential ``kappa q / r`` of a uniformly charged spherical shell.

    ``q = 4 pi R^2 sigma``; equivalently ``sigma R^2 / (eps0 r)``.

    Raises
    ------
    InsideShell
        For ``r <= R``.
    """
    if not R > 0:
        raise InvalidRadius("R must be positive")
    if not r > R:
        raise InsideShell(f"r={r} is not outside the shell of radius {R}")
    q = 4.0 * math.pi * R * R * sigma
    return c.kappa * q / r


def cylinder_potential_closed(R, rho, r, ref_a, eps0=1.0):
    """Gauss-law potential ``-(R^2 rho / 2 eps0) ln(r / a)`` of an infinite cylinder."""
    if not (R > 0 and r > R and ref_a > R):
        raise InvalidRadius("need r > R and ref_a > R > 0")
    return -(R * R * rho / (2.0 * eps0)) * math.log(r / ref_a)


def line_potential_closed(lam, r, ref_a, eps0=1.0):
    """Potential ``-(lambda / 2 pi eps0) ln(r / a)`` of an infinite line charge."""
    if not (r > 0 and ref_a > 0):
        raise InvalidRadius("need r > 0 and ref_a > 0")
    if lam == 0:
        return 0.0
    return -(lam / (2.0 * math.pi * eps0)) * math.log(r / ref_a)


def cone_apex_potential_closed(R, h, sigma, eps0=1.0):
    """Potential ``sigma R / (2 eps0)`` of a charged conical surface at its apex."""
    if not (R > 0 and h > 0):
        raise InvalidRadius("need R > 0 and h > 0")
    return sigma * R / (2.0 * eps0)


def cone_apex_potential_from_charge(q, R, h, eps0=1.0):
    """Same apex potential written through the total charge ``q``."""
    if not (R > 0 and h > 0):
        raise InvalidRadius("need R > 0 and h > 0")
    return q / (2.0 * eps0 * math.pi * math.hypot(R, h))


def cone_charge(R, h, sigma):
    """Total charge ``pi R sqrt(R^2 + h^2) sigma`` of the lateral surface."""
    return math.pi * R * math.hypot(R, h) * sigma


def cone_axis_mother_potential(R, h, sigma, eps0=1.0):
    """Apex potential of the axis segment with density ``2 pi R_i sigma``.

    With ``R_i / h_i = R / h`` the integrand ``2 pi R_i sigma / h_i`` is the
    constant ``2 pi R sigma / h``, so the integral over ``[0, h]`` is exact.
    """
    if not (R > 0 and h > 0):
        raise InvalidRadius("need R > 0 and h > 0")
    integrand = 2.0 * math.pi * R * sigma / h
    return integrand * h / (4.0 * math.pi * eps0)
