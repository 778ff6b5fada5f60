"""Mass distributions: bodies with surface/volume weights and atomic measures.

A :class:`BodyMeasure` is ``a * (surface measure of the boundary) +
b * (volume measure of the body)``.  An :class:`AtomicMeasure` is a finite
sum of point masses and straight segments carrying a piecewise-linear line
density; candidate mother bodies always live in this class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroMass
from .geometry import ConvexPolygon, Disk, SymmetricBody3D, faces

# 3-point Gauss-Legendre on [0, 1]; exact for the cubic integrands below.
_G3T = np.array([0.5 - math.sqrt(0.15), 0.5, 0.5 + math.sqrt(0.15)])
_G3W = np.array([5.0, 8.0, 5.0]) / 18.0


@dataclass(frozen=True)
class PointMass:
    x: tuple
    m: float

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(c) for c in self.x))
        object.__setattr__(self, "m", float(self.m))

    @property
    def dim(self):
        return len(self.x)

    @property
    def mass(self):
        return self.m


@dataclass(frozen=True)
class SegmentDensity:
    """Segment ``p0 -> p1`` with density samples at ``K + 1`` equispaced parameters."""

    p0: tuple
    p1: tuple
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "p0", tuple(float(c) for c in self.p0))
        object.__setattr__(self, "p1", tuple(float(c) for c in self.p1))
        object.__setattr__(self, "lam", tuple(float(c) for c in self.lam))
        if len(self.p0) != len(self.p1):
            raise ValueError("segment endpoints differ in dimension")
        if len(self.lam) < 2:
            raise ValueError("segment density needs at least two samples")

    @property
    def dim(self):
        return len(self.p0)

    @property
    def length(self):
        return math.dist(self.p0, self.p1)

    @property
    def K(self):
        return len(self.lam) - 1

    def pieces(self):
        """Yield ``(a, b, lam_a, lam_b)`` for each linear piece."""
        p0 = np.array(self.p0)
        e = np.array(self.p1) - p0
        K = self.K
        for k in range(K):
            yield p0 + e * (k / K), p0 + e * ((k + 1) / K), self.lam[k], self.lam[k + 1]

    def density(self, t):
        """Density at normalised parameters ``t`` in [0, 1]."""
        return np.interp(t, np.linspace(0.0, 1.0, self.K + 1), self.lam)

    @property
    def mass(self):
        lam = np.asarray(self.lam)
        return self.length / self.K * float(0.5 * (lam[:-1] + lam[1:]).sum())


@dataclass(frozen=True)
class AtomicMeasure:
    atoms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        dims = {a.dim for a in self.atoms}
        if len(dims) > 1:
            raise ValueError("atoms of mixed dimension")

    @property
    def dim(self):
        return self.atoms[0].dim if self.atoms else None

    def __add__(self, other):
        return AtomicMeasure(self.atoms + other.atoms)

    def scaled(self, factor):
        out = []
        for a in self.atoms:
            if isinstance(a, PointMass):
                out.append(PointMass(a.x, a.m * factor))
            else:
                out.append(SegmentDensity(a.p0, a.p1, [v * factor for v in a.lam]))
        return AtomicMeasure(out)

    def to_dict(self):
        atoms = []
        for a in self.atoms:
            if isinstance(a, PointMass):
                atoms.append({"type": "point", "x": list(a.x), "m": a.m})
            else:
                atoms.append(
                    {"type": "segment", "p0": list(a.p0), "p1": list(a.p1), "lambda": list(a.lam)}
                )
        return {"atoms": atoms}

    @classmethod
    def from_dict(cls, d):
        atoms = []
        for a in d["atoms"]:
            kind = a.get("type")
            if kind == "point":
                atoms.append(PointMass(a["x"], a["m"]))
            elif kind == "segment":
                atoms.append(SegmentDensity(a["p0"], a["p1"], a["lambda"]))
            else:
                raise ValueError(f"unknown atom type {kind!r}")
        return cls(atoms)


@dataclass(frozen=True)
class BodyMeasure:
    """``a`` times boundary measure plus ``b`` times volume measure of ``body``."""

    body: object
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not isinstance(self.body, (ConvexPolygon, Disk, SymmetricBody3D)):
            raise TypeError(f"unsupported body {type(self.body).__name__}")
        if self.a < 0 or self.b < 0 or not self.a + self.b > 0:
            raise ValueError("need a, b >= 0 with a + b > 0")

    @property
    def dim(self):
        return self.body.dim


@dataclass(frozen=True)
class Moments:
    total: float
    centroid: np.ndarray
    second: np.ndarray


def total_mass(m):
    """Total mass of a body measure or an atomic measure."""
    if isinstance(m, BodyMeasure):
        body = m.body
        if isinstance(body, SymmetricBody3D):
            return m.a * body.surface_area + m.b * body.volume
        return m.a * body.perimeter + m.b * body.area
    return math.fsum(a.mass for a in m.atoms)


def _segment_part(p, q, lam0, lam1):
    """(mass, first moment, raw second moment) of a linear density on [p, q]."""
    p = np.asarray(p, dtype=float)
    e = np.asarray(q, dtype=float) - p
    L = float(np.linalg.norm(e))
    pts = p + _G3T[:, None] * e
    w = L * _G3W * (lam0 + (lam1 - lam0) * _G3T)
    return w.sum(), w @ pts, (pts * w[:, None]).T @ pts


def _polygon_area_part(poly, b):
    v = poly.array()
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    c = x * yn - xn * y
    A = 0.5 * c.sum()
    sx = ((x + xn) * c).sum() / 6.0
    sy = ((y + yn) * c).sum() / 6.0
    sxx = ((x * x + x * xn + xn * xn) * c).sum() / 12.0
    syy = ((y * y + y * yn + yn * yn) * c).sum() / 12.0
    sxy = ((x * yn + 2 * x * y + 2 * xn * yn + xn * y) * c).sum() / 24.0
    return b * A, b * np.array([sx, sy]), b * np.array([[sxx, sxy], [sxy, syy]])


def _body_parts(m):
    body, a, b = m.body, m.a, m.b
    parts = []
    if isinstance(body, ConvexPolygon):
        if b:
            parts.append(_polygon_area_part(body, b))
        if a:
            parts.extend(_segment_part(p, q, a, a) for p, q in faces(body))
        return parts
    if isinstance(body, Disk):
        c = body.centroid
        R = body.radius
        for mass, k in ((b * body.area, 0.25), (a * body.perimeter, 0.5)):
            if mass:
                parts.append((mass, mass * c, mass * (np.outer(c, c) + k * R**2 * np.eye(2))))
        return parts

    R = body.R
    if body.kind in ("sphere-shell", "solid-ball"):
        for mass, k in ((a * body.surface_area, 1.0 / 3.0), (b * body.volume, 0.2)):
            if mass:
                parts.append((mass, np.zeros(3), mass * k * R**2 * np.eye(3)))
        return parts

    def axial(mass, zc, var_xy, ez2):
        # var_xy: mean x^2 (= mean y^2); ez2: mean z^2; zc: mean z
        return mass, mass * np.array([0.0, 0.0, zc]), mass * np.diag([var_xy, var_xy, ez2])

    if body.kind == "solid-cylinder":
        L = body.L
        if b:
            parts.append(axial(b * body.volume, 0.0, R**2 / 4, L**2 / 12))
        if a:
            parts.append(axial(a * 2 * math.pi * R * L, 0.0, R**2 / 2, L**2 / 12))
            cap = a * math.pi * R**2
            for z in (-L / 2, L / 2):
                parts.append(axial(cap, z, R**2 / 4, z**2))
        return parts

    h = body.h
    if a:
        parts.append(axial(a * body.surface_area, 2 * h / 3, R**2 / 4, h**2 / 2))
    if b:
        parts.append(axial(b * body.volume, 3 * h / 4, 3 * R**2 / 20, 3 * h**2 / 5))
    return parts


def _atomic_parts(m):
    parts = []
    for a in m.atoms:
        if isinstance(a, PointMass):
            x = np.array(a.x)
            parts.append((a.m, a.m * x, a.m * np.outer(x, x)))
        else:
            parts.extend(_segment_part(p, q, l0, l1) for p, q, l0, l1 in a.pieces())
    return parts


def moments(m):
    """Total mass, centroid and unnormalised second central moments.

    ``second = sum m (x - c)(x - c)^T`` over the measure.
    """
    parts = _body_parts(m) if isinstance(m, BodyMeasure) else _atomic_parts(m)
    dim = m.dim or 2
    if not parts:
        return Moments(0.0, np.zeros(dim), np.zeros((dim, dim)))
    M = math.fsum(p[0] for p in parts)
    S1 = sum(p[1] for p in parts)
    S2 = sum(p[2] for p in parts)
    c = S1 / M if M > 0 else np.zeros(dim)
    second = S2 - M * np.outer(c, c)
    return Moments(M, c, 0.5 * (second + second.T))


def scale_to_mass(m, target):
    """Rescale every atom so the total mass equals ``target``."""
    if target < 0:
        raise ValueError("target mass must be nonnegative")
    current = total_mass(m)
    if not current > 0:
        raise ZeroMass("cannot rescale a measure with zero mass")
    return m.scaled(target / current)


def ball_packing(poly, depth, density=1.0):
    """Approximate the area measure of ``poly`` by point masses at disk centres.

    A quadtree over the polygon's bounding square is refined level by level.
    A cell lying inside the polygon and clear of every disk already placed
    receives its inscribed disk; cells straddling the boundary or a disk are
    subdivided again, so later levels keep filling the gaps between disks.
    Each disk contributes a point mass ``density * pi r^2`` at its centre.

    Returns
    -------
    measure : AtomicMeasure
    residual_area : float
        Polygon area not covered by the disks.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    normals, offsets = poly.halfplanes()
    v = poly.array()
    lo, hi = v.min(axis=0), v.max(axis=0)
    half = 0.5 * float((hi - lo).max())
    centre = 0.5 * (lo + hi)
    tiny = 1e-12 * half

    cx = np.array([centre[0]])
    cy = np.array([centre[1]])
    owner = np.array([-1])  # nearest ancestor disk, -1 if none
    disks = []  # (x, y, r)
    corners = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float)

    for level in range(1, depth + 1):
        h = half / 2 ** (level - 1)
        pts = np.stack([cx, cy], axis=1)[:, None, :] + h * corners[None, :, :]
        sd = pts @ normals.T - offsets  # (cells, 4, edges)
        outside = (sd <= tiny).all(axis=1).any(axis=1)
        inside = (sd >= -tiny).all(axis=(1, 2))

        hit = np.zeros(len(cx), dtype=bool)
        covered = np.zeros(len(cx), dtype=bool)
        has = owner >= 0
        if has.any():
            darr = np.array(disks)
            d = darr[owner[has]]
            gx = np.clip(d[:, 0], cx[has] - h, cx[has] + h)
            gy = np.clip(d[:, 1], cy[has] - h, cy[has] + h)
            near = np.hypot(gx - d[:, 0], gy - d[:, 1])
            far = np.hypot(np.abs(d[:, 0] - cx[has]) + h, np.abs(d[:, 1] - cy[has]) + h)
            hit[has] = near < d[:, 2] - tiny
            covered[has] = far <= d[:, 2] + tiny

        place = inside & ~hit & ~outside
        new_ids = len(disks) + np.arange(int(place.sum()))
        disks.extend((x, y, h) for x, y in zip(cx[place], cy[place]))
        owner = owner.copy()
        owner[place] = new_ids

        keep = ~outside & ~covered
        if level == depth or not keep.any():
            break
        kx, ky, ko = cx[keep], cy[keep], owner[keep]
        off = 0.5 * h * corners
        cx = (kx[:, None] + off[None, :, 0]).ravel()
        cy = (ky[:, None] + off[None, :, 1]).ravel()
        owner = np.repeat(ko, 4)

    atoms = [PointMass((x, y), density * math.pi * r * r) for x, y, r in disks]
    covered_area = math.fsum(math.pi * r * r for _, _, r in disks)
    return AtomicMeasure(atoms), poly.area - covered_area


def packing_radii(poly, depth):
    """Disk radii of :func:`ball_packing` (recovered from the atom masses)."""
    meas, _ = ball_packing(poly, depth)
    return np.sqrt(np.array([a.m for a in meas.atoms]) / math.pi)
