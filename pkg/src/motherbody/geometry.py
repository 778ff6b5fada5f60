"""Bodies and the medial axis of convex polygons.

Polygons are stored as counter-clockwise vertex tuples and convert to the
half-plane form ``n_i . x >= d_i`` with unit inward normals ``n_i``.  The
medial axis of a convex polygon coincides with its straight skeleton and is
computed by a wavefront: every edge line moves inward at unit speed, and the
earliest edge collapse removes that edge from the front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateArea,
    NonConvex,
    NumericCollapse,
    OutsidePolygon,
    TooFewVertices,
)

EVENT_TOL = 1e-12


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertices.

    Build instances through :func:`validate_polygon`; the constructor does
    not check its input.
    """

    vertices: tuple

    @property
    def n(self):
        return len(self.vertices)

    @property
    def dim(self):
        return 2

    def array(self):
        return np.array(self.vertices, dtype=float)

    @property
    def area(self):
        v = self.array()
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @property
    def perimeter(self):
        v = self.array()
        return float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).sum())

    @property
    def centroid(self):
        v = self.array()
        x, y = v[:, 0], v[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        c = x * yn - xn * y
        a6 = 3.0 * c.sum()
        return np.array([((x + xn) * c).sum() / a6, ((y + yn) * c).sum() / a6])

    @property
    def circumradius(self):
        """Largest vertex distance from the centroid."""
        return float(np.linalg.norm(self.array() - self.centroid, axis=1).max())

    @property
    def diameter(self):
        v = self.array()
        return float(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=2).max())

    def halfplanes(self):
        """Unit inward normals ``N`` (n, 2) and offsets ``d`` with ``N @ x >= d`` inside."""
        v = self.array()
        e = np.roll(v, -1, axis=0) - v
        length = np.linalg.norm(e, axis=1)
        normals = np.column_stack([-e[:, 1], e[:, 0]]) / length[:, None]
        return normals, np.einsum("ij,ij->i", normals, v)

    def signed_distances(self, x):
        """Distances of points ``x`` (..., 2) to every edge line, positive inside."""
        normals, d = self.halfplanes()
        x = np.asarray(x, dtype=float)
        return x @ normals.T - d

    def contains(self, x, tol=0.0):
        return self.signed_distances(x).min(axis=-1) >= -tol

    def boundary_distance(self, x):
        """Unsigned distance from points ``x`` to the polygon boundary."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.full(len(x), np.inf)
        for p, q in faces(self):
            out = np.minimum(out, segment_distance(x, p, q))
        return out


@dataclass(frozen=True)
class Disk:
    """Closed disk in the plane."""

    radius: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not self.radius > 0:
            raise DegenerateArea("disk radius must be positive")

    @property
    def dim(self):
        return 2

    @property
    def area(self):
        return math.pi * self.radius**2

    @property
    def perimeter(self):
        return 2.0 * math.pi * self.radius

    @property
    def centroid(self):
        return np.array(self.center, dtype=float)

    @property
    def circumradius(self):
        return float(self.radius)

    @property
    def diameter(self):
        return 2.0 * self.radius

    def contains(self, x, tol=0.0):
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(x - self.centroid, axis=-1) <= self.radius + tol

    def boundary_distance(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.abs(np.linalg.norm(x - self.centroid, axis=1) - self.radius)


SYMMETRIC_KINDS = ("sphere-shell", "solid-ball", "solid-cylinder", "cone-surface")


@dataclass(frozen=True)
class SymmetricBody3D:
    """Rotationally symmetric body about the z axis.

    Placement: balls are centred at the origin, the cylinder spans
    ``-L/2 <= z <= L/2``, and the cone has its apex at the origin with the
    base circle of radius ``R`` at ``z = h``.  For the cone the charged
    boundary is the lateral surface only.
    """

    kind: str
    R: float
    L: float | None = None
    h: float | None = None

    def __post_init__(self):
        if self.kind not in SYMMETRIC_KINDS:
            raise ValueError(f"unknown body kind {self.kind!r}")
        if not self.R > 0:
            raise DegenerateArea("R must be positive")
        if self.kind == "solid-cylinder" and not (self.L is not None and self.L > 0):
            raise DegenerateArea("cylinder needs L > 0")
        if self.kind == "cone-surface" and not (self.h is not None and self.h > 0):
            raise DegenerateArea("cone needs h > 0")

    @property
    def dim(self):
        return 3

    @property
    def slant(self):
        return math.hypot(self.R, self.h)

    @property
    def surface_area(self):
        R = self.R
        if self.kind in ("sphere-shell", "solid-ball"):
            return 4.0 * math.pi * R**2
        if self.kind == "solid-cylinder":
            return 2.0 * math.pi * R * self.L + 2.0 * math.pi * R**2
        return math.pi * R * self.slant

    @property
    def volume(self):
        R = self.R
        if self.kind in ("sphere-shell", "solid-ball"):
            return 4.0 / 3.0 * math.pi * R**3
        if self.kind == "solid-cylinder":
            return math.pi * R**2 * self.L
        return math.pi * R**2 * self.h / 3.0

    @property
    def centroid(self):
        if self.kind == "cone-surface":
            return np.array([0.0, 0.0, 0.75 * self.h])
        return np.zeros(3)

    @property
    def circumradius(self):
        """Radius of the smallest origin-centred ball holding the body."""
        if self.kind == "solid-cylinder":
            return math.hypot(self.R, 0.5 * self.L)
        if self.kind == "cone-surface":
            return self.slant
        return float(self.R)

    @property
    def diameter(self):
        return 2.0 * self.circumradius

    def _meridian(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.hypot(x[:, 0], x[:, 1]), x[:, 2]

    def contains(self, x, tol=0.0):
        rho, z = self._meridian(x)
        R = self.R
        if self.kind in ("sphere-shell", "solid-ball"):
            return np.hypot(rho, z) <= R + tol
        if self.kind == "solid-cylinder":
            return (rho <= R + tol) & (np.abs(z) <= 0.5 * self.L + tol)
        return (z >= -tol) & (z <= self.h + tol) & (rho <= self.R * z / self.h + tol)

    def boundary_distance(self, x):
        """Distance to the charged surface (lateral surface for the cone)."""
        rho, z = self._meridian(x)
        R = self.R
        if self.kind in ("sphere-shell", "solid-ball"):
            return np.abs(np.hypot(rho, z) - R)
        if self.kind == "solid-cylinder":
            half = 0.5 * self.L
            q = np.column_stack([rho, z])
            d = np.minimum(
                segment_distance(q, (R, -half), (R, half)),
                segment_distance(q, (0.0, half), (R, half)),
            )
            return np.minimum(d, segment_distance(q, (0.0, -half), (R, -half)))
        q = np.column_stack([rho, z])
        return segment_distance(q, (0.0, 0.0), (R, self.h))


@dataclass
class SkeletonGraph:
    """Straight-segment tree; ``edges`` index into ``nodes``."""

    nodes: np.ndarray
    edges: list = field(default_factory=list)

    def segments(self):
        return [(self.nodes[i], self.nodes[j]) for i, j in self.edges]

    @property
    def total_length(self):
        return float(sum(np.linalg.norm(q - p) for p, q in self.segments()))

    def degree(self):
        deg = np.zeros(len(self.nodes), dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def leaves(self):
        return np.flatnonzero(self.degree() == 1)

    def distance(self, x):
        """Distance from points ``x`` (m, 2) to the union of edges."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.full(len(x), np.inf)
        for p, q in self.segments():
            out = np.minimum(out, segment_distance(x, p, q))
        return out

    def to_dict(self):
        return {
            "nodes": [[float(c) for c in p] for p in self.nodes],
            "edges": [[int(i), int(j)] for i, j in self.edges],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            nodes=np.array(d["nodes"], dtype=float).reshape(-1, 2),
            edges=[(int(i), int(j)) for i, j in d["edges"]],
        )

    def __eq__(self, other):
        if not isinstance(other, SkeletonGraph):
            return NotImplemented
        return (
            self.nodes.shape == other.nodes.shape
            and bool(np.array_equal(self.nodes, other.nodes))
            and list(map(tuple, self.edges)) == list(map(tuple, other.edges))
        )


def segment_distance(x, p, q):
    """Distance from points ``x`` (m, d) to the closed segment ``[p, q]``."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    e = q - p
    ee = float(e @ e)
    if ee == 0.0:
        return np.linalg.norm(x - p, axis=1)
    t = np.clip((x - p) @ e / ee, 0.0, 1.0)
    return np.linalg.norm(x - (p + t[:, None] * e), axis=1)


def validate_polygon(vertices, tol=1e-12):
    """Check and normalise a convex polygon.

    Consecutive duplicate vertices (and a closing repeat of the first vertex)
    are dropped and clockwise input is reversed.

    Raises
    ------
    TooFewVertices, DegenerateArea, NonConvex
    """
    pts = [tuple(float(c) for c in p) for p in vertices]
    if any(len(p) != 2 for p in pts):
        raise ValueError("polygon vertices must be 2D points")
    if not all(math.isfinite(c) for p in pts for c in p):
        raise ValueError("polygon vertices must be finite")
    dedup = []
    for p in pts:
        if not dedup or p != dedup[-1]:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    if len(dedup) < 3:
        raise TooFewVertices(f"need at least 3 distinct vertices, got {len(dedup)}")
    if len(set(dedup)) != len(dedup):
        raise NonConvex("repeated vertex")

    v = np.array(dedup)
    scale = max(float(np.abs(v - v.mean(axis=0)).max()), 1e-300)
    x, y = v[:, 0], v[:, 1]
    area2 = float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
    if abs(area2) <= tol * scale**2:
        raise DegenerateArea("polygon has zero area")
    if area2 < 0:
        dedup.reverse()
    n = len(dedup)
    for i in range(n):
        c = _cross(dedup[i - 1], dedup[i], dedup[(i + 1) % n])
        if c <= tol * scale**2:
            raise NonConvex(f"vertex {i} is not strictly convex")
    # A star-shaped winding (e.g. a pentagram) has all turns positive but
    # winds more than once.
    turning = 0.0
    for i in range(n):
        a = np.subtract(dedup[i], dedup[i - 1])
        b = np.subtract(dedup[(i + 1) % n], dedup[i])
        turning += math.atan2(a[0] * b[1] - a[1] * b[0], a @ b)
    if abs(turning - 2 * math.pi) > 1e-6:
        raise NonConvex("polygon winds more than once")
    return ConvexPolygon(tuple(dedup))


def regular_polygon(n, side=None, circumradius=None, center=(0.0, 0.0), phase=0.0):
    """Regular ``n``-gon given either its side length or circumradius."""
    if circumradius is None:
        circumradius = 1.0 if side is None else side / (2.0 * math.sin(math.pi / n))
    ang = phase + 2.0 * math.pi * np.arange(n) / n
    pts = np.column_stack([np.cos(ang), np.sin(ang)]) * circumradius + np.asarray(center)
    return validate_polygon(pts)


def faces(poly):
    """Edges of the polygon as ``(start, end)`` point pairs, counter-clockwise.

    Each face is the open segment between its endpoints; the vertices
    themselves are not part of any face.
    """
    v = poly.array()
    return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


def inscribed_radius(poly, x, tol=0.0):
    """Distance from an interior point to the polygon boundary.

    Raises
    ------
    OutsidePolygon
        If ``x`` is outside the polygon (by more than ``tol``).
    """
    x = np.asarray(x, dtype=float)
    r = poly.signed_distances(x).min(axis=-1)
    if np.any(r < -tol):
        raise OutsidePolygon(f"point {x.tolist()} is outside the polygon")
    return float(r) if np.ndim(r) == 0 else r


def _concurrency(normals, offsets, ids):
    """Point and time at which three offset lines ``n.x = d + t`` meet."""
    M = np.column_stack([normals[ids], -np.ones(3)])
    rhs = offsets[ids]
    if abs(np.linalg.det(M)) < 1e-14:
        raise NumericCollapse(f"edge lines {list(ids)} are nearly parallel")
    sol = np.linalg.solve(M, rhs)
    return sol[:2], float(sol[2])


def medial_axis(poly, tol=EVENT_TOL):
    """Medial axis of a convex polygon as a :class:`SkeletonGraph`.

    Edge collapses closer than ``tol`` (relative to the polygon diameter) in
    time are processed together and their nodes merged, so symmetric inputs
    produce a single central node instead of a cluster of tiny edges.

    Raises
    ------
    NumericCollapse
        When an event cannot be located stably.
    """
    normals, offsets = poly.halfplanes()
    scale = poly.diameter
    ttol = tol * max(scale, 1.0)
    ptol = 1e3 * ttol

    nodes = [np.array(p, dtype=float) for p in poly.vertices]
    edges = set()

    def add_node(p):
        for k, q in enumerate(nodes):
            if np.linalg.norm(q - p) <= ptol:
                return k
        nodes.append(np.asarray(p, dtype=float))
        return len(nodes) - 1

    def link(i, j):
        if i != j:
            edges.add((min(i, j), max(i, j)))

    # active[k] is an edge line; vnode[k] is the node where the wavefront
    # vertex between active[k-1] and active[k] started.
    active = list(range(poly.n))
    vnode = list(range(poly.n))
    t_now = 0.0
    while len(active) > 3:
        m = len(active)
        events = []
        for k in range(m):
            ids = [active[k - 1], active[k], active[(k + 1) % m]]
            p, t = _concurrency(normals, offsets, ids)
            if t < t_now - ttol:
                raise NumericCollapse("edge collapse time precedes the current front")
            events.append((t, p))
        t_min = min(t for t, _ in events)
        hit = [t <= t_min + ttol for t, _ in events]
        t_now = t_min

        if all(hit):
            centre = add_node(np.mean([p for _, p in events], axis=0))
            for k in range(m):
                link(vnode[k], centre)
            active = []
            break

        # Group collapsing edges into maximal runs of consecutive indices.
        start = next(k for k in range(m) if not hit[k])
        order = [(start + s) % m for s in range(m)]
        new_active, new_vnode = [], []
        run = []

        def close_run(run):
            p = np.mean([events[k][1] for k in run], axis=0)
            node = add_node(p)
            # vertices of the run: start of its first edge .. end of its last
            for k in run:
                link(vnode[k], node)
            link(vnode[(run[-1] + 1) % m], node)
            return node

        pending_node = None
        for k in order:
            if hit[k]:
                run.append(k)
                continue
            if run:
                pending_node = close_run(run)
                run = []
            new_active.append(active[k])
            new_vnode.append(pending_node if pending_node is not None else vnode[k])
            pending_node = None
        if run:
            node = close_run(run)
            new_vnode[0] = node
        active, vnode = new_active, new_vnode

    if len(active) == 3:
        p, _ = _concurrency(normals, offsets, active)
        centre = add_node(p)
        for k in range(3):
            link(vnode[k], centre)
    elif len(active) == 2:
        link(vnode[0], vnode[1])
    elif len(active) == 1:
        raise NumericCollapse("wavefront reduced to a single edge")

    return SkeletonGraph(np.array(nodes), sorted(edges))


def skeleton_hausdorff(a, b, samples=64):
    """Symmetric Hausdorff distance between two skeletons, by edge sampling."""
    def pts(g):
        t = np.linspace(0.0, 1.0, samples)[:, None]
        return np.vstack([p + t * (q - p) for p, q in g.segments()])

    return float(max(b.distance(pts(a)).max(), a.distance(pts(b)).max()))
