"""Candidate mother bodies.

Two routes:

* closed-form skeletons for the symmetric bodies (centre point for balls and
  disks, the axis for the cylinder and the cone), and
* for convex polygons, a nonnegative piecewise-linear density on the medial
  axis fitted so that its exterior potential matches the body's at
  collocation rings.

:func:`ridge_density` gives the exact answer for the polygon case: on the
ridge between edges ``i`` and ``j`` the density is ``dist(x, boundary) *
|n_i - n_j|``, the jump in the normal derivative of ``dist^2 / 2``.  It is
linear along every skeleton edge, so the hat basis can represent it exactly
and the fit can be checked against it.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import CollocationInsideBody, UnsupportedBody
from .geometry import ConvexPolygon, Disk, SymmetricBody3D, medial_axis
from .measure import AtomicMeasure, BodyMeasure, PointMass, SegmentDensity, total_mass
from .nnls import solve_normal
from .potential import Kernel, body_potential_many, potential_many, segment_integrals


# ---------------------------------------------------------------------------
# closed-form skeletons

def analytic_mother(bm, cone_density="apex"):
    """Closed-form skeleton measure for a disk or a symmetric 3D body.

    Parameters
    ----------
    bm : BodyMeasure
        Disk, sphere-shell, solid-ball, solid-cylinder or cone-surface body.
    cone_density : {"apex", "mass-matched"}
        For the cone, ``"apex"`` uses the axis density ``2 pi R_i sigma``
        per unit height, which reproduces the apex potential but carries
        only ``h / slant`` of the surface charge; ``"mass-matched"`` scales
        it by ``slant / h`` so the total charge agrees.

    Raises
    ------
    UnsupportedBody
    """
    body = bm.body
    M = total_mass(bm)
    if isinstance(body, Disk):
        return AtomicMeasure([PointMass(body.center, M)])
    if not isinstance(body, SymmetricBody3D):
        raise UnsupportedBody(f"no closed-form skeleton for {type(body).__name__}")
    if body.kind in ("sphere-shell", "solid-ball"):
        return AtomicMeasure([PointMass((0.0, 0.0, 0.0), M)])
    if body.kind == "solid-cylinder":
        half = 0.5 * body.L
        lam = M / body.L
        return AtomicMeasure([SegmentDensity((0, 0, -half), (0, 0, half), [lam, lam])])
    if bm.b:
        raise UnsupportedBody("solid cones have no closed-form axis density")
    top = 2.0 * math.pi * body.R * bm.a
    if cone_density == "mass-matched":
        top *= body.slant / body.h
    elif cone_density != "apex":
        raise ValueError(f"unknown cone density {cone_density!r}")
    return AtomicMeasure([SegmentDensity((0, 0, 0), (0, 0, body.h), [0.0, top])])


# ---------------------------------------------------------------------------
# density basis

@dataclass
class DensityBasis:
    """Hat functions on a skeleton whose edges are split into ``K`` pieces.

    ``nodes`` holds the mesh points (skeleton nodes first), ``chains[e]`` the
    mesh node indices along skeleton edge ``e`` from its first to its second
    endpoint, and ``elements`` every consecutive pair of those.
    """

    skeleton: object
    K: int
    nodes: np.ndarray
    chains: list
    elements: list

    @classmethod
    def build(cls, skeleton, K):
        if K < 1:
            raise ValueError("K must be >= 1")
        nodes = [np.asarray(p, dtype=float) for p in skeleton.nodes]
        chains = []
        for i, j in skeleton.edges:
            p, q = skeleton.nodes[i], skeleton.nodes[j]
            chain = [i]
            for s in range(1, K):
                nodes.append(p + (q - p) * (s / K))
                chain.append(len(nodes) - 1)
            chain.append(j)
            chains.append(chain)
        elements = [(c[s], c[s + 1]) for c in chains for s in range(K)]
        return cls(skeleton, K, np.array(nodes), chains, elements)

    @property
    def size(self):
        return len(self.nodes)

    def mass_weights(self):
        """Mass carried by each hat function at unit coefficient."""
        w = np.zeros(self.size)
        for i, j in self.elements:
            half = 0.5 * float(np.linalg.norm(self.nodes[j] - self.nodes[i]))
            w[i] += half
            w[j] += half
        return w

    def to_measure(self, c):
        c = np.asarray(c, dtype=float)
        atoms = []
        for (i, j), chain in zip(self.skeleton.edges, self.chains):
            atoms.append(SegmentDensity(self.skeleton.nodes[i], self.skeleton.nodes[j], c[chain]))
        return AtomicMeasure(atoms)

    def profiles(self, c):
        """Rows ``(edge, arclength, density)`` for every mesh node on every edge."""
        rows = []
        for e, ((i, j), chain) in enumerate(zip(self.skeleton.edges, self.chains)):
            L = float(np.linalg.norm(self.skeleton.nodes[j] - self.skeleton.nodes[i]))
            for s, node in enumerate(chain):
                rows.append((e, L * s / self.K, float(c[node])))
        return rows


def ridge_density(poly, skeleton=None, K=1):
    """Exact mother-body density on the medial axis of a convex polygon.

    On each skeleton edge the two closest edge lines ``i, j`` are fixed and
    the density is ``dist * |n_i - n_j|``, linear along the edge.
    """
    if skeleton is None:
        skeleton = medial_axis(poly)
    normals, _ = poly.halfplanes()
    atoms = []
    for p, q in skeleton.segments():
        mid = 0.5 * (p + q)
        sd = poly.signed_distances(mid)
        i, j = np.argsort(sd)[:2]
        jump = float(np.linalg.norm(normals[i] - normals[j]))
        t = np.linspace(0.0, 1.0, K + 1)
        pts = p + t[:, None] * (q - p)
        dist = poly.signed_distances(pts).min(axis=1)
        atoms.append(SegmentDensity(p, q, np.maximum(dist, 0.0) * jump))
    return AtomicMeasure(atoms)


# ---------------------------------------------------------------------------
# fitting

@dataclass(frozen=True)
class Ring:
    center: tuple
    radius: float
    count: int
    phase: float = 0.0

    def points(self):
        ang = self.phase + 2.0 * math.pi * np.arange(self.count) / self.count
        return np.asarray(self.center) + self.radius * np.column_stack([np.cos(ang), np.sin(ang)])


def ring_points(rings):
    if not rings:
        return np.zeros((0, 2))
    return np.vstack([r.points() for r in rings])


# The innermost ring hugs the body: exterior data far away barely constrains
# the density near the boundary, which is where domination is tight.
COLLOCATION_RADII = (1.02, 1.5, 2.5)


@dataclass
class FitConfig:
    """Collocation and holdout rings, Tikhonov weight and mass constraint.

    ``reg=None`` selects ``1e-6 * trace(A^T A) / columns``.
    """

    collocation: list
    holdout: list
    reg: float | None = None
    mass_constraint: bool = True
    K: int = 16

    def __post_init__(self):
        c = {(tuple(r.center), r.radius, r.count, r.phase) for r in self.collocation}
        h = {(tuple(r.center), r.radius, r.count, r.phase) for r in self.holdout}
        if c & h:
            raise ValueError("holdout rings must differ from collocation rings")

    @classmethod
    def default(cls, body, K=16, basis_size=None, radii=COLLOCATION_RADII, **kw):
        """Collocation rings at ``radii`` times the circumradius, holdout at 3.5x.

        Ring counts are rounded up to multiples of 8 so that rings around a
        symmetric body share its reflection symmetries.
        """
        if basis_size is None:
            if isinstance(body, ConvexPolygon):
                basis_size = DensityBasis.build(medial_axis(body), K).size
            else:
                basis_size = 1
        centre = tuple(float(c) for c in body.centroid)
        rc = body.circumradius
        per_ring = 8 * math.ceil(4 * basis_size / 8)
        return cls(
            collocation=[Ring(centre, f * rc, per_ring) for f in radii],
            holdout=[Ring(centre, 3.5 * rc, max(64, per_ring // 2), phase=math.pi / 64)],
            K=K,
            **kw,
        )

    def to_dict(self):
        return {
            "collocation": [asdict(r) for r in self.collocation],
            "holdout": [asdict(r) for r in self.holdout],
            "reg": self.reg,
            "mass_constraint": self.mass_constraint,
            "K": self.K,
        }

    @classmethod
    def from_dict(cls, d):
        def rings(items):
            return [Ring(tuple(r["center"]), float(r["radius"]), int(r["count"]),
                         float(r.get("phase", 0.0))) for r in items]

        return cls(
            collocation=rings(d["collocation"]),
            holdout=rings(d.get("holdout", [])),
            reg=d.get("reg"),
            mass_constraint=bool(d.get("mass_constraint", True)),
            K=int(d.get("K", 16)),
        )


@dataclass
class FitReport:
    residual_rms: float
    holdout_rms: float
    mass_error: float
    min_coefficient: float
    iterations: int
    holdout_scale: float = field(default=float("nan"))

    @property
    def holdout_relative(self):
        return self.holdout_rms / self.holdout_scale

    def to_dict(self):
        d = asdict(self)
        d["holdout_relative"] = self.holdout_relative
        return d


def _as_body_measure(body):
    return body if isinstance(body, BodyMeasure) else BodyMeasure(body, 0.0, 1.0)


def basis_matrix(basis, X, k, rtol=1e-12):
    """Potential at points ``X`` of every hat function (columns)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    A = np.zeros((len(X), basis.size))
    for i, j in basis.elements:
        v, _ = segment_integrals(k, basis.nodes[i], basis.nodes[j], X, rtol=rtol)
        A[:, i] += v[:, 0]
        A[:, j] += v[:, 1]
    return A


def assemble_system(body, basis, cfg, k=Kernel(2), rtol=1e-12):
    """Collocation matrix and right-hand side for the exterior-match fit.

    ``A[i, j]`` is the potential at collocation point ``i`` of hat function
    ``j``; ``y[i]`` is the body potential there.

    Raises
    ------
    CollocationInsideBody
    """
    bm = _as_body_measure(body)
    X = ring_points(cfg.collocation)
    if np.any(bm.body.contains(X)):
        raise CollocationInsideBody("collocation points must lie outside the body")
    A = basis_matrix(basis, X, k, rtol=rtol)
    y, _ = body_potential_many(k, bm, X, rtol=rtol)
    return A, y


REG_SCALE = 1e-6


def default_reg(A):
    # The collocation matrix is numerically rank deficient; weaker damping
    # lets roundoff break the symmetry of the fitted density.
    return REG_SCALE * float(np.einsum("ij,ij->", A, A)) / A.shape[1]


def fit_density(A, y, cfg, mass_weights=None, mass=None, holdout=None):
    """Nonnegative Tikhonov least squares for the density coefficients.

    Parameters
    ----------
    A, y : ndarray
        Collocation system.
    cfg : FitConfig
        Supplies ``reg`` and ``mass_constraint``.
    mass_weights, mass : optional
        Mass of each basis function and the body mass; required when
        ``cfg.mass_constraint`` is on.
    holdout : (ndarray, ndarray), optional
        Holdout matrix and data used for ``holdout_rms``; without it the
        collocation residual is reported in its place.

    Returns
    -------
    c : ndarray
    report : FitReport
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    reg = default_reg(A) if cfg.reg is None else float(cfg.reg)
    G = A.T @ A + reg * np.eye(A.shape[1])
    g = A.T @ y
    if cfg.mass_constraint:
        if mass_weights is None or mass is None:
            raise ValueError("mass constraint needs basis weights and the body mass")
        c, its = solve_normal(G, g, w=mass_weights, mass=mass)
    else:
        c, its = solve_normal(G, g)

    res = A @ c - y
    residual_rms = float(np.sqrt(np.mean(res**2)))
    if holdout is not None:
        Ah, yh = holdout
        hres = Ah @ c - yh
        holdout_rms = float(np.sqrt(np.mean(hres**2)))
        scale = float(np.sqrt(np.mean(yh**2)))
    else:
        holdout_rms = residual_rms
        scale = float(np.sqrt(np.mean(y**2)))
    mass_error = float("nan")
    if mass_weights is not None and mass is not None:
        mass_error = abs(float(mass_weights @ c) - mass)
    report = FitReport(
        residual_rms=residual_rms,
        holdout_rms=holdout_rms,
        mass_error=mass_error,
        min_coefficient=float(c.min()),
        iterations=its,
        holdout_scale=scale,
    )
    return c, report


def mother_of_polygon(poly, cfg=None, k=Kernel(2), return_basis=False):
    """Fit a nonnegative density on the medial axis of ``poly``.

    Returns
    -------
    measure : AtomicMeasure
        One segment atom per skeleton edge with ``cfg.K + 1`` samples.
    report : FitReport
    basis, coefficients : only with ``return_basis=True``
    """
    if cfg is None:
        cfg = FitConfig.default(poly)
    basis = DensityBasis.build(medial_axis(poly), cfg.K)
    bm = BodyMeasure(poly, 0.0, 1.0)
    A, y = assemble_system(bm, basis, cfg, k)
    Xh = ring_points(cfg.holdout)
    holdout = None
    if len(Xh):
        holdout = (basis_matrix(basis, Xh, k), body_potential_many(k, bm, Xh, rtol=1e-12)[0])
    c, report = fit_density(A, y, cfg, basis.mass_weights(), total_mass(bm), holdout)
    mu = basis.to_measure(c)
    if return_basis:
        return mu, report, basis, c
    return mu, report


def holdout_residual(body, mu, points, k=Kernel(2)):
    """Relative rms mismatch between ``mu`` and the body at ``points``."""
    bm = _as_body_measure(body)
    u_body, _ = body_potential_many(k, bm, points, rtol=1e-12)
    u_mu, _ = potential_many(k, mu, points)
    return float(np.sqrt(np.mean((u_mu - u_body) ** 2)) / np.sqrt(np.mean(u_body**2)))
