import math

import numpy as np
import pytest

from motherbody.errors import CollocationInsideBody, UnsupportedBody
from motherbody.geometry import Disk, SkeletonGraph, SymmetricBody3D, medial_axis, skeleton_hausdorff
from motherbody.measure import BodyMeasure, total_mass
from motherbody.potential import Kernel, body_potential_many, potential_many
from motherbody.skeleton import (
    DensityBasis,
    FitConfig,
    Ring,
    analytic_mother,
    assemble_system,
    fit_density,
    mother_of_polygon,
    ridge_density,
)

from .conftest import d4_maps

K2 = Kernel(2)


# ---------------------------------------------------------------------------
# closed-form skeletons

def test_shell_mother_is_centre_point():
    mu = analytic_mother(BodyMeasure(SymmetricBody3D("sphere-shell", 1.0), 1.0, 0.0))
    (atom,) = mu.atoms
    assert atom.x == (0.0, 0.0, 0.0)
    assert atom.m == pytest.approx(4 * math.pi, rel=1e-15)


def test_cylinder_mother_is_axis_segment():
    mu = analytic_mother(BodyMeasure(SymmetricBody3D("solid-cylinder", 1.0, L=2.0), 0.0, 1.0))
    (atom,) = mu.atoms
    assert atom.length == pytest.approx(2.0)
    assert atom.lam == pytest.approx((math.pi, math.pi), rel=1e-15)


def test_cone_mother_is_linear_axis_density():
    body = SymmetricBody3D("cone-surface", 1.0, h=2.0)
    (atom,) = analytic_mother(BodyMeasure(body, 1.0, 0.0)).atoms
    assert atom.p0 == (0.0, 0.0, 0.0)
    assert atom.p1 == (0.0, 0.0, 2.0)
    assert atom.lam == pytest.approx((0.0, 2 * math.pi), rel=1e-15)


def test_disk_mother_is_centre_point():
    (atom,) = analytic_mother(BodyMeasure(Disk(2.0, (1.0, 1.0)), 0.0, 0.5)).atoms
    assert atom.x == (1.0, 1.0)
    assert atom.m == pytest.approx(math.pi * 4 * 0.5, rel=1e-15)


@pytest.mark.parametrize(
    "bm",
    [
        BodyMeasure(SymmetricBody3D("sphere-shell", 1.3), 0.7, 0.0),
        BodyMeasure(SymmetricBody3D("solid-ball", 0.8), 0.0, 2.0),
        BodyMeasure(SymmetricBody3D("solid-cylinder", 1.1, L=3.0), 0.0, 1.5),
        BodyMeasure(Disk(0.4), 0.0, 3.0),
    ],
)
def test_analytic_mother_preserves_mass(bm):
    assert total_mass(analytic_mother(bm)) == pytest.approx(total_mass(bm), rel=1e-12)


def test_cone_axis_density_mass():
    # the apex-matching density carries pi R h sigma; the surface carries pi R slant sigma
    bm = BodyMeasure(SymmetricBody3D("cone-surface", 1.0, h=2.0), 1.0, 0.0)
    assert total_mass(analytic_mother(bm)) == pytest.approx(math.pi * 2.0, rel=1e-12)
    matched = analytic_mother(bm, cone_density="mass-matched")
    assert total_mass(matched) == pytest.approx(total_mass(bm), rel=1e-12)
    with pytest.raises(ValueError):
        analytic_mother(bm, cone_density="other")


def test_unsupported_bodies(square):
    with pytest.raises(UnsupportedBody):
        analytic_mother(BodyMeasure(square, 0.0, 1.0))
    with pytest.raises(UnsupportedBody):
        analytic_mother(BodyMeasure(SymmetricBody3D("cone-surface", 1.0, h=1.0), 0.0, 1.0))


# ---------------------------------------------------------------------------
# assembly

def test_column_sums_are_the_unit_density_skeleton(square):
    basis = DensityBasis.build(medial_axis(square), 4)
    cfg = FitConfig.default(square, K=4)
    A, _ = assemble_system(square, basis, cfg)
    X = np.vstack([r.points() for r in cfg.collocation])
    unit, _ = potential_many(K2, basis.to_measure(np.ones(basis.size)), X)
    assert np.allclose(A.sum(axis=1), unit, atol=1e-10, rtol=0)


def _permutation(points, mapped):
    d = np.linalg.norm(points[:, None] - mapped[None], axis=2)
    perm = d.argmin(axis=0)
    assert np.allclose(d.min(axis=0), 0.0, atol=1e-12)
    return perm


def test_square_system_has_d4_structure(square):
    basis = DensityBasis.build(medial_axis(square), 1)
    cfg = FitConfig(collocation=[Ring((0.0, 0.0), 3.0, 8)], holdout=[])
    A, y = assemble_system(square, basis, cfg)
    X = cfg.collocation[0].points()
    for M in d4_maps():
        px = _permutation(X, X @ M.T)
        pn = _permutation(basis.nodes, basis.nodes @ M.T)
        assert np.allclose(A[np.ix_(px, pn)], A, atol=1e-10)
        assert np.allclose(y[px], y, atol=1e-10)


def test_disk_data_at_ring_three():
    disk = Disk(1.0)
    sk = SkeletonGraph(np.array([[-0.5, 0.0], [0.5, 0.0]]), [(0, 1)])
    cfg = FitConfig(collocation=[Ring((0.0, 0.0), 3.0, 16)], holdout=[])
    _, y = assemble_system(disk, DensityBasis.build(sk, 1), cfg)
    assert np.allclose(y, -math.log(3) / 2, atol=1e-8, rtol=0)


def test_collocation_inside_body_rejected(square):
    basis = DensityBasis.build(medial_axis(square), 1)
    cfg = FitConfig(collocation=[Ring((0.0, 0.0), 0.5, 8)], holdout=[])
    with pytest.raises(CollocationInsideBody):
        assemble_system(square, basis, cfg)


# ---------------------------------------------------------------------------
# fitting

def test_disk_single_point_basis_recovers_area():
    X = Ring((0.0, 0.0), 2.0, 32).points()
    A = -np.log(np.linalg.norm(X, axis=1))[:, None] / (2 * math.pi)
    y, _ = body_potential_many(K2, BodyMeasure(Disk(1.0), 0.0, 1.0), X)
    cfg = FitConfig(collocation=[], holdout=[], reg=0.0, mass_constraint=False)
    c, rep = fit_density(A, y, cfg)
    assert c == pytest.approx([math.pi], rel=1e-10)
    assert rep.residual_rms < 1e-8


def test_fit_is_homogeneous_without_regularisation(square):
    basis = DensityBasis.build(medial_axis(square), 1)
    cfg = FitConfig(collocation=[Ring((0.0, 0.0), 2.0, 16), Ring((0.0, 0.0), 3.0, 16)],
                    holdout=[], reg=0.0, mass_constraint=False)
    A, y = assemble_system(square, basis, cfg)
    c1, _ = fit_density(A, y, cfg)
    c2, _ = fit_density(A, 2 * y, cfg)
    assert np.allclose(c2, 2 * c1, rtol=1e-9, atol=1e-12)


def test_mass_constraint_needs_weights():
    cfg = FitConfig(collocation=[], holdout=[])
    with pytest.raises(ValueError):
        fit_density(np.eye(2), np.ones(2), cfg)


def test_square_fit_properties(square, square_fit):
    mu, rep, basis, c = square_fit
    assert rep.holdout_relative < 1e-3
    assert (c >= 0).all()
    assert c.std() / c.mean() > 0.05
    assert total_mass(mu) == pytest.approx(4.0, abs=1e-3)
    exact = SkeletonGraph(np.array([[-1, -1], [1, -1], [1, 1], [-1, 1], [0, 0]], float),
                          [(0, 4), (1, 4), (2, 4), (3, 4)])
    assert skeleton_hausdorff(basis.skeleton, exact) < 1e-9


def test_square_fit_is_d4_invariant(square_fit):
    _, _, basis, c = square_fit
    for M in d4_maps():
        perm = _permutation(basis.nodes, basis.nodes @ M.T)
        assert np.abs(c[perm] - c).max() < 1e-6


def test_rectangle_fit(rectangle):
    mu, rep, basis, c = mother_of_polygon(rectangle, FitConfig.default(rectangle, K=16),
                                          return_basis=True)
    assert len(mu.atoms) == 5
    assert rep.holdout_relative < 1e-3
    for M in (np.diag([1.0, -1.0]), np.diag([-1.0, 1.0]), -np.eye(2)):
        perm = _permutation(basis.nodes, basis.nodes @ M.T)
        assert np.abs(c[perm] - c).max() < 1e-6


@pytest.mark.parametrize("name", ["square", "rectangle", "triangle", "hexagon"])
def test_refinement_does_not_degrade_holdout(name, request):
    poly = request.getfixturevalue(name)
    prev = math.inf
    for K in (8, 16, 32):
        _, rep = mother_of_polygon(poly, FitConfig.default(poly, K=K))
        assert rep.holdout_rms <= 1.1 * prev
        prev = rep.holdout_rms


def test_fit_config_round_trip_and_validation(square):
    cfg = FitConfig.default(square, K=4, reg=1e-9)
    assert FitConfig.from_dict(cfg.to_dict()) == cfg
    ring = Ring((0.0, 0.0), 3.0, 8)
    with pytest.raises(ValueError):
        FitConfig(collocation=[ring], holdout=[ring])


# ---------------------------------------------------------------------------
# exact density

@pytest.mark.parametrize("name", ["square", "rectangle", "triangle", "hexagon"])
def test_ridge_density_is_an_exact_mother_body(name, request):
    poly = request.getfixturevalue(name)
    mu = ridge_density(poly)
    bm = BodyMeasure(poly, 0.0, 1.0)
    assert total_mass(mu) == pytest.approx(poly.area, rel=1e-12)
    c = np.array(poly.centroid)
    X = c + Ring((0.0, 0.0), 1.7 * poly.circumradius, 24).points()
    ub, _ = body_potential_many(K2, bm, X, rtol=1e-12)
    um, _ = potential_many(K2, mu, X)
    assert np.allclose(um, ub, atol=1e-10, rtol=0)
    # inside, the gap is half the squared distance to the boundary
    v = poly.array()
    Y = np.array([0.6 * c + 0.4 * v[i] + 0.05 * (v[(i + 1) % len(v)] - v[i]) for i in range(len(v))])
    ub, _ = body_potential_many(K2, bm, Y, rtol=1e-12)
    um, _ = potential_many(K2, mu, Y)
    d = poly.signed_distances(Y).min(axis=1)
    assert np.allclose(um - ub, 0.5 * d**2, atol=1e-10, rtol=0)


def test_square_ridge_density_grows_from_corners(square):
    (atom, *_) = ridge_density(square, K=4).atoms
    s = np.linspace(0, 1, 5) * atom.length
    lam = np.array(atom.lam)
    # the density is the distance from the nearer end, which is the corner end
    corner_first = np.linalg.norm(atom.p0) > np.linalg.norm(atom.p1)
    expected = s if corner_first else s[::-1]
    assert lam == pytest.approx(expected, abs=1e-12)
