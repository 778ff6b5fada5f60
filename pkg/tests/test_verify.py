import math

import numpy as np
import pytest

from motherbody.errors import SampleInsideBody, UnknownCase
from motherbody.geometry import Disk, SymmetricBody3D
from motherbody.measure import AtomicMeasure, BodyMeasure, PointMass, SegmentDensity
from motherbody.skeleton import analytic_mother
from motherbody.verify import (
    AxiomConfig,
    check_connectivity,
    check_domination,
    check_exterior_match,
    check_positivity,
    check_support_null,
    exterior_samples,
    reproduce,
    verify_all,
)

SHELL = BodyMeasure(SymmetricBody3D("sphere-shell", 1.0), 1.0, 0.0)
DISK = BodyMeasure(Disk(1.0), 0.0, 1.0)
CENTRE = AtomicMeasure([PointMass((0.0, 0.0), math.pi)])


def test_shell_and_centre_point_pass():
    rep = verify_all(SHELL, analytic_mother(SHELL))
    assert rep.overall
    assert rep.axiom1.worst_residual < 1e-10


def test_disk_and_centre_point_pass():
    rep = verify_all(DISK, CENTRE)
    assert rep.overall
    assert rep.axiom1.worst_residual < 1e-10
    assert rep.axiom2.worst_residual >= 0.0


def test_square_centroid_point_fails_exterior_match(square):
    mu = AtomicMeasure([PointMass((0.0, 0.0), 4.0)])
    cfg = AxiomConfig(exterior_radii=(2.0,), exterior_count=64, exterior_random=0)
    r = check_exterior_match(BodyMeasure(square, 0.0, 1.0), mu, cfg)
    assert not r.passed
    # the mismatch is the hexadecapole of the square, of order 1e-3 at this radius
    assert 5e-4 < r.worst_residual < 5e-3


def test_off_centre_point_fails_domination():
    mu = AtomicMeasure([PointMass((0.5, 0.0), math.pi)])
    r = check_domination(DISK, mu)
    assert not r.passed
    assert r.witness[0] < 0  # far side of the disk
    assert not check_exterior_match(DISK, mu).passed


def test_positivity_examples():
    assert check_positivity(AtomicMeasure([PointMass((0, 0), 1.0)])).passed
    bad = AtomicMeasure([SegmentDensity((0, 0), (1, 0), [1.0, -1e-12, 1.0])])
    r = check_positivity(bad)
    assert not r.passed and r.worst_residual == -1e-12
    assert r.witness == [0.5, 0.0]
    assert check_positivity(AtomicMeasure([])).passed


def test_support_null_examples(square):
    mixed = AtomicMeasure([PointMass((0, 0), 1.0), SegmentDensity((0, 0), (1, 0), [1.0, 1.0])])
    assert check_support_null(mixed).passed
    assert not check_support_null(BodyMeasure(square, 0.0, 1.0)).passed
    assert check_support_null(BodyMeasure(square, 1.0, 0.0)).passed


def test_connectivity_examples(square):
    diagonals = AtomicMeasure([SegmentDensity((-1, -1), (1, 1), [1.0, 1.0]),
                               SegmentDensity((-1, 1), (1, -1), [1.0, 1.0])])
    assert check_connectivity(square, diagonals).passed
    r = check_connectivity(square, BodyMeasure(square, 1.0, 0.0))
    assert not r.passed and r.worst_residual > 0.9
    assert check_connectivity(DISK, CENTRE).passed


def test_connectivity_closed_loop_inside_square(square):
    t = np.linspace(0, 2 * math.pi, 9)
    loop = [SegmentDensity((0.5 * math.cos(a), 0.5 * math.sin(a)),
                           (0.5 * math.cos(b), 0.5 * math.sin(b)), [1.0, 1.0])
            for a, b in zip(t[:-1], t[1:])]
    assert not check_connectivity(square, AtomicMeasure(loop)).passed


def test_connectivity_3d():
    shell = SymmetricBody3D("sphere-shell", 1.0)
    assert check_connectivity(shell, AtomicMeasure([PointMass((0, 0, 0), 1.0)])).passed
    assert not check_connectivity(shell, BodyMeasure(shell, 1.0, 0.0)).passed
    cone = SymmetricBody3D("cone-surface", 1.0, h=1.0)
    assert check_connectivity(cone, BodyMeasure(cone, 1.0, 0.0)).passed


def test_fitted_square_passes_at_fitted_tolerance(square, square_fit):
    mu = square_fit[0]
    rep = verify_all(square, mu, AxiomConfig.fitted())
    assert rep.overall
    assert rep.axiom3.worst_residual == 0.0
    assert rep.axiom4.passed and rep.axiom5.passed


def test_negative_controls_on_the_square(square, square_fit):
    mu = square_fit[0]
    atoms = list(mu.atoms)
    a = atoms[0]
    lam = list(a.lam)
    lam[3] = -1.0
    atoms[0] = SegmentDensity(a.p0, a.p1, lam)
    assert not check_positivity(AtomicMeasure(atoms)).passed
    assert not check_support_null(BodyMeasure(square, 0.0, 1.0)).passed
    assert not check_connectivity(square, BodyMeasure(square, 1.0, 0.0)).passed


def test_cone_apex_only_check():
    cone = BodyMeasure(SymmetricBody3D("cone-surface", 1.0, h=1.0), 1.0, 0.0)
    mu = analytic_mother(cone)
    r = check_exterior_match(cone, mu, AxiomConfig(exterior_points=[[0.0, 0.0, 0.0]]))
    assert r.passed and r.worst_residual < 1e-8
    # away from the apex the axis density does not reproduce the surface
    off = check_exterior_match(cone, mu, AxiomConfig(exterior_radii=(2.0,), exterior_count=16,
                                                     exterior_random=0))
    assert not off.passed and off.worst_residual > 1e-2


def test_explicit_interior_sample_rejected():
    with pytest.raises(SampleInsideBody):
        check_exterior_match(DISK, CENTRE, AxiomConfig(exterior_points=[[0.2, 0.0]]))


def test_cylinder_axis_passes_in_two_dimensions():
    # the infinite cylinder reduces to the disk; the axis reduces to its centre
    rep = verify_all(BodyMeasure(Disk(1.0), 0.0, 2.0), AtomicMeasure([PointMass((0, 0), 2 * math.pi)]))
    assert rep.overall


def test_axiom_config_validation():
    with pytest.raises(ValueError):
        AxiomConfig(tol_match=0.0)
    with pytest.raises(ValueError):
        AxiomConfig(tol_dominate=-1.0)
    cfg = AxiomConfig.fitted(1e-4)
    assert cfg.tol_match == cfg.tol_dominate == 1e-4


def test_report_is_deterministic():
    a = verify_all(DISK, CENTRE).to_json()
    b = verify_all(DISK, CENTRE).to_json()
    assert a == b
    body = DISK.body
    assert np.array_equal(exterior_samples(body, AxiomConfig()), exterior_samples(body, AxiomConfig()))
    assert not np.array_equal(exterior_samples(body, AxiomConfig(seed=3)),
                              exterior_samples(body, AxiomConfig()))


# ---------------------------------------------------------------------------
# reproduction tables

def test_reproduce_shell():
    (t,) = reproduce("shell")
    assert [r[0] for r in t.rows] == [1.5, 2.0, 4.0, 8.0]
    for r, body, mother, quad, diff in t.rows:
        assert body == pytest.approx(1.0 / r, rel=1e-15)
        assert mother == pytest.approx(body, rel=1e-15)
        assert quad == pytest.approx(body, rel=1e-8)


def test_reproduce_cylinder():
    (t,) = reproduce("cylinder")
    for r, body, line, quad, diff in t.rows:
        assert body == pytest.approx(-0.5 * math.log(r / 2), rel=1e-14)
        assert diff == 0.0
        assert quad == pytest.approx(body, abs=1e-8)


def test_reproduce_cone():
    apex, off = reproduce("cone")
    (_, b, m, d), (_, qb, qm, qd) = apex.rows
    assert (b, m) == (0.5, pytest.approx(0.5, abs=1e-12))
    assert qb == pytest.approx(0.5, abs=1e-6) and qm == pytest.approx(0.5, abs=1e-6)
    assert all(row[-1] > 0.0 for row in off.rows)


def test_reproduce_square_profile():
    profile, summary = reproduce("square", K=4)
    assert len(profile.rows) == 4 * 5
    assert profile.columns == ["edge", "arclength", "fitted_density", "ridge_density"]
    assert dict((k, v) for k, v in summary.rows)["holdout_relative"] < 1e-3


def test_reproduce_unknown_case():
    with pytest.raises(UnknownCase):
        reproduce("torus")


def test_table_csv():
    (t,) = reproduce("shell", radii=(2.0,))
    lines = t.to_csv().splitlines()
    assert lines[0] == "r,body_closed,mother_point,body_quadrature,difference"
    assert lines[1].startswith("2,0.5,0.5,")

