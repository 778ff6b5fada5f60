import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from motherbody.errors import ZeroMass
from motherbody.geometry import Disk, SymmetricBody3D, inscribed_radius, validate_polygon
from motherbody.measure import (
    AtomicMeasure,
    BodyMeasure,
    PointMass,
    SegmentDensity,
    ball_packing,
    moments,
    packing_radii,
    scale_to_mass,
    total_mass,
)


def test_total_mass_examples():
    shell = BodyMeasure(SymmetricBody3D("sphere-shell", 1.0), 1.0, 0.0)
    assert total_mass(shell) == pytest.approx(4 * math.pi, rel=1e-15)
    sq = validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert total_mass(BodyMeasure(sq, 0.0, 1.0)) == 1.0
    seg = AtomicMeasure([SegmentDensity((0, 0), (1, 0), [2.0, 2.0])])
    assert total_mass(seg) == 2.0


def test_body_mass_is_a_perimeter_plus_b_area():
    p = validate_polygon([(0, 0), (3, 0), (1, 2)])
    bm = BodyMeasure(p, 0.7, 1.3)
    assert total_mass(bm) == pytest.approx(0.7 * p.perimeter + 1.3 * p.area, abs=1e-12)
    ball = SymmetricBody3D("solid-ball", 2.0)
    assert total_mass(BodyMeasure(ball, 0.5, 2.0)) == pytest.approx(
        0.5 * 16 * math.pi + 2.0 * 32 * math.pi / 3, rel=1e-12)


def test_body_measure_validation():
    sq = validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    with pytest.raises(ValueError):
        BodyMeasure(sq, 0.0, 0.0)
    with pytest.raises(ValueError):
        BodyMeasure(sq, -1.0, 2.0)


def test_moments_of_point_masses():
    m = moments(AtomicMeasure([PointMass((1, 2), 3.0)]))
    assert m.total == 3.0
    assert np.allclose(m.centroid, (1, 2))
    assert np.allclose(m.second, 0.0)
    m = moments(AtomicMeasure([PointMass((-1, 0), 1.0), PointMass((1, 0), 1.0)]))
    assert np.allclose(m.centroid, 0.0)
    assert m.second[0, 0] == pytest.approx(2.0)


def _monte_carlo_moments(sampler, n, mass, rng):
    X = sampler(rng, n)
    c = X.mean(axis=0)
    second = mass * np.cov(X.T, bias=True)
    return c, second


def test_polygon_moments_against_monte_carlo():
    p = validate_polygon([(0, 0), (3, 0), (2.5, 1.5), (1, 2)])
    rng = np.random.default_rng(7)

    def sampler(rng, n):
        v = p.array()
        lo, hi = v.min(axis=0), v.max(axis=0)
        X = rng.uniform(lo, hi, size=(4 * n, 2))
        return X[p.contains(X)][:n]

    m = moments(BodyMeasure(p, 0.0, 1.0))
    c, second = _monte_carlo_moments(sampler, 400_000, p.area, rng)
    assert m.total == pytest.approx(p.area)
    assert np.allclose(m.centroid, c, atol=5e-3)
    assert np.allclose(m.second, second, rtol=2e-2, atol=5e-3)


@pytest.mark.parametrize(
    "body, a, b",
    [
        (SymmetricBody3D("sphere-shell", 1.5), 1.0, 0.0),
        (SymmetricBody3D("solid-ball", 1.5), 0.0, 1.0),
        (SymmetricBody3D("solid-cylinder", 1.0, L=3.0), 0.0, 1.0),
        (SymmetricBody3D("solid-cylinder", 1.0, L=3.0), 1.0, 0.0),
        (SymmetricBody3D("cone-surface", 1.0, h=2.0), 1.0, 0.0),
    ],
)
def test_symmetric_moments_against_monte_carlo(body, a, b):
    rng = np.random.default_rng(3)
    n = 400_000
    R = body.R
    if body.kind == "sphere-shell":
        X = rng.normal(size=(n, 3))
        X = R * X / np.linalg.norm(X, axis=1)[:, None]
    elif body.kind == "solid-ball":
        X = rng.uniform(-R, R, size=(3 * n, 3))
        X = X[np.linalg.norm(X, axis=1) <= R][:n]
    elif body.kind == "solid-cylinder" and b:
        r = R * np.sqrt(rng.uniform(size=n))
        t = rng.uniform(0, 2 * math.pi, n)
        X = np.column_stack([r * np.cos(t), r * np.sin(t), rng.uniform(-body.L / 2, body.L / 2, n)])
    elif body.kind == "solid-cylinder":
        side, cap = 2 * math.pi * R * body.L, math.pi * R * R
        kind = rng.choice(3, size=n, p=np.array([side, cap, cap]) / (side + 2 * cap))
        t = rng.uniform(0, 2 * math.pi, n)
        r = np.where(kind == 0, R, R * np.sqrt(rng.uniform(size=n)))
        z = np.where(kind == 0, rng.uniform(-body.L / 2, body.L / 2, n),
                     np.where(kind == 1, -body.L / 2, body.L / 2))
        X = np.column_stack([r * np.cos(t), r * np.sin(t), z])
    else:
        z = body.h * np.sqrt(rng.uniform(size=n))  # lateral area density grows like z
        t = rng.uniform(0, 2 * math.pi, n)
        r = R * z / body.h
        X = np.column_stack([r * np.cos(t), r * np.sin(t), z])
    m = moments(BodyMeasure(body, a, b))
    mass = total_mass(BodyMeasure(body, a, b))
    assert m.total == pytest.approx(mass, rel=1e-12)
    assert np.allclose(m.centroid, X.mean(axis=0), atol=1e-2)
    assert np.allclose(m.second, mass * np.cov(X.T, bias=True), rtol=2e-2, atol=2e-2 * mass)


def test_segment_moments_exact_for_linear_density():
    seg = AtomicMeasure([SegmentDensity((0, 0), (2, 0), [0.0, 2.0])])
    m = moments(seg)
    assert m.total == pytest.approx(2.0)
    assert m.centroid[0] == pytest.approx(4.0 / 3.0)
    # density x on [0, 2]: E[x^2] = 2, variance 2 - 16/9
    assert m.second[0, 0] == pytest.approx(2.0 * (2.0 - 16.0 / 9.0))


def test_scale_to_mass_examples():
    m = scale_to_mass(AtomicMeasure([PointMass((0, 0), 2.0)]), 1.0)
    assert m.atoms[0].m == 1.0
    m = scale_to_mass(AtomicMeasure([SegmentDensity((0, 0), (1, 0), [1.0, 1.0])]), 3.0)
    assert m.atoms[0].lam == (3.0, 3.0)
    with pytest.raises(ZeroMass):
        scale_to_mass(AtomicMeasure([]), 1.0)


def test_measure_json_round_trip():
    m = AtomicMeasure([PointMass((0.1, 1 / 3), math.pi),
                       SegmentDensity((0, 0), (1, 2), [0.0, 0.25, 1e-300])])
    text = json.dumps(m.to_dict())
    assert AtomicMeasure.from_dict(json.loads(text)) == m


def test_mixed_dimension_rejected():
    with pytest.raises(ValueError):
        AtomicMeasure([PointMass((0, 0), 1.0), PointMass((0, 0, 0), 1.0)])


# ---------------------------------------------------------------------------
# ball packing

def test_unit_square_depth_one_single_disk():
    sq = validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    mu, residual = ball_packing(sq, 1)
    assert len(mu.atoms) == 1
    assert mu.atoms[0].m == pytest.approx(math.pi * 0.25)
    assert mu.atoms[0].x == pytest.approx((0.5, 0.5))
    assert residual == pytest.approx(1 - math.pi / 4)


def test_depth_must_be_positive(square):
    with pytest.raises(ValueError):
        ball_packing(square, 0)


@pytest.mark.parametrize("name", ["square", "hexagon", "triangle"])
def test_packing_disjoint_inside_and_nested(name, request):
    poly = request.getfixturevalue(name)
    prev_res, prev_off = math.inf, math.inf
    for depth in range(1, 8):
        mu, res = ball_packing(poly, depth)
        if not mu.atoms:
            assert res == pytest.approx(poly.area)
            continue
        X = np.array([a.x for a in mu.atoms])
        r = packing_radii(poly, depth)
        for x, rj in zip(X, r):
            assert inscribed_radius(poly, x) >= rj - 1e-12
        D = np.linalg.norm(X[:, None] - X[None], axis=2)
        S = r[:, None] + r[None]
        np.fill_diagonal(D, np.inf)
        assert (D >= S - 1e-12).all()
        # the first disk can shadow a whole level, so strictness starts at depth 3
        assert res < prev_res if depth > 3 else res <= prev_res
        off = np.linalg.norm(moments(mu).centroid - np.array(poly.centroid))
        assert off <= prev_off + 1e-12
        prev_res, prev_off = res, off


@given(st.floats(0.1, 10.0), st.integers(1, 6))
def test_packing_mass_plus_residual_is_area(scale, depth):
    poly = validate_polygon([(0, 0), (2 * scale, 0), (scale, 1.5 * scale)])
    mu, res = ball_packing(poly, depth)
    assert total_mass(mu) + res == pytest.approx(poly.area, rel=1e-12)


def test_packing_density_scales_masses(square):
    mu1, _ = ball_packing(square, 4)
    mu2, _ = ball_packing(square, 4, density=2.5)
    assert total_mass(mu2) == pytest.approx(2.5 * total_mass(mu1))


def test_disk_moments_closed_form():
    d = Disk(2.0, (1.0, -1.0))
    m = moments(BodyMeasure(d, 0.0, 1.0))
    assert np.allclose(m.centroid, (1.0, -1.0))
    assert np.allclose(m.second, 4 * math.pi * np.eye(2) * 1.0)  # area * R^2 / 4
