import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from motherbody.geometry import regular_polygon, validate_polygon
from motherbody.skeleton import FitConfig, mother_of_polygon

settings.register_profile(
    "default",
    deadline=None,
    max_examples=30,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (bool(passed), detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.fixture(scope="session")
def square():
    return validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])


@pytest.fixture(scope="session")
def rectangle():
    return validate_polygon([(-1, -0.5), (1, -0.5), (1, 0.5), (-1, 0.5)])


@pytest.fixture(scope="session")
def triangle():
    return validate_polygon([(0, 0), (3, 0), (1, 2)])


@pytest.fixture(scope="session")
def hexagon():
    return regular_polygon(6, side=1.0)


@pytest.fixture(scope="session")
def square_fit(square):
    """Fitted square with K=16: (measure, report, basis, coefficients)."""
    return mother_of_polygon(square, FitConfig.default(square, K=16), return_basis=True)


def d4_maps():
    """The eight symmetries of the square as 2x2 matrices."""
    rot = lambda a: np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    flip = np.array([[1.0, 0.0], [0.0, -1.0]])
    out = []
    for k in range(4):
        r = np.round(rot(k * math.pi / 2))
        out.append(r)
        out.append(r @ flip)
    return out
