import math

import numpy as np
import pytest
from hypothesis import settings

from thinlinks.curves import Arc, Segment, build_curve
from thinlinks.family import build_beta, build_gamma
from thinlinks.regions import RegionConfig

settings.register_profile("suite", max_examples=30, deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def unit_circle():
    arc = Arc((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), 1.0, (1.0, 0.0, 0.0),
              2.0 * math.pi, 1)
    return build_curve([arc], closed=True, kappa=1.0)


@pytest.fixture(scope="session")
def gamma_half():
    return build_gamma(0.5)


@pytest.fixture(scope="session")
def beta_half():
    return build_beta(0.5)


@pytest.fixture(scope="session")
def canonical_config():
    h = math.sqrt(3.0) / 2.0
    return RegionConfig((0.0, 0.0, h), (0.0, 0.0, -h), 1.0, 0.0)


def stadium(radius: float, half_gap: float, kappa: float):
    """Stadium in the xy-plane around (0,0,0) and (-2*half_gap,0,0)."""
    x = np.zeros(3)
    y = np.array([-2.0 * half_gap, 0.0, 0.0])
    n = np.array([0.0, 0.0, 1.0])
    prims = [
        Arc(x, n, radius, x + np.array([0.0, -radius, 0.0]), math.pi, 1),
        Segment(x + np.array([0.0, radius, 0.0]), y + np.array([0.0, radius, 0.0])),
        Arc(y, n, radius, y + np.array([0.0, radius, 0.0]), math.pi, 1),
        Segment(y + np.array([0.0, -radius, 0.0]), x + np.array([0.0, -radius, 0.0])),
    ]
    return build_curve(prims, closed=True, kappa=kappa)


def rotation_matrix(axis, angle: float) -> np.ndarray:
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    K = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)
