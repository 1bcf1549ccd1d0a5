import warnings

import numpy as np
import pytest

from hartogs.errors import DomainViolationWarning
from hartogs.geometry import Ball, ClosedBall, CPoint, Sphere


@pytest.fixture(autouse=True)
def _quiet_domain_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DomainViolationWarning)
        yield


@pytest.fixture
def sphere_setup():
    return Sphere((0, 0), 1.0), Ball((0, 0), 2.0)


@pytest.fixture
def ball_in_ball():
    return ClosedBall((0, 0), 1.0), Ball((0, 0), 3.0)


def pt(*coords) -> CPoint:
    return CPoint.from_dense(list(coords), len(coords))


def e(i: int, dim: int) -> CPoint:
    return CPoint.basis(i, dim)


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)
