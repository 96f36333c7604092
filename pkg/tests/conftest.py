import numpy as np
import pytest

from rotinv.datasets import generate_templates


@pytest.fixture(scope="session")
def templates():
    return generate_templates(seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def blob(side=33, sigma=4.0, cx=None, cy=None):
    c = (side - 1) / 2
    y, x = np.mgrid[0:side, 0:side].astype(float)
    cx = c if cx is None else cx
    cy = c if cy is None else cy
    return np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * sigma ** 2))


def mass_radius(img):
    """m00 and the largest distance of any nonzero pixel from the centroid."""
    from rotinv.imgcore import gravity_center, max_radius
    c = gravity_center(img)
    return float(img.sum()), max(max_radius(img, c), 1.0)


# (number of moment factors, total order) of every Hu and Flusser component
HU_DEGREES = [(1, 2), (2, 4), (2, 6), (2, 6), (4, 12), (3, 8), (4, 12)]
FLUSSER_DEGREES = [(1, 2), (2, 6), (3, 8), (3, 8), (4, 12), (4, 12), (1, 4),
                   (3, 10), (3, 10), (5, 16), (5, 16)]


def invariant_scale(img, degrees):
    """Homogeneous magnitude bound m00^k R^d of each moment invariant.

    Components that vanish by symmetry are compared against this bound rather
    than against their own (round-off sized) value.
    """
    m00, r = mass_radius(img)
    return np.array([m00 ** k * r ** d for k, d in degrees])
