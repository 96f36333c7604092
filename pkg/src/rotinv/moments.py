"""Geometric and complex moments, and the Hu and Flusser invariant sets."""

from __future__ import annotations

import numpy as np

from .errors import ZeroMass
from .features import FeatureVector
from .imgcore import Centroid, as_image, gravity_center, pixel_grid


def geometric_moment(img, p: int, q: int, center: Centroid = Centroid(0.0, 0.0)) -> float:
    """``sum (x - cx)^p (y - cy)^q f(x, y)``; the default center gives raw ``m_pq``."""
    if p < 0 or q < 0:
        raise ValueError("moment orders must be non-negative")
    img = as_image(img)
    x, y = pixel_grid(img.shape)
    return float(np.sum((x - center.cx) ** p * (y - center.cy) ** q * img))


def _centered_z(img, center: Centroid | None) -> np.ndarray:
    if center is None:
        center = gravity_center(img)
    x, y = pixel_grid(img.shape)
    return (x - center.cx) + 1j * (y - center.cy)


def complex_moment(img, p: int, q: int, center: Centroid | None = None) -> complex:
    """``c_pq = sum (x + iy)^p (x - iy)^q f`` with coordinates about ``center``.

    ``center`` defaults to the gravity center (central complex moments).
    """
    if p < 0 or q < 0:
        raise ValueError("moment orders must be non-negative")
    img = as_image(img)
    z = _centered_z(img, center)
    return complex(np.sum(z ** p * np.conj(z) ** q * img))


def complex_moments(img, orders, center: Centroid | None = None) -> dict[tuple[int, int], complex]:
    """Several central complex moments sharing one coordinate grid."""
    img = as_image(img)
    z = _centered_z(img, center)
    zc = np.conj(z)
    return {(p, q): complex(np.sum(z ** p * zc ** q * img)) for p, q in orders}


_HU_ORDERS = [(1, 1), (2, 0), (0, 2), (3, 0), (0, 3), (2, 1), (1, 2)]
_FLUSSER_ORDERS = [(1, 1), (2, 1), (1, 2), (2, 0), (3, 0), (2, 2), (3, 1), (4, 0)]


def _require_mass(img) -> None:
    if img.sum() == 0:
        raise ZeroMass("image has zero total intensity")


def hu_features(img, center: Centroid | None = None) -> FeatureVector:
    """Seven Hu invariants written through central complex moments.

    Products of conjugate pairs (``c20 c02`` etc.) are real up to rounding and
    only their real part is kept.
    """
    img = as_image(img)
    if center is None:
        _require_mass(img)
    c = complex_moments(img, _HU_ORDERS, center)
    c11, c20, c02 = c[1, 1], c[2, 0], c[0, 2]
    c30, c03, c21, c12 = c[3, 0], c[0, 3], c[2, 1], c[1, 2]
    t5 = c30 * c12 ** 3
    values = [
        c11.real,
        (c20 * c02).real,
        (c30 * c03).real,
        (c21 * c12).real,
        t5.real,
        (c20 * c12 ** 2).real,
        t5.imag,
    ]
    return FeatureVector("hu", {}, np.array(values))


def flusser_features(img, center: Centroid | None = None) -> FeatureVector:
    """Eleven Flusser invariants of second to fourth order."""
    img = as_image(img)
    if center is None:
        _require_mass(img)
    c = complex_moments(img, _FLUSSER_ORDERS, center)
    c12 = c[1, 2]
    a = c[2, 0] * c12 ** 2
    b = c[3, 0] * c12 ** 3
    d = c[3, 1] * c12 ** 2
    e = c[4, 0] * c12 ** 4
    values = [
        c[1, 1].real,
        (c[2, 1] * c12).real,
        a.real, a.imag,
        b.real, b.imag,
        c[2, 2].real,
        d.real, d.imag,
        e.real, e.imag,
    ]
    return FeatureVector("flusser", {}, np.array(values))
