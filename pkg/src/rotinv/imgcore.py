"""Image primitives shared by every descriptor family.

Images are 2-D ``float64`` arrays indexed ``img[y, x]``. Pixel ``(x, y)`` sits
at real coordinate ``(x, y)``, so a ``W x H`` image spans ``[-0.5, W - 0.5]``
horizontally. All functions return new arrays and never modify their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.ndimage import correlate1d

from .errors import EmptyImage, ZeroMass


class Centroid(NamedTuple):
    cx: float
    cy: float


@dataclass(frozen=True)
class PolarImage:
    """Polar resampling of an image around a center.

    ``data[r, t]`` holds the sample at radius ``(r + 1) * r_max / n_rho`` and
    angle ``t * 2 * pi / n_theta``; ring 0 is therefore the innermost nonzero
    radius and the origin itself is never sampled.
    """

    data: np.ndarray
    r_max: float

    @property
    def n_rho(self) -> int:
        return self.data.shape[0]

    @property
    def n_theta(self) -> int:
        return self.data.shape[1]

    def shifted(self, k: int) -> "PolarImage":
        """Circular shift by ``k`` angular steps (a rotation by ``k * dtheta``)."""
        return PolarImage(np.roll(self.data, k, axis=1), self.r_max)


def as_image(img) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    return arr


def pixel_grid(shape: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(x, y)`` coordinate arrays of the given image shape."""
    h, w = shape
    y, x = np.mgrid[0:h, 0:w]
    return x.astype(np.float64), y.astype(np.float64)


def gravity_center(img) -> Centroid:
    img = as_image(img)
    m00 = img.sum()
    if m00 == 0:
        raise ZeroMass("image has zero total intensity")
    h, w = img.shape
    m10 = img.sum(axis=0) @ np.arange(w, dtype=np.float64)
    m01 = img.sum(axis=1) @ np.arange(h, dtype=np.float64)
    return Centroid(float(m10 / m00), float(m01 / m00))


def frame_center(shape: tuple[int, int]) -> Centroid:
    h, w = shape
    return Centroid((w - 1) / 2.0, (h - 1) / 2.0)


def max_radius(img, center: Centroid, eps: float = 0.0) -> float:
    """Largest distance from ``center`` to a pixel brighter than ``eps``."""
    img = as_image(img)
    ys, xs = np.nonzero(img > eps)
    if xs.size == 0:
        raise EmptyImage(f"no pixel exceeds {eps}")
    d2 = (xs - center.cx) ** 2 + (ys - center.cy) ** 2
    return float(np.sqrt(d2.max()))


def sample_bilinear(img, xs, ys, outside: str = "zero") -> np.ndarray:
    """Bilinear samples of ``img`` at real coordinates ``(xs, ys)``.

    ``outside="zero"`` treats every pixel beyond the frame as 0;
    ``outside="clamp"`` clamps the coordinates into the frame first.
    """
    img = np.asarray(img, dtype=np.float64)
    h, w = img.shape
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if outside == "clamp":
        xs = np.clip(xs, 0.0, w - 1.0)
        ys = np.clip(ys, 0.0, h - 1.0)
    elif outside != "zero":
        raise ValueError(f"unknown outside mode {outside!r}")

    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = xs - x0
    fy = ys - y0
    x0 = x0.astype(np.int64)
    y0 = y0.astype(np.int64)

    def tap(yi, xi):
        ok = (xi >= 0) & (xi < w) & (yi >= 0) & (yi < h)
        vals = img[np.clip(yi, 0, h - 1), np.clip(xi, 0, w - 1)]
        return np.where(ok, vals, 0.0)

    # weights of exactly zero must not touch out-of-range neighbours, so the
    # tap() masking above is what keeps identity resampling bit-exact
    top = tap(y0, x0) * (1.0 - fx) + np.where(fx > 0, tap(y0, x0 + 1) * fx, 0.0)
    bot = tap(y0 + 1, x0) * (1.0 - fx) + np.where(fx > 0, tap(y0 + 1, x0 + 1) * fx, 0.0)
    return top * (1.0 - fy) + np.where(fy > 0, bot * fy, 0.0)


def resize_bilinear(img, w: int, h: int) -> np.ndarray:
    """Resample to ``w x h`` with pixel-center alignment and clamped edges."""
    img = as_image(img)
    if w < 1 or h < 1:
        raise ValueError("target size must be at least 1x1")
    src_h, src_w = img.shape
    if (src_w, src_h) == (w, h):
        return img.copy()
    xs = (np.arange(w) + 0.5) * (src_w / w) - 0.5
    ys = (np.arange(h) + 0.5) * (src_h / h) - 0.5
    gx, gy = np.meshgrid(xs, ys)
    return sample_bilinear(img, gx, gy, outside="clamp")


def crop_square(img, center: Centroid, half: float, out_side: int) -> np.ndarray:
    """Sample the square ``[c - half, c + half]^2`` onto an ``out_side`` grid.

    The square is taken in continuous coordinates, so sub-pixel centers are
    honoured exactly; reads beyond the frame are 0.
    """
    step = 2.0 * half / out_side
    offs = (np.arange(out_side) + 0.5) * step - half
    gx, gy = np.meshgrid(center.cx + offs, center.cy + offs)
    return sample_bilinear(img, gx, gy, outside="zero")


def pad_border(img, border: int) -> np.ndarray:
    return np.pad(img, border, mode="constant", constant_values=0.0)


def center_square_normalize(img, out_side: int = 62, border: int = 2,
                            eps: float = 0.0) -> np.ndarray:
    """Center on the gravity center, crop to ``2 R_max``, resize and add a border.

    ``R_max`` is the farthest pixel brighter than ``eps``; it is floored at
    half a pixel so a lone point source still yields a valid square.
    """
    img = as_image(img)
    c = gravity_center(img)
    r = max(max_radius(img, c, eps), 0.5)
    return pad_border(crop_square(img, c, r, out_side), border)


def to_polar(img, n_rho: int, n_theta: int, r_max: float,
             center: Centroid | None = None) -> PolarImage:
    """Resample ``img`` on an ``n_rho x n_theta`` polar grid around ``center``.

    ``center`` defaults to the gravity center. Samples outside the frame read 0.
    """
    img = as_image(img)
    if n_rho < 1 or n_theta < 4 or not r_max > 0:
        raise ValueError("need n_rho >= 1, n_theta >= 4 and r_max > 0")
    if center is None:
        center = gravity_center(img)
    rho = np.arange(1, n_rho + 1) * (r_max / n_rho)
    theta = np.arange(n_theta) * (2.0 * np.pi / n_theta)
    xs = center.cx + rho[:, None] * np.cos(theta)[None, :]
    ys = center.cy + rho[:, None] * np.sin(theta)[None, :]
    return PolarImage(sample_bilinear(img, xs, ys, outside="zero"), float(r_max))


def gaussian_kernel(sigma: float) -> np.ndarray:
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    radius = int(math.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def gaussian_blur(img, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel cut at ``ceil(3 sigma)``, replicate borders."""
    img = as_image(img)
    k = gaussian_kernel(sigma)
    out = correlate1d(img, k, axis=0, mode="nearest")
    return correlate1d(out, k, axis=1, mode="nearest")


def _snap(v: float) -> float:
    r = round(v)
    return float(r) if abs(v - r) < 1e-12 else v


def rotate(img, angle: float, center: Centroid | None = None) -> np.ndarray:
    """Rotate counter-clockwise in ``(x, y)`` coordinates by ``angle`` radians.

    A point at polar angle ``theta`` around ``center`` moves to
    ``theta + angle``. Uses inverse-mapped bilinear sampling with zeros outside
    the frame; quarter turns about the frame center are exact permutations.
    """
    img = as_image(img)
    if center is None:
        center = frame_center(img.shape)
    if angle == 0:
        return img.copy()
    c, s = _snap(math.cos(angle)), _snap(math.sin(angle))
    x, y = pixel_grid(img.shape)
    dx = x - center.cx
    dy = y - center.cy
    src_x = c * dx + s * dy + center.cx
    src_y = -s * dx + c * dy + center.cy
    return sample_bilinear(img, src_x, src_y, outside="zero")


def to_gray(rgb) -> np.ndarray:
    """Luminance of an ``(h, w, 3|4)`` array, or pass a 2-D array through."""
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim == 2:
        return arr
    return arr[..., 0] * 0.299 + arr[..., 1] * 0.587 + arr[..., 2] * 0.114
