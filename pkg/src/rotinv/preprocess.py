"""Real-image normalization: Otsu, binary morphology, recentering, Laplacian pyramid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateHistogram, EmptyStructuringElement, ZeroMass
from .features import FeatureVector
from .imgcore import (
    Centroid,
    as_image,
    crop_square,
    gaussian_blur,
    gravity_center,
    pad_border,
    resize_bilinear,
)

GZ2_CROP = 250
GZ2_WORK = 64
GZ2_INNER = 60
GZ2_BORDER = 2


def histogram_bins(img) -> np.ndarray:
    """Bin index 0..255 of every pixel (``round(255 v)``, clamped)."""
    return np.clip(np.rint(as_image(img) * 255.0), 0, 255).astype(np.int64)


def otsu_bin(img) -> int:
    """Highest background bin ``t`` of the Otsu split (foreground is ``bin > t``).

    Between-class variance is compared in exact integer arithmetic, so ties go
    to the lowest ``t`` deterministically.
    """
    hist = np.bincount(histogram_bins(img).ravel(), minlength=256)
    if np.count_nonzero(hist) < 2:
        raise DegenerateHistogram("all pixels fall in one histogram bin")
    counts = [int(c) for c in hist]
    total_n = sum(counts)
    total_s = sum(i * c for i, c in enumerate(counts))
    best_t, best_num, best_den = None, -1, 1
    n0 = s0 = 0
    for t in range(255):
        n0 += counts[t]
        s0 += t * counts[t]
        n1 = total_n - n0
        if n0 == 0 or n1 == 0:
            continue
        s1 = total_s - s0
        # N^2 * between-class variance = (n0 s1 - n1 s0)^2 / (n0 n1)
        num = (n0 * s1 - n1 * s0) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t


def otsu_threshold(img) -> float:
    """Otsu threshold as an intensity; pixels with ``bin > 255 * thr`` are foreground."""
    return otsu_bin(img) / 255.0


def otsu_mask(img) -> np.ndarray:
    return histogram_bins(img) > otsu_bin(img)


def square_se(size: int) -> np.ndarray:
    return np.ones((size, size), dtype=bool)


def disk_se(radius: int) -> np.ndarray:
    """Euclidean ball stencil ``di^2 + dj^2 <= radius^2``."""
    d = np.arange(-radius, radius + 1)
    return (d[:, None] ** 2 + d[None, :] ** 2) <= radius ** 2


def _offsets(se) -> list[tuple[int, int]]:
    se = np.asarray(se, dtype=bool)
    if se.ndim != 2 or not se.any():
        raise EmptyStructuringElement("structuring element has no active cell")
    cy, cx = se.shape[0] // 2, se.shape[1] // 2
    return [(int(i) - cy, int(j) - cx) for i, j in zip(*np.nonzero(se))]


def _shift(mask: np.ndarray, di: int, dj: int, fill: bool) -> np.ndarray:
    """``out[y, x] = mask[y - di, x - dj]`` with ``fill`` outside the frame."""
    h, w = mask.shape
    out = np.full_like(mask, fill)
    if abs(di) >= h or abs(dj) >= w:
        return out
    ys = slice(max(di, 0), h + min(di, 0))
    xs = slice(max(dj, 0), w + min(dj, 0))
    yt = slice(max(-di, 0), h + min(-di, 0))
    xt = slice(max(-dj, 0), w + min(-dj, 0))
    out[ys, xs] = mask[yt, xt]
    return out


def dilate(mask, se) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    out = np.zeros_like(mask)
    for di, dj in _offsets(se):
        out |= _shift(mask, di, dj, False)
    return out


def erode(mask, se, border_value: bool = False) -> np.ndarray:
    """Binary erosion; pixels beyond the frame read ``border_value``."""
    mask = np.asarray(mask, dtype=bool)
    out = np.ones_like(mask)
    for di, dj in _offsets(se):
        out &= _shift(mask, -di, -dj, border_value)
    return out


def morph(mask, se, op: str) -> np.ndarray:
    if op == "dilate":
        return dilate(mask, se)
    if op == "erode":
        return erode(mask, se)
    if op == "close":
        return erode(dilate(mask, se), se)
    raise ValueError(f"unknown morphological operation {op!r}")


def center_crop(img, side: int) -> np.ndarray:
    img = as_image(img)
    h, w = img.shape
    if h < side or w < side:
        raise ValueError(f"image {w}x{h} smaller than crop {side}")
    y0 = (h - side) // 2
    x0 = (w - side) // 2
    return img[y0:y0 + side, x0:x0 + side]


def recenter_trim(img, out_side: int) -> np.ndarray:
    """Largest square centered on the gravity center that fits in the frame,
    resampled to ``out_side``."""
    c = gravity_center(img)
    h, w = img.shape
    half = min(c.cx + 0.5, c.cy + 0.5, w - 0.5 - c.cx, h - 0.5 - c.cy)
    return crop_square(img, c, half, out_side)


def gz2_normalize(raw, return_stages: bool = False):
    """Normalize a raw survey cutout into a centered 64x64 foreground image."""
    img = as_image(raw)
    small = resize_bilinear(center_crop(img, GZ2_CROP), GZ2_WORK, GZ2_WORK)
    if small.sum() == 0:
        raise ZeroMass("input image is black")
    try:
        mask = otsu_mask(small)
    except DegenerateHistogram:
        raise ZeroMass("no foreground can be separated") from None
    cleaned = dilate(morph(mask, square_se(5), "close"), disk_se(6))
    selected = small * cleaned
    if selected.sum() == 0:
        raise ZeroMass("mask selects nothing")
    out = pad_border(recenter_trim(selected, GZ2_INNER), GZ2_BORDER)
    if return_stages:
        return out, {"gray": small, "mask": mask, "cleaned": cleaned, "selected": selected}
    return out


@dataclass
class Pyramid:
    levels: list[np.ndarray]
    residual: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return sum(self.levels, np.zeros_like(self.residual)) + self.residual


def laplacian_pyramid(img, levels: int = 4, sigma: float = 2.0) -> Pyramid:
    """Band-pass stack ``L_j = I_j - blur(I_j)`` without decimation."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    cur = as_image(img)
    out = []
    for _ in range(levels):
        low = gaussian_blur(cur, sigma)
        out.append(cur - low)
        cur = low
    return Pyramid(out, cur)


def pyramid_features(pyr: Pyramid, extractor, center: Centroid | None = None) -> FeatureVector:
    """Concatenate ``extractor`` over the Laplacian levels in order.

    Band-pass levels have (near) zero mass, so every level is described around
    one shared center, by default the gravity center of the reconstruction.
    """
    if center is None:
        center = gravity_center(pyr.reconstruct())
    parts = [extractor(level, center) for level in pyr.levels]
    params = {**parts[0].params, "levels": len(parts)}
    return FeatureVector(parts[0].family, params, np.concatenate([p.values for p in parts]))
