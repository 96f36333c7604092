"""Discrete Fourier-Mellin transform evaluated directly on the Cartesian grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNormalizer, ZeroMass
from .features import FeatureVector
from .imgcore import Centroid, as_image, gravity_center, pixel_grid

DEFAULT_SIGMA = 0.5


def fmt_count(k_max: int, v_max: int) -> int:
    if k_max < 0 or v_max < 0:
        raise ValueError("K and V must be non-negative")
    return (1 + v_max) + k_max * (2 * v_max + 1)


def half_plane_indices(k_max: int, v_max: int) -> list[tuple[int, int]]:
    """``(0, 0..V)`` followed by ``k = 1..K`` each with ``v = -V..V``."""
    idx = [(0, v) for v in range(v_max + 1)]
    for k in range(1, k_max + 1):
        idx.extend((k, v) for v in range(-v_max, v_max + 1))
    return idx


@dataclass(frozen=True)
class FmtGrid:
    k_max: int
    v_max: int
    sigma: float
    coeffs: np.ndarray

    def __getitem__(self, kv: tuple[int, int]) -> complex:
        k, v = kv
        if k < 0 or (k == 0 and v < 0):
            return complex(np.conj(self[-k, -v]))
        if k == 0:
            return complex(self.coeffs[v])
        return complex(self.coeffs[(1 + self.v_max) + (k - 1) * (2 * self.v_max + 1) + v + self.v_max])


def _polar_terms(img, center: Centroid | None):
    img = as_image(img)
    if center is None:
        center = gravity_center(img)
    x, y = pixel_grid(img.shape)
    dx = (x - center.cx).ravel()
    dy = (y - center.cy).ravel()
    f = img.ravel()
    r2 = dx * dx + dy * dy
    keep = (r2 > 1e-18) & (f != 0)
    dx, dy, f, r2 = dx[keep], dy[keep], f[keep], r2[keep]
    return f, np.arctan2(dy, dx), 0.5 * np.log(r2)


def fmt_coefficients(img, kv, sigma: float = DEFAULT_SIGMA,
                     center: Centroid | None = None) -> np.ndarray:
    """``M(k, v)`` for arbitrary integer pairs, including negative ``k``.

    Each pixel at ``z = p + iq`` (relative to ``center``) contributes
    ``f z^-k |z|^(k - 2 + sigma - iv) / 2pi``; the pixel sitting exactly on the
    center is skipped.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    f, theta, log_r = _polar_terms(img, center)
    # z^-k |z|^(k-2+sigma-iv) = exp((sigma - 2 - iv) log r - i k theta)
    radial = f * np.exp((sigma - 2.0) * log_r)
    ks = sorted({k for k, _ in kv})
    vs = sorted({v for _, v in kv})
    ang = radial[None, :] * np.exp(-1j * np.outer(ks, theta))
    mel = np.exp(-1j * np.outer(vs, log_r))
    table = ang @ mel.T
    ki = {k: i for i, k in enumerate(ks)}
    vi = {v: i for i, v in enumerate(vs)}
    out = np.array([table[ki[k], vi[v]] for k, v in kv], dtype=np.complex128)
    return out / (2.0 * np.pi)


def fmt_cartesian(img, k_max: int, v_max: int, sigma: float = DEFAULT_SIGMA,
                  center: Centroid | None = None) -> FmtGrid:
    img = as_image(img)
    if center is None and img.sum() == 0:
        raise ZeroMass("image has zero total intensity")
    coeffs = fmt_coefficients(img, half_plane_indices(k_max, v_max), sigma, center)
    return FmtGrid(k_max, v_max, sigma, coeffs)


def fmt1_features(g: FmtGrid) -> FeatureVector:
    return FeatureVector("fmt1", {"k": g.k_max, "v": g.v_max, "sigma": g.sigma}, np.abs(g.coeffs))


def fmt_normalized(g: FmtGrid, tol: float = 1e-12) -> np.ndarray:
    """Complex scale/rotation-normalized coefficients ``I(k, v)``.

    ``I = M00^((-sigma + iv) / sigma) * exp(-i k arg M10) * M(k, v)``. The
    phase factor carries a minus sign so that it cancels the ``exp(-ik alpha)``
    a rotation puts on ``M(k, v)`` under this module's kernel convention.
    """
    m00 = g[0, 0]
    m10 = g[1, 0] if g.k_max >= 1 else None
    if abs(m00) < tol:
        raise DegenerateNormalizer("|M(0,0)| is zero")
    if g.k_max >= 1 and abs(m10) < tol * abs(m00):
        raise DegenerateNormalizer("|M(1,0)| is zero")
    phase = np.angle(m10) if m10 is not None else 0.0
    out = np.empty_like(g.coeffs)
    for j, (k, v) in enumerate(half_plane_indices(g.k_max, g.v_max)):
        scale = m00 ** ((-g.sigma + 1j * v) / g.sigma)
        out[j] = scale * np.exp(-1j * k * phase) * g.coeffs[j]
    return out


def fmt2_features(g: FmtGrid, tol: float = 1e-12) -> FeatureVector:
    """Magnitudes of ``I(k, v)``.

    The rotation phase has unit modulus, so only ``M(0, 0)`` has to be
    non-degenerate here; shapes with ``M(1, 0) = 0`` (centrally symmetric
    ones) still get features.
    """
    m00 = g[0, 0]
    if abs(m00) < tol:
        raise DegenerateNormalizer("|M(0,0)| is zero")
    scale = np.array([abs(m00 ** ((-g.sigma + 1j * v) / g.sigma))
                      for _, v in half_plane_indices(g.k_max, g.v_max)])
    return FeatureVector("fmt2", {"k": g.k_max, "v": g.v_max, "sigma": g.sigma},
                         scale * np.abs(g.coeffs))
