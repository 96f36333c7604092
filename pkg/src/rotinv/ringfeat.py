"""Ring-projection statistics and per-ring FFT magnitude features."""

from __future__ import annotations

import numpy as np

from .errors import NotPowerOfTwo
from .features import FeatureVector
from .imgcore import PolarImage


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def dft_radix2(signal) -> np.ndarray:
    """Unnormalized forward DFT along the last axis (iterative radix-2).

    ``Y[k] = sum_n x[n] exp(-2 pi i k n / N)``. Leading axes are batched.
    """
    x = np.asarray(signal, dtype=np.complex128)
    n = x.shape[-1]
    if not is_power_of_two(n):
        raise NotPowerOfTwo(f"length {n} is not a power of two")
    bits = n.bit_length() - 1
    # bit-reversal permutation
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    y = x[..., rev].copy()
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        y = y.reshape(*x.shape[:-1], n // size, size)
        even = y[..., :half].copy()
        odd = y[..., half:] * tw
        y[..., :half] = even + odd
        y[..., half:] = even - odd
        y = y.reshape(x.shape)
        size *= 2
    return y


def ring_stats(p: PolarImage, literal: bool = False) -> FeatureVector:
    """Per-ring mean, standard deviation, skewness and kurtosis.

    Output is ``[mu_1..mu_R, sigma_1..sigma_R, gamma_1..gamma_R, kappa_1..kappa_R]``.
    Zero-variance rings give ``gamma = kappa = 0``. With ``literal=True`` the
    last two rows are ``mu^3 / sigma^3`` and ``mu^4 / sigma^4`` instead.
    """
    f = p.data
    mu = f.mean(axis=1)
    d = f - mu[:, None]
    var = np.mean(d ** 2, axis=1)
    sigma = np.sqrt(var)
    ok = var > 1e-24 * np.maximum(1.0, mu ** 2)
    safe = np.where(ok, sigma, 1.0)
    if literal:
        gamma = np.where(ok, mu ** 3 / safe ** 3, 0.0)
        kappa = np.where(ok, mu ** 4 / safe ** 4, 0.0)
    else:
        gamma = np.where(ok, np.mean(d ** 3, axis=1) / safe ** 3, 0.0)
        kappa = np.where(ok, np.mean(d ** 4, axis=1) / safe ** 4, 0.0)
    values = np.concatenate([mu, sigma, gamma, kappa])
    return FeatureVector("ring", {"n_rho": p.n_rho, "n_theta": p.n_theta, "literal": literal}, values)


def fft_bands(n_theta: int) -> list[tuple[int, int]]:
    """0-based inclusive bin ranges pooled into each per-ring feature.

    The first three are the single bins DC, 1 and 2; band ``p`` (``2 <= p <=
    log2(n_theta / 2)``) averages bins ``2^(p-1) + 1 .. 2^p``.
    """
    if not is_power_of_two(n_theta) or n_theta < 4:
        raise NotPowerOfTwo(f"n_theta={n_theta} must be a power of two >= 4")
    top = (n_theta // 2).bit_length() - 1
    bands = [(0, 0), (1, 1), (2, 2)]
    bands += [(2 ** (p - 1) + 1, 2 ** p) for p in range(2, top + 1)]
    return bands


def fft_ring_features(p: PolarImage) -> FeatureVector:
    mag = np.abs(dft_radix2(p.data))
    cols = [mag[:, lo:hi + 1].mean(axis=1) for lo, hi in fft_bands(p.n_theta)]
    values = np.stack(cols, axis=1).ravel()
    return FeatureVector("fft", {"n_rho": p.n_rho, "n_theta": p.n_theta}, values)
