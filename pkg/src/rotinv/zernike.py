"""Zernike radial polynomials and magnitude-of-moment invariants on a polar grid."""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import NamedTuple

import numpy as np

from .errors import InvalidIndex
from .features import FeatureVector
from .imgcore import PolarImage


class ZernikeIndex(NamedTuple):
    n_list: list[int]
    m_list: list[int]


def _check(n: int, m: int) -> None:
    if n < 0 or abs(m) > n or (n - abs(m)) % 2:
        raise InvalidIndex(f"invalid Zernike index (n={n}, m={m})")


@lru_cache(maxsize=None)
def radial_coefficients(n: int, m: int) -> tuple[tuple[int, float], ...]:
    """``(power, coefficient)`` terms of ``R_nm``."""
    _check(n, m)
    m = abs(m)
    terms = []
    for k in range((n - m) // 2 + 1):
        coef = (-1) ** k * factorial(n - k) / (
            factorial(k) * factorial((n + m) // 2 - k) * factorial((n - m) // 2 - k))
        terms.append((n - 2 * k, float(coef)))
    return tuple(terms)


def zernike_radial(n: int, m: int, r):
    """Radial polynomial ``R_nm(r)``; accepts scalars or arrays."""
    r_arr = np.asarray(r, dtype=np.float64)
    out = np.zeros_like(r_arr)
    for power, coef in radial_coefficients(n, m):
        out = out + coef * r_arr ** power
    return float(out) if out.ndim == 0 else out


def zernike_index_vectors(n_max: int) -> ZernikeIndex:
    """All ``(n, m)`` with ``m >= 0`` up to order ``n_max``, sorted by ``(n, m)``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    ns, ms = [], []
    for n in range(n_max + 1):
        for m in range(n % 2, n + 1, 2):
            ns.append(n)
            ms.append(m)
    return ZernikeIndex(ns, ms)


def zernike_moments(p: PolarImage, n_list, m_list) -> np.ndarray:
    """Complex moments ``A_nm = sum f(r, t) conj(V_nm(r / n_rho, t dtheta))``.

    Ring ``r`` (1-based) is evaluated at unit-disk radius ``r / n_rho``.
    """
    f = p.data
    n_rho, n_theta = f.shape
    rho = np.arange(1, n_rho + 1) / n_rho
    theta = np.arange(n_theta) * (2.0 * np.pi / n_theta)
    out = np.empty(len(n_list), dtype=np.complex128)
    for j, (n, m) in enumerate(zip(n_list, m_list)):
        _check(n, m)
        # angular projection first, then weight each ring by R_nm
        ang = f @ np.exp(-1j * m * theta)
        out[j] = np.sum(zernike_radial(n, m, rho) * ang)
    return out


def zernike_features(p: PolarImage, n_max: int = 5) -> FeatureVector:
    idx = zernike_index_vectors(n_max)
    values = np.abs(zernike_moments(p, idx.n_list, idx.m_list))
    return FeatureVector("zernike", {"n_max": n_max, "n_rho": p.n_rho, "n_theta": p.n_theta}, values)
