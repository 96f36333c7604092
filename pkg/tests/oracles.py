"""Independent slow reference implementations used as test oracles."""

from math import comb

import numpy as np


def geometric_central(img, p, q):
    h, w = img.shape
    m00 = img.sum()
    cx = sum(x * img[y, x] for y in range(h) for x in range(w)) / m00
    cy = sum(y * img[y, x] for y in range(h) for x in range(w)) / m00
    total = 0.0
    for y in range(h):
        for x in range(w):
            total += (x - cx) ** p * (y - cy) ** q * img[y, x]
    return total


def complex_moment_binomial(img, p, q):
    """c_pq from central geometric moments via the binomial expansion."""
    total = 0j
    for k in range(p + 1):
        for j in range(q + 1):
            total += (comb(p, k) * comb(q, j) * (-1) ** (q - j) * 1j ** (p + q - k - j)
                      * geometric_central(img, k + j, p + q - k - j))
    return total


def naive_dft(x):
    x = np.asarray(x, dtype=complex)
    n = x.size
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        for t in range(n):
            out[k] += x[t] * np.exp(-2j * np.pi * k * t / n)
    return out


def otsu_exhaustive(bins):
    """Threshold bin maximizing between-class variance, scanning all 256 cuts in floats."""
    hist = np.bincount(np.asarray(bins).ravel(), minlength=256).astype(float)
    levels = np.arange(256, dtype=float)
    best_t, best_v = None, -1.0
    for t in range(255):
        w0, w1 = hist[: t + 1].sum(), hist[t + 1:].sum()
        if w0 == 0 or w1 == 0:
            continue
        mu0 = (hist[: t + 1] * levels[: t + 1]).sum() / w0
        mu1 = (hist[t + 1:] * levels[t + 1:]).sum() / w1
        v = w0 * w1 * (mu0 - mu1) ** 2
        if v > best_v * (1 + 1e-12):
            best_t, best_v = t, v
    return best_t


def auc_pairs(scores, labels):
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    hits = 0.0
    for a in pos:
        for b in neg:
            hits += 1.0 if a > b else 0.5 if a == b else 0.0
    return hits / (len(pos) * len(neg))


def naive_rank(query, gallery, skip=None):
    d = [(float(np.sqrt(np.sum((g - query) ** 2))), i) for i, g in enumerate(gallery) if i != skip]
    return [i for _, i in sorted(d)]


def ridge_solution(X, y, lam):
    """Ridge on centered data through an augmented least-squares system."""
    t = np.where(np.asarray(y) == 1, 1.0, -1.0)
    Xc = X - X.mean(axis=0)
    tc = t - t.mean()
    d = X.shape[1]
    A = np.vstack([Xc, np.sqrt(lam) * np.eye(d)])
    b = np.concatenate([tc, np.zeros(d)])
    return np.linalg.lstsq(A, b, rcond=None)[0]


def hu_textbook(img):
    """Classic Hu invariants from normalized central moments eta_pq."""
    m00 = img.sum()

    def eta(p, q):
        return geometric_central(img, p, q) / m00 ** (1 + (p + q) / 2)

    n20, n02, n11 = eta(2, 0), eta(0, 2), eta(1, 1)
    n30, n03, n21, n12 = eta(3, 0), eta(0, 3), eta(2, 1), eta(1, 2)
    return np.array([
        n20 + n02,
        (n20 - n02) ** 2 + 4 * n11 ** 2,
        (n30 - 3 * n12) ** 2 + (3 * n21 - n03) ** 2,
        (n30 + n12) ** 2 + (n21 + n03) ** 2,
        (n30 - 3 * n12) * (n30 + n12) * ((n30 + n12) ** 2 - 3 * (n21 + n03) ** 2)
        + (3 * n21 - n03) * (n21 + n03) * (3 * (n30 + n12) ** 2 - (n21 + n03) ** 2),
        (n20 - n02) * ((n30 + n12) ** 2 - (n21 + n03) ** 2) + 4 * n11 * (n30 + n12) * (n21 + n03),
        (3 * n21 - n03) * (n30 + n12) * ((n30 + n12) ** 2 - 3 * (n21 + n03) ** 2)
        - (n30 - 3 * n12) * (n21 + n03) * (3 * (n30 + n12) ** 2 - (n21 + n03) ** 2),
    ])


def fmt_pixel_loop(img, k, v, sigma, center):
    """Cartesian Fourier-Mellin coefficient as a plain per-pixel loop."""
    h, w = img.shape
    total = 0j
    for y in range(h):
        for x in range(w):
            f = img[y, x]
            p, q = x - center[0], y - center[1]
            if f == 0 or (p == 0 and q == 0):
                continue
            z = complex(p, q)
            total += f * z ** (-k) * (p * p + q * q) ** ((k - 2 + sigma - 1j * v) / 2)
    return total / (2 * np.pi)


def wilks_lambda(X, y, cols):
    """det(W) / det(T) on the selected columns."""
    Xs = X[:, cols]
    T = (Xs - Xs.mean(0)).T @ (Xs - Xs.mean(0))
    W = sum((Xs[y == c] - Xs[y == c].mean(0)).T @ (Xs[y == c] - Xs[y == c].mean(0)) for c in (0, 1))
    return np.linalg.det(np.atleast_2d(W)) / np.linalg.det(np.atleast_2d(T))
