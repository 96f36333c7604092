import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotinv.errors import DegenerateNormalizer, ZeroMass
from rotinv.fmt import (fmt1_features, fmt2_features, fmt_cartesian, fmt_coefficients, fmt_count,
                        fmt_normalized, half_plane_indices)
from rotinv.imgcore import Centroid, gravity_center, sample_bilinear

from oracles import fmt_pixel_loop


def test_count_examples():
    assert [fmt_count(k, k) for k in (5, 7, 9)] == [61, 113, 181]
    assert fmt_count(0, 0) == 1 and fmt_count(1, 0) == 2
    assert len(half_plane_indices(3, 2)) == fmt_count(3, 2)


def test_pixel_loop_oracle(rng):
    img = rng.random((9, 12))
    c = gravity_center(img)
    kv = [(0, 0), (1, 0), (2, -3), (3, 1), (-2, 2)]
    got = fmt_coefficients(img, kv, 0.5, c)
    for (k, v), g in zip(kv, got):
        ref = fmt_pixel_loop(img, k, v, 0.5, c)
        assert abs(g - ref) <= 1e-10 * abs(ref)


def test_m00_real_positive(templates):
    g = fmt_cartesian(templates["Sa"], 2, 2)
    assert g[0, 0].real > 0 and abs(np.angle(g[0, 0])) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(-4, 4), st.integers(-4, 4))
def test_full_plane_symmetry(seed, k, v):
    img = np.random.default_rng(seed).random((10, 10))
    a, b = fmt_coefficients(img, [(k, v), (-k, -v)], 0.5)
    assert abs(b - np.conj(a)) <= 1e-10 * max(abs(a), 1e-300)


def test_grid_lookup_negative_k(rng):
    img = rng.random((12, 12))
    g = fmt_cartesian(img, 3, 2)
    direct = fmt_coefficients(img, [(-2, 1), (0, -2)], 0.5)
    assert abs(g[-2, 1] - direct[0]) < 1e-10 * abs(direct[0])
    assert abs(g[0, -2] - direct[1]) < 1e-10 * abs(direct[1])


def test_quarter_turn_magnitudes(templates):
    for name in ("Sc", "SBb", "I"):
        img = templates[name]
        a = fmt1_features(fmt_cartesian(img, 5, 5)).values
        b = fmt1_features(fmt_cartesian(np.rot90(img), 5, 5)).values
        assert np.all(np.abs(a - b) <= 1e-9 * np.abs(a).max())
        assert np.all(a >= 0)


def test_fmt2_identities(templates):
    g = fmt_cartesian(templates["SBa"], 4, 3)
    m00 = g[0, 0].real
    f2 = fmt2_features(g).values
    assert np.abs(f2 - np.abs(g.coeffs) / m00).max() < 1e-10 * np.abs(f2).max()
    assert fmt_normalized(g)[0] == pytest.approx(1.0, abs=1e-12)
    assert len(fmt2_features(fmt_cartesian(templates["I"], 7, 7))) == 113


def test_fmt2_intensity_scale_invariant(templates):
    img = templates["Sb"]
    a = fmt2_features(fmt_cartesian(img, 5, 5)).values
    b = fmt2_features(fmt_cartesian(3.7 * img, 5, 5)).values
    assert np.abs(a - b).max() <= 1e-10 * np.abs(a).max()


def test_normalized_complex_rotation_invariant(templates):
    img = templates["I"]
    a = fmt_normalized(fmt_cartesian(img, 3, 2))
    b = fmt_normalized(fmt_cartesian(np.rot90(img, -1), 3, 2))
    assert np.abs(a - b).max() < 1e-9 * np.abs(a).max()


def test_degenerate_normalizer():
    disk = np.zeros((21, 21))
    y, x = np.mgrid[0:21, 0:21]
    disk[np.hypot(x - 10, y - 10) <= 6] = 1.0
    g = fmt_cartesian(disk, 2, 1)
    with pytest.raises(DegenerateNormalizer):
        fmt_normalized(g)
    # magnitudes still work for centrally symmetric shapes
    assert np.all(np.isfinite(fmt2_features(g).values))
    lone = np.zeros((5, 5))
    lone[2, 2] = 1.0
    with pytest.raises(DegenerateNormalizer):
        fmt2_features(fmt_cartesian(lone, 1, 1, center=Centroid(2.0, 2.0)))
    with pytest.raises(ZeroMass):
        fmt_cartesian(np.zeros((5, 5)), 1, 1)


def test_origin_pixel_is_ignored(rng):
    img = rng.random((11, 11))
    c = Centroid(5.0, 5.0)
    other = img.copy()
    other[5, 5] = 17.0
    kv = half_plane_indices(3, 2)
    assert np.array_equal(fmt_coefficients(img, kv, 0.5, c), fmt_coefficients(other, kv, 0.5, c))


def test_polar_form_cross_check():
    # annular test image keeps the r^(sigma-2) weight away from the origin,
    # where the two discretizations legitimately differ
    side, c = 81, 40.0
    y, x = np.mgrid[0:side, 0:side].astype(float)
    rr, th0 = np.hypot(x - c, y - c), np.arctan2(y - c, x - c)
    img = np.exp(-(rr - 18) ** 2 / 32) * (1 + 0.5 * np.cos(th0 - 0.3) + 0.3 * np.cos(2 * th0 + 1))
    kv = [(0, 0), (0, 2), (1, 0), (1, -1), (2, 1), (2, 0)]
    cart = fmt_coefficients(img, kv, 0.5, Centroid(c, c))
    nr, nt, R = 1000, 512, 40.0
    r = (np.arange(nr) + 0.5) * R / nr
    th = np.arange(nt) * 2 * np.pi / nt
    f = sample_bilinear(img, c + r[:, None] * np.cos(th), c + r[:, None] * np.sin(th))
    for (k, v), m in zip(kv, cart):
        pol = (f * r[:, None] ** (0.5 - 1 - 1j * v) * np.exp(-1j * k * th)).sum() * (R / nr) / nt
        assert abs(m - pol) < 0.01 * abs(pol)
