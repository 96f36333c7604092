import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotinv.errors import InvalidIndex
from rotinv.imgcore import PolarImage
from rotinv.zernike import zernike_features, zernike_index_vectors, zernike_moments, zernike_radial


def test_radial_examples():
    assert zernike_radial(0, 0, 0.3) == 1
    assert zernike_radial(1, 1, 0.5) == pytest.approx(0.5)
    assert zernike_radial(2, 0, 0.5) == pytest.approx(-0.5)
    assert zernike_radial(4, -2, 0.7) == zernike_radial(4, 2, 0.7)


@pytest.mark.parametrize("n,m", [(2, 1), (3, 5), (1, 0), (-1, 1)])
def test_radial_invalid(n, m):
    with pytest.raises(InvalidIndex):
        zernike_radial(n, m, 0.5)


def test_radial_at_one():
    for n in range(9):
        assert abs(zernike_radial(n, n, 1.0)) == pytest.approx(1.0)


def test_index_vectors():
    idx = zernike_index_vectors(5)
    assert list(idx.n_list) == [0, 1, 2, 2, 3, 3, 4, 4, 4, 5, 5, 5]
    assert list(idx.m_list) == [0, 1, 0, 2, 1, 3, 0, 2, 4, 1, 3, 5]
    assert tuple(map(list, zernike_index_vectors(0))) == ([0], [0])


def test_feature_count(rng):
    p = PolarImage(rng.random((10, 16)), 30.0)
    assert len(zernike_features(p, 5)) == 12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 31), st.integers(0, 2 ** 32 - 1))
def test_shift_invariance_and_phase_law(k, seed):
    rng = np.random.default_rng(seed)
    p = PolarImage(rng.random((6, 32)), 10.0)
    a = zernike_features(p, 5).values
    b = zernike_features(p.shifted(k), 5).values
    assert np.abs(a - b).max() <= 1e-9 * max(1.0, np.abs(a).max())
    idx = zernike_index_vectors(5)
    A = zernike_moments(p, idx.n_list, idx.m_list)
    B = zernike_moments(p.shifted(k), idx.n_list, idx.m_list)
    alpha = k * 2 * math.pi / 32
    assert np.abs(B - A * np.exp(-1j * np.array(idx.m_list) * alpha)).max() < 1e-9


def test_negative_repetition_same_magnitude(rng):
    p = PolarImage(rng.random((8, 16)), 5.0)
    n = [2, 3, 4, 5, 5]
    m = [2, 1, 4, 3, 5]
    pos = zernike_moments(p, n, m)
    neg = zernike_moments(p, n, [-x for x in m])
    assert np.abs(np.abs(pos) - np.abs(neg)).max() < 1e-12
