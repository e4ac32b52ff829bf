import numpy as np
import pytest

from satcn.core.errors import DataError
from satcn.tcn import TcnLayerParams, tcn_forward


def test_identity_convolution(rng):
    x = rng.normal(size=(4, 6, 3))
    p = TcnLayerParams(kernel=np.eye(3)[None], bias=np.zeros(3))
    assert np.array_equal(tcn_forward(x, p), x)


def test_difference_kernel():
    p = TcnLayerParams(kernel=np.array([1.0, -1.0]).reshape(2, 1, 1), bias=[0.0])
    out = tcn_forward(np.array([3.0, 5.0, 9.0]).reshape(1, 3, 1), p)
    assert np.allclose(out[0, :, 0], [-2.0, -4.0])

    p = TcnLayerParams(kernel=p.kernel, bias=[10.0])
    out = tcn_forward(np.array([3.0, 5.0, 9.0]).reshape(1, 3, 1), p)
    assert np.allclose(out[0, :, 0], [8.0, 6.0])


def test_stacked_lengths(rng):
    p = TcnLayerParams(kernel=rng.normal(size=(2, 2, 2)), bias=np.zeros(2))
    x = rng.normal(size=(3, 8, 2))
    once = tcn_forward(x, p)
    twice = tcn_forward(once, p)
    assert once.shape == (3, 7, 2)
    assert twice.shape == (3, 6, 2)


def test_locality(rng):
    p = TcnLayerParams(kernel=rng.normal(size=(3, 1, 2)), bias=rng.normal(size=2))
    x = rng.normal(size=(2, 9, 1))
    y = x.copy()
    y[:, 5] += 1.0
    changed = np.any(tcn_forward(x, p) != tcn_forward(y, p), axis=(0, 2))
    assert np.flatnonzero(changed).tolist() == [3, 4, 5]


def test_linearity(rng):
    p = TcnLayerParams(kernel=rng.normal(size=(2, 3, 2)), bias=np.zeros(2))
    x = rng.normal(size=(2, 5, 3))
    y = rng.normal(size=(2, 5, 3))
    lhs = tcn_forward(2.0 * x - 0.5 * y, p)
    rhs = 2.0 * tcn_forward(x, p) - 0.5 * tcn_forward(y, p)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_any_length(rng):
    p = TcnLayerParams(kernel=rng.normal(size=(2, 1, 1)), bias=[0.1])
    for t in (2, 3, 50):
        assert tcn_forward(np.ones((1, t, 1)), p).shape == (1, t - 1, 1)


def test_errors(rng):
    p = TcnLayerParams(kernel=rng.normal(size=(3, 1, 1)), bias=[0.0])
    with pytest.raises(DataError):
        tcn_forward(np.ones((1, 2, 1)), p)
    with pytest.raises(DataError):
        tcn_forward(np.ones((1, 4, 2)), p)
    with pytest.raises(ValueError):
        TcnLayerParams(kernel=np.ones((2, 1, 1)), bias=[0.0, 0.0])
