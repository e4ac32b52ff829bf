import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satcn.aggregation import (
    EPSILON,
    SanLayerParams,
    aggregate,
    compute_deg,
    san_forward,
    scale,
)
from satcn.core.errors import GraphError
from satcn.core.types import GraphKind
from satcn.graph import NeighborGraph, build_distance_matrix, build_masked_adjacency

MEAN, WMEAN, SOFTMAX, SOFTMIN, STD, MEAN_D, STD_D = range(7)


def star(n, senders):
    """Node 0 receives from the given (sender, weight) pairs, nobody else receives."""
    receivers = (tuple(senders),) + ((),) * (n - 1)
    return NeighborGraph(n=n, receivers=receivers, k=len(senders), kind=GraphKind.full)


def test_mean():
    g = star(4, [(1, 0.5), (2, 0.5), (3, 0.5)])
    agg = aggregate([0.0, 2.0, 4.0, 6.0], g)
    assert agg.shape == (4, 7, 1)
    assert agg[0, MEAN, 0] == pytest.approx(4.0)


def test_weighted_mean():
    g = star(3, [(1, 0.5), (2, 0.25)])
    agg = aggregate([0.0, 1.0, 3.0], g)
    assert agg[0, WMEAN, 0] == pytest.approx(5.0 / 3.0, abs=1e-12)


def test_softmax_softmin():
    g = star(3, [(1, 0.5), (2, 0.5)])
    agg = aggregate([0.0, 1.0, 2.0], g)
    assert agg[0, SOFTMAX, 0] == pytest.approx(1.73106, abs=1e-5)
    assert agg[0, SOFTMIN, 0] == pytest.approx(1.26894, abs=1e-5)

    # large values stay finite
    agg = aggregate([0.0, 1000.0, 1001.0], g)
    assert agg[0, SOFTMAX, 0] == pytest.approx(1000.73106, abs=1e-5)


def test_std_and_distance_aggregates():
    g = star(4, [(1, 0.5), (2, 0.5), (3, 0.5)])
    agg = aggregate([0.0, 5.0, 5.0, 5.0], g)
    assert agg[0, STD, 0] == pytest.approx(math.sqrt(1e-5), rel=1e-9)
    assert math.sqrt(EPSILON) == pytest.approx(3.1623e-3, rel=1e-4)

    g = star(3, [(1, 0.5), (2, 0.3)])
    agg = aggregate(np.ones((3, 2)), g)
    assert np.allclose(agg[0, MEAN_D], 0.4)
    assert np.allclose(agg[0, STD_D], math.sqrt(0.01 + EPSILON))


def test_empty_neighborhood_is_zero():
    g = star(3, [(1, 0.5)])
    agg = aggregate(np.full((3, 2), 7.0), g)
    assert np.all(agg[1:] == 0.0)


def test_zero_weights_count_for_mean():
    g = star(3, [(1, 0.0), (2, 0.0)])
    agg = aggregate([0.0, 2.0, 4.0], g)
    assert agg[0, MEAN, 0] == pytest.approx(3.0)
    # weight sum 0 gives a weighted mean of 0
    assert agg[0, WMEAN, 0] == 0.0


def test_constant_field_fixed_point(line3):
    g = build_masked_adjacency(line3, 2)
    agg = aggregate(np.full((3, 1), -2.5), g)
    for node in range(3):
        for a in (MEAN, WMEAN, SOFTMAX, SOFTMIN):
            assert agg[node, a, 0] == pytest.approx(-2.5, abs=1e-12)
        assert agg[node, STD, 0] == pytest.approx(math.sqrt(EPSILON), abs=1e-12)


def test_compute_deg():
    half = ((1, 0.5), (2, 0.5))
    g = NeighborGraph(
        n=3,
        receivers=(half, ((0, 0.5), (2, 0.5)), ((0, 0.5), (1, 0.5))),
        k=2,
        kind=GraphKind.full,
    )
    assert compute_deg(g) == pytest.approx(math.log(2.0), abs=1e-12)

    e1 = math.e - 1.0
    g = NeighborGraph(
        n=2, receivers=(((1, e1),), ((0, e1),)), k=1, kind=GraphKind.full
    )
    assert compute_deg(g) == pytest.approx(1.0, abs=1e-12)

    zero = NeighborGraph(
        n=2, receivers=(((1, 0.0),), ((0, 0.0),)), k=1, kind=GraphKind.full
    )
    with pytest.raises(GraphError):
        compute_deg(zero)


def test_scale():
    g = star(2, [(1, math.e - 1.0)])
    agg = np.full((2, 7, 1), 2.0)
    out = scale(agg, g, 0.5)
    assert out.shape == (2, 21, 1)
    assert np.allclose(out[0, :7], 2.0)
    assert out[0, 7, 0] == pytest.approx(4.0)
    assert out[0, 14, 0] == pytest.approx(1.0)
    # no incoming weight: scaled copies vanish
    assert np.all(out[1, 7:] == 0.0)

    # amplification cancels attenuation
    deg = 1.0
    out = scale(agg, g, deg)
    assert np.allclose(out[0, 7:14], agg[0])
    assert np.allclose(out[0, 14:], agg[0])

    with pytest.raises(GraphError):
        scale(agg, g, 0.0)


def naive_aggregate(x, g, eps=EPSILON):
    n, c = x.shape
    out = np.zeros((n, 7, c))
    for j, nbh in enumerate(g.receivers):
        if not nbh:
            continue
        idx = [i for i, _ in nbh]
        w = np.array([w for _, w in nbh])
        vals = x[idx]
        out[j, MEAN] = vals.mean(axis=0)
        out[j, WMEAN] = (w[:, None] * vals).sum(axis=0) / w.sum() if w.sum() else 0
        e = np.exp(vals)
        out[j, SOFTMAX] = (vals * e).sum(axis=0) / e.sum(axis=0)
        e = np.exp(-vals)
        out[j, SOFTMIN] = (vals * e).sum(axis=0) / e.sum(axis=0)
        var = (vals**2).mean(axis=0) - vals.mean(axis=0) ** 2
        out[j, STD] = np.sqrt(np.maximum(var, 0.0) + eps)
        out[j, MEAN_D] = w.mean()
        out[j, STD_D] = math.sqrt(max((w**2).mean() - w.mean() ** 2, 0.0) + eps)
    return out


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=8),
    k=st.integers(min_value=1, max_value=4),
    c=st.integers(min_value=1, max_value=3),
    seed=st.integers(min_value=0, max_value=2**16),
)
def test_aggregate_matches_naive(n, k, c, seed):
    rng = np.random.default_rng(seed)
    s = build_distance_matrix(rng.uniform(size=(n, 2)))
    omega = set(rng.choice(n, size=int(rng.integers(0, n)), replace=False).tolist())
    g = build_masked_adjacency(s, k, omega)
    x = rng.normal(size=(n, c))

    agg = aggregate(x, g)
    assert np.allclose(agg, naive_aggregate(x, g), rtol=1e-10, atol=1e-10)
    assert np.all(np.isfinite(agg))

    # softmin is the negated softmax of the negated input
    assert np.allclose(agg[:, SOFTMIN], -aggregate(-x, g)[:, SOFTMAX], atol=1e-14)

    # rows of nodes that never send do not matter
    y = x.copy()
    y[sorted(omega)] = rng.normal(size=(len(omega), c)) * 100
    assert np.array_equal(aggregate(y, g), agg)


def test_san_forward_shapes_and_zero_map(line3, rng):
    g = build_masked_adjacency(line3, 2)
    x = rng.normal(size=(3, 5, 1))
    p = SanLayerParams(phi=np.zeros((4, 21)), bias=np.zeros(4), deg=0.5)
    out = san_forward(x, g, p)
    assert out.shape == (3, 5, 4)
    assert np.all(out == 0.0)

    with pytest.raises(GraphError):
        san_forward(rng.normal(size=(3, 5, 2)), g, p)
    with pytest.raises(ValueError):
        SanLayerParams(phi=np.zeros((4, 20)), bias=np.zeros(4), deg=0.5)


def test_san_forward_isolated_node(line3, rng):
    # node 2 has no sender, so only the bias reaches it
    g = build_masked_adjacency(line3, 2, {0, 1})
    p = SanLayerParams(
        phi=rng.normal(size=(2, 21)), bias=np.array([0.3, -0.2]), deg=0.5
    )
    out = san_forward(rng.normal(size=(3, 4, 1)), g, p)
    assert np.allclose(out[2], [[0.3, 0.0]] * 4)


def test_san_forward_per_step_graphs(line3, rng):
    g1 = build_masked_adjacency(line3, 1)
    g2 = build_masked_adjacency(line3, 1, {0})
    p = SanLayerParams(phi=rng.normal(size=(2, 21)), bias=np.zeros(2), deg=0.7)
    x = rng.normal(size=(3, 2, 1))
    out = san_forward(x, [g1, g2], p)
    assert np.allclose(out[:, 0], san_forward(x[:, :1], g1, p)[:, 0])
    assert np.allclose(out[:, 1], san_forward(x[:, 1:], g2, p)[:, 0])
    with pytest.raises(GraphError):
        san_forward(x, [g1], p)


def test_san_forward_permutation_equivariance(rng):
    coords = rng.uniform(size=(6, 2))
    perm = rng.permutation(6)
    g = build_masked_adjacency(build_distance_matrix(coords), 3, {1})
    gp = build_masked_adjacency(
        build_distance_matrix(coords[perm]), 3, {int(np.flatnonzero(perm == 1)[0])}
    )
    p = SanLayerParams(phi=rng.normal(size=(3, 42)), bias=rng.normal(size=3), deg=0.4)
    x = rng.normal(size=(6, 3, 2))
    assert np.allclose(san_forward(x, g, p)[perm], san_forward(x[perm], gp, p))
