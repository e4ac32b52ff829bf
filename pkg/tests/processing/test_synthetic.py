import numpy as np

from satcn.core.models import SyntheticFieldSpec
from satcn.core.types import Metric
from satcn.io import generate_synthetic


def test_shapes_and_ids():
    s, panel, truth = generate_synthetic(SyntheticFieldSpec(n=7, T=30, seed=1))
    assert s.n == 7 and s.metric == Metric.euclidean
    assert panel.ids == truth.ids == s.ids
    assert s.ids[0] == "s0"
    assert panel.values.shape == (7, 30)
    assert panel.obs_mask.all()
    assert np.all((s.coords >= 0) & (s.coords <= 1))
    # without noise the panel is the truth
    assert np.array_equal(panel.values, truth.values)


def test_rank_one_field():
    _, panel, _ = generate_synthetic(SyntheticFieldSpec(n=6, T=40, n_basis=1))
    sv = np.linalg.svd(panel.values, compute_uv=False)
    assert sv[1] < 1e-10 * sv[0]


def test_large_length_scale_is_constant_in_space():
    _, panel, _ = generate_synthetic(
        SyntheticFieldSpec(n=8, T=50, length_scale=1e6, seed=4)
    )
    spread = panel.values.max(axis=0) - panel.values.min(axis=0)
    assert spread.max() < 1e-6


def test_determinism_and_noise():
    spec = SyntheticFieldSpec(n=5, T=20, noise_std=0.1, seed=9)
    s1, p1, t1 = generate_synthetic(spec)
    s2, p2, t2 = generate_synthetic(spec)
    assert np.array_equal(p1.values, p2.values)
    assert np.array_equal(s1.dist, s2.dist)
    assert not np.array_equal(p1.values, t1.values)
    assert np.abs(p1.values - t1.values).max() < 1.0

    other = generate_synthetic(spec.model_copy(update={"seed": 10}))[1]
    assert not np.array_equal(p1.values, other.values)


def test_relative_noise():
    spec = SyntheticFieldSpec(n=20, T=500, noise_std=0.5, noise_relative=True, seed=2)
    _, panel, truth = generate_synthetic(spec)
    ratio = (panel.values - truth.values).std() / truth.values.std()
    assert 0.4 < ratio < 0.6
