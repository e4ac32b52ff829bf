import numpy as np
import pytest

from satcn.core.errors import DataError, SamplingError
from satcn.sampling import (
    Normalization,
    TimeSeriesPanel,
    generate_training_batch,
    window_starts,
)


@pytest.fixture
def panel10():
    # sensor i at step t has value 10 * i + t
    values = 10.0 * np.arange(3)[:, None] + np.arange(10)[None, :]
    return TimeSeriesPanel.from_array(values, ids=["0", "1", "2"])


def test_panel_construction():
    p = TimeSeriesPanel.from_array([[1.0, np.nan], [3.0, 4.0]], ids=["a", "b"])
    assert p.n == 2 and p.T == 2
    assert p.timestamps == ("0", "1")
    assert np.array_equal(p.obs_mask, [[True, False], [True, True]])
    # unobserved cells are stored as 0
    assert p.values[0, 1] == 0.0
    assert np.isnan(p.to_array()[0, 1])

    with pytest.raises(DataError):
        TimeSeriesPanel.from_array([1.0, 2.0])
    with pytest.raises(DataError):
        TimeSeriesPanel.from_array([[1.0, 2.0]], ids=["a", "b"])
    with pytest.raises(DataError):
        TimeSeriesPanel(values=[[np.inf]], obs_mask=[[True]])


def test_panel_rows_window_missing(panel10):
    sub = panel10.rows([2, 0]).window(3, 5)
    assert sub.ids == ("2", "0")
    assert sub.timestamps == ("3", "4")
    assert np.array_equal(sub.values, [[23.0, 24.0], [3.0, 4.0]])

    missing = np.zeros((3, 10), dtype=bool)
    missing[1, 4] = True
    assert not panel10.with_missing(missing).obs_mask[1, 4]
    assert panel10.obs_mask[1, 4]

    with pytest.raises(DataError):
        panel10.window(5, 5)


def test_normalization():
    norm = Normalization.fit([[1.0, 3.0, 100.0]], [[True, True, False]])
    assert norm.mean == 2.0
    assert norm.std == 1.0
    assert np.allclose(norm.invert(norm.apply([5.0, -1.0])), [5.0, -1.0])

    # constant data keeps a unit std
    assert Normalization.fit([[4.0, 4.0]], [[True, True]]).std == 1.0
    with pytest.raises(DataError):
        Normalization.fit([[4.0]], [[False]])


def test_window_starts():
    assert window_starts(10, 4, 2) == range(0, 5)
    # a panel of exactly h + u steps has one window
    assert list(window_starts(6, 4, 2)) == [0]


def test_batch_windows_are_aligned(panel10, line3, rng):
    batch = generate_training_batch(panel10, line3, 3, 2, 2, 1, 16, rng)
    assert len(batch) == 16
    assert batch.inputs().shape == (16, 3, 5)
    assert batch.targets().shape == (16, 3, 3)

    for sample in batch.samples:
        (hidden,) = sample.omega
        t0 = sample.start
        assert 0 <= t0 <= 5
        expected = panel10.values[:, t0 : t0 + 5]
        # target is the last h columns of the unmasked window
        assert np.array_equal(sample.target, expected[:, 2:])
        assert np.all(sample.x[hidden] == 0.0)
        visible = [i for i in range(3) if i != hidden]
        assert np.array_equal(sample.x[visible], expected[visible])
        assert sample.eval_mask.all()
        assert len(sample.a) == 5
        for g in sample.a:
            assert all(i != hidden for nbh in g.receivers for i, _ in nbh)


def test_batch_respects_missing_cells(line3, rng):
    values = np.ones((3, 6))
    values[0, 4] = np.nan
    panel = TimeSeriesPanel.from_array(values)
    batch = generate_training_batch(panel, line3, 4, 2, 1, 0, 4, rng)
    for sample in batch.samples:
        assert sample.start == 0
        assert sample.x[0, 4] == 0.0
        # missing cell sits in target column 2
        assert not sample.eval_mask[0, 2]
        assert sample.eval_mask.sum() == 11
        assert 0 in sample.a[4].omega


def test_batch_without_masking(panel10, line3, rng):
    batch = generate_training_batch(panel10, line3, 4, 1, 2, 0, 3, rng)
    for sample in batch.samples:
        assert sample.omega == frozenset()
        assert np.array_equal(
            sample.x, panel10.values[:, sample.start : sample.start + 5]
        )


def test_batch_masked_only_evaluation(panel10, line3, rng):
    batch = generate_training_batch(
        panel10, line3, 3, 2, 2, 1, 8, rng, eval_masked_only=True
    )
    for sample in batch.samples:
        (hidden,) = sample.omega
        assert sample.eval_mask[hidden].all()
        assert sample.eval_mask.sum() == 3


def test_batch_normalization(panel10, line3, rng):
    norm = Normalization(mean=10.0, std=2.0)
    batch = generate_training_batch(panel10, line3, 3, 2, 2, 0, 2, rng, norm=norm)
    for sample in batch.samples:
        raw = panel10.values[:, sample.start + 2 : sample.start + 5]
        assert np.allclose(sample.target, (raw - 10.0) / 2.0)


def test_batch_determinism(panel10, line3):
    a = generate_training_batch(
        panel10, line3, 3, 2, 2, 1, 6, np.random.default_rng(5)
    )
    b = generate_training_batch(
        panel10, line3, 3, 2, 2, 1, 6, np.random.default_rng(5)
    )
    assert np.array_equal(a.inputs(), b.inputs())
    assert [s.omega for s in a.samples] == [s.omega for s in b.samples]
    assert [s.start for s in a.samples] == [s.start for s in b.samples]


def test_batch_errors(panel10, line3, rng):
    with pytest.raises(SamplingError):
        generate_training_batch(panel10, line3, 9, 2, 2, 1, 1, rng)
    with pytest.raises(SamplingError):
        generate_training_batch(panel10, line3, 3, 2, 2, 3, 1, rng)
    with pytest.raises(SamplingError):
        generate_training_batch(panel10, line3, 0, 2, 2, 1, 1, rng)
    with pytest.raises(SamplingError):
        generate_training_batch(panel10.rows([0, 1]), line3, 3, 2, 2, 1, 1, rng)
