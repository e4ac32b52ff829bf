import numpy as np
import pytest

from satcn.core.errors import CsvFormatError, GraphError
from satcn.core.types import Metric
from satcn.io import read_id_list, read_meta, read_panel_csv, read_sensor_csv


def test_read_panel(data_dir):
    panel = read_panel_csv(data_dir / "panel.csv")
    assert panel.ids == ("a", "b", "c", "d", "e", "f")
    assert panel.n == 6 and panel.T == 10
    assert panel.timestamps[0] == "2024-01-01T00:00"
    assert panel.timestamps[-1] == "2024-01-01T00:45"
    assert panel.meta == "config_hash: 0123456789abcdef\nseed: 7"

    assert np.array_equal(panel.values[:, 0], [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    assert panel.values[5, 9] == 10.5
    # empty cells are unobserved
    assert panel.obs_mask.sum() == 57
    assert not panel.obs_mask[1, 1]
    assert not panel.obs_mask[2, 2]
    assert not panel.obs_mask[3, 4]


def test_read_panel_diagnostics(data_dir):
    with pytest.raises(CsvFormatError) as e:
        read_panel_csv(data_dir / "bad_panel.csv")
    assert e.value.line == 3
    assert e.value.column == "b"
    assert "line 3, column 'b'" in str(e.value)
    assert "oops" in str(e.value)

    # line numbers count the leading comment lines
    f = data_dir / "commented.csv"
    f.write_text("# seed: 1\ntimestamp,a\nt0,1\nt1,inf\n")
    with pytest.raises(CsvFormatError) as e:
        read_panel_csv(f)
    assert (e.value.line, e.value.column) == (4, "a")


@pytest.mark.parametrize(
    "content",
    [
        "",
        "timestamp\nt0\n",
        "timestamp,a,a\nt0,1,2\n",
        "timestamp,a,b\n",
        "timestamp,a\nt0,1,2\n",
    ],
)
def test_read_panel_malformed(tmp_path, content):
    f = tmp_path / "panel.csv"
    f.write_text(content)
    with pytest.raises(CsvFormatError):
        read_panel_csv(f)


def test_read_meta(data_dir):
    meta, count = read_meta(data_dir / "panel.csv")
    assert meta == {"config_hash": "0123456789abcdef", "seed": "7"}
    assert count == 2
    assert read_meta(data_dir / "sensors.csv") == ({}, 0)


def test_read_planar_sensors(data_dir):
    s = read_sensor_csv(data_dir / "sensors.csv")
    assert s.ids == ("a", "b", "c", "d", "e", "f")
    assert s.metric == Metric.euclidean
    assert s.dist[0, 1] == 1.0
    assert s.dist[0, 4] == pytest.approx(np.sqrt(2.0))
    assert s.d_max == pytest.approx(np.sqrt(4.0 + 2.25))


def test_read_geo_sensors(data_dir):
    s = read_sensor_csv(data_dir / "sensors_latlon.csv")
    assert s.ids == ("berlin", "paris", "rome")
    assert s.metric == Metric.haversine
    # Berlin - Paris is about 878 km
    assert 870 < s.dist[0, 1] < 885

    # the metric can be overridden
    planar = read_sensor_csv(data_dir / "sensors_latlon.csv", Metric.euclidean)
    assert planar.dist[0, 1] < 15


def test_read_distance_matrix(data_dir):
    s = read_sensor_csv(data_dir / "distances.csv")
    assert s.ids == ("p", "q", "r")
    assert s.metric == Metric.precomputed
    assert s.coords is None
    assert s.d_max == 2.0
    assert s.dist[1, 2] == 1.5


def test_read_distance_matrix_without_id_column(tmp_path):
    f = tmp_path / "distances.csv"
    f.write_text("# source: survey\na,b,c\n0,1,2\n1,0,1\n2,1,0\n")
    s = read_sensor_csv(f)
    assert s.ids == ("a", "b", "c")
    assert s.metric == Metric.precomputed
    assert s.d_max == 2.0
    assert s.dist[0, 1] == 1.0

    f.write_text("a,b,c\n0,1,2\n1,0,x\n2,1,0\n")
    with pytest.raises(CsvFormatError):
        read_sensor_csv(f)
    f.write_text("a,b\n0,1\n2,0\n")
    with pytest.raises(GraphError):
        read_sensor_csv(f)


def test_read_sensors_malformed(tmp_path):
    f = tmp_path / "sensors.csv"
    f.write_text("id,x,z\na,0,0\nb,1,1\n")
    with pytest.raises(CsvFormatError):
        read_sensor_csv(f)

    f.write_text("id,x,y\na,0,0\nb,one,1\n")
    with pytest.raises(CsvFormatError) as e:
        read_sensor_csv(f)
    assert (e.value.line, e.value.column) == (3, "x")

    f.write_text("id,a,b\na,0,1\nb,2,0\n")
    with pytest.raises(GraphError):
        read_sensor_csv(f)

    f.write_text("id,x,y\na,0,0\n")
    with pytest.raises(GraphError):
        read_sensor_csv(f)

    f.write_text("id,x,y\na,0,0\nb,1,1\n")
    with pytest.raises(CsvFormatError):
        read_sensor_csv(f, Metric.precomputed)


def test_read_id_list(data_dir, tmp_path):
    assert read_id_list(data_dir / "unknown.txt") == ["e", "f"]

    f = tmp_path / "ids.txt"
    f.write_text("")
    assert read_id_list(f) == []
    f.write_text("# sensors to estimate\n\nx\ny, ignored\n")
    assert read_id_list(f) == ["x", "y"]
    with pytest.raises(CsvFormatError):
        read_id_list(tmp_path / "missing.txt")
