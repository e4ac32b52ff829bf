import json
import struct

import numpy as np
import pytest

from satcn.core.errors import DataError
from satcn.core.models import ArchConfig
from satcn.model import (
    init_model,
    load_model,
    model_from_bytes,
    model_to_bytes,
    save_model,
)
from satcn.model.persist import FORMAT_VERSION, MAGIC
from satcn.sampling import Normalization


@pytest.fixture
def model(tiny_arch):
    return init_model(
        tiny_arch,
        0.731,
        Normalization(mean=12.5, std=3.25),
        d_max=1.4,
        seed=17,
        config_hash="0123456789abcdef",
    )


def test_round_trip(model, tmp_path):
    path = save_model(model, tmp_path / "run" / "model.satcn")
    again = load_model(path)
    assert again.arch == model.arch
    assert again.deg == model.deg
    assert again.norm == model.norm
    assert again.d_max == 1.4
    assert again.seed == 17
    assert again.config_hash == "0123456789abcdef"
    assert set(again.params) == set(model.params)
    for name, value in model.params.items():
        assert np.array_equal(again.params[name], value)
    # writing the loaded model gives the same bytes
    assert model_to_bytes(again) == path.read_bytes()


def test_reduced_arch_round_trip():
    arch = ArchConfig(
        k=2, channels=[2], tcn_widths=[3], aggregators=["mean"], activation="identity"
    )
    m = init_model(arch, 0.2, seed=1)
    again = model_from_bytes(model_to_bytes(m))
    assert again.arch == arch
    assert again.params["san0.phi"].shape == (2, 3)


def test_header(model):
    data = model_to_bytes(model)
    assert data[:8] == MAGIC
    version, hlen = struct.unpack_from("<II", data, 8)
    assert version == FORMAT_VERSION
    header = json.loads(data[16 : 16 + hlen])
    assert list(header) == sorted(header)
    assert header["config_hash"] == "0123456789abcdef"
    assert header["seed"] == 17
    assert header["tensors"][0] == {"name": "san0.phi", "shape": [3, 21], "offset": 0}
    assert len(data) == 16 + hlen + 8 * model.num_parameters()


def test_invalid_files(model, tmp_path):
    data = model_to_bytes(model)
    with pytest.raises(DataError):
        model_from_bytes(b"NOTAMODEL" + data[9:])
    with pytest.raises(DataError):
        model_from_bytes(data[:8] + struct.pack("<I", 99) + data[12:])
    with pytest.raises(DataError):
        model_from_bytes(data[:-8])
    with pytest.raises(DataError):
        model_from_bytes(data[:20])
    with pytest.raises(DataError):
        model_from_bytes(b"")
    with pytest.raises(DataError):
        load_model(tmp_path / "missing.satcn")
