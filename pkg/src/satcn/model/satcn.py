"""The SATCN network: alternating SAN and TCN blocks with an affine head.

The first SAN layer aggregates over the masked graph of each input column,
so hidden and unobserved sensors never send messages. All later SAN layers
use the full graph. Each TCN shortens the time axis by `w - 1`, and a shared
affine map projects the last hidden channels to one output per
(sensor, step).
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from satcn.aggregation import SanLayerParams, san_layer, slice_graphs
from satcn.autodiff import ops
from satcn.autodiff.tape import Var
from satcn.core.errors import DataError, GraphError
from satcn.core.models import ArchConfig
from satcn.graph import NeighborGraph
from satcn.sampling import Normalization
from satcn.tcn import TcnLayerParams, tcn_layer

logger = logging.getLogger("satcn")

MaskedGraphs = Union[NeighborGraph, Sequence[NeighborGraph]]
"""One masked graph for all input columns, or one per column."""

CHUNK_STEPS: int = 256
"""Output steps computed per forward pass during inference."""


def parameter_shapes(arch: ArchConfig) -> Dict[str, Tuple[int, ...]]:
    """Return the name and shape of every parameter tensor, in network order."""
    n_feat = len(arch.aggregators) * len(arch.scalers)
    shapes: Dict[str, Tuple[int, ...]] = {}
    c_in = 1
    for layer, (c_out, w) in enumerate(zip(arch.channels, arch.tcn_widths)):
        shapes[f"san{layer}.phi"] = (c_out, n_feat * c_in)
        shapes[f"san{layer}.bias"] = (c_out,)
        shapes[f"tcn{layer}.kernel"] = (w, c_out, c_out)
        shapes[f"tcn{layer}.bias"] = (c_out,)
        c_in = c_out
    shapes["proj.weight"] = (1, c_in)
    shapes["proj.bias"] = (1,)
    return shapes


def _fans(name: str, shape: Tuple[int, ...]) -> Tuple[int, int]:
    if name.endswith(".kernel"):
        w, c_in, c_out = shape
        return w * c_in, w * c_out
    return shape[1], shape[0]


@dataclass(eq=False)
class SatcnModel:
    """Trained (or freshly initialized) SATCN parameters and constants.

    Attributes:
        arch: architecture the parameters belong to
        params: parameter tensors by name (see `parameter_shapes`)
        deg: degree constant of the training graph used by the scalers
        norm: normalization of the training signals
        d_max: largest distance between training sensors, used for the edge
            weights of every graph the model is applied to (0 if unknown)
        seed: seed of the training run
        config_hash: hash of the experiment configuration

    """

    arch: ArchConfig
    params: Dict[str, np.ndarray]
    deg: float
    norm: Normalization = field(default_factory=Normalization)
    d_max: float = 0.0
    seed: int = 0
    config_hash: str = ""

    def __post_init__(self):
        """Check the parameter tensors against the architecture."""
        expected = parameter_shapes(self.arch)
        if set(self.params) != set(expected):
            missing = sorted(set(expected) - set(self.params))
            extra = sorted(set(self.params) - set(expected))
            raise DataError(
                f"Parameters do not match the architecture (missing: {missing}, "
                f"unexpected: {extra})."
            )
        params = {}
        for name, shape in expected.items():
            arr = np.asarray(self.params[name], dtype=np.float64)
            if arr.shape != shape:
                raise DataError(
                    f"Parameter '{name}' has shape {arr.shape}, expected {shape}."
                )
            params[name] = arr
        self.params = params
        if not self.deg > 0:
            raise DataError(f"deg must be positive, got {self.deg}.")
        if not (np.isfinite(self.d_max) and self.d_max >= 0):
            raise DataError(f"d_max must be finite and >= 0, got {self.d_max}.")

    @property
    def weight_scale(self) -> Optional[float]:
        """Distance giving edge weight 0, None to use the graph's own d_max."""
        return self.d_max if self.d_max > 0 else None

    @property
    def u(self) -> int:
        """Temporal reduction: output length is input length minus u."""
        return self.arch.u

    @property
    def blocks(self) -> List[Union[SanLayerParams, TcnLayerParams]]:
        """Layer parameters in application order (SAN, TCN, SAN, TCN, ...)."""
        out: List[Union[SanLayerParams, TcnLayerParams]] = []
        for layer in range(len(self.arch.channels)):
            out.append(
                SanLayerParams(
                    phi=self.params[f"san{layer}.phi"],
                    bias=self.params[f"san{layer}.bias"],
                    deg=self.deg,
                    activation=self.arch.activation,
                    epsilon=self.arch.epsilon,
                    aggregators=tuple(self.arch.aggregators),
                    scalers=tuple(self.arch.scalers),
                )
            )
            out.append(
                TcnLayerParams(
                    kernel=self.params[f"tcn{layer}.kernel"],
                    bias=self.params[f"tcn{layer}.bias"],
                )
            )
        return out

    @property
    def output_proj(self) -> Tuple[np.ndarray, np.ndarray]:
        """Weight (1 x c_last) and bias (1) of the output head."""
        return self.params["proj.weight"], self.params["proj.bias"]

    def with_params(self, params: Mapping[str, np.ndarray]) -> "SatcnModel":
        """Return a copy with other parameter values."""
        return replace(self, params={k: np.array(v) for k, v in params.items()})

    def num_parameters(self) -> int:
        """Return the total number of scalar parameters."""
        return int(sum(p.size for p in self.params.values()))


def init_model(
    arch: ArchConfig,
    deg: float,
    norm: Optional[Normalization] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    d_max: float = 0.0,
    seed: int = 0,
    config_hash: str = "",
) -> SatcnModel:
    """Create a model with Glorot-uniform weights and zero biases."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    params = {}
    for name, shape in parameter_shapes(arch).items():
        if name.endswith(".bias"):
            params[name] = np.zeros(shape)
            continue
        fan_in, fan_out = _fans(name, shape)
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        params[name] = rng.uniform(-limit, limit, size=shape)
    return SatcnModel(
        arch=arch,
        params=params,
        deg=deg,
        norm=norm or Normalization(),
        d_max=d_max,
        seed=seed,
        config_hash=config_hash,
    )


def forward_var(
    params: Mapping[str, Var],
    arch: ArchConfig,
    deg: float,
    x,
    a,
    a_hat: NeighborGraph,
) -> Var:
    """Differentiable forward pass over a batch of samples.

    Args:
        params: parameter tensors (tracked `Var`s or arrays) by name
        arch: architecture
        deg: degree constant
        x: (B, n, T) normalized inputs, hidden rows set to 0
        a: masked graphs of the first layer (see `slice_graphs`)
        a_hat: full graph used by all later SAN layers

    Returns:
        (B, n, T - u) outputs in normalized units

    """
    x = ops.const(x)
    b, n, t = x.shape
    h = ops.reshape(x, (b, n, t, 1))
    for layer in range(len(arch.channels)):
        graphs = a if layer == 0 else a_hat
        gb = slice_graphs(graphs, b, h.shape[2])
        h = san_layer(
            h,
            gb,
            params[f"san{layer}.phi"],
            params[f"san{layer}.bias"],
            deg=deg,
            activation=arch.activation,
            epsilon=arch.epsilon,
            aggregators=arch.aggregators,
            scalers=arch.scalers,
        )
        h = tcn_layer(h, params[f"tcn{layer}.kernel"], params[f"tcn{layer}.bias"])
    out = ops.linear(h, params["proj.weight"], params["proj.bias"])
    return ops.reshape(out, out.shape[:-1])


def _check_inputs(x: np.ndarray, a: MaskedGraphs, a_hat: NeighborGraph, u: int):
    if x.ndim != 2:
        raise DataError(f"Input must be n x T, got shape {x.shape}.")
    n, t = x.shape
    if t <= u:
        raise DataError(f"Input length {t} must exceed the temporal reduction {u}.")
    if a_hat.n != n:
        raise GraphError(f"Full graph has {a_hat.n} nodes, input has {n} rows.")
    if isinstance(a, NeighborGraph):
        a = [a]
    elif len(a) != t:
        raise GraphError(f"Expected {t} masked graphs, got {len(a)}.")
    if any(g.n != n for g in a):
        raise GraphError(f"Masked graphs must have {n} nodes.")


def predict_normalized(
    m: SatcnModel,
    x,
    a: MaskedGraphs,
    a_hat: NeighborGraph,
    *,
    chunk_steps: int = CHUNK_STEPS,
) -> np.ndarray:
    """Forward pass of one n x T input, computed in chunks along time.

    Every output step only depends on `u + 1` input columns, so the chunks
    overlap by `u` columns and give the same values as a single pass.

    Returns:
        n x (T - u) outputs in normalized units

    """
    x = np.asarray(x, dtype=np.float64)
    _check_inputs(x, a, a_hat, m.u)
    t_out = x.shape[1] - m.u
    parts = []
    for start in range(0, t_out, chunk_steps):
        stop = min(start + chunk_steps, t_out)
        cols = slice(start, stop + m.u)
        a_chunk = a if isinstance(a, NeighborGraph) else list(a)[cols]
        out = forward_var(m.params, m.arch, m.deg, x[None, :, cols], a_chunk, a_hat)
        parts.append(out.value[0])
    return np.concatenate(parts, axis=1)


def satcn_forward(x, a: MaskedGraphs, a_hat: NeighborGraph, m: SatcnModel):
    """Estimate all n sensors from a normalized, masked n x (h + u) input.

    Args:
        x: normalized input, rows of hidden sensors set to 0
        a: masked graph (or one masked graph per input column)
        a_hat: full graph over the same n sensors
        m: model

    Returns:
        n x h estimates in original units

    Raises:
        DataError: if the input is not longer than u.
        GraphError: if graphs and input do not have the same nodes.

    """
    return m.norm.invert(predict_normalized(m, x, a, a_hat))


def mae_loss(pred, target, eval_mask) -> float:
    """Mean absolute error over the evaluated cells.

    Raises:
        DataError: if shapes differ or no cell is evaluated.

    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    eval_mask = np.asarray(eval_mask, dtype=bool)
    if not pred.shape == target.shape == eval_mask.shape:
        raise DataError(
            f"Shapes differ: pred {pred.shape}, target {target.shape}, "
            f"mask {eval_mask.shape}."
        )
    if not eval_mask.any():
        raise DataError("Evaluation mask selects no cell.")
    return float(ops.masked_mean_abs(pred, target, eval_mask).value)
