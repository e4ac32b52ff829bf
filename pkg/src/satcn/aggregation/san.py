"""Spatial aggregation network (SAN) layer.

For every time slice, the node features are aggregated over the layer graph,
scaled, flattened to `n_sc * n_ag * c_in` features per node and mapped to
`c_out` channels by a shared affine map followed by the activation.
"""

from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

from satcn.autodiff import ops
from satcn.autodiff.tape import Var
from satcn.core.errors import GraphError
from satcn.core.types import AGGREGATORS, SCALERS, Activation, Aggregator, Scaler
from satcn.graph import NeighborGraph

from .aggregators import EPSILON, GraphBatch, aggregate_var, scale_var

LayerGraphs = Union[NeighborGraph, Sequence[NeighborGraph]]
"""One graph for all time slices, or one graph per time slice."""


@dataclass
class SanLayerParams:
    """Parameters of one SAN layer.

    `phi` has shape `c_out x (n_sc * n_ag * c_in)`; its input features are
    ordered scaler-major, then aggregator, then channel.
    """

    phi: np.ndarray
    bias: np.ndarray
    deg: float
    activation: Activation = Activation.relu
    epsilon: float = EPSILON
    aggregators: Tuple[Aggregator, ...] = field(default=AGGREGATORS)
    scalers: Tuple[Scaler, ...] = field(default=SCALERS)

    def __post_init__(self):
        """Validate shapes and constants."""
        self.phi = np.asarray(self.phi, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}.")
        if not self.deg > 0:
            raise ValueError(f"deg must be positive, got {self.deg}.")
        if self.phi.ndim != 2 or self.bias.shape != (self.phi.shape[0],):
            raise ValueError("phi must be c_out x features and bias of length c_out.")
        if self.phi.shape[1] % self.n_features_per_channel:
            raise ValueError(
                f"phi has {self.phi.shape[1]} inputs, not a multiple of "
                f"{self.n_features_per_channel}."
            )

    @property
    def n_features_per_channel(self) -> int:
        """Number of stacked features per input channel (21 by default)."""
        return len(self.aggregators) * len(self.scalers)

    @property
    def c_in(self) -> int:
        """Number of input channels."""
        return self.phi.shape[1] // self.n_features_per_channel

    @property
    def c_out(self) -> int:
        """Number of output channels."""
        return self.phi.shape[0]


def slice_graphs(graphs: LayerGraphs, batch: int, steps: int) -> GraphBatch:
    """Expand layer graphs to the (batch, time) slices of a SAN input.

    Args:
        graphs: a single graph, a sequence of `steps` graphs shared across the
            batch, or a sequence of `batch` such sequences
        batch: number of samples
        steps: number of time slices

    """
    if isinstance(graphs, NeighborGraph):
        return GraphBatch([graphs] * (batch * steps))
    graphs = list(graphs)
    if graphs and not isinstance(graphs[0], NeighborGraph):
        if len(graphs) != batch:
            raise GraphError(f"Expected graphs for {batch} samples, got {len(graphs)}.")
        flat = []
        for per_sample in graphs:
            flat.extend(_per_step(per_sample, steps))
        return GraphBatch(flat)
    return GraphBatch(_per_step(graphs, steps) * batch)


def _per_step(graphs, steps: int):
    if isinstance(graphs, NeighborGraph):
        return [graphs] * steps
    graphs = list(graphs)
    if len(graphs) != steps:
        raise GraphError(f"Expected {steps} per-step graphs, got {len(graphs)}.")
    return graphs


def san_layer(
    x: Var,
    gb: GraphBatch,
    phi: Var,
    bias: Var,
    *,
    deg: float,
    activation: Activation = Activation.relu,
    epsilon: float = EPSILON,
    aggregators: Sequence[Aggregator] = AGGREGATORS,
    scalers: Sequence[Scaler] = SCALERS,
) -> Var:
    """Differentiable SAN layer on a (B, n, T, c_in) tensor.

    `gb` must hold one graph per (sample, time) slice in sample-major order.

    Returns:
        (B, n, T, c_out) tensor

    """
    x = ops.const(x)
    if x.ndim != 4:
        raise GraphError(f"SAN input must be (B, n, T, c), got shape {x.shape}.")
    b, n, t, c = x.shape
    if gb.n != n or gb.num_graphs != b * t:
        raise GraphError(
            f"Graphs ({gb.num_graphs} x {gb.n} nodes) do not match "
            f"input of {b} samples, {n} nodes and {t} steps."
        )

    flat = ops.reshape(ops.transpose(x, (0, 2, 1, 3)), (b * t * n, c))
    agg = aggregate_var(flat, gb, epsilon=epsilon, aggregators=aggregators)
    stacked = scale_var(agg, gb, deg, scalers=scalers)
    feats = ops.reshape(stacked, (b * t * n, stacked.shape[1] * c))
    out = ops.linear(feats, phi, bias)
    if Activation(activation) == Activation.relu:
        out = ops.relu(out)
    c_out = out.shape[-1]
    return ops.transpose(ops.reshape(out, (b, t, n, c_out)), (0, 2, 1, 3))


def san_forward(x, graphs: LayerGraphs, p: SanLayerParams) -> np.ndarray:
    """Apply one SAN layer to an n x T x c_in tensor.

    Args:
        x: n x T x c_in input
        graphs: one graph for all time slices or one graph per time slice
        p: layer parameters

    Returns:
        n x T x c_out output

    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise GraphError(f"SAN input must be n x T x c, got shape {x.shape}.")
    if x.shape[2] != p.c_in:
        raise GraphError(f"Input has {x.shape[2]} channels, layer expects {p.c_in}.")
    gb = slice_graphs(graphs, 1, x.shape[1])
    out = san_layer(
        x[None],
        gb,
        p.phi,
        p.bias,
        deg=p.deg,
        activation=p.activation,
        epsilon=p.epsilon,
        aggregators=p.aggregators,
        scalers=p.scalers,
    )
    return out.value[0]
