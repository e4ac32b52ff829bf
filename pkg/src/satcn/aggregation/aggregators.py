"""Neighborhood aggregators and degree scalers.

Aggregators summarize the messages a node receives from its senders, in this
fixed order: mean, weighted mean, softmax, softmin, standard deviation, mean
distance weight and standard deviation of the distance weights. The last two
only depend on the graph and are broadcast over all feature channels.

Scalers multiply every aggregate by a per-node factor derived from the
logarithm of the incoming weight sum, normalized by the constant `deg` of the
training graph: identity, amplification and attenuation.

A node without senders gets 0 for every aggregator, and a node with a zero
incoming weight sum gets 0 for the scaled copies.
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from satcn.autodiff import ops
from satcn.autodiff.ops import SegmentIndex
from satcn.autodiff.tape import Var
from satcn.core.errors import GraphError
from satcn.core.types import AGGREGATORS, SCALERS, Aggregator, Scaler
from satcn.graph import NeighborGraph

logger = logging.getLogger("satcn")

EPSILON: float = 1e-5
"""Default variance floor of the standard deviation aggregators."""


class GraphBatch:
    """Disjoint union of graphs, each over its own block of `n` nodes.

    Graph `b` of the sequence acts on the nodes `b*n ... b*n + n - 1` of the
    flattened feature matrix.
    """

    def __init__(self, graphs: Sequence[NeighborGraph]):
        """Concatenate the edge lists of all graphs."""
        graphs = list(graphs)
        if not graphs:
            raise GraphError("At least one graph is required.")
        n = graphs[0].n
        if any(g.n != n for g in graphs):
            raise GraphError("All graphs of a batch must have the same node count.")
        self.n = n
        self.num_graphs = len(graphs)
        self.num_nodes = n * len(graphs)

        senders, receivers, weights = [], [], []
        for b, g in enumerate(graphs):
            s, r, w = g.edges()
            senders.append(s + b * n)
            receivers.append(r + b * n)
            weights.append(w)
        self.senders = SegmentIndex(np.concatenate(senders), self.num_nodes)
        self.receivers = SegmentIndex(np.concatenate(receivers), self.num_nodes)
        self.weights = np.concatenate(weights)
        self.counts = self.receivers.counts.astype(np.float64)
        self.in_sums = np.concatenate([g.in_weight_sums() for g in graphs])

    @classmethod
    def of(cls, graph: NeighborGraph) -> "GraphBatch":
        """Wrap a single graph."""
        return cls([graph])

    @property
    def has_senders(self) -> np.ndarray:
        """Boolean mask of nodes with at least one sender."""
        return self.counts > 0

    def _inv_counts(self) -> np.ndarray:
        return 1.0 / np.maximum(self.counts, 1.0)

    def distance_aggregates(self, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
        """Return per-node mean and standard deviation of incoming weights."""
        inv = self._inv_counts()
        w = self.weights[:, None]
        mean_d = self.receivers.reduce_sum(w)[:, 0] * inv
        mean_d2 = self.receivers.reduce_sum(w * w)[:, 0] * inv
        std_d = np.sqrt(np.maximum(mean_d2 - mean_d * mean_d, 0.0) + epsilon)
        return mean_d, np.where(self.has_senders, std_d, 0.0)

    def scaler_factors(self, deg: float) -> Tuple[np.ndarray, np.ndarray]:
        """Return the amplification and attenuation factor of every node."""
        if not deg > 0:
            raise GraphError(f"Degree constant must be positive, got {deg}.")
        log_sum = np.log(self.in_sums + 1.0)
        amp = log_sum / deg
        positive = log_sum > 0
        att = np.where(positive, deg / np.where(positive, log_sum, 1.0), 0.0)
        return amp, att


def compute_deg(full_graph: NeighborGraph) -> float:
    """Average of `log(incoming weight sum + 1)` over all nodes of a graph.

    Raises:
        GraphError: if the graph has no node or the result is not positive.

    """
    if full_graph.n == 0:
        raise GraphError("Cannot compute deg of an empty graph.")
    deg = float(np.mean(np.log(full_graph.in_weight_sums() + 1.0)))
    if not deg > 0:
        raise GraphError(
            "Degree constant is not positive (all incoming weight sums are 0)."
        )
    return deg


def _softmax_agg(xs: Var, gb: GraphBatch) -> Var:
    """Softmax-weighted average of the sender values, per channel."""
    shift = gb.receivers.reduce_max(xs.value)[gb.receivers.ids]
    e = ops.exp(ops.sub(xs, shift))
    num = ops.segment_sum(ops.mul(xs, e), gb.receivers)
    den = ops.segment_sum(e, gb.receivers)
    # empty neighborhoods have den = 0 and num = 0
    den_safe = ops.add(den, (~gb.has_senders).astype(np.float64)[:, None])
    return ops.div(num, den_safe)


def aggregate_var(
    x: Var,
    gb: GraphBatch,
    *,
    epsilon: float = EPSILON,
    aggregators: Sequence[Aggregator] = AGGREGATORS,
) -> Var:
    """Differentiable aggregation of node features.

    Args:
        x: (N, c) node features of all nodes of the batch
        gb: graphs over the N nodes
        epsilon: variance floor of the standard deviation
        aggregators: selection, kept in the fixed aggregator order

    Returns:
        (N, n_ag, c) aggregates

    """
    x = ops.const(x)
    n_nodes, c = x.shape
    if n_nodes != gb.num_nodes:
        raise GraphError(
            f"Feature rows ({n_nodes}) do not match graph nodes ({gb.num_nodes})."
        )
    wanted = set(Aggregator(a) for a in aggregators)
    has = gb.has_senders[:, None].astype(np.float64)
    inv_cnt = (1.0 / np.maximum(gb.counts, 1.0))[:, None]

    xs = ops.gather(x, gb.senders)
    results = {}
    mean = ops.mul(ops.segment_sum(xs, gb.receivers), inv_cnt)
    results[Aggregator.mean] = mean
    if Aggregator.weighted_mean in wanted:
        pos = gb.in_sums > 0
        inv_w = np.where(pos, 1.0 / np.where(pos, gb.in_sums, 1.0), 0.0)
        weighted = ops.segment_sum(ops.mul(xs, gb.weights[:, None]), gb.receivers)
        results[Aggregator.weighted_mean] = ops.mul(weighted, inv_w[:, None])
    if Aggregator.softmax in wanted:
        results[Aggregator.softmax] = _softmax_agg(xs, gb)
    if Aggregator.softmin in wanted:
        results[Aggregator.softmin] = ops.neg(_softmax_agg(ops.neg(xs), gb))
    if Aggregator.std in wanted:
        mean_sq = ops.mul(ops.segment_sum(ops.square(xs), gb.receivers), inv_cnt)
        var = ops.relu(ops.sub(mean_sq, ops.square(mean)))
        results[Aggregator.std] = ops.mul(ops.sqrt(ops.add(var, epsilon)), has)
    if wanted & {Aggregator.mean_distance, Aggregator.std_distance}:
        mean_d, std_d = gb.distance_aggregates(epsilon)
        ones = np.ones((1, c))
        results[Aggregator.mean_distance] = ops.const(mean_d[:, None] * ones)
        results[Aggregator.std_distance] = ops.const(std_d[:, None] * ones)

    parts = [
        ops.reshape(results[a], (n_nodes, 1, c)) for a in AGGREGATORS if a in wanted
    ]
    return ops.concat(parts, axis=1)


def scale_var(
    agg: Var,
    gb: GraphBatch,
    deg: float,
    *,
    scalers: Sequence[Scaler] = SCALERS,
) -> Var:
    """Stack the scaled copies of the aggregates: (N, n_ag, c) -> (N, n_sc * n_ag, c)."""
    agg = ops.const(agg)
    amp, att = gb.scaler_factors(deg)
    factors = {
        Scaler.identity: None,
        Scaler.amplification: amp,
        Scaler.attenuation: att,
    }
    wanted = set(Scaler(s) for s in scalers)
    parts = []
    for sc in SCALERS:
        if sc not in wanted:
            continue
        factor = factors[sc]
        parts.append(agg if factor is None else ops.mul(agg, factor[:, None, None]))
    return ops.concat(parts, axis=1)


def aggregate(features, g: NeighborGraph, epsilon: float = EPSILON) -> np.ndarray:
    """Compute all seven aggregators of an n x c feature matrix.

    Returns:
        n x 7 x c array in the fixed aggregator order

    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features[:, None]
    return aggregate_var(features, GraphBatch.of(g), epsilon=epsilon).value


def scale(agg, g: NeighborGraph, deg: float) -> np.ndarray:
    """Apply the identity, amplification and attenuation scalers.

    Returns:
        n x 21 x c array, scaler-major
    """
    agg = np.asarray(agg, dtype=np.float64)
    return scale_var(agg, GraphBatch.of(g), deg).value
