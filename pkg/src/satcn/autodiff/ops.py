"""Differentiable operations used by the SATCN network.

Every op accepts `Var`s or plain arrays/scalars (treated as constants) and
returns a `Var`. An op is only recorded if one of its inputs is tracked.
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from .tape import BackwardFn, Tape, Var


def const(value) -> Var:
    """Wrap a value as an untracked constant."""
    return value if isinstance(value, Var) else Var(value)


def _tape_of(inputs: Sequence[Var]) -> Optional[Tape]:
    for v in inputs:
        if v.tape is not None:
            return v.tape
    return None


def _make(value: np.ndarray, inputs: Sequence[Var], backward: BackwardFn) -> Var:
    tape = _tape_of(inputs)
    if tape is None:
        return Var(value)
    return tape.record(value, inputs, backward)


def _unbroadcast(g: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum an adjoint over the axes that were broadcast to reach `g.shape`."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


# ----
# elementwise


def add(a, b) -> Var:
    """Elementwise sum with broadcasting."""
    a, b = const(a), const(b)
    return _make(
        a.value + b.value,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def sub(a, b) -> Var:
    """Elementwise difference with broadcasting."""
    a, b = const(a), const(b)
    return _make(
        a.value - b.value,
        (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def mul(a, b) -> Var:
    """Elementwise product with broadcasting."""
    a, b = const(a), const(b)
    return _make(
        a.value * b.value,
        (a, b),
        lambda g: (
            _unbroadcast(g * b.value, a.shape) if a.tracked else None,
            _unbroadcast(g * a.value, b.shape) if b.tracked else None,
        ),
    )


def div(a, b) -> Var:
    """Elementwise quotient; the caller guarantees a nonzero denominator."""
    a, b = const(a), const(b)
    out = a.value / b.value
    return _make(
        out,
        (a, b),
        lambda g: (
            _unbroadcast(g / b.value, a.shape) if a.tracked else None,
            _unbroadcast(-g * out / b.value, b.shape) if b.tracked else None,
        ),
    )


def neg(a) -> Var:
    """Elementwise negation."""
    a = const(a)
    return _make(-a.value, (a,), lambda g: (-g,))


def square(a) -> Var:
    """Elementwise square."""
    a = const(a)
    return _make(a.value * a.value, (a,), lambda g: (2.0 * a.value * g,))


def exp(a) -> Var:
    """Elementwise exponential."""
    a = const(a)
    out = np.exp(a.value)
    return _make(out, (a,), lambda g: (g * out,))


def sqrt(a) -> Var:
    """Elementwise square root (input must be strictly positive where tracked)."""
    a = const(a)
    out = np.sqrt(a.value)
    return _make(out, (a,), lambda g: (g / (2.0 * out),))


def relu(a) -> Var:
    """Rectified linear unit; the subgradient at 0 is 0."""
    a = const(a)
    pos = a.value > 0
    return _make(np.where(pos, a.value, 0.0), (a,), lambda g: (g * pos,))


def abs_(a) -> Var:
    """Elementwise absolute value; the subgradient at 0 is 0."""
    a = const(a)
    return _make(np.abs(a.value), (a,), lambda g: (g * np.sign(a.value),))


# ----
# reductions and shape manipulation


def sum_(a, axis=None) -> Var:
    """Sum over `axis` (all axes by default)."""
    a = const(a)
    out = a.value.sum(axis=axis)

    def _backward(g):
        if axis is not None:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.shape).copy(),)

    return _make(out, (a,), _backward)


def reshape(a, shape) -> Var:
    """Reshape without copying data."""
    a = const(a)
    return _make(a.value.reshape(shape), (a,), lambda g: (g.reshape(a.shape),))


def transpose(a, axes: Sequence[int]) -> Var:
    """Permute the axes."""
    a = const(a)
    inv = np.argsort(axes)
    return _make(
        np.transpose(a.value, axes), (a,), lambda g: (np.transpose(g, inv),)
    )


def slice_axis(a, axis: int, start: int, stop: int) -> Var:
    """Take `a[..., start:stop, ...]` along one axis."""
    a = const(a)
    index = [slice(None)] * a.ndim
    index[axis] = slice(start, stop)
    index = tuple(index)

    def _backward(g):
        out = np.zeros_like(a.value)
        out[index] = g
        return (out,)

    return _make(a.value[index], (a,), _backward)


def concat(parts: Sequence, axis: int) -> Var:
    """Concatenate along an existing axis."""
    parts = [const(p) for p in parts]
    sizes = [p.shape[axis] for p in parts]
    splits = np.cumsum(sizes)[:-1]
    return _make(
        np.concatenate([p.value for p in parts], axis=axis),
        parts,
        lambda g: tuple(np.split(g, splits, axis=axis)),
    )


def linear(x, weight, bias=None) -> Var:
    """Affine map `x @ weight.T + bias` over the last axis of `x`.

    Args:
        x: (..., c_in)
        weight: (c_out, c_in)
        bias: (c_out,) or None

    """
    x, weight = const(x), const(weight)
    out = x.value @ weight.value.T
    inputs = [x, weight]
    if bias is not None:
        bias = const(bias)
        out = out + bias.value
        inputs.append(bias)

    def _backward(g):
        g2 = g.reshape(-1, g.shape[-1])
        x2 = x.value.reshape(-1, x.shape[-1])
        grads = [
            g @ weight.value if x.tracked else None,
            g2.T @ x2 if weight.tracked else None,
        ]
        if bias is not None:
            grads.append(g2.sum(axis=0) if bias.tracked else None)
        return tuple(grads)

    return _make(out, inputs, _backward)


# ----
# graph scatter/gather


class SegmentIndex:
    """Precomputed grouping of `ids` (one per row) into `num` segments.

    Used to sum rows that share an id and to gather rows by id, both with a
    fixed reduction order.
    """

    def __init__(self, ids, num: int):
        """Group row ids into `num` segments."""
        ids = np.asarray(ids, dtype=np.int64)
        self.ids = ids
        self.num = int(num)
        if ids.size and (ids.min() < 0 or ids.max() >= num):
            raise ValueError("Segment ids out of range.")
        if ids.size and np.any(np.diff(ids) < 0):
            self.perm: Optional[np.ndarray] = np.argsort(ids, kind="stable")
            sorted_ids = ids[self.perm]
        else:
            self.perm = None
            sorted_ids = ids
        self.present, self.offsets = np.unique(sorted_ids, return_index=True)
        self.counts = np.bincount(ids, minlength=self.num)

    def __len__(self) -> int:
        """Return the number of rows."""
        return int(self.ids.size)

    def _sorted(self, rows: np.ndarray) -> np.ndarray:
        return rows if self.perm is None else rows[self.perm]

    def reduce_sum(self, rows: np.ndarray) -> np.ndarray:
        """Sum rows per segment; empty segments are zero."""
        out = np.zeros((self.num,) + rows.shape[1:], dtype=rows.dtype)
        if self.ids.size:
            out[self.present] = np.add.reduceat(self._sorted(rows), self.offsets, 0)
        return out

    def reduce_max(self, rows: np.ndarray) -> np.ndarray:
        """Maximum of rows per segment; empty segments are zero."""
        out = np.zeros((self.num,) + rows.shape[1:], dtype=rows.dtype)
        if self.ids.size:
            out[self.present] = np.maximum.reduceat(
                self._sorted(rows), self.offsets, 0
            )
        return out


def gather(x, seg: SegmentIndex) -> Var:
    """Select rows `x[seg.ids]`; adjoints are summed back per segment."""
    x = const(x)
    return _make(x.value[seg.ids], (x,), lambda g: (seg.reduce_sum(g),))


def segment_sum(x, seg: SegmentIndex) -> Var:
    """Sum the rows of `x` per segment of `seg`."""
    x = const(x)
    return _make(seg.reduce_sum(x.value), (x,), lambda g: (g[seg.ids],))


# ----
# losses


def masked_mean_abs(pred, target, mask) -> Var:
    """Mean of `|pred - target|` over the cells where `mask` is true."""
    mask = np.asarray(mask, dtype=bool)
    count = int(mask.sum())
    if count == 0:
        raise ValueError("Mask selects no cell.")
    diff = sub(pred, target)
    return div(sum_(mul(abs_(diff), mask.astype(np.float64))), float(count))
