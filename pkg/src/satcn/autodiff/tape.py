"""Tape-based reverse-mode differentiation over numpy arrays.

A `Tape` records every operation applied to its parameters in execution
order. Values that do not depend on a parameter are plain constants (a `Var`
without tape) and are never recorded.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]
"""Maps the adjoint of an output to the adjoints of the operation inputs."""


@dataclass(frozen=True)
class _Node:
    parents: Tuple[Optional[int], ...]
    backward: Optional[BackwardFn]


class Var:
    """Array value, optionally tracked by a `Tape`."""

    __slots__ = ("value", "tape", "index")
    __array_priority__ = 100  # make numpy defer to our operators

    def __init__(self, value, tape: Optional["Tape"] = None, index: int = -1):
        """Wrap a value (converted to a float64 array)."""
        self.value: np.ndarray = np.asarray(value, dtype=np.float64)
        self.tape = tape
        self.index = index

    @property
    def shape(self) -> Tuple[int, ...]:
        """Shape of the wrapped value."""
        return self.value.shape

    @property
    def ndim(self) -> int:
        """Number of dimensions of the wrapped value."""
        return self.value.ndim

    @property
    def tracked(self) -> bool:
        """Whether this value depends on a tape parameter."""
        return self.tape is not None

    def __repr__(self) -> str:
        """Short representation with shape and tracking state."""
        state = f"node {self.index}" if self.tracked else "const"
        return f"Var(shape={self.shape}, {state})"

    # arithmetic is delegated to the op module

    def __add__(self, other):
        from . import ops

        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import ops

        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops

        return ops.sub(other, self)

    def __mul__(self, other):
        from . import ops

        return ops.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from . import ops

        return ops.div(self, other)

    def __neg__(self):
        from . import ops

        return ops.neg(self)


class Tape:
    """Records operations on registered parameters for `backward`."""

    def __init__(self):
        """Create an empty tape."""
        self._nodes: List[_Node] = []
        self._params: Dict[str, Var] = {}

    def __len__(self) -> int:
        """Return the number of recorded nodes (parameters included)."""
        return len(self._nodes)

    @property
    def parameters(self) -> Dict[str, Var]:
        """Registered parameter leaves by name."""
        return dict(self._params)

    def parameter(self, name: str, value) -> Var:
        """Register a named leaf tensor whose adjoint `backward` returns."""
        if name in self._params:
            raise ValueError(f"Parameter '{name}' is already registered.")
        var = Var(np.array(value, dtype=np.float64, copy=True), self, len(self._nodes))
        self._nodes.append(_Node(parents=(), backward=None))
        self._params[name] = var
        return var

    def record(self, value: np.ndarray, inputs: Sequence[Var], backward: BackwardFn):
        """Append an operation node and return its output."""
        parents = tuple(v.index if v.tape is self else None for v in inputs)
        var = Var(value, self, len(self._nodes))
        self._nodes.append(_Node(parents=parents, backward=backward))
        return var

    def backward(self, loss: Var) -> Dict[str, np.ndarray]:
        """Propagate adjoints from a scalar `loss` back to all parameters.

        Returns:
            adjoint of every registered parameter (zeros if unreachable)

        Raises:
            ValueError: if the loss is not a scalar or not recorded on this tape.
            RuntimeError: if a node refers to an input recorded after it.

        """
        if loss.value.size != 1:
            raise ValueError(f"Loss must be a scalar, got shape {loss.shape}.")

        adj: List[Optional[np.ndarray]] = [None] * len(self._nodes)
        if loss.tape is self:
            adj[loss.index] = np.ones_like(loss.value)
        elif loss.tape is not None:
            raise ValueError("Loss was recorded on a different tape.")

        for idx in range(len(self._nodes) - 1, -1, -1):
            g = adj[idx]
            node = self._nodes[idx]
            if g is None or node.backward is None:
                continue
            grads = node.backward(g)
            for parent, pg in zip(node.parents, grads):
                if parent is None or pg is None:
                    continue
                if parent >= idx:
                    raise RuntimeError(
                        f"Cycle detected: node {idx} depends on later node {parent}."
                    )
                adj[parent] = pg if adj[parent] is None else adj[parent] + pg

        return {
            name: (
                np.zeros_like(var.value)
                if adj[var.index] is None
                else np.asarray(adj[var.index]).reshape(var.shape)
            )
            for name, var in self._params.items()
        }


def backward(tape: Tape, loss: Var) -> Dict[str, np.ndarray]:
    """Return the adjoints of all parameters of `tape` for a scalar `loss`."""
    return tape.backward(loss)
