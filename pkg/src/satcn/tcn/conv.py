"""Unpadded 1-D temporal convolution shared across nodes."""

from dataclasses import dataclass

import numpy as np

from satcn.autodiff import ops
from satcn.autodiff.tape import Var
from satcn.core.errors import DataError


@dataclass
class TcnLayerParams:
    """Convolution kernel (w x c_in x c_out) and bias (c_out) of one layer."""

    kernel: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        """Validate shapes."""
        self.kernel = np.asarray(self.kernel, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.kernel.ndim != 3 or self.kernel.shape[0] < 1:
            raise ValueError("Kernel must have shape w x c_in x c_out with w >= 1.")
        if self.bias.shape != (self.kernel.shape[2],):
            raise ValueError("Bias length must match the output channels.")

    @property
    def w(self) -> int:
        """Kernel width."""
        return self.kernel.shape[0]


def tcn_layer(x: Var, kernel: Var, bias: Var) -> Var:
    """Differentiable convolution of a (..., T_in, c_in) tensor along time.

    `out[..., t, o] = bias[o] + sum_{tau < w, a} kernel[tau, a, o] * x[..., t + tau, a]`

    Returns:
        (..., T_in - w + 1, c_out) tensor

    """
    x, kernel = ops.const(x), ops.const(kernel)
    w, c_in, c_out = kernel.shape
    t_in = x.shape[-2]
    if x.shape[-1] != c_in:
        raise DataError(f"Input has {x.shape[-1]} channels, kernel expects {c_in}.")
    if t_in < w:
        raise DataError(f"Input length {t_in} is shorter than kernel width {w}.")
    t_out = t_in - w + 1
    axis = x.ndim - 2
    windows = ops.concat(
        [ops.slice_axis(x, axis, tau, tau + t_out) for tau in range(w)], axis=-1
    )
    # weight[o, tau * c_in + a] = kernel[tau, a, o]
    weight = ops.reshape(ops.transpose(kernel, (2, 0, 1)), (c_out, w * c_in))
    return ops.linear(windows, weight, bias)


def tcn_forward(x, p: TcnLayerParams) -> np.ndarray:
    """Convolve an n x T_in x c_in tensor into n x (T_in - w + 1) x c_out.

    Raises:
        DataError: if `T_in < w` or channel counts do not match.

    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise DataError(f"TCN input must be n x T x c, got shape {x.shape}.")
    return tcn_layer(x, p.kernel, p.bias).value
