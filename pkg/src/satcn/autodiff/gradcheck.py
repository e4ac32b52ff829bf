"""Finite difference verification of reverse-mode adjoints."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from satcn.core.errors import NumericalError

from .tape import Tape, Var

logger = logging.getLogger("satcn")

LossFn = Callable[[Tape, Dict[str, Var]], Var]
"""Builds a scalar loss on the given tape from the registered parameters."""


@dataclass
class GradCheckReport:
    """Per-tensor maximum relative errors of a gradient check."""

    step: float
    errors: Dict[str, float] = field(default_factory=dict)
    checked: Dict[str, int] = field(default_factory=dict)

    @property
    def max_error(self) -> float:
        """Largest relative error over all checked tensors."""
        return max(self.errors.values(), default=0.0)

    def passed(self, tolerance: float) -> bool:
        """Whether every tensor is within the tolerance."""
        return self.max_error < tolerance


def relative_error(analytic, numeric) -> np.ndarray:
    """Relative error with denominator max(1, |analytic|, |numeric|)."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(numeric)))
    return np.abs(analytic - numeric) / denom


def _evaluate(f: LossFn, params: Mapping[str, np.ndarray]) -> float:
    tape = Tape()
    pvars = {name: tape.parameter(name, value) for name, value in params.items()}
    val = float(np.asarray(f(tape, pvars).value).reshape(()))
    if not np.isfinite(val):
        raise NumericalError("Loss is not finite at a perturbed point.")
    return val


def analytic_gradients(
    f: LossFn, params: Mapping[str, np.ndarray]
) -> Dict[str, np.ndarray]:
    """Evaluate `f` once on a fresh tape and return all parameter adjoints."""
    tape = Tape()
    pvars = {name: tape.parameter(name, value) for name, value in params.items()}
    loss = f(tape, pvars)
    if not np.all(np.isfinite(loss.value)):
        raise NumericalError("Loss is not finite.")
    return tape.backward(loss)


def finite_difference_check(
    f: LossFn,
    params: Mapping[str, np.ndarray],
    step: float = 1e-5,
    *,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradCheckReport:
    """Compare reverse-mode adjoints of `f` with central differences.

    Each coordinate `p` is perturbed by `+step` and `-step`, and the numeric
    derivative `(f(p + step) - f(p - step)) / (2 step)` is compared to the
    adjoint.

    Args:
        f: builds the loss from parameters registered on a tape
        params: parameter values by name
        step: perturbation size (> 0)
        max_coords: if set, check at most this many random coordinates per tensor
        rng: generator used to choose coordinates

    Raises:
        ValueError: if `step` is not positive.
        NumericalError: if `f` is not finite at a perturbed point.

    """
    if not step > 0:
        raise ValueError(f"Step must be positive, got {step}.")
    rng = rng or np.random.default_rng(0)
    params = {k: np.array(v, dtype=np.float64, copy=True) for k, v in params.items()}
    grads = analytic_gradients(f, params)

    report = GradCheckReport(step=step)
    for name, value in params.items():
        flat = value.reshape(-1)
        coords: List[int] = list(range(flat.size))
        if max_coords is not None and flat.size > max_coords:
            coords = sorted(rng.choice(flat.size, size=max_coords, replace=False))

        analytic = grads[name].reshape(-1)
        worst = 0.0
        for c in coords:
            orig = flat[c]
            flat[c] = orig + step
            f_plus = _evaluate(f, params)
            flat[c] = orig - step
            f_minus = _evaluate(f, params)
            flat[c] = orig
            numeric = (f_plus - f_minus) / (2 * step)
            worst = max(worst, float(relative_error(analytic[c], numeric)))

        report.errors[name] = worst
        report.checked[name] = len(coords)
        logger.debug(f"gradcheck {name}: {len(coords)} coords, max rel err {worst:.3e}")
    return report
