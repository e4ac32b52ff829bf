"""Reverse-mode differentiation for the SATCN operator set."""

from . import ops
from .gradcheck import GradCheckReport, finite_difference_check, relative_error
from .tape import Tape, Var, backward

__all__ = [
    "GradCheckReport",
    "Tape",
    "Var",
    "backward",
    "finite_difference_check",
    "ops",
    "relative_error",
]
