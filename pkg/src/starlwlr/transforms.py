"""Monotone regressor transforms that linearize the test functions.

Each supported function shape f(x) = b0 + b1 * g(x) has a matching
transform t = g, strictly monotone on x >= 0, so that the pairs
(t(x), y) are linear in the transformed regressor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TRANSFORM_KINDS = ("identity", "sqrt", "square", "cbrt", "log1p")

# Function kinds as used by FuncSpec; "linear" maps to the identity transform.
FUNC_KINDS = ("linear", "sqrt", "square", "cbrt", "log1p")


def apply_kind(kind: str, x):
    """Evaluate the regressor map g for one function/transform kind."""
    if kind in ("identity", "linear"):
        return float(x)
    if kind == "sqrt":
        if x < 0:
            raise ValueError("sqrt transform requires x >= 0")
        return math.sqrt(x)
    if kind == "square":
        return float(x) * float(x)
    if kind == "cbrt":
        if x < 0:
            raise ValueError("cbrt transform requires x >= 0")
        return float(x) ** (1.0 / 3.0)
    if kind == "log1p":
        if x < 0:
            raise ValueError("log1p transform requires x >= 0")
        # math.log1p needs a float; for big integers go through log directly.
        if isinstance(x, int) and x > 2**52:
            return math.log(x + 1)
        return math.log1p(x)
    raise ValueError(f"unknown transform kind: {kind!r}")


@dataclass(frozen=True)
class Transform:
    """A named monotone transform of the independent variable."""

    kind: str

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise ValueError(f"unknown transform kind: {self.kind!r}")

    def __call__(self, x) -> float:
        return apply_kind(self.kind, x)


def transform_for_func(func_kind: str) -> Transform:
    if func_kind == "linear":
        return Transform("identity")
    if func_kind in TRANSFORM_KINDS:
        return Transform(func_kind)
    raise ValueError(f"unknown function kind: {func_kind!r}")
