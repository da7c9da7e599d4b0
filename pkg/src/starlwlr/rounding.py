"""Integer rounding and modular recentering conventions.

A single rounding rule is used everywhere in this package: nearest
integer, ties away from zero. Differences modulo m are represented by
the signed element of (-m/2, (m+1)/2].
"""

from __future__ import annotations

import numpy as np


def round_half_away(x):
    """Round to nearest integer, ties away from zero.

    Works on scalars and numpy arrays; returns the same shape. Python's
    built-in round() and numpy's rint() round half to even, which is not
    the convention used here.
    """
    x = np.asarray(x)
    out = np.sign(x) * np.floor(np.abs(x) + 0.5)
    if out.ndim == 0:
        return float(out)
    return out


def round_half_away_int(x: float) -> int:
    return int(round_half_away(x))


def recenter_mod(values, modulus):
    """Map residues mod `modulus` to signed representatives in (-m/2, (m+1)/2].

    Accepts scalars or arrays; values are first reduced mod m.
    """
    m = modulus
    v = np.mod(np.asarray(values, dtype=float), m)
    out = np.where(v > m / 2.0, v - m, v)
    if out.ndim == 0:
        return float(out)
    return out
