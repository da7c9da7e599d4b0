"""LWE-style samples with regression-oracle errors, plus the LWR baseline.

A sample is (a, b) with a uniform in Z_m^w and
b = <a, s> + e_{<a,s>} mod m: the error is read off the deterministic
oracle at the inner product itself, so a fixed (s, a) always produces the
same b. The rounding baseline maps Z_q to Z_p by nearest-integer scaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oracle import ErrorOracle, eval_error
from .rounding import recenter_mod


@dataclass(frozen=True)
class LwlrSample:
    a: np.ndarray
    b: int


def _dot_mod(a: np.ndarray, s: np.ndarray, m: int) -> int:
    if len(a) != len(s):
        raise ValueError("dimension mismatch between a and s")
    if len(a) * (m - 1) ** 2 < 2**62:
        return int(np.dot(a.astype(np.int64), s.astype(np.int64))) % m
    return sum(int(ai) * int(si) for ai, si in zip(a, s)) % m


def sample_lwlr(s: np.ndarray, oracle: ErrorOracle,
                rng: np.random.Generator | None = None,
                a: np.ndarray | None = None) -> LwlrSample:
    """One sample; pass `a` explicitly to pin the randomness (determinism tests)."""
    s = np.asarray(s, dtype=np.int64)
    m = oracle.modulus
    if a is None:
        if rng is None:
            raise ValueError("need an rng when a is not injected")
        a = rng.integers(0, m, size=s.shape[0], dtype=np.int64)
    else:
        a = np.asarray(a, dtype=np.int64)
    x = _dot_mod(a, s, m)
    b = (x + eval_error(oracle, x)) % m
    return LwlrSample(a=a, b=int(b))


def round_lwr(x: int, q: int, p: int) -> int:
    """Nearest-integer rounding of p*x/q (ties away from zero), mod p."""
    if not (2 <= p <= q):
        raise ValueError("need q >= p >= 2")
    if not (0 <= x < q):
        raise ValueError("need 0 <= x < q")
    num = p * x
    quot, rem = divmod(num, q)
    if 2 * rem >= q:
        quot += 1
    return quot % p


def lwr_implied_error(x: int, q: int, p: int) -> float:
    """Signed Z_q-scale loss of the rounding map at x."""
    y = round_lwr(x, q, p)
    return float(recenter_mod(x - y * q / p, q))


def lwlr_vs_lwr_report(s: np.ndarray, oracle: ErrorOracle, q: int, p: int,
                       trials: int, rng: np.random.Generator) -> list[dict]:
    """Per-trial error magnitudes of the oracle path vs the rounding path."""
    if q != oracle.modulus:
        raise ValueError("q must equal the oracle modulus")
    rows = []
    s = np.asarray(s, dtype=np.int64)
    for trial in range(trials):
        a = rng.integers(0, q, size=s.shape[0], dtype=np.int64)
        x = _dot_mod(a, s, q)
        rows.append({
            "trial": trial,
            "x": x,
            "lwlr_abs_err": abs(eval_error(oracle, x)),
            "lwr_abs_err": abs(lwr_implied_error(x, q, p)),
        })
    return rows
