"""Deterministic error oracle distilled from a fitted hypothesis.

For every residue r in [0, m) the oracle stores one integer error e_r:
the signed, recentered difference between the observed y and the
hypothesis prediction at the first dataset point landing on r, rounded
to the nearest integer. Residues with no sample copy the nearest sampled
residue (circular distance, smaller residue on ties). Once built, the
table is immutable, so lookups are total and repeatable: that is what
turns channel randomness into a static error source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .rounding import recenter_mod, round_half_away
from .statcheck import chi_square_rounded_gaussian, sigma_hat

ERROR_BOUND_QUANTILE = 2.807034  # |Z| <= this with probability 0.995
UNIFORM_X_VARIATION_CONSTANT = 4.0  # the (dagger) constant b for uniform x


@dataclass
class ErrorOracle:
    modulus: int
    table: np.ndarray          # int64, length modulus, immutable
    sigma_hat: float           # realized std of the stored signed pre-errors
    coverage: float            # fraction of residues backed by a direct sample
    pre_errors: np.ndarray     # signed pre-rounding errors at sampled residues
    sampled: np.ndarray        # bool mask over residues
    channel_sigma: Optional[float] = None
    ell: Optional[int] = None

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)
        self.table.setflags(write=False)
        if self.table.shape != (self.modulus,):
            raise ValueError("table must cover every residue")

    def __len__(self):
        return self.modulus


def eval_error(oracle: ErrorOracle, x) -> int:
    """Total deterministic lookup; x is reduced mod m."""
    return int(oracle.table[int(x) % oracle.modulus])


def build_error_oracle(dataset, hyp) -> ErrorOracle:
    """Freeze the per-residue error table for a fitted dataset."""
    ell = dataset.ell
    if ell == 0:
        raise ValueError("empty dataset")
    m = dataset.modulus
    xs = np.asarray(dataset.regressor(), dtype=float)
    ys = np.asarray(dataset.ys, dtype=float)
    res = np.asarray(dataset.residues(), dtype=np.int64)

    pre_all = recenter_mod(ys - (hyp.beta0_hat + hyp.beta1_hat * xs), m)

    covered, first_idx = np.unique(res, return_index=True)
    pre_sampled = pre_all[first_idx]

    sampled = np.zeros(m, dtype=bool)
    sampled[covered] = True
    pre_by_residue = np.full(m, np.nan)
    pre_by_residue[covered] = pre_sampled

    if covered.size < m:
        missing = np.nonzero(~sampled)[0]
        pos = np.searchsorted(covered, missing)
        left = covered[(pos - 1) % covered.size]
        right = covered[pos % covered.size]
        dl = np.mod(missing - left, m)
        dr = np.mod(right - missing, m)
        # nearest circular sampled residue; smaller residue wins ties
        use_left = (dl < dr) | ((dl == dr) & (left < right))
        source = np.where(use_left, left, right)
        pre_by_residue[missing] = pre_by_residue[source]

    table = round_half_away(pre_by_residue).astype(np.int64)
    meta = getattr(dataset, "meta", None)
    return ErrorOracle(
        modulus=m,
        table=table,
        sigma_hat=float(np.std(pre_sampled)),
        coverage=covered.size / m,
        pre_errors=pre_sampled,
        sampled=sampled,
        channel_sigma=None if meta is None else float(meta.sigma),
        ell=ell,
    )


def error_statistics(oracle: ErrorOracle, b: float = UNIFORM_X_VARIATION_CONSTANT) -> dict:
    """Summary of the stored errors against the target rounded Gaussian.

    bound_violation_rate is the fraction of stored signed pre-errors with
    |e| beyond 2.807034 * (1 + sqrt((1+b)/ell)) * sigma, the two-sided
    99% envelope for regression-plus-channel error under the x-variation
    assumption with constant b (b = 4 covers uniformly drawn x).
    """
    pre = oracle.pre_errors
    sigma = oracle.channel_sigma
    if sigma is None:
        sigma = math.sqrt(max(oracle.sigma_hat**2 - 1.0 / 12.0, 1e-12))
    ell = oracle.ell if oracle.ell is not None else pre.size
    bound = ERROR_BOUND_QUANTILE * (1.0 + math.sqrt((1.0 + b) / ell)) * sigma
    return {
        "mean": float(np.mean(pre)),
        "std": float(np.std(pre)),
        "sigma_hat_model": sigma_hat(sigma),
        "chi_square_p": chi_square_rounded_gaussian(oracle.table, sigma),
        "bound": float(bound),
        "bound_violation_rate": float(np.mean(np.abs(pre) > bound)),
        "coverage": oracle.coverage,
    }
