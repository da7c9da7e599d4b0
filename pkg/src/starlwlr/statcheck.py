"""Statistical goodness-of-fit helpers used across the workbench.

The reference noise model is the rounded Gaussian: a continuous
N(0, sigma^2) rounded to the nearest integer. Its variance is
sigma^2 + 1/12, so we write sigma_hat = sqrt(sigma^2 + 1/12) for the
standard deviation of the rounded variable.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import stats


def sigma_hat(sigma: float) -> float:
    """Std dev of the rounded Gaussian with underlying std dev `sigma`."""
    return math.sqrt(sigma * sigma + 1.0 / 12.0)


def rounded_gaussian_pmf(ks, sigma: float):
    """P(round(N(0, sigma^2)) = k) for each integer k in `ks`."""
    ks = np.asarray(ks, dtype=float)
    return stats.norm.cdf((ks + 0.5) / sigma) - stats.norm.cdf((ks - 0.5) / sigma)


def _merge_bins(observed, expected, min_expected=5.0):
    """Greedy left-to-right merge so every bin has expected >= min_expected."""
    obs_m, exp_m = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            obs_m.append(acc_o)
            exp_m.append(acc_e)
            acc_o = acc_e = 0.0
    if exp_m and (acc_e > 0 or acc_o > 0):
        obs_m[-1] += acc_o
        exp_m[-1] += acc_e
    return np.asarray(obs_m), np.asarray(exp_m)


def chi_square_rounded_gaussian(values, sigma: float, clip_sigmas: float = 4.0):
    """Chi-square p-value of integer `values` against a rounded N(0, sigma^2).

    Values beyond +-clip_sigmas standard deviations are discarded before
    binning (far tail counts are so small that single fallback-filled or
    drifted entries would dominate the statistic). Integer bins are then
    merged so each has expected count >= 5.
    """
    v = np.asarray(values, dtype=float)
    bound = clip_sigmas * sigma_hat(sigma)
    v = v[np.abs(v) <= bound]
    if v.size == 0:
        return float("nan")
    lo, hi = int(v.min()), int(v.max())
    ks = np.arange(lo, hi + 1)
    pmf = rounded_gaussian_pmf(ks, sigma)
    observed = np.bincount((v - lo).astype(int), minlength=ks.size).astype(float)
    expected = pmf * v.size
    obs_m, exp_m = _merge_bins(observed, expected)
    if obs_m.size < 2:
        return float("nan")
    exp_m = exp_m * obs_m.sum() / exp_m.sum()
    chi2 = float(((obs_m - exp_m) ** 2 / exp_m).sum())
    return float(stats.chi2.sf(chi2, obs_m.size - 1))


def chi_square_uniform(values, modulus: int, bins: int | None = None):
    """Chi-square p-value of integer residues against uniform on [0, modulus)."""
    v = np.mod(np.asarray(values, dtype=np.int64), modulus)
    if bins is None or bins >= modulus:
        counts = np.bincount(v, minlength=modulus).astype(float)
        expected = np.full(modulus, v.size / modulus)
    else:
        edges = (np.arange(bins + 1) * modulus) // bins
        counts = np.histogram(v, bins=edges)[0].astype(float)
        expected = np.diff(edges) * (v.size / modulus)
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    return float(stats.chi2.sf(chi2, counts.size - 1))
