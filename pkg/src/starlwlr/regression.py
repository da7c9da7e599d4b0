"""Modular linear-regression fitting by period grid search.

The data y = f(x) + noise mod m wraps once per period of f. With the
linearized regressor sweeping [0, m), the number of whole periods equals
the slope, so a grid over candidate period counts kappa and segment
indices i, scored by delta = |slope_fit(kappa, i) - kappa|, locks onto
the true slope. Segments are index ranges of the sorted data:
segment (kappa, i) covers positions (floor((i-1)*ell/kappa),
floor(i*ell/kappa)].

Two practical guards sit on top of the plain arg-min:

* cells whose fit is singular (fewer than two distinct x) are skipped;
* cells whose residual noise is grossly inconsistent with the cleanest
  cells (default: more than 3x the minimum residual std over the whole
  grid) are rejected. Cells that straddle a modular wrap can otherwise
  score an accidental near-zero delta while fitting nothing.

`refine_hypothesis` then unwraps the modular data around the winning
segment with an expanding window and refits globally, which sharpens the
slope by several orders of magnitude (single-segment precision is noise
limited, and any leftover slope error drifts through the error table).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .channel import Dataset, DatasetMeta
from .transforms import Transform


class SingularDesignError(ValueError):
    """Least-squares design with no x variation."""


def fit_least_squares(points) -> tuple[float, float]:
    """Ordinary least squares for y = b0 + b1 x over (x, y) pairs."""
    pts = list(points)
    if len(pts) < 2:
        raise SingularDesignError("need at least 2 points")
    x = np.asarray([p[0] for p in pts], dtype=float)
    y = np.asarray([p[1] for p in pts], dtype=float)
    xm, ym = x.mean(), y.mean()
    xc = x - xm
    sxx = float(xc @ xc)
    if sxx <= 1e-12 * max(1.0, float(np.abs(x).max()) ** 2):
        raise SingularDesignError("all x values coincide")
    b1 = float(xc @ (y - ym)) / sxx
    b0 = ym - b1 * xm
    return b0, b1


@dataclass(frozen=True)
class Hypothesis:
    """Fitted line plus the winning grid cell that produced it."""

    beta0_hat: float
    beta1_hat: float
    kappa: int
    segment: int
    delta: float
    x_lo: float
    x_hi: float

    def __call__(self, x) -> float:
        return self.beta0_hat + self.beta1_hat * float(x)

    def to_json_obj(self) -> dict:
        return {
            "beta0_hat": self.beta0_hat,
            "beta1_hat": self.beta1_hat,
            "kappa": self.kappa,
            "segment": self.segment,
            "delta": self.delta,
            "x_lo": self.x_lo,
            "x_hi": self.x_hi,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Hypothesis":
        return cls(**{k: obj[k] for k in (
            "beta0_hat", "beta1_hat", "kappa", "segment", "delta", "x_lo", "x_hi")})


@dataclass
class TransformedDataset:
    """Dataset with a real-valued (transformed) regressor."""

    xs: np.ndarray
    ys: np.ndarray
    modulus: int
    meta: Optional[DatasetMeta] = None
    transform_kind: str = "identity"

    @property
    def ell(self) -> int:
        return len(self.ys)

    def regressor(self) -> np.ndarray:
        return self.xs

    def residues(self) -> np.ndarray:
        from .rounding import round_half_away
        return np.mod(round_half_away(self.xs), self.modulus).astype(np.int64)


def transform_dataset(dataset: Dataset, t: Transform) -> TransformedDataset:
    """Apply a monotone transform to x; order is preserved."""
    xt = np.asarray([t(x) for x in dataset.xs], dtype=float)
    return TransformedDataset(xs=xt, ys=dataset.ys.copy(), modulus=dataset.modulus,
                              meta=dataset.meta, transform_kind=t.kind)


MIN_GRID_POINTS = 200
POINTS_PER_PERIOD = 100
RESID_FACTOR_DEFAULT = 3.0


def grid_search_hypothesis(dataset, resid_factor: Optional[float] = RESID_FACTOR_DEFAULT) -> Hypothesis:
    """Best (kappa, i) cell by minimal delta = |slope - kappa|.

    Ties break toward smaller kappa, then smaller i. `resid_factor` bounds
    the accepted cells' residual std relative to the cleanest cell; pass
    None to disable the guard and rank every nonsingular cell.
    """
    ell = dataset.ell
    if ell < MIN_GRID_POINTS:
        raise ValueError(f"need at least {MIN_GRID_POINTS} points, got {ell}")
    xs = np.asarray(dataset.regressor(), dtype=float)
    ys = np.asarray(dataset.ys, dtype=float)
    kmax = math.ceil(ell / POINTS_PER_PERIOD)

    xm_all = xs.mean()
    xc = xs - xm_all
    zero = np.zeros(1)
    Sx = np.concatenate([zero, np.cumsum(xc)])
    Sy = np.concatenate([zero, np.cumsum(ys)])
    Sxx = np.concatenate([zero, np.cumsum(xc * xc)])
    Sxy = np.concatenate([zero, np.cumsum(xc * ys)])
    Syy = np.concatenate([zero, np.cumsum(ys * ys)])

    per_kappa = []
    resid_min = np.inf
    for kappa in range(1, kmax + 1):
        bounds = (np.arange(kappa + 1, dtype=np.int64) * ell) // kappa
        n = np.diff(bounds).astype(float)
        sx = np.diff(Sx[bounds])
        sy = np.diff(Sy[bounds])
        sxx = np.diff(Sxx[bounds])
        sxy = np.diff(Sxy[bounds])
        syy = np.diff(Syy[bounds])
        denom = n * sxx - sx * sx
        ok = denom > 1e-9 * np.maximum(n * sxx, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            beta1 = np.where(ok, (n * sxy - sx * sy) / denom, np.nan)
            ssr = (syy - sy * sy / n) - beta1 * (sxy - sx * sy / n)
            resid = np.where(ok, np.sqrt(np.maximum(ssr, 0.0) / n), np.inf)
        delta = np.where(ok, np.abs(beta1 - kappa), np.inf)
        per_kappa.append((kappa, bounds, delta, beta1, resid, sx / n, sy / n))
        kmin = float(resid.min()) if np.any(ok) else np.inf
        resid_min = min(resid_min, kmin)

    if not np.isfinite(resid_min):
        raise SingularDesignError("every grid cell is degenerate")
    threshold = np.inf if resid_factor is None else resid_factor * resid_min + 1e-9

    best = None
    for kappa, bounds, delta, beta1, resid, xmean_c, ymean in per_kappa:
        d = np.where(resid <= threshold, delta, np.inf)
        j = int(np.argmin(d))
        if best is None or d[j] < best[0]:
            b1 = float(beta1[j])
            b0 = float(ymean[j] - b1 * (xmean_c[j] + xm_all))
            lo, hi = int(bounds[j]), int(bounds[j + 1])
            best = (float(d[j]), kappa, j + 1, b1, b0, lo, hi)

    dlt, kappa, seg, b1, b0, lo, hi = best
    return Hypothesis(beta0_hat=b0, beta1_hat=b1, kappa=kappa, segment=seg,
                      delta=dlt, x_lo=float(xs[lo]), x_hi=float(xs[hi - 1]))


def _ols_window(xs, yu) -> tuple[float, float, float]:
    xm, ym = xs.mean(), yu.mean()
    xc = xs - xm
    sxx = float(xc @ xc)
    if sxx <= 0:
        raise SingularDesignError("window has no x variation")
    b1 = float(xc @ (yu - ym)) / sxx
    b0 = ym - b1 * xm
    resid = yu - (b0 + b1 * xs)
    return b0, b1, float(np.sqrt(np.mean(resid * resid)))


def refine_hypothesis(dataset, hyp: Hypothesis) -> Hypothesis:
    """Unwrap the modular data around the winning segment and refit globally.

    The window grows geometrically from the winning segment; each step
    reassigns whole-period offsets j = round((h(x) - y) / m) from the
    current fit, then refits. Falls back to the input hypothesis when the
    unwrapped fit degrades (residual blow-up means the unwrap lost sync).
    """
    ell = dataset.ell
    m = float(dataset.modulus)
    xs = np.asarray(dataset.regressor(), dtype=float)
    ys = np.asarray(dataset.ys, dtype=float)

    bounds_lo = (hyp.segment - 1) * ell // hyp.kappa
    bounds_hi = hyp.segment * ell // hyp.kappa
    b0, b1 = hyp.beta0_hat, hyp.beta1_hat
    seed_resid = None

    lo, hi = bounds_lo, bounds_hi
    while True:
        xw = xs[lo:hi]
        yw = ys[lo:hi]
        offsets = np.floor(((b0 + b1 * xw) - yw) / m + 0.5)
        try:
            b0_new, b1_new, resid = _ols_window(xw, yw + offsets * m)
        except SingularDesignError:
            return hyp
        if seed_resid is None:
            seed_resid = resid
        elif resid > 6.0 * seed_resid + 1.0:
            return hyp
        b0, b1 = b0_new, b1_new
        if lo == 0 and hi == ell:
            break
        width = hi - lo
        lo = max(0, lo - width)
        hi = min(ell, hi + width)

    return replace(hyp, beta0_hat=b0, beta1_hat=b1,
                   delta=abs(b1 - hyp.kappa),
                   x_lo=float(xs[0]), x_hi=float(xs[-1]))


def fit_dataset(dataset, resid_factor: Optional[float] = RESID_FACTOR_DEFAULT,
                refine: bool = True) -> Hypothesis:
    """Grid search plus (by default) the global unwrap-refit pass."""
    hyp = grid_search_hypothesis(dataset, resid_factor=resid_factor)
    if refine:
        hyp = refine_hypothesis(dataset, hyp)
    return hyp
