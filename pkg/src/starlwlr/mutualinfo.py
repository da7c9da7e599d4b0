"""Mutual information between regression fits on overlapping datasets.

Two simple linear regressions are trained on designs (x_1..x_ell) and
(w_1..w_ell) whose first `a` points coincide and share the same noise
realization; the rest are independent. The fitted coefficient pairs are
jointly Gaussian, so their mutual information is a ratio of covariance
determinants. Three routes are implemented and must agree:

* covariance_oracle: the 4x4 covariance assembled from the hat-matrix
  blocks (cross block = sigma^2 H_X[:, :a] H_W[:, :a]^T), the module's
  ground truth;
* closed_form_mi: the aggregate formula in X1, X2, W1, W2, C1, C2, C3.
  The C3 aggregate is the shared-index cross sum
  sum_{i != j <= a} x_i x_j = C1^2 - C2; an alternative reading summing
  over all ell indices is kept behind c3_mode="literal" for comparison
  but does not match the covariance (so a = 0 would not give zero);
* monte_carlo_mi: Gaussian MI of the empirical coefficient covariance
  over resampled noise, with a jackknife standard error.

All entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

LOG2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class OverlapDesign:
    xs: tuple
    ws: tuple
    a: int
    sigma: float

    def __post_init__(self):
        xs = tuple(float(v) for v in self.xs)
        ws = tuple(float(v) for v in self.ws)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ws", ws)
        ell = len(xs)
        if len(ws) != ell:
            raise ValueError("xs and ws must have equal length")
        if ell < 3:
            raise ValueError("need at least 3 points")
        if not (0 <= self.a <= ell):
            raise ValueError("overlap a out of range")
        if any(xs[i] != ws[i] for i in range(self.a)):
            raise ValueError("first a entries of xs and ws must coincide")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        for name, v in (("xs", xs), ("ws", ws)):
            arr = np.asarray(v)
            if ell * float(arr @ arr) - float(arr.sum()) ** 2 <= 0:
                raise ValueError(f"degenerate design: {name} has no variation")

    @property
    def ell(self) -> int:
        return len(self.xs)

    def to_json_obj(self) -> dict:
        return {"xs": list(self.xs), "ws": list(self.ws), "a": self.a, "sigma": self.sigma}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "OverlapDesign":
        return cls(xs=tuple(obj["xs"]), ws=tuple(obj["ws"]), a=int(obj["a"]),
                   sigma=float(obj["sigma"]))


@dataclass(frozen=True)
class MiSummary:
    X1: float
    X2: float
    W1: float
    W2: float
    C1: float
    C2: float
    C3: float

    @classmethod
    def from_design(cls, design: OverlapDesign, c3_mode: str = "shared") -> "MiSummary":
        xs = np.asarray(design.xs)
        ws = np.asarray(design.ws)
        a = design.a
        C1 = float(xs[:a].sum())
        C2 = float(xs[:a] @ xs[:a])
        if c3_mode == "shared":
            C3 = C1 * C1 - C2
        elif c3_mode == "literal":
            X1 = float(xs.sum())
            C3 = X1 * X1 - float(xs @ xs)
        else:
            raise ValueError("c3_mode must be 'shared' or 'literal'")
        return cls(X1=float(xs.sum()), X2=float(xs @ xs),
                   W1=float(ws.sum()), W2=float(ws @ ws),
                   C1=C1, C2=C2, C3=C3)


def _design_matrix(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return np.column_stack([np.ones_like(v), v])


def marginal_entropy(design: OverlapDesign, side: int = 1) -> float:
    """H of one fitted coefficient pair: 2 log sigma - log(det)/2 + 1 + log 2pi."""
    vals = design.xs if side == 1 else design.ws
    v = np.asarray(vals)
    ell = design.ell
    det = ell * float(v @ v) - float(v.sum()) ** 2
    if det <= 0:
        raise ValueError("degenerate design")
    return 2.0 * math.log(design.sigma) - 0.5 * math.log(det) + 1.0 + LOG2PI


@dataclass(frozen=True)
class CovarianceOracleResult:
    sigma_matrix: np.ndarray   # 4x4 covariance of (a1, b1, a2, b2)
    mi: float                  # +inf sentinel when the joint is singular
    entropy_1: float
    entropy_2: float
    entropy_joint: float       # -inf sentinel when singular


SINGULAR_REL_TOL = 1e-12


def covariance_oracle(design: OverlapDesign) -> CovarianceOracleResult:
    """Exact joint covariance of both coefficient pairs, and its Gaussian MI."""
    X = _design_matrix(design.xs)
    W = _design_matrix(design.ws)
    a = design.a
    s2 = design.sigma**2
    HX = np.linalg.solve(X.T @ X, X.T)
    HW = np.linalg.solve(W.T @ W, W.T)
    top = s2 * np.linalg.inv(X.T @ X)
    bot = s2 * np.linalg.inv(W.T @ W)
    cross = s2 * (HX[:, :a] @ HW[:, :a].T)
    sigma = np.block([[top, cross], [cross.T, bot]])

    det1 = float(np.linalg.det(sigma[:2, :2]))
    det2 = float(np.linalg.det(sigma[2:, 2:]))
    det = float(np.linalg.det(sigma))
    h1 = 0.5 * math.log(det1) + 1.0 + LOG2PI
    h2 = 0.5 * math.log(det2) + 1.0 + LOG2PI
    if det <= SINGULAR_REL_TOL * det1 * det2:
        return CovarianceOracleResult(sigma, float("inf"), h1, h2, float("-inf"))
    hj = 0.5 * math.log(det) + 2.0 * (1.0 + LOG2PI)
    mi = 0.5 * math.log(det1 * det2 / det)
    return CovarianceOracleResult(sigma, mi, h1, h2, hj)


def closed_form_mi(design: OverlapDesign, c3_mode: str = "shared") -> float:
    """Aggregate-formula MI; must match covariance_oracle for c3_mode='shared'."""
    s = MiSummary.from_design(design, c3_mode=c3_mode)
    ell = design.ell
    a = design.a
    dx = ell * s.X2 - s.X1**2
    dw = ell * s.W2 - s.W1**2
    t1 = ((ell * s.C2 - 2.0 * s.C1 * s.X1 + a * s.X2)
          * (ell * s.C2 - 2.0 * s.C1 * s.W1 + a * s.W2)) / (dx * dw)
    g = (a - 1.0) * s.C2 - s.C3
    t2 = g * (g + ell * (s.X2 + s.W2) - 2.0 * s.X1 * s.W1) / (dx * dw)
    inner = 1.0 - t1 + t2
    if inner <= 0:
        raise ValueError(f"non-positive argument {inner}: degenerate overlap "
                         "or aggregate-definition mismatch")
    return -0.5 * math.log(inner)


def monte_carlo_mi(design: OverlapDesign, trials: int,
                   rng: np.random.Generator) -> tuple[float, float]:
    """Empirical-covariance MI with a delete-one jackknife standard error."""
    if trials < 1000:
        raise ValueError("need at least 1000 trials")
    ell = design.ell
    a = design.a
    X = _design_matrix(design.xs)
    W = _design_matrix(design.ws)
    HX = np.linalg.solve(X.T @ X, X.T)
    HW = np.linalg.solve(W.T @ W, W.T)

    u = rng.normal(0.0, design.sigma, size=(trials, ell))
    v = rng.normal(0.0, design.sigma, size=(trials, ell))
    v[:, :a] = u[:, :a]
    theta = np.concatenate([u @ HX.T, v @ HW.T], axis=1)  # (trials, 4)

    def gaussian_mi(cov: np.ndarray) -> float:
        d1 = np.linalg.det(cov[:2, :2])
        d2 = np.linalg.det(cov[2:, 2:])
        d = np.linalg.det(cov)
        return 0.5 * math.log(d1 * d2 / d)

    n = trials
    mean = theta.mean(axis=0)
    centered = theta - mean
    cov_full = centered.T @ centered / n
    estimate = gaussian_mi(cov_full)

    # Delete-one jackknife, vectorized via downdates of the moment sums.
    s1 = theta.sum(axis=0)
    s2 = theta.T @ theta
    mean_i = (s1[None, :] - theta) / (n - 1)                      # (n, 4)
    s2_i = s2[None, :, :] - theta[:, :, None] * theta[:, None, :]  # (n, 4, 4)
    cov_i = s2_i / (n - 1) - mean_i[:, :, None] * mean_i[:, None, :]
    d1 = np.linalg.det(cov_i[:, :2, :2])
    d2 = np.linalg.det(cov_i[:, 2:, 2:])
    d = np.linalg.det(cov_i)
    mi_i = 0.5 * np.log(d1 * d2 / d)
    se = math.sqrt((n - 1) / n * float(((mi_i - mi_i.mean()) ** 2).sum()))
    return estimate, se
