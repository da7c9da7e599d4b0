"""Star-network Gaussian channel simulation.

Parties sit on the leaves of star graphs and exchange message pairs
(x, f(x)) through a hub: f(x) travels over a Gaussian channel (additive
N(0, sigma^2) noise, rounded to the nearest integer, reduced mod m) while
x travels over an error-corrected channel. Every leaf of a star observes
the same broadcast dataset, so one shared Dataset per star is returned.

The independent variable is sampled so that the linearized regressor
g(x) sweeps [0, m): for the linear shape x itself is uniform on [0, m),
for sqrt/cbrt the preimages u^2 / u^3 of a uniform u are used, for the
square shape x is uniform below sqrt(m), and for log1p x is log-uniform
with the exponent capped at LOG_DOMAIN_CAP. Without this the grid-search
score, which matches slopes against whole-period counts, has no signal
to lock onto for the nonlinear shapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .rounding import round_half_away
from .setfam import SetFamily, verify_family
from .transforms import FUNC_KINDS, apply_kind

# Largest exponent used for log1p sampling; e^600 stays well inside float
# range while keeping per-segment slope noise far below the integer grid.
LOG_DOMAIN_CAP = 600.0

# Desk-scale surrogate for the "ell over beta1 superpolynomial" assumption.
MIN_POINTS_PER_SLOPE_UNIT = 100

COVERAGE_MODES = ("random", "complete")
# Kinds whose integer preimage can hit every residue of the linearized
# regressor; only these support complete coverage.
COMPLETE_COVERAGE_KINDS = ("linear", "sqrt", "cbrt")


def stream(master_seed: int, *key: int) -> np.random.Generator:
    """Deterministic child RNG stream for (master_seed, key...)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in key)))


@dataclass(frozen=True)
class ChannelParams:
    sigma: float
    modulus: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")


@dataclass(frozen=True)
class FuncSpec:
    """Test function f(x) = beta0 + beta1 * g(x), g fixed by `kind`."""

    kind: str
    beta0: int = 0
    beta1: int = 1

    def __post_init__(self):
        if self.kind not in FUNC_KINDS:
            raise ValueError(f"kind must be one of {FUNC_KINDS}")
        if self.beta1 < 1:
            raise ValueError("beta1 must be >= 1")

    def __call__(self, x) -> float:
        return self.beta0 + self.beta1 * apply_kind(self.kind, x)


@dataclass
class StarTopology:
    """Star subgraphs over n party labels: k-uniform, pairwise <= t overlap."""

    n: int
    stars: SetFamily
    k: int
    t: int

    def __post_init__(self):
        report = verify_family(self.stars, self.k, self.t)
        if not report.k_uniform:
            raise ValueError(f"every star must have exactly k={self.k} parties")
        if not report.at_most_t_intersecting:
            raise ValueError(f"stars must pairwise share at most t={self.t} parties")
        if len(self.stars.universe) > self.n:
            raise ValueError("more party labels than parties")

    @classmethod
    def single_star(cls, k: int) -> "StarTopology":
        fam = SetFamily(universe=list(range(1, k + 1)), sets=[tuple(range(1, k + 1))])
        return cls(n=k, stars=fam, k=k, t=k - 1 if k > 1 else 0)


@dataclass
class DatasetMeta:
    func: FuncSpec
    sigma: float
    ell: int
    seed: int
    coverage: str = "random"
    star_id: int = 0

    def to_json_obj(self) -> dict:
        return {
            "func": self.func.kind,
            "beta0": self.func.beta0,
            "beta1": self.func.beta1,
            "sigma": self.sigma,
            "ell": self.ell,
            "seed": self.seed,
            "coverage": self.coverage,
            "star_id": self.star_id,
        }

    @classmethod
    def from_json_obj(cls, obj: dict, modulus: Optional[int] = None) -> "DatasetMeta":
        return cls(
            func=FuncSpec(obj["func"], obj["beta0"], obj["beta1"]),
            sigma=obj["sigma"],
            ell=obj["ell"],
            seed=obj["seed"],
            coverage=obj.get("coverage", "random"),
            star_id=obj.get("star_id", 0),
        )


@dataclass
class Dataset:
    """Sorted regression pairs (x, y mod m) from one star's exchange round.

    xs is an int64 array when the values fit, otherwise a list of Python
    ints (log-uniform sampling produces x far beyond 2^63). meta is kept
    for reproduction only; fitting code never reads it.
    """

    xs: object
    ys: np.ndarray
    modulus: int
    meta: Optional[DatasetMeta] = None

    def __post_init__(self):
        self.ys = np.asarray(self.ys, dtype=np.int64)
        if np.any(self.ys < 0) or np.any(self.ys >= self.modulus):
            raise ValueError("y values must lie in [0, modulus)")
        if len(self.xs) != len(self.ys):
            raise ValueError("xs and ys must have equal length")
        if isinstance(self.xs, np.ndarray):
            if np.any(self.xs[:-1] > self.xs[1:]):
                raise ValueError("xs must be sorted ascending")
        else:
            if any(self.xs[i] > self.xs[i + 1] for i in range(len(self.xs) - 1)):
                raise ValueError("xs must be sorted ascending")

    @property
    def ell(self) -> int:
        return len(self.ys)

    def regressor(self) -> np.ndarray:
        """x as float64 (exact for int64-sized x, rounded for big ints)."""
        return np.asarray([float(v) for v in self.xs], dtype=float)

    def residues(self) -> np.ndarray:
        return np.asarray([int(v) % self.modulus for v in self.xs], dtype=np.int64)


def transmit(value: float, params: ChannelParams, rng: np.random.Generator) -> int:
    """One value through the Gaussian channel: round(value + eps) mod m."""
    eps = rng.normal(0.0, params.sigma)
    return int(round_half_away(value + eps)) % params.modulus


def _sample_x(kind: str, m: int, ell: int, coverage: str, rng: np.random.Generator):
    """Draw x values whose linearized regressor g(x) sweeps [0, m)."""
    if kind in ("linear", "sqrt", "cbrt"):
        if coverage == "complete":
            u = np.concatenate([np.arange(m, dtype=np.int64),
                                rng.integers(0, m, size=ell - m, dtype=np.int64)])
        else:
            u = rng.integers(0, m, size=ell, dtype=np.int64)
        if kind == "linear":
            return u
        power = 2 if kind == "sqrt" else 3
        if m ** power >= 2**62:
            raise ValueError("modulus too large for integer preimage sampling")
        return u**power
    if kind == "square":
        xmax = math.isqrt(m - 1) + 1
        return rng.integers(0, xmax, size=ell, dtype=np.int64)
    if kind == "log1p":
        cap = min(float(m), LOG_DOMAIN_CAP)
        v = rng.uniform(0.0, cap, size=ell)
        return [max(int(math.exp(vi)) - 1, 0) for vi in v]
    raise ValueError(f"unknown function kind: {kind!r}")


def simulate_exchange(
    topology: StarTopology,
    star_id: int,
    func: FuncSpec,
    params: ChannelParams,
    ell: int,
    coverage: str = "random",
    master_seed: int = 0,
) -> Dataset:
    """Simulate one star's broadcast round and return its shared Dataset."""
    if not (0 <= star_id < len(topology.stars)):
        raise ValueError(f"star_id {star_id} out of range")
    if coverage not in COVERAGE_MODES:
        raise ValueError(f"coverage must be one of {COVERAGE_MODES}")
    if ell < MIN_POINTS_PER_SLOPE_UNIT * func.beta1:
        raise ValueError(
            f"need ell >= {MIN_POINTS_PER_SLOPE_UNIT} * beta1 = "
            f"{MIN_POINTS_PER_SLOPE_UNIT * func.beta1}, got {ell}")
    m = params.modulus
    if coverage == "complete":
        if func.kind not in COMPLETE_COVERAGE_KINDS:
            raise ValueError(
                f"complete coverage requires kind in {COMPLETE_COVERAGE_KINDS}")
        if ell < m:
            raise ValueError(f"complete coverage needs ell >= m = {m}")

    rng = stream(master_seed, star_id)
    xs = _sample_x(func.kind, m, ell, coverage, rng)

    if isinstance(xs, np.ndarray):
        if func.kind == "linear":
            fx = func.beta0 + func.beta1 * xs.astype(float)
        elif func.kind == "sqrt":
            fx = func.beta0 + func.beta1 * np.sqrt(xs.astype(float))
        elif func.kind == "cbrt":
            fx = func.beta0 + func.beta1 * np.cbrt(xs.astype(float))
        else:  # square
            fx = func.beta0 + func.beta1 * xs.astype(float) ** 2
    else:
        fx = np.asarray([func(x) for x in xs], dtype=float)

    eps = rng.normal(0.0, params.sigma, size=ell)
    ys = np.mod(round_half_away(fx + eps), m).astype(np.int64)

    if isinstance(xs, np.ndarray):
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
    else:
        order = sorted(range(ell), key=lambda i: xs[i])
        xs_sorted = [xs[i] for i in order]
        order = np.asarray(order)
    ys_sorted = ys[order]

    meta = DatasetMeta(func=func, sigma=params.sigma, ell=ell,
                       seed=master_seed, coverage=coverage, star_id=star_id)
    return Dataset(xs=xs_sorted, ys=ys_sorted, modulus=m, meta=meta)


def xor_fold(contributions, m: int) -> int:
    """XOR all contributions, reduce mod m (the per-coordinate secret rule)."""
    acc = 0
    for r in contributions:
        acc ^= int(r)
    return acc % m


def agree_secret(
    topology: StarTopology,
    star_id: int,
    w: int,
    m: int,
    master_seed: int = 0,
    ell: int = 2**16,
) -> np.ndarray:
    """Simulated seed agreement: secret vector in Z_m^w shared by one star.

    Per coordinate, each of the k parties contributes a random value in
    [1, ell]; simultaneous arrivals (equal arrival slots within a round)
    are discarded and resent, with the hub reseeding the channels after
    every accepted contribution (modeled as advancing the star's RNG
    stream). The coordinate value is the XOR of the k accepted
    contributions reduced mod m.
    """
    if not (0 <= star_id < len(topology.stars)):
        raise ValueError(f"star_id {star_id} out of range")
    k = len(topology.stars.sets[star_id])
    if k < 2:
        raise ValueError("seed agreement needs at least 2 parties")
    rng = stream(master_seed, star_id, 0xA9EE)
    secret = np.empty(w, dtype=np.int64)
    for coord in range(w):
        accepted = []
        pending = k
        while pending > 0:
            slots = rng.integers(0, 2 * k, size=pending)
            resend = 0
            seen = set()
            for s in slots:
                if int(s) in seen:
                    resend += 1  # collision: hub keeps the first, discards this one
                    continue
                seen.add(int(s))
                accepted.append(int(rng.integers(1, ell + 1)))
            pending = resend
        secret[coord] = xor_fold(accepted, m)
    return secret
