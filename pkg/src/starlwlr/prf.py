"""Star-specific key-homomorphic PRF on the binary gadget tree.

The public parameters are two uniform matrices A0, A1 in Z_m^{w x wd}
with d = ceil(log2 m). A full binary tree T with |T| leaves turns an
input bitstring into the matrix

    A_T(x) = A_x                                  for a single leaf,
    A_T(x) = A_{T.l}(x_l) . G^{-1}(A_{T.r}(x_r))  otherwise,

where G = I_w (x) g is the gadget matrix of the powers-of-two vector g
and G^{-1} is entrywise binary decomposition (so G . G^{-1}(A) = A
exactly). A star's PRF adds that star's oracle errors coordinatewise:

    F_s(x) = s . A_T(x) + e_b mod m,  b = s . A_T(x).

Keys form the group Z_m^w under addition, which makes the family almost
key homomorphic; two stars' functions disagree because their oracles
were distilled from independent channel noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .oracle import ErrorOracle
from .rounding import recenter_mod

TreeNode = Optional[tuple]  # None = leaf, (left, right) = internal


@dataclass(frozen=True)
class TreeShape:
    """Full binary tree; every internal node has exactly two children."""

    root: TreeNode

    @staticmethod
    def _leaves(node: TreeNode) -> int:
        if node is None:
            return 1
        left, right = node
        return TreeShape._leaves(left) + TreeShape._leaves(right)

    @property
    def leaves(self) -> int:
        return self._leaves(self.root)

    @classmethod
    def balanced(cls, nleaves: int) -> "TreeShape":
        def build(n):
            if n == 1:
                return None
            half = (n + 1) // 2
            return (build(half), build(n - half))
        if nleaves < 1:
            raise ValueError("need at least one leaf")
        return cls(build(nleaves))

    @classmethod
    def left_spine(cls, nleaves: int) -> "TreeShape":
        if nleaves < 1:
            raise ValueError("need at least one leaf")
        node = None
        for _ in range(nleaves - 1):
            node = (node, None)
        return cls(node)

    def to_json_obj(self):
        def enc(node):
            return 0 if node is None else [enc(node[0]), enc(node[1])]
        return enc(self.root)

    @classmethod
    def from_json_obj(cls, obj) -> "TreeShape":
        def dec(o):
            if o == 0:
                return None
            left, right = o
            return (dec(left), dec(right))
        return cls(dec(obj))


def gadget_vector(d: int) -> np.ndarray:
    return (1 << np.arange(d, dtype=np.int64)).astype(np.int64)


def gadget_decompose(a: int, d: int) -> np.ndarray:
    """Little-endian binary digits of a, length d; requires 0 <= a < 2^d."""
    a = int(a)
    if a < 0 or a >= (1 << d):
        raise ValueError(f"need 0 <= a < 2^{d}")
    return ((a >> np.arange(d, dtype=np.int64)) & 1).astype(np.int64)


def gadget_matrix(w: int, d: int) -> np.ndarray:
    """G = I_w (x) g in Z^{w x wd}."""
    return np.kron(np.eye(w, dtype=np.int64), gadget_vector(d))


def gadget_matrix_decompose(A: np.ndarray, d: int) -> np.ndarray:
    """Entrywise binary decomposition: {0,1}^{wd x u} with G . out = A."""
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    if np.any(A < 0) or np.any(A >= (1 << d)):
        raise ValueError(f"entries must lie in [0, 2^{d})")
    w, u = A.shape
    bits = (A[:, None, :] >> np.arange(d, dtype=np.int64)[None, :, None]) & 1
    return bits.reshape(w * d, u).astype(np.int64)


@dataclass
class PrfParams:
    m: int
    w: int
    d: int
    A0: np.ndarray
    A1: np.ndarray
    tree: TreeShape
    seed: Optional[int] = None

    def __post_init__(self):
        if self.d != max(1, math.ceil(math.log2(self.m))):
            raise ValueError("d must equal ceil(log2 m)")
        exp_shape = (self.w, self.w * self.d)
        self.A0 = np.asarray(self.A0, dtype=np.int64)
        self.A1 = np.asarray(self.A1, dtype=np.int64)
        for name, A in (("A0", self.A0), ("A1", self.A1)):
            if A.shape != exp_shape:
                raise ValueError(f"{name} must have shape {exp_shape}")
            if np.any(A < 0) or np.any(A >= self.m):
                raise ValueError(f"{name} entries must lie in [0, m)")
        if self.w * self.d * (self.m - 1) ** 2 >= 2**62:
            raise ValueError("modulus too large for int64 matrix products")

    @classmethod
    def from_seed(cls, m: int, w: int, nleaves: int = 8, seed: int = 0,
                  tree: Optional[TreeShape] = None) -> "PrfParams":
        d = max(1, math.ceil(math.log2(m)))
        rng = np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(0x9F,)))
        A0 = rng.integers(0, m, size=(w, w * d), dtype=np.int64)
        A1 = rng.integers(0, m, size=(w, w * d), dtype=np.int64)
        shape = tree if tree is not None else TreeShape.balanced(nleaves)
        return cls(m=m, w=w, d=d, A0=A0, A1=A1, tree=shape, seed=seed)

    def to_json_obj(self) -> dict:
        return {"m": self.m, "w": self.w, "d": self.d,
                "tree": self.tree.to_json_obj(), "seed": self.seed}


@dataclass(frozen=True)
class PrfKey:
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=np.int64))

    @classmethod
    def random(cls, m: int, w: int, rng: np.random.Generator) -> "PrfKey":
        return cls(rng.integers(0, m, size=w, dtype=np.int64))


def key_add(k1: PrfKey, k2: PrfKey, m: int) -> PrfKey:
    """Group operation on keys: coordinatewise addition mod m."""
    return PrfKey((k1.s + k2.s) % m)


def eval_AT(params: PrfParams, x: str) -> np.ndarray:
    """Tree-structured matrix product A_T(x) in Z_m^{w x wd}."""
    if set(x) - {"0", "1"}:
        raise ValueError("x must be a bitstring")
    if len(x) != params.tree.leaves:
        raise ValueError(f"input length {len(x)} != leaf count {params.tree.leaves}")
    m = params.m

    def rec(node: TreeNode, bits: str) -> np.ndarray:
        if node is None:
            return params.A1 if bits == "1" else params.A0
        left, right = node
        nl = TreeShape._leaves(left)
        mat_l = rec(left, bits[:nl])
        mat_r = rec(right, bits[nl:])
        return (mat_l @ gadget_matrix_decompose(mat_r, params.d)) % m

    return rec(params.tree.root, x)


def prf_eval(params: PrfParams, oracle: ErrorOracle, key: PrfKey, x: str) -> np.ndarray:
    """F_key(x) = s . A_T(x) + e_b mod m, errors applied per coordinate."""
    if oracle.modulus != params.m:
        raise ValueError("oracle modulus must match params")
    if key.s.shape != (params.w,):
        raise ValueError("key dimension mismatch")
    b = (key.s @ eval_AT(params, x)) % params.m
    e = oracle.table[b]
    return (b + e) % params.m


def homomorphism_gap(params: PrfParams, oracle: ErrorOracle,
                     k1: PrfKey, k2: PrfKey, x: str) -> np.ndarray:
    """e' = F_{k1}(x) + F_{k2}(x) - F_{k1+k2}(x) mod m, recentered."""
    f1 = prf_eval(params, oracle, k1, x)
    f2 = prf_eval(params, oracle, k2, x)
    f12 = prf_eval(params, oracle, key_add(k1, k2, params.m), x)
    return recenter_mod(f1.astype(np.int64) + f2 - f12, params.m)


def star_collision_rate(params: PrfParams, oracle_i: ErrorOracle, oracle_j: ErrorOracle,
                        key: PrfKey, trials: int, rng: np.random.Generator) -> float:
    """Fraction of coordinates where two stars' PRFs agree on random inputs."""
    n = params.tree.leaves
    hits = 0
    total = 0
    for _ in range(trials):
        bits = "".join("1" if b else "0" for b in rng.integers(0, 2, size=n))
        fi = prf_eval(params, oracle_i, key, bits)
        fj = prf_eval(params, oracle_j, key, bits)
        hits += int(np.count_nonzero(fi == fj))
        total += fi.size
    return hits / total


def collision_probability_bound(sigma: float) -> float:
    """Pr[|Z| < 1/(sqrt(2) sigma)] for standard normal Z."""
    return math.erf(1.0 / (2.0 * sigma))
