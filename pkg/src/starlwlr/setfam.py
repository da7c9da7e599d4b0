"""Uniform set families with bounded pairwise intersections.

Constructions, verifiers, exact bounds for small universes, a feasibility
inequality, a brute-force oracle, the private-element bijection between
maximally cover-free families and families one element smaller, and the
asymptotic counters for how many star-specific PRFs a network supports.

Conventions: a family is an ordered list of sets over a finite labeled
universe. "k-uniform" means every set has size k; "at most t-intersecting"
means any two sets at distinct positions share at most t elements;
"maximally cover-free" means every set owns a private element not covered
by the union of the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

Label = object  # ints or strings; constructed families use canonical strings


@dataclass
class SetFamily:
    universe: list
    sets: list  # list of sorted tuples of labels
    allow_duplicates: bool = False

    def __post_init__(self):
        self.universe = list(self.universe)
        if len(set(self.universe)) != len(self.universe):
            raise ValueError("universe labels must be distinct")
        uni = set(self.universe)
        canon = []
        for s in self.sets:
            tup = tuple(sorted(set(s), key=_label_key))
            if not set(tup) <= uni:
                raise ValueError(f"set {tup!r} not contained in universe")
            canon.append(tup)
        if not self.allow_duplicates and len(set(canon)) != len(canon):
            raise ValueError("duplicate sets (pass allow_duplicates=True to permit)")
        self.sets = canon

    def __len__(self):
        return len(self.sets)

    def to_json_obj(self) -> dict:
        return {"universe": list(self.universe), "sets": [list(s) for s in self.sets]}

    @classmethod
    def from_json_obj(cls, obj: dict, allow_duplicates: bool = False) -> "SetFamily":
        return cls(universe=obj["universe"], sets=[tuple(s) for s in obj["sets"]],
                   allow_duplicates=allow_duplicates)


def _label_key(x):
    return (type(x).__name__, str(x))


@dataclass
class FamilyReport:
    k_uniform: bool
    k: Optional[int]
    max_pairwise_intersection: int
    at_most_t_intersecting: bool
    maximally_cover_free: bool
    witness: Optional[dict] = None

    def to_json_obj(self) -> dict:
        return {
            "k_uniform": self.k_uniform,
            "k": self.k,
            "max_pairwise_intersection": self.max_pairwise_intersection,
            "at_most_t_intersecting": self.at_most_t_intersecting,
            "maximally_cover_free": self.maximally_cover_free,
            "witness": self.witness,
        }


def verify_family(fam: SetFamily, k: int, t: int) -> FamilyReport:
    """Exact scan of uniformity, pairwise intersections, and cover-freeness."""
    sets = [frozenset(s) for s in fam.sets]
    witness = None

    k_uniform = True
    for i, s in enumerate(sets):
        if len(s) != k:
            k_uniform = False
            witness = {"kind": "size", "index": i, "size": len(s)}
            break

    max_int = 0
    at_most_t = True
    for i, j in combinations(range(len(sets)), 2):
        c = len(sets[i] & sets[j])
        if c > max_int:
            max_int = c
        if c > t and at_most_t:
            at_most_t = False
            witness = witness or {"kind": "intersection", "pair": [i, j], "size": c}

    cover_free = True
    for i, s in enumerate(sets):
        others = set()
        for j, o in enumerate(sets):
            if j != i:
                others |= o
        if s <= others:
            cover_free = False
            if witness is None:
                witness = {"kind": "covered_set", "index": i}
            break

    return FamilyReport(
        k_uniform=k_uniform,
        k=k if k_uniform else None,
        max_pairwise_intersection=max_int,
        at_most_t_intersecting=at_most_t,
        maximally_cover_free=cover_free,
        witness=witness,
    )


def private_elements(fam: SetFamily) -> list:
    """For each set, its sorted private elements (may be empty)."""
    sets = [frozenset(s) for s in fam.sets]
    out = []
    for i, s in enumerate(sets):
        others = set()
        for j, o in enumerate(sets):
            if j != i:
                others |= o
        out.append(sorted(s - others, key=_label_key))
    return out


# ---------------------------------------------------------------------------
# Explicit constructions
# ---------------------------------------------------------------------------

def _pair_label(l: int, i: int, j: int) -> str:
    a, b = min(i, j), max(i, j)
    return f"({l},{{{a},{b}}})"


def _solo_label(i: int, j: int) -> str:
    return f"({i},{j})"


def construct_small_n(m: int, k: int, t: int) -> SetFamily:
    """m sets, k-uniform, at most t-intersecting, over mk - m(m-1)t/2 elements.

    Writes k = alpha*t + beta with 0 <= beta < t. Set i consists of the t
    copies of every unordered pair {i, j} with j in [alpha+1]\\{i}, plus
    beta solo markers (i, j). Requires m <= floor(k/t) so the pair indices
    stay inside [alpha+1].
    """
    if not (1 <= t <= k):
        raise ValueError("need 1 <= t <= k")
    alpha, beta = divmod(k, t)
    if m > alpha:
        raise ValueError(f"need m <= floor(k/t) = {alpha}, got m = {m}")
    sets = []
    for i in range(1, m + 1):
        elems = [_pair_label(l, i, j)
                 for l in range(1, t + 1)
                 for j in range(1, alpha + 2) if j != i]
        elems += [_solo_label(i, j) for j in range(1, beta + 1)]
        sets.append(tuple(sorted(elems)))
    universe = sorted({e for s in sets for e in s})
    expected = m * k - m * (m - 1) * t // 2
    assert len(universe) == expected, (len(universe), expected)
    return SetFamily(universe=universe, sets=sets)


def construct_exact_t(k: int, t: int) -> SetFamily:
    """k/t + 1 sets, k-uniform, exactly t-intersecting, over k(k/t+1)/2 elements.

    Requires t | k. For t == k the two produced sets coincide as sets; the
    family is returned with duplicates allowed, mirroring the degenerate
    boundary of the construction.
    """
    if not (1 <= t <= k):
        raise ValueError("need 1 <= t <= k")
    if k % t != 0:
        raise ValueError(f"t = {t} does not divide k = {k}")
    q = k // t + 1
    sets = []
    for i in range(1, q + 1):
        elems = [_pair_label(l, i, j)
                 for l in range(1, t + 1)
                 for j in range(1, q + 1) if j != i]
        sets.append(tuple(sorted(elems)))
    universe = sorted({e for s in sets for e in s})
    assert len(universe) == k * q // 2
    return SetFamily(universe=universe, sets=sets, allow_duplicates=(t == k))


def double_family(fam: SetFamily, k: int, t: int) -> SetFamily:
    """Square a verified (k, t) family: m^2 sets, 2k-uniform, universe 2mn.

    Builds 2m disjoint relabeled copies of `fam` and joins
    A[h,i] = B_h from copy G_i with C_i from copy H_h. Preserves the
    at-most-t intersection property and the relative size k|fam|/n.
    """
    rep = verify_family(fam, k, t)
    if not (rep.k_uniform and rep.at_most_t_intersecting):
        raise ValueError("input family failed (k, t) verification")
    m = len(fam)
    sets = []
    for h in range(m):
        for i in range(m):
            left = tuple(("G", i, e) for e in fam.sets[h])
            right = tuple(("H", h, e) for e in fam.sets[i])
            sets.append(tuple(sorted(left + right, key=_label_key)))
    universe = [("G", i, u) for i in range(m) for u in fam.universe]
    universe += [("H", h, u) for h in range(m) for u in fam.universe]
    return SetFamily(universe=universe, sets=sets)


def add_distinguished(fam: SetFamily, n: int) -> SetFamily:
    """Append a fresh private element n-m+i to the i-th set (the g map).

    Input must be an integer-labeled family over [1, n-m] with m = |fam| < n.
    Output is maximally cover-free over [1, n]; uniformity grows by one and
    pairwise intersections are unchanged.
    """
    m = len(fam)
    if m >= n:
        raise ValueError("need |fam| < n")
    if not all(isinstance(u, int) and 1 <= u <= n - m for u in fam.universe):
        raise ValueError(f"universe must be integer labels within [1, {n - m}]")
    sets = [tuple(sorted(s + (n - m + i + 1,))) for i, s in enumerate(fam.sets)]
    universe = sorted(set(fam.universe) | {n - m + i + 1 for i in range(m)})
    return SetFamily(universe=universe, sets=sets)


def strip_distinguished(fam: SetFamily) -> SetFamily:
    """Remove the smallest private element from every set (the f map)."""
    privates = private_elements(fam)
    if any(not p for p in privates):
        raise ValueError("family is not maximally cover-free")
    sets = []
    for s, p in zip(fam.sets, privates):
        drop = p[0]
        sets.append(tuple(e for e in s if e != drop))
    universe = sorted({e for s in sets for e in s}, key=_label_key)
    return SetFamily(universe=universe, sets=sets)


# ---------------------------------------------------------------------------
# Bounds and feasibility
# ---------------------------------------------------------------------------

def bound_small_n(n: int, k: int, t: int) -> Optional[int]:
    """Exact maximum family size for small universes, None when not covered.

    Covered cases: n < k(k/t+1)/2 (the largest m with
    n >= mk - m(m-1)t/2), and the boundary n == k(k/t+1)/2 with t | k and
    t < k, where the maximum is k/t + 1. The t == k boundary degenerates
    (the construction collapses to repeated sets) and is reported as not
    covered.
    """
    if not (1 <= t <= k <= n):
        raise ValueError("need 1 <= t <= k <= n")
    # All comparisons stay integral: n < k(k/t+1)/2 iff 2nt < k(k+t).
    if 2 * n * t < k * (k + t):
        m = 0
        while 2 * n >= (m + 1) * (2 * k - m * t):
            m += 1
        return m
    if t < k and k % t == 0 and 2 * n * t == k * (k + t):
        return k // t + 1
    return None


def bound_simple(n: int, k: int, t: int) -> Fraction:
    """Counting bound: |family| <= C(n, t+1) / C(k, t+1)."""
    if not (t <= k <= n):
        raise ValueError("need t <= k <= n")
    return Fraction(math.comb(n, t + 1), math.comb(k, t + 1))


def bound_one_more(k: int, t: int) -> Fraction:
    """Bound at n = k(k/t+1)/2 + 1: ((k^2+kt+2t)/(k^2-kt+2t)) * (k/t+1)."""
    if not (1 <= t <= k):
        raise ValueError("need 1 <= t <= k")
    if k % t != 0:
        raise ValueError(f"t = {t} does not divide k = {k}")
    return Fraction(k * k + k * t + 2 * t, k * k - k * t + 2 * t) * Fraction(k + t, t)


def feasibility_check(n: int, k: int, t: int, m: int) -> dict:
    """Element-multiplicity feasibility test for an (n, k, t) family of size m.

    Returns the inequality sides along with the verdict:
    (n-r)*floor(km/n)^2 + r*ceil(km/n)^2 <= (k-t)m + tm^2,
    with r = km - n*floor(km/n).
    """
    if not (t <= k <= n) or m < 1:
        raise ValueError("need t <= k <= n and m >= 1")
    q = (k * m) // n
    r = k * m - n * q
    ceil_q = q + 1 if r > 0 else q
    lhs = (n - r) * q * q + r * ceil_q * ceil_q
    rhs = (k - t) * m + t * m * m
    return {"feasible": lhs <= rhs, "lhs": lhs, "rhs": rhs}


BRUTE_FORCE_GUARD = 100_000


def brute_force_max(n: int, k: int, t: int) -> tuple[int, SetFamily]:
    """Exact maximum by lexicographic backtracking over all k-subsets of [n].

    Guarded to C(n, k) <= 100000 candidate sets. Deterministic: candidates
    are scanned in lexicographic order and the first family of each new
    record size is kept.
    """
    if not (0 <= t <= k <= n):
        raise ValueError("need 0 <= t <= k <= n")
    total = math.comb(n, k)
    if total > BRUTE_FORCE_GUARD:
        raise ValueError(f"C({n},{k}) = {total} exceeds guard {BRUTE_FORCE_GUARD}")
    subs = list(combinations(range(1, n + 1), k))
    masks = [sum(1 << (e - 1) for e in s) for s in subs]
    best_size = 0
    best: list[int] = []

    def compatible(idx: int, chosen: list[int]) -> bool:
        mi = masks[idx]
        return all((mi & masks[j]).bit_count() <= t for j in chosen)

    def extend(chosen: list[int], cands: list[int]):
        nonlocal best_size, best
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = list(chosen)
        if len(chosen) + len(cands) <= best_size:
            return
        for pos, idx in enumerate(cands):
            rest = [j for j in cands[pos + 1:]
                    if (masks[idx] & masks[j]).bit_count() <= t]
            chosen.append(idx)
            extend(chosen, rest)
            chosen.pop()
            if len(chosen) + (len(cands) - pos - 1) <= best_size:
                return

    extend([], list(range(total)))
    fam = SetFamily(universe=list(range(1, n + 1)), sets=[subs[i] for i in best])
    return best_size, fam


# ---------------------------------------------------------------------------
# PRF-count evaluators (labeled asymptotics, never exact counts)
# ---------------------------------------------------------------------------

ADVERSARY_MODELS = ("external_oracle", "eavesdropper", "semi_honest")


def max_sskh_prfs(n: int, k: int, t: int, model: str, c: float = 0.9) -> dict:
    """Asymptotic count of star-specific PRFs supportable by n parties.

    external_oracle / eavesdropper: value n^k / k!, an asymptotic
    equivalence, not an exact count. semi_honest: lower bound c*n with
    caller-supplied c < 1.
    """
    if not (t <= k <= n):
        raise ValueError("need t <= k <= n")
    if model not in ADVERSARY_MODELS:
        raise ValueError(f"model must be one of {ADVERSARY_MODELS}")
    if model in ("external_oracle", "eavesdropper"):
        return {
            "model": model,
            "kind": "asymptotic",
            "formula": "n^k / k!",
            "value": n**k / math.factorial(k),
        }
    if not (0 < c < 1):
        raise ValueError("need 0 < c < 1")
    return {
        "model": model,
        "kind": "lower_bound",
        "formula": "c * n, c < 1",
        "c": c,
        "value": c * n,
    }


FANO_PLANE = SetFamily(
    universe=[1, 2, 3, 4, 5, 6, 7],
    sets=[(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (1, 5, 6), (2, 6, 7), (1, 3, 7)],
)
