"""Exact desk-scale oracles.

Minimum hitting sets by branch and bound, exhaustive checking of the
matching-existence condition over all A-subsets, brute-force perfect
matching, and verification of violation certificates.  Everything here
is exponential by nature and guarded by instance-size caps; the solver
itself never calls these on hot paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .core import (
    BipartiteHypergraph,
    PartialMatching,
    Violation,
    incident_edges,
)

__all__ = [
    "EXCEEDS_BUDGET",
    "HittingSetResult",
    "HaxellResult",
    "WitnessCertificate",
    "InstanceTooLarge",
    "min_hitting_set",
    "check_haxell",
    "brute_force_perfect_matching",
    "verify_witness",
    "condition_factor",
]

DEFAULT_SUBSET_CAP = 20


class InstanceTooLarge(ValueError):
    """Instance exceeds the cap for an exhaustive oracle."""

    code = "INSTANCE_TOO_LARGE"


class _BudgetExceeded:
    """Sentinel: the minimum hitting set is strictly larger than the budget."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "EXCEEDS_BUDGET"


EXCEEDS_BUDGET = _BudgetExceeded()


@dataclass(frozen=True)
class HittingSetResult:
    size: int
    witness: frozenset[int]


@dataclass(frozen=True)
class HaxellResult:
    """Outcome of the condition check: satisfied, or the first violator."""

    satisfied: bool
    violator: tuple[int, ...] | None = None
    tau: int | None = None
    bound: Fraction | None = None


def condition_factor(r: int, epsilon: Fraction) -> Fraction:
    """The per-set factor 2r-3+epsilon of the strengthened condition."""
    return Fraction(2 * r - 3) + epsilon


@dataclass(frozen=True)
class WitnessCertificate:
    """A violating set S with an explicit hitting set for its edges.

    `hitting_set` meets every edge incident to `s`, and its size is at
    most (2r-3+epsilon)(|s|-1); both facts are checkable in polynomial
    time by :func:`verify_witness`.
    """

    s: frozenset[int]
    hitting_set: frozenset[int]
    epsilon: Fraction
    bound: Fraction

    @classmethod
    def build(
        cls,
        r: int,
        s: Iterable[int],
        hitting_set: Iterable[int],
        epsilon: Fraction,
    ) -> "WitnessCertificate":
        s = frozenset(s)
        bound = condition_factor(r, epsilon) * (len(s) - 1)
        return cls(s=s, hitting_set=frozenset(hitting_set), epsilon=epsilon, bound=bound)


def _greedy_hitting_set(bsets: list[frozenset[int]]) -> list[int]:
    """Deterministic greedy cover; upper bound seed for the search."""
    chosen: list[int] = []
    unhit = list(bsets)
    while unhit:
        counts: dict[int, int] = {}
        for bs in unhit:
            for v in bs:
                counts[v] = counts.get(v, 0) + 1
        best = max(sorted(counts), key=lambda v: counts[v])
        chosen.append(best)
        unhit = [bs for bs in unhit if best not in bs]
    return chosen


def min_hitting_set(
    h: BipartiteHypergraph,
    family: Iterable[int],
    budget: int | None = None,
) -> HittingSetResult | _BudgetExceeded:
    """Exact minimum hitting set of the edge family, over B-vertices.

    Branch and bound: branch on the B-vertices of an unhit edge (the one
    with the fewest vertices not yet excluded, ties by family order),
    vertices in index order, excluding each tried vertex from later
    branches.  Pruned at the incumbent, at the budget, and at an
    admissible lower bound from a greedy B-disjoint subfamily.

    With a budget, returns EXCEEDS_BUDGET when the true minimum is
    strictly larger; that is a value, not a failure.
    """
    ids = sorted(set(family))
    all_bsets = h.b_sets
    bsets = [all_bsets[i] for i in ids]
    if not bsets:
        return HittingSetResult(0, frozenset())

    best_set: tuple[int, ...] | None = None
    if budget is not None:
        # a greedy incumbent is pointless when the search stops at budget
        best_size = budget + 1
    else:
        greedy = _greedy_hitting_set(bsets)
        best_set = tuple(sorted(greedy))
        best_size = len(greedy)

    chosen: list[int] = []
    chosen_set: set[int] = set()
    excluded: set[int] = set()

    def lower_bound(unhit: list[frozenset[int]], enough: int) -> int | None:
        # Greedy B-disjoint subfamily: its size is a valid lower bound;
        # scanning stops once `enough` certifies the prune (the prune
        # fires either way, so skipping a later dead edge is harmless).
        # None signals an unhit edge with every vertex excluded.
        used: set[int] = set()
        count = 0
        for bs in unhit:
            if excluded and not (bs - excluded):
                return None
            if not (bs & used):
                used |= bs
                count += 1
                if count >= enough:
                    return count
        return count

    def dfs() -> None:
        nonlocal best_size, best_set
        unhit = [bs for bs in bsets if not (bs & chosen_set)]
        if not unhit:
            if len(chosen) < best_size:
                best_size = len(chosen)
                best_set = tuple(sorted(chosen))
            return
        lb = lower_bound(unhit, best_size - len(chosen))
        if lb is None or len(chosen) + lb >= best_size:
            return
        if excluded:
            target = min(unhit, key=lambda bs: len(bs - excluded))
        else:
            target = min(unhit, key=len)
        tried: list[int] = []
        for v in sorted(target - excluded):
            chosen.append(v)
            chosen_set.add(v)
            dfs()
            chosen.pop()
            chosen_set.discard(v)
            excluded.add(v)
            tried.append(v)
        excluded.difference_update(tried)

    dfs()
    if best_set is None or (budget is not None and best_size > budget):
        return EXCEEDS_BUDGET
    return HittingSetResult(best_size, frozenset(best_set))


def check_haxell(
    h: BipartiteHypergraph,
    epsilon: Fraction,
    mode: str = "strengthened",
    max_a: int = DEFAULT_SUBSET_CAP,
) -> HaxellResult:
    """Exhaustively test tau(E_S) > factor * (|S|-1) over all nonempty S.

    `mode` is "strengthened" (factor 2r-3+epsilon) or "classic"
    (factor 2r-3).  Subsets are enumerated by increasing size, then
    lexicographically, and the first violator is returned.  Comparisons
    use exact rationals; the per-subset hitting-set search stops at the
    floored bound.
    """
    if mode not in ("strengthened", "classic"):
        raise ValueError(f"unknown mode {mode!r}")
    if h.a_count > max_a:
        raise InstanceTooLarge(
            f"|A|={h.a_count} exceeds the subset-enumeration cap {max_a}"
        )
    factor = condition_factor(h.r, epsilon if mode == "strengthened" else Fraction(0))
    for k in range(1, h.a_count + 1):
        for subset in combinations(range(h.a_count), k):
            bound = factor * (k - 1)
            budget = math.floor(bound)
            res = min_hitting_set(h, incident_edges(h, subset), budget=budget)
            if res is not EXCEEDS_BUDGET:
                assert isinstance(res, HittingSetResult)
                return HaxellResult(False, subset, res.size, bound)
    return HaxellResult(True)


def brute_force_perfect_matching(
    h: BipartiteHypergraph, max_a: int = DEFAULT_SUBSET_CAP
) -> PartialMatching | None:
    """Backtracking ground-truth search; lexicographically first matching.

    A-vertices are processed in index order and each tries its incident
    edges in edge order, so the first complete assignment found is the
    lexicographically least one.  Returns None when no perfect matching
    exists.
    """
    if h.a_count > max_a:
        raise InstanceTooLarge(f"|A|={h.a_count} exceeds the backtracking cap {max_a}")
    used_b: set[int] = set()
    picks: list[int] = []

    def bt(a: int) -> bool:
        if a == h.a_count:
            return True
        for eid in h.a_edges[a]:
            e = h.edges[eid]
            if any(b in used_b for b in e.bs):
                continue
            used_b.update(e.bs)
            picks.append(eid)
            if bt(a + 1):
                return True
            picks.pop()
            used_b.difference_update(e.bs)
        return False

    if not bt(0):
        return None
    m = PartialMatching()
    for eid in picks:
        m.add(h, eid)
    return m


def verify_witness(h: BipartiteHypergraph, cert: WitnessCertificate) -> Violation | None:
    """Polynomial-time check of a violation certificate.

    Confirms that the hitting set lies in B and meets every edge
    incident to S, and that its cardinality is at most
    (2r-3+epsilon)(|S|-1) in exact rational arithmetic.
    """
    for a in cert.s:
        if not 0 <= a < h.a_count:
            return Violation("INDEX_OUT_OF_RANGE", f"A-vertex {a} in S")
    for b in cert.hitting_set:
        if not 0 <= b < h.b_count:
            return Violation("INDEX_OUT_OF_RANGE", f"B-vertex {b} in hitting set")
    for eid in sorted(incident_edges(h, cert.s)):
        e = h.edges[eid]
        if not any(b in cert.hitting_set for b in e.bs):
            return Violation("UNHIT_EDGE", f"edge {eid} not hit")
    bound = condition_factor(h.r, cert.epsilon) * (len(cert.s) - 1)
    if Fraction(len(cert.hitting_set)) > bound:
        return Violation(
            "SIZE_EXCEEDS_BOUND",
            f"|hitting_set|={len(cert.hitting_set)} > bound {bound}",
        )
    return None
