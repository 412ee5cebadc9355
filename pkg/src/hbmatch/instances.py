"""Seeded instance generation and the r=2 graph specialization.

All generators are deterministic functions of (spec, seed).  Randomness
comes from splitmix64, chosen over a stdlib generator because instances
must regenerate bit-identically from any implementation of the same
formats; the full generator fits in a dozen lines and its identifier is
recorded in generated file headers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import BipartiteHypergraph

__all__ = [
    "PRNG_ID",
    "SplitMix64",
    "GeneratorSpec",
    "InfeasibleSpec",
    "default_private_degree",
    "generate",
    "gen_guaranteed",
    "gen_planted",
    "gen_adversarial",
    "gen_graph",
    "from_bipartite_graph",
]

PRNG_ID = "splitmix64"
_MASK64 = (1 << 64) - 1

MODES = ("planted", "guaranteed", "graph", "adversarial")


class InfeasibleSpec(ValueError):
    code = "INFEASIBLE_SPEC"


class SplitMix64:
    """splitmix64: 64-bit state, one addition and two xor-shift mixes."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish draw in [0, n); modulo bias is irrelevant here."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        return self.next_u64() % n

    def distinct(self, n: int, k: int) -> list[int]:
        """k distinct sorted values from [0, n), by rejection."""
        if k > n:
            raise ValueError("cannot draw more distinct values than the range")
        out: set[int] = set()
        while len(out) < k:
            out.add(self.below(n))
        return sorted(out)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class GeneratorSpec:
    mode: str
    r: int
    a_count: int
    b_count: int
    extra_edges: int = 0
    d: int | None = None
    seed: int = 0

    def describe(self) -> str:
        return (
            f"mode={self.mode} r={self.r} na={self.a_count} nb={self.b_count} "
            f"d={self.d if self.d is not None else '-'} "
            f"extra_edges={self.extra_edges} seed={self.seed} prng={PRNG_ID}"
        )


def default_private_degree(r: int, epsilon: Fraction) -> int:
    """Smallest private degree for which the disjoint-edge argument holds."""
    return math.ceil(Fraction(2 * r - 2) + epsilon)


def _add_random_edges(
    h_edges: list[tuple[int, tuple[int, ...]]],
    rng: SplitMix64,
    count: int,
    a_count: int,
    b_count: int,
    r: int,
) -> None:
    seen = set(h_edges)
    for _ in range(count):
        for _attempt in range(200):
            a = rng.below(a_count)
            bs = tuple(rng.distinct(b_count, r - 1))
            if (a, bs) not in seen:
                seen.add((a, bs))
                h_edges.append((a, bs))
                break
        # else: edge space is (nearly) exhausted; silently add fewer.


def gen_guaranteed(spec: GeneratorSpec, epsilon: Fraction = Fraction(1)) -> BipartiteHypergraph:
    """Instance provably satisfying the strengthened condition.

    Every A-vertex receives d pairwise-B-disjoint edges on B-vertices no
    other edge touches, so hitting its incident edges costs d vertices
    per member of S: tau(E_S) >= d|S| > (2r-3+eps)(|S|-1) whenever
    d >= 2r-2+eps.  Extra random edges can only raise tau.
    """
    d = spec.d if spec.d is not None else default_private_degree(spec.r, epsilon)
    width = d * (spec.r - 1)
    if spec.b_count < width * spec.a_count:
        raise InfeasibleSpec(
            f"need b_count >= {width * spec.a_count} for {spec.a_count} vertices "
            f"with {d} private edges"
        )
    rng = SplitMix64(spec.seed)
    edges: list[tuple[int, tuple[int, ...]]] = []
    for a in range(spec.a_count):
        base = a * width
        for j in range(d):
            lo = base + j * (spec.r - 1)
            edges.append((a, tuple(range(lo, lo + spec.r - 1))))
    _add_random_edges(edges, rng, spec.extra_edges, spec.a_count, spec.b_count, spec.r)
    return BipartiteHypergraph(spec.r, spec.a_count, spec.b_count, edges)


def gen_planted(spec: GeneratorSpec) -> BipartiteHypergraph:
    """Instance with a hidden perfect matching; no condition guarantee."""
    if spec.b_count < (spec.r - 1) * spec.a_count:
        raise InfeasibleSpec(
            f"need b_count >= {(spec.r - 1) * spec.a_count} to plant a perfect matching"
        )
    rng = SplitMix64(spec.seed)
    perm = list(range(spec.b_count))
    rng.shuffle(perm)
    edges: list[tuple[int, tuple[int, ...]]] = []
    for a in range(spec.a_count):
        slot = perm[a * (spec.r - 1) : (a + 1) * (spec.r - 1)]
        edges.append((a, tuple(sorted(slot))))
    _add_random_edges(edges, rng, spec.extra_edges, spec.a_count, spec.b_count, spec.r)
    return BipartiteHypergraph(spec.r, spec.a_count, spec.b_count, edges)


def gen_adversarial(spec: GeneratorSpec) -> BipartiteHypergraph:
    """Sparse instance funneling many A-vertices through few B-vertices.

    Each A-vertex gets one to three edges drawn mostly from a small
    bottleneck pool, so tau over large S stays near the pool size and
    condition violations are common; extra_edges adds fully random
    edges for variety.  No guarantee either way.
    """
    if spec.b_count < spec.r - 1:
        raise InfeasibleSpec("b_count must be at least r-1")
    rng = SplitMix64(spec.seed)
    pool = max(spec.r - 1, min(spec.b_count, (spec.r - 1) + spec.a_count // 3))
    edges: list[tuple[int, tuple[int, ...]]] = []
    seen: set[tuple[int, tuple[int, ...]]] = set()
    for a in range(spec.a_count):
        degree = 1 + rng.below(3)
        for _ in range(degree):
            for _attempt in range(60):
                bs = rng.distinct(pool, spec.r - 1)
                if spec.b_count > pool and rng.below(4) == 0:
                    stray = pool + rng.below(spec.b_count - pool)
                    bs[rng.below(len(bs))] = stray
                key = (a, tuple(sorted(set(bs))))
                if len(key[1]) == spec.r - 1 and key not in seen:
                    seen.add(key)
                    edges.append(key)
                    break
    _add_random_edges(edges, rng, spec.extra_edges, spec.a_count, spec.b_count, spec.r)
    return BipartiteHypergraph(spec.r, spec.a_count, spec.b_count, edges)


def gen_graph(spec: GeneratorSpec) -> BipartiteHypergraph:
    """Random bipartite graph (r=2): extra_edges distinct uniform pairs."""
    if spec.r != 2:
        raise InfeasibleSpec("graph mode is the r=2 specialization")
    rng = SplitMix64(spec.seed)
    total = spec.a_count * spec.b_count
    count = min(spec.extra_edges, total)
    pairs: set[tuple[int, int]] = set()
    while len(pairs) < count:
        pairs.add((rng.below(spec.a_count), rng.below(spec.b_count)))
    return from_bipartite_graph(sorted(pairs), spec.a_count, spec.b_count)


def from_bipartite_graph(
    adjacency: list[tuple[int, int]], a_count: int, b_count: int
) -> BipartiteHypergraph:
    """Wrap a bipartite graph as a 2-uniform hypergraph.

    In this specialization the minimum hitting set of the edges incident
    to S is exactly the neighborhood N(S).
    """
    for a, b in adjacency:
        if not (0 <= a < a_count and 0 <= b < b_count):
            raise ValueError(f"INDEX_OUT_OF_RANGE: pair ({a}, {b})")
    if len(set(adjacency)) != len(adjacency):
        raise ValueError("duplicate pairs in adjacency list")
    return BipartiteHypergraph(2, a_count, b_count, [(a, (b,)) for a, b in adjacency])


def generate(spec: GeneratorSpec, epsilon: Fraction = Fraction(1)) -> BipartiteHypergraph:
    """Dispatch on spec.mode; epsilon only affects guaranteed defaults."""
    if spec.mode == "guaranteed":
        return gen_guaranteed(spec, epsilon)
    if spec.mode == "planted":
        return gen_planted(spec)
    if spec.mode == "adversarial":
        return gen_adversarial(spec)
    if spec.mode == "graph":
        return gen_graph(spec)
    raise ValueError(f"unknown generator mode {spec.mode!r}")
