"""Shared instance builders and hypothesis strategies."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from hbmatch import BipartiteHypergraph, PartialMatching, from_bipartite_graph


def make_h(r, a_count, b_count, edges) -> BipartiteHypergraph:
    return BipartiteHypergraph(r, a_count, b_count, edges)


def shift_chain(k: int) -> BipartiteHypergraph:
    """r=2 chain whose last augmentation unwinds a depth-k cascade.

    Each a_i < k lists (a_i; b_{i+1}) before (a_i; b_i), so greedy
    matching shifts every vertex up and a_k's only edge is taken.
    """
    pairs = []
    for i in range(k):
        pairs.append((i, i + 1))
        pairs.append((i, i))
    pairs.append((k, k))
    return from_bipartite_graph(pairs, k + 1, k + 1)


def superposed_commit_instance() -> BipartiteHypergraph:
    """r=3 fixture where a collapse frees b1 and the lazy rebuild of the
    layer below gains an edge, crossing the (1+mu) commit threshold."""
    return make_h(3, 3, 10, [
        (0, (0, 1)),
        (0, (8, 9)),
        (1, (4, 5)),
        (2, (0, 2)),
        (2, (4, 6)),
        (2, (1, 7)),
    ])


@st.composite
def hypergraphs(draw, max_a=6, max_b=10, max_edges=14, r_values=(2, 3, 4)):
    r = draw(st.sampled_from(r_values))
    a_count = draw(st.integers(1, max_a))
    b_count = draw(st.integers(r - 1, max_b))
    n_edges = draw(st.integers(0, max_edges))
    seen = set()
    edges = []
    for _ in range(n_edges):
        a = draw(st.integers(0, a_count - 1))
        bs = tuple(sorted(draw(
            st.sets(st.integers(0, b_count - 1), min_size=r - 1, max_size=r - 1)
        )))
        if (a, bs) not in seen:
            seen.add((a, bs))
            edges.append((a, bs))
    return make_h(r, a_count, b_count, edges)


@st.composite
def hypergraphs_with_matching(draw, **kwargs):
    h = draw(hypergraphs(**kwargs))
    m = PartialMatching()
    order = draw(st.permutations(range(h.m))) if h.m else []
    for eid in order:
        e = h.edges[eid]
        if not m.matches_a(e.a) and not any(b in m.b_of for b in e.bs):
            if draw(st.booleans()):
                m.add(h, eid)
    return h, m


@pytest.fixture
def tiny_r3():
    """One r=3 edge (a0; b0, b1)."""
    return make_h(3, 1, 2, [(0, (0, 1))])
