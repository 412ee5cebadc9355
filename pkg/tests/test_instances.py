from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbmatch import (
    GeneratorSpec,
    InfeasibleSpec,
    SplitMix64,
    brute_force_perfect_matching,
    check_haxell,
    default_private_degree,
    from_bipartite_graph,
    generate,
    validate_instance,
)
from hbmatch.cli import serialize_instance


class TestSplitMix64:
    def test_known_first_outputs_for_seed_zero(self):
        # splitmix64 reference stream for seed 0
        rng = SplitMix64(0)
        assert rng.next_u64() == 0xE220A8397B1DCDAF
        assert rng.next_u64() == 0x6E789E6AA1B965F4
        assert rng.next_u64() == 0x06C45D188009454F

    def test_below_and_distinct(self):
        rng = SplitMix64(42)
        vals = [rng.below(10) for _ in range(100)]
        assert all(0 <= v < 10 for v in vals)
        picks = rng.distinct(8, 5)
        assert len(set(picks)) == 5 and picks == sorted(picks)

    def test_shuffle_is_deterministic(self):
        a, b = list(range(20)), list(range(20))
        SplitMix64(7).shuffle(a)
        SplitMix64(7).shuffle(b)
        assert a == b and a != list(range(20))


class TestGenGuaranteed:
    def test_default_private_degree(self):
        assert default_private_degree(2, Fraction(1)) == 3
        assert default_private_degree(3, Fraction(1)) == 5
        assert default_private_degree(4, Fraction(1)) == 7
        assert default_private_degree(3, Fraction(1, 2)) == 5  # ceil(4.5)

    def test_single_vertex_two_disjoint_edges(self):
        spec = GeneratorSpec(mode="guaranteed", r=2, a_count=1, b_count=2, d=2, seed=0)
        h = generate(spec, Fraction(1))
        assert h.m == 2
        assert check_haxell(h, Fraction(1)).satisfied

    def test_r3_instances_satisfy_condition_and_have_matching(self):
        spec = GeneratorSpec(mode="guaranteed", r=3, a_count=3, b_count=24, d=4, seed=5)
        h = generate(spec, Fraction(1))
        assert validate_instance(h) is None
        assert check_haxell(h, Fraction(1)).satisfied
        assert brute_force_perfect_matching(h) is not None

    def test_infeasible_b_count(self):
        spec = GeneratorSpec(mode="guaranteed", r=3, a_count=3, b_count=10, d=4, seed=0)
        with pytest.raises(InfeasibleSpec):
            generate(spec)

    def test_extra_edges_preserve_condition(self):
        spec = GeneratorSpec(
            mode="guaranteed", r=3, a_count=3, b_count=40, d=5, extra_edges=10, seed=9
        )
        h = generate(spec, Fraction(1))
        assert validate_instance(h) is None
        assert check_haxell(h, Fraction(1)).satisfied


class TestGenPlanted:
    def test_zero_extras_is_exactly_a_matching(self):
        spec = GeneratorSpec(mode="planted", r=3, a_count=4, b_count=8, seed=1)
        h = generate(spec)
        assert h.m == 4
        m = brute_force_perfect_matching(h)
        assert m is not None and len(m) == 4

    @given(seed=st.integers(0, 200))
    @settings(max_examples=40, deadline=None)
    def test_always_contains_matching(self, seed):
        spec = GeneratorSpec(
            mode="planted", r=3, a_count=5, b_count=14, extra_edges=6, seed=seed
        )
        h = generate(spec)
        assert validate_instance(h) is None
        assert brute_force_perfect_matching(h) is not None

    def test_equal_seeds_identical_instances(self):
        spec = GeneratorSpec(mode="planted", r=3, a_count=5, b_count=12, extra_edges=4, seed=77)
        a = serialize_instance(generate(spec))
        b = serialize_instance(generate(spec))
        assert a == b

    def test_infeasible(self):
        with pytest.raises(InfeasibleSpec):
            generate(GeneratorSpec(mode="planted", r=3, a_count=5, b_count=9, seed=0))


class TestGenAdversarial:
    def test_two_a_one_b_is_the_funnel_instance(self):
        spec = GeneratorSpec(mode="adversarial", r=2, a_count=2, b_count=1, seed=123)
        h = generate(spec)
        assert {(e.a, e.bs) for e in h.edges} == {(0, (0,)), (1, (0,))}
        assert brute_force_perfect_matching(h) is None

    def test_common_vertex_funnel_violates(self):
        # all edges through b0: tau(E_A) = 1
        pairs = [(a, 0) for a in range(4)]
        h = from_bipartite_graph(pairs, 4, 1)
        res = check_haxell(h, Fraction(1))
        assert not res.satisfied

    @given(seed=st.integers(0, 300))
    @settings(max_examples=40, deadline=None)
    def test_instances_are_well_formed_and_deterministic(self, seed):
        spec = GeneratorSpec(
            mode="adversarial", r=3, a_count=7, b_count=8, extra_edges=2, seed=seed
        )
        h1, h2 = generate(spec), generate(spec)
        assert validate_instance(h1) is None
        assert serialize_instance(h1) == serialize_instance(h2)


class TestFromBipartiteGraph:
    def test_empty(self):
        h = from_bipartite_graph([], 2, 3)
        assert h.m == 0 and h.r == 2

    def test_k22(self):
        h = from_bipartite_graph([(a, b) for a in range(2) for b in range(2)], 2, 2)
        assert h.m == 4 and all(len(e.bs) == 1 for e in h.edges)

    def test_permutation_matrix_has_matching(self):
        perm = [2, 0, 3, 1]
        h = from_bipartite_graph([(a, perm[a]) for a in range(4)], 4, 4)
        m = brute_force_perfect_matching(h)
        assert m is not None and len(m) == 4

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            from_bipartite_graph([(0, 5)], 1, 3)

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            from_bipartite_graph([(0, 0), (0, 0)], 1, 1)


class TestGenGraph:
    def test_requires_r2(self):
        with pytest.raises(InfeasibleSpec):
            generate(GeneratorSpec(mode="graph", r=3, a_count=2, b_count=2, seed=0))

    def test_edge_count_and_determinism(self):
        spec = GeneratorSpec(mode="graph", r=2, a_count=4, b_count=5, extra_edges=9, seed=3)
        h = generate(spec)
        assert h.m == 9
        assert validate_instance(h) is None
        assert serialize_instance(h) == serialize_instance(generate(spec))
