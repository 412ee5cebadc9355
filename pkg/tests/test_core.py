import pytest
from hypothesis import given, settings

from hbmatch import (
    MatchingError,
    PartialMatching,
    blocking_edges,
    incident_edges,
    is_immediately_addable,
    swap,
    validate_instance,
    verify_matching,
)

from .conftest import hypergraphs, hypergraphs_with_matching, make_h


class TestValidateInstance:
    def test_minimal_well_formed(self):
        h = make_h(3, 1, 2, [(0, (0, 1))])
        assert validate_instance(h) is None

    def test_duplicate_b_vertex(self):
        h = make_h(3, 1, 2, [(0, (0, 0))])
        v = validate_instance(h)
        assert v is not None and v.code == "DUPLICATE_B_VERTEX"

    def test_index_out_of_range(self):
        h = make_h(2, 1, 3, [(0, (5,))])
        v = validate_instance(h)
        assert v is not None and v.code == "INDEX_OUT_OF_RANGE"

    def test_non_uniform(self):
        h = make_h(3, 1, 3, [(0, (0,))])
        v = validate_instance(h)
        assert v is not None and v.code == "NON_UNIFORM_EDGE"

    def test_duplicate_edge(self):
        h = make_h(2, 1, 2, [(0, (1,)), (0, (1,))])
        v = validate_instance(h)
        assert v is not None and v.code == "DUPLICATE_EDGE"

    def test_names_first_failing_edge(self):
        h = make_h(3, 2, 4, [(0, (0, 1)), (1, (2, 2))])
        v = validate_instance(h)
        assert v is not None and "edge 1" in v.detail


class TestIncidentEdges:
    def test_empty_set(self):
        h = make_h(3, 2, 4, [(0, (0, 1))])
        assert incident_edges(h, set()) == set()

    def test_single_incidence(self):
        h = make_h(3, 1, 2, [(0, (0, 1))])
        assert incident_edges(h, {0}) == {0}

    def test_filter_matches_exhaustive_scan(self):
        h = make_h(3, 2, 4, [(0, (0, 1)), (1, (0, 2)), (0, (2, 3))])
        s = {0}
        expected = {e.id for e in h.edges if e.a in s}
        assert expected == {0, 2}
        assert incident_edges(h, s) == expected

    @given(hypergraphs())
    @settings(max_examples=40)
    def test_whole_a_gives_all_edges_and_disjoint_union(self, h):
        assert incident_edges(h, range(h.a_count)) == set(range(h.m))
        mid = h.a_count // 2
        left, right = set(range(mid)), set(range(mid, h.a_count))
        assert incident_edges(h, left) | incident_edges(h, right) == set(range(h.m))
        assert not incident_edges(h, left) & incident_edges(h, right)


class TestBlockingAndAddable:
    def test_empty_matching(self):
        h = make_h(3, 2, 4, [(0, (0, 1))])
        m = PartialMatching()
        assert blocking_edges(h, m, 0) == set()
        assert is_immediately_addable(h, m, 0)

    def test_single_shared_b_vertex(self):
        h = make_h(3, 2, 4, [(0, (0, 1)), (1, (0, 2))])
        m = PartialMatching()
        m.add(h, 1)
        assert blocking_edges(h, m, 0) == {1}
        assert not is_immediately_addable(h, m, 0)

    def test_sharing_only_a_vertex_does_not_block(self):
        h = make_h(3, 1, 4, [(0, (0, 1)), (0, (2, 3))])
        m = PartialMatching()
        m.add(h, 1)
        assert blocking_edges(h, m, 0) == set()
        assert is_immediately_addable(h, m, 0)

    @given(hypergraphs_with_matching())
    @settings(max_examples=60)
    def test_at_most_r_minus_one_blockers_and_equivalence(self, hm):
        h, m = hm
        for e in h.edges:
            blockers = blocking_edges(h, m, e)
            assert len(blockers) <= h.r - 1
            assert (not blockers) == is_immediately_addable(h, m, e)
            for f in blockers:
                assert set(h.edges[f].bs) & set(e.bs)


class TestSwap:
    def test_disjoint_replacement(self):
        h = make_h(3, 1, 4, [(0, (0, 1)), (0, (2, 3))])
        m = PartialMatching()
        m.add(h, 0)
        swap(h, m, 0, 1)
        assert m.edge_ids == {1}
        assert m.matched_a_vertices() == {0}

    def test_blocked_by_own_matching_edge(self):
        h = make_h(3, 1, 3, [(0, (0, 1)), (0, (1, 2))])
        m = PartialMatching()
        m.add(h, 0)
        with pytest.raises(MatchingError) as exc:
            swap(h, m, 0, 1)
        assert exc.value.code == "NOT_ADDABLE"

    def test_two_edge_matching(self):
        h = make_h(3, 2, 6, [(0, (0, 1)), (1, (2, 3)), (0, (4, 5))])
        m = PartialMatching()
        m.add(h, 0)
        m.add(h, 1)
        swap(h, m, 0, 2)
        assert m.edge_ids == {1, 2}
        # pairwise disjointness verified from scratch
        assert verify_matching(h, m) is None

    def test_not_in_matching(self):
        h = make_h(3, 1, 4, [(0, (0, 1)), (0, (2, 3))])
        m = PartialMatching()
        with pytest.raises(MatchingError) as exc:
            swap(h, m, 0, 1)
        assert exc.value.code == "NOT_IN_MATCHING"

    def test_a_vertex_mismatch(self):
        h = make_h(3, 2, 4, [(0, (0, 1)), (1, (2, 3))])
        m = PartialMatching()
        m.add(h, 0)
        with pytest.raises(MatchingError) as exc:
            swap(h, m, 0, 1)
        assert exc.value.code == "A_VERTEX_MISMATCH"

    @given(hypergraphs_with_matching())
    @settings(max_examples=60)
    def test_swap_preserves_matched_set_and_validity(self, hm):
        h, m = hm
        before = m.matched_a_vertices()
        for f_out in sorted(m.edge_ids):
            a = h.edges[f_out].a
            for e_in in h.a_edges[a]:
                if e_in == f_out or not is_immediately_addable(h, m, e_in):
                    continue
                swap(h, m, f_out, e_in)
                assert m.matched_a_vertices() == before
                assert verify_matching(h, m) is None
                break
            break


class TestVerifyMatching:
    def test_empty_ok(self):
        h = make_h(3, 1, 2, [(0, (0, 1))])
        assert verify_matching(h, PartialMatching()) is None

    def test_empty_not_perfect(self):
        h = make_h(3, 1, 2, [(0, (0, 1))])
        v = verify_matching(h, PartialMatching(), require_perfect=True)
        assert v is not None and v.code == "UNMATCHED" and "0" in v.detail

    def test_overlap_at_shared_b(self):
        h = make_h(3, 2, 3, [(0, (0, 1)), (1, (1, 2))])
        m = PartialMatching()
        m.add(h, 0)
        # bypass add() to fabricate the overlap
        m.edge_ids.add(1)
        m.a_of[1] = 1
        m.b_of[2] = 1
        v = verify_matching(h, m)
        assert v is not None and v.code == "OVERLAP"

    def test_map_inconsistency_detected(self):
        h = make_h(2, 2, 2, [(0, (0,)), (1, (1,))])
        m = PartialMatching()
        m.add(h, 0)
        m.a_of[1] = 0
        v = verify_matching(h, m)
        assert v is not None and v.code == "MAP_INCONSISTENT"
