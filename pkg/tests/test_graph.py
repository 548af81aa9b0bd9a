import numpy as np
import pytest

from linkpred.corpus import EdgeTable
from linkpred.graph import (
    GraphView,
    YearWindow,
    build_graph,
    connected_components,
    largest_connected_component,
    pack_pairs,
    read_snapshot,
    unpack_pairs,
    write_snapshot,
)
from linkpred.oracles import closure_components, random_graph


def graph_of(records, window=(1990, 2030)):
    return build_graph(EdgeTable.from_records(records), YearWindow(*window))


class TestYearWindow:
    def test_parse(self):
        w = YearWindow.parse("1990..1993")
        assert (w.start, w.end) == (1990, 1993)
        assert str(w) == "1990..1993"

    def test_contains(self):
        w = YearWindow(1990, 1993)
        assert 1990 in w and 1993 in w
        assert 1989 not in w and 1994 not in w

    def test_reversed_rejected(self):
        with pytest.raises(ValueError):
            YearWindow(1995, 1990)

    def test_parse_garbage(self):
        with pytest.raises(ValueError):
            YearWindow.parse("1990-1993")


class TestPackPairs:
    def test_round_trip_canonical(self):
        u = np.array([9, 2, 5])
        v = np.array([1, 7, 5000])
        keys = pack_pairs(u, v)
        lo, hi = unpack_pairs(keys)
        assert lo.tolist() == [1, 2, 5]
        assert hi.tolist() == [9, 7, 5000]

    def test_id_overflow(self):
        with pytest.raises(ValueError, match="32 bits"):
            pack_pairs(np.array([1 << 32]), np.array([1]))


class TestBuildGraph:
    def test_window_filter(self):
        g = graph_of([(1, 2, 1990), (2, 3, 1995)], window=(1990, 1992))
        assert g.n_nodes == 2
        assert g.n_edges == 1
        assert not g.has_node(3)

    def test_repeat_collaborations_collapse(self):
        g = graph_of([(1, 2, 1990), (2, 1, 1991), (1, 2, 1992)])
        assert g.n_edges == 1
        assert g.degree(1) == 1

    def test_neighbors_sorted(self):
        g = graph_of([(5, 1, 1990), (5, 9, 1990), (5, 3, 1990)])
        assert g.neighbors(5).tolist() == [1, 3, 9]

    def test_degree_and_missing_node(self):
        g = graph_of([(1, 2, 1990)])
        assert g.degree(1) == 1
        with pytest.raises(KeyError, match="node 7 not in graph"):
            g.degree(7)
        with pytest.raises(KeyError):
            g.neighbors(7)

    def test_has_edge(self):
        g = graph_of([(1, 2, 1990), (2, 3, 1990)])
        assert g.has_edge(1, 2) and g.has_edge(2, 1)
        assert not g.has_edge(1, 3)
        assert not g.has_edge(1, 1)

    def test_edge_pairs_canonical_sorted(self):
        g = graph_of([(4, 2, 1990), (1, 3, 1990), (2, 1, 1990)])
        u, v = g.edge_pairs()
        pairs = list(zip(u.tolist(), v.tolist()))
        assert pairs == sorted(pairs)
        assert all(a < b for a, b in pairs)

    def test_csr_invariants(self):
        rng = np.random.default_rng(3)
        g = random_graph(40, 0.2, rng)
        assert np.all(np.diff(g.node_ids) > 0)
        assert g.indptr[0] == 0 and g.indptr[-1] == len(g.indices)
        for pos in range(g.n_nodes):
            run = g.indices[g.indptr[pos] : g.indptr[pos + 1]]
            assert np.all(np.diff(run) > 0)  # sorted, no duplicates
            assert pos not in run  # no self loops


class TestComponents:
    def test_two_components_ordered_by_size(self):
        g = graph_of([(1, 2, 1990), (2, 3, 1990), (10, 11, 1990)])
        comps = connected_components(g)
        assert [c.tolist() for c in comps] == [[1, 2, 3], [10, 11]]

    def test_size_tie_breaks_on_min_id(self):
        g = graph_of([(20, 21, 1990), (5, 6, 1990)])
        comps = connected_components(g)
        assert [c.tolist() for c in comps] == [[5, 6], [20, 21]]

    def test_matches_closure_oracle_on_random_graphs(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            g = random_graph(int(rng.integers(2, 40)), 0.08, rng)
            if g.n_nodes == 0:
                continue
            got = {frozenset(int(x) for x in c) for c in connected_components(g)}
            assert got == set(closure_components(g))

    def test_lcc_is_connected_and_maximal(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            g = random_graph(30, 0.06, rng)
            if g.n_nodes == 0:
                continue
            lcc = largest_connected_component(g)
            assert len(connected_components(lcc)) == 1
            sizes = [len(c) for c in connected_components(g)]
            assert lcc.n_nodes == max(sizes)

    def test_lcc_of_empty_graph(self):
        g = graph_of([(1, 2, 1990)], window=(2000, 2001))
        with pytest.raises(ValueError, match="empty graph has no LCC"):
            largest_connected_component(g)

    def test_subgraph_membership_checked(self):
        g = graph_of([(1, 2, 1990)])
        with pytest.raises(KeyError):
            g.subgraph(np.array([1, 99]))


class TestSnapshot:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        g = random_graph(25, 0.15, rng)
        path = tmp_path / "g.snapshot"
        write_snapshot(g, path)
        back = read_snapshot(path)
        assert np.array_equal(back.node_ids, g.node_ids)
        assert np.array_equal(back.indptr, g.indptr)
        assert np.array_equal(back.indices, g.indices)

    def test_header_format(self, tmp_path):
        g = graph_of([(3, 1, 1990), (3, 2, 1990)])
        path = tmp_path / "g.snapshot"
        write_snapshot(g, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "nodes 3 edges 2"
        assert lines[1:] == ["1 3", "2 3"]

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "g.snapshot"
        path.write_text("vertices 3 links 2\n")
        with pytest.raises(ValueError, match="header"):
            read_snapshot(path)
