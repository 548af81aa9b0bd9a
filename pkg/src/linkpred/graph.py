"""Windowed co-authorship graphs.

A GraphView is an undirected simple graph in CSR form over a sorted array of
original node ids. Building one from an EdgeTable filters events to a year
window, deduplicates pairs, and symmetrizes. Components are found with an
iterative BFS so deep graphs cannot hit the recursion limit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import EdgeTable

_PACK_LIMIT = np.int64(1) << np.int64(32)


@dataclass(frozen=True)
class YearWindow:
    """Inclusive year interval."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"bad year window {self.start}..{self.end}")

    def __contains__(self, year: int) -> bool:
        return self.start <= int(year) <= self.end

    def __str__(self) -> str:
        return f"{self.start}..{self.end}"

    @classmethod
    def parse(cls, text: str) -> "YearWindow":
        txt = text.strip()
        lo, sep, hi = txt.partition("..")
        if not sep:
            raise ValueError(f"bad year window {text!r}, expected START..END")
        return cls(int(lo), int(hi))


def pack_pairs(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Pack canonical (u < v) id pairs into uint64 keys for set operations."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if len(u) and (u.max() >= _PACK_LIMIT or v.max() >= _PACK_LIMIT):
        raise ValueError("node id does not fit in 32 bits")
    lo = np.minimum(u, v).astype(np.uint64)
    hi = np.maximum(u, v).astype(np.uint64)
    return (lo << np.uint64(32)) | hi


def unpack_pairs(keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = np.asarray(keys, dtype=np.uint64)
    u = (keys >> np.uint64(32)).astype(np.int64)
    v = (keys & np.uint64(0xFFFFFFFF)).astype(np.int64)
    return u, v


class GraphView:
    """Undirected simple graph in CSR form keyed by original node ids.

    node_ids is sorted ascending; indptr/indices use positions into node_ids,
    and each adjacency run is sorted. Lookups go through searchsorted.
    """

    def __init__(self, node_ids: np.ndarray, indptr: np.ndarray, indices: np.ndarray):
        self.node_ids = np.asarray(node_ids, dtype=np.int64)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int32)
        if len(self.indptr) != len(self.node_ids) + 1:
            raise ValueError("indptr length mismatch")

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def position(self, node_id: int) -> int:
        """Position of node_id in node_ids, or raise KeyError."""
        pos = int(np.searchsorted(self.node_ids, node_id))
        if pos >= len(self.node_ids) or self.node_ids[pos] != node_id:
            raise KeyError(f"node {node_id} not in graph")
        return pos

    def positions(self, ids: np.ndarray) -> np.ndarray:
        """Vectorized position lookup; raises KeyError if any id is missing."""
        ids = np.asarray(ids, dtype=np.int64)
        pos = np.searchsorted(self.node_ids, ids)
        pos_clip = np.minimum(pos, len(self.node_ids) - 1)
        bad = (pos >= len(self.node_ids)) | (self.node_ids[pos_clip] != ids)
        if np.any(bad):
            missing = ids[bad][0]
            raise KeyError(f"node {int(missing)} not in graph")
        return pos.astype(np.int64)

    def has_node(self, node_id: int) -> bool:
        pos = int(np.searchsorted(self.node_ids, node_id))
        return pos < len(self.node_ids) and self.node_ids[pos] == node_id

    def neighbors(self, node_id: int) -> np.ndarray:
        """Neighbor ids of node_id, sorted ascending."""
        pos = self.position(node_id)
        run = self.indices[self.indptr[pos] : self.indptr[pos + 1]]
        return self.node_ids[run]

    def degree(self, node_id: int) -> int:
        pos = self.position(node_id)
        return int(self.indptr[pos + 1] - self.indptr[pos])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v or not (self.has_node(u) and self.has_node(v)):
            return False
        pu = self.position(u)
        pv = self.position(v)
        run = self.indices[self.indptr[pu] : self.indptr[pu + 1]]
        i = int(np.searchsorted(run, pv))
        return i < len(run) and run[i] == pv

    def edge_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """All edges as canonical (u, v) id arrays with u < v, sorted."""
        src_pos = np.repeat(np.arange(self.n_nodes, dtype=np.int64), self.degrees())
        dst_pos = self.indices.astype(np.int64)
        keep = src_pos < dst_pos
        return self.node_ids[src_pos[keep]], self.node_ids[dst_pos[keep]]

    def subgraph(self, keep_ids: np.ndarray) -> "GraphView":
        """Induced subgraph on keep_ids (must all be present)."""
        keep_ids = np.unique(np.asarray(keep_ids, dtype=np.int64))
        self.positions(keep_ids)  # validate membership
        u, v = self.edge_pairs()
        in_u = np.isin(u, keep_ids)
        in_v = np.isin(v, keep_ids)
        sel = in_u & in_v
        return _from_canonical_pairs(keep_ids, u[sel], v[sel])


def build_graph(edges: EdgeTable, window: YearWindow) -> GraphView:
    """Simple undirected graph of all events with year inside window.

    Nodes are exactly the endpoints of in-window events; repeated
    collaborations collapse to one edge.
    """
    mask = (edges.year >= window.start) & (edges.year <= window.end)
    u = edges.u[mask]
    v = edges.v[mask]
    keys = np.unique(pack_pairs(u, v))
    cu, cv = unpack_pairs(keys)
    node_ids = np.unique(np.concatenate([cu, cv]))
    return _from_canonical_pairs(node_ids, cu, cv)


def _from_canonical_pairs(
    node_ids: np.ndarray, u: np.ndarray, v: np.ndarray
) -> GraphView:
    """CSR from unique canonical pairs whose endpoints all lie in node_ids."""
    node_ids = np.asarray(node_ids, dtype=np.int64)
    n = len(node_ids)
    pu = np.searchsorted(node_ids, u).astype(np.int64)
    pv = np.searchsorted(node_ids, v).astype(np.int64)
    src = np.concatenate([pu, pv])
    dst = np.concatenate([pv, pu])
    order = np.lexsort((dst, src))
    src = src[order]
    dst = dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return GraphView(node_ids, indptr, dst.astype(np.int32))


def connected_components(graph: GraphView) -> list[np.ndarray]:
    """Components as arrays of node ids, largest first.

    Ties on size break toward the component containing the smallest node id.
    Each component array is sorted ascending. Uses an explicit BFS queue.
    """
    n = graph.n_nodes
    comp = np.full(n, -1, dtype=np.int64)
    n_comp = 0
    queue = np.empty(n, dtype=np.int64)
    for start in range(n):
        if comp[start] >= 0:
            continue
        comp[start] = n_comp
        queue[0] = start
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            for nb in graph.indices[graph.indptr[x] : graph.indptr[x + 1]]:
                if comp[nb] < 0:
                    comp[nb] = n_comp
                    queue[tail] = nb
                    tail += 1
        n_comp += 1
    groups = [graph.node_ids[comp == c] for c in range(n_comp)]
    # positions scan in id order, so groups[c] is already sorted and its first
    # element is the component's smallest id; component 0 holds the global min.
    groups.sort(key=lambda g: (-len(g), int(g[0])))
    return groups


def largest_connected_component(graph: GraphView) -> GraphView:
    """Induced subgraph on the largest component (smallest-min-id tiebreak)."""
    if graph.n_nodes == 0:
        raise ValueError("empty graph has no LCC")
    groups = connected_components(graph)
    return graph.subgraph(groups[0])


def write_snapshot(graph: GraphView, path) -> None:
    """Write ``nodes N edges M`` then one ``u v`` line per edge (u < v, sorted)."""
    u, v = graph.edge_pairs()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"nodes {graph.n_nodes} edges {graph.n_edges}\n")
        for a, b in zip(u, v):
            fh.write(f"{a} {b}\n")


def read_snapshot(path) -> GraphView:
    """Read the write_snapshot format back into a GraphView."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "nodes" or header[2] != "edges":
            raise ValueError(f"bad snapshot header in {path}")
        n, m = int(header[1]), int(header[3])
        us = np.empty(m, dtype=np.int64)
        vs = np.empty(m, dtype=np.int64)
        for i in range(m):
            a, b = fh.readline().split()
            us[i], vs[i] = int(a), int(b)
    keys = np.unique(pack_pairs(us, vs))
    cu, cv = unpack_pairs(keys)
    node_ids = np.unique(np.concatenate([cu, cv]))
    if len(node_ids) != n:
        raise ValueError(f"snapshot {path}: header says {n} nodes, edges touch {len(node_ids)}")
    return _from_canonical_pairs(node_ids, cu, cv)
