"""Pair feature extraction.

Ten features per candidate author pair, in a fixed order:

  0 ri_sim       cosine similarity of research-interest token counts
  1 aff_sim      cosine similarity of affiliation token counts
  2 pc_sum       paper counts of the endpoints, summed
  3 cn_sum       citation counts, summed
  4 hi_sum       h-indices, summed
  5 pi_sum       productivity indices, summed
  6 upi_sum      uncorrelated productivity indices, summed
  7 jaccard      |N(u) & N(v)| / |N(u) | N(v)|
  8 dice         2 |N(u) & N(v)| / (deg(u) + deg(v))
  9 adamic_adar  sum over common neighbors z of 1 / ln(deg(z))

Text is tokenized to lowercase ASCII [a-z0-9]+ runs with a small stop list;
an empty vector on either side gives similarity 0. The structural features
run through the similarity kernel backend (compiled when available).
"""
from __future__ import annotations

import re

import numpy as np

from . import _kernels
from .corpus import AuthorProfile
from .graph import GraphView

FEATURE_NAMES = (
    "ri_sim",
    "aff_sim",
    "pc_sum",
    "cn_sum",
    "hi_sum",
    "pi_sum",
    "upi_sum",
    "jaccard",
    "dice",
    "adamic_adar",
)

FAMILY_ORDER = ("RI-sim", "AFF-sim", "I-sum", "Node-sim")

FAMILY_COLUMNS = {
    "RI-sim": (0,),
    "AFF-sim": (1,),
    "I-sum": (2, 3, 4, 5, 6),
    "Node-sim": (7, 8, 9),
}

STOP_WORDS = frozenset(
    """the of and a an in on for at to with by from as is are was were be been
    this that these those it its or but not no""".split()
)

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def _token_list(text: str) -> list[str]:
    return [t for t in _TOKEN_RE.findall(text.lower()) if t not in STOP_WORDS]


def tokenize(text: str) -> dict[str, int]:
    """Term frequencies of lowercase alphanumeric tokens, stop words removed."""
    counts: dict[str, int] = {}
    for t in _token_list(text):
        counts[t] = counts.get(t, 0) + 1
    return counts


def cosine_similarity(a: dict[str, int], b: dict[str, int]) -> float:
    """Cosine between two token count vectors; 0.0 when either is empty."""
    if not a or not b:
        return 0.0
    dot = 0
    for t, n in a.items():
        m = b.get(t)
        if m is not None:
            dot += n * m
    if dot == 0:
        return 0.0
    na = np.sqrt(float(sum(n * n for n in a.values())))
    nb = np.sqrt(float(sum(n * n for n in b.values())))
    return float(dot / (na * nb))


def text_similarity(text_a: str, text_b: str) -> float:
    """Cosine similarity of two raw texts after tokenization."""
    return cosine_similarity(tokenize(text_a), tokenize(text_b))


class _SparseText:
    """Per-node token count vectors over a shared vocabulary."""

    __slots__ = ("ids", "vals", "norm")

    def __init__(self, ids: np.ndarray, vals: np.ndarray, norm: float):
        self.ids = ids
        self.vals = vals
        self.norm = norm


def _vectorize(text: str, vocab: dict[str, int]) -> _SparseText:
    counts: dict[int, int] = {}
    for t in _token_list(text):
        tid = vocab.setdefault(t, len(vocab))
        counts[tid] = counts.get(tid, 0) + 1
    if not counts:
        return _SparseText(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64), 0.0)
    ids = np.fromiter(counts.keys(), dtype=np.int64, count=len(counts))
    vals = np.fromiter(counts.values(), dtype=np.float64, count=len(counts))
    order = np.argsort(ids)
    ids = ids[order]
    vals = vals[order]
    return _SparseText(ids, vals, float(np.sqrt(np.dot(vals, vals))))


def _sparse_cosine(a: _SparseText, b: _SparseText) -> float:
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    common, ia, ib = np.intersect1d(a.ids, b.ids, assume_unique=True, return_indices=True)
    if len(common) == 0:
        return 0.0
    dot = float(np.dot(a.vals[ia], b.vals[ib]))
    return dot / (a.norm * b.norm)


class FeatureExtractor:
    """Computes pair features against one graph and one profile map.

    Structural features use the graph as-is; attribute features fall back to
    empty-profile defaults for ids without metadata. Both endpoints of every
    requested pair must be graph nodes.
    """

    def __init__(self, graph: GraphView, profiles: dict[int, AuthorProfile]):
        self.graph = graph
        n = graph.n_nodes
        deg = graph.degrees().astype(np.float64)
        with np.errstate(divide="ignore"):
            inv = 1.0 / np.log(deg)
        inv[deg < 2.0] = 0.0
        self._inv_log_deg = inv
        self._deg = deg

        empty = AuthorProfile(id=-1)
        self._pc = np.empty(n, dtype=np.float64)
        self._cn = np.empty(n, dtype=np.float64)
        self._hi = np.empty(n, dtype=np.float64)
        self._pi = np.empty(n, dtype=np.float64)
        self._upi = np.empty(n, dtype=np.float64)
        vocab: dict[str, int] = {}
        self._ri: list[_SparseText] = []
        self._aff: list[_SparseText] = []
        for pos, nid in enumerate(graph.node_ids):
            p = profiles.get(int(nid), empty)
            self._pc[pos] = p.pc
            self._cn[pos] = p.cn
            self._hi[pos] = p.hi
            self._pi[pos] = p.pi
            self._upi[pos] = p.upi
            self._ri.append(_vectorize(p.interests, vocab))
            self._aff.append(_vectorize(p.affiliation, vocab))

    def matrix(self, u_ids: np.ndarray, v_ids: np.ndarray) -> np.ndarray:
        """Feature matrix of shape (len(pairs), 10) in FEATURE_NAMES order.

        The first invalid pair aborts with its row index in the message.
        """
        u_ids = np.asarray(u_ids, dtype=np.int64)
        v_ids = np.asarray(v_ids, dtype=np.int64)
        if u_ids.shape != v_ids.shape:
            raise ValueError("endpoint arrays differ in length")
        same = np.nonzero(u_ids == v_ids)[0]
        if len(same):
            i = int(same[0])
            raise ValueError(f"pair {i}: identical endpoints ({u_ids[i]})")
        try:
            pu = self.graph.positions(u_ids)
            pv = self.graph.positions(v_ids)
        except KeyError:
            for i in range(len(u_ids)):
                for nid in (int(u_ids[i]), int(v_ids[i])):
                    if not self.graph.has_node(nid):
                        raise KeyError(f"pair {i}: node {nid} not in graph") from None
            raise
        m = len(u_ids)
        out = np.empty((m, 10), dtype=np.float64)
        for i in range(m):
            out[i, 0] = _sparse_cosine(self._ri[pu[i]], self._ri[pv[i]])
            out[i, 1] = _sparse_cosine(self._aff[pu[i]], self._aff[pv[i]])
        out[:, 2] = self._pc[pu] + self._pc[pv]
        out[:, 3] = self._cn[pu] + self._cn[pv]
        out[:, 4] = self._hi[pu] + self._hi[pv]
        out[:, 5] = self._pi[pu] + self._pi[pv]
        out[:, 6] = self._upi[pu] + self._upi[pv]
        out[:, 7:10] = _kernels.node_similarity_batch(
            self.graph.indptr, self.graph.indices, self._inv_log_deg, pu, pv
        )
        return out

    def pair_features(self, u: int, v: int) -> np.ndarray:
        """Feature vector of shape (10,) for one pair."""
        return self.matrix(np.array([u]), np.array([v]))[0]


def index_sum(a: AuthorProfile, b: AuthorProfile, kind: str) -> float:
    """Sum of one research index over the two profiles; kind in pc/cn/hi/pi/upi."""
    if kind not in ("pc", "cn", "hi", "pi", "upi"):
        raise ValueError(f"unknown index kind {kind!r}")
    return float(getattr(a, kind) + getattr(b, kind))


def _single_pair_sims(graph: GraphView, u: int, v: int) -> np.ndarray:
    if u == v:
        raise ValueError(f"identical endpoints ({u})")
    pu = np.array([graph.position(u)], dtype=np.int64)
    pv = np.array([graph.position(v)], dtype=np.int64)
    deg = graph.degrees().astype(np.float64)
    with np.errstate(divide="ignore"):
        inv = 1.0 / np.log(deg)
    inv[deg < 2.0] = 0.0
    return _kernels.node_similarity_batch(graph.indptr, graph.indices, inv, pu, pv)[0]


def jaccard(graph: GraphView, u: int, v: int) -> float:
    """|N(u) & N(v)| / |N(u) | N(v)| with the 0/0 -> 0 convention."""
    return float(_single_pair_sims(graph, u, v)[0])


def dice(graph: GraphView, u: int, v: int) -> float:
    """2 |N(u) & N(v)| / (deg(u) + deg(v))."""
    return float(_single_pair_sims(graph, u, v)[1])


def adamic_adar(graph: GraphView, u: int, v: int) -> float:
    """Sum of 1/ln(deg(z)) over common neighbors z of u and v."""
    return float(_single_pair_sims(graph, u, v)[2])


def pair_features(graph: GraphView, profiles, u: int, v: int) -> np.ndarray:
    """All 10 features for one pair; convenience over FeatureExtractor."""
    return FeatureExtractor(graph, profiles).pair_features(u, v)


def batch_features(graph: GraphView, profiles, pairs) -> np.ndarray:
    """Feature rows for (u, v) pairs, in input order."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(pairs) == 0:
        return np.empty((0, len(FEATURE_NAMES)))
    return FeatureExtractor(graph, profiles).matrix(pairs[:, 0], pairs[:, 1])


def family_columns(families) -> list[int]:
    """Sorted column indices for a family name or an iterable of them."""
    if isinstance(families, str):
        families = (families,)
    cols: set[int] = set()
    for fam in families:
        if fam not in FAMILY_COLUMNS:
            raise KeyError(f"unknown feature family {fam!r}")
        cols.update(FAMILY_COLUMNS[fam])
    return sorted(cols)
