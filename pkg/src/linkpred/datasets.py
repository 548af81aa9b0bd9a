"""Balanced, temporally split labeled datasets.

Train rows come from the largest connected component of the train-window
graph: every edge is a positive, and an equal number of negatives is drawn
uniformly from node pairs that share no co-authorship event in any year of
the corpus. Test positives are NEW links: pairs of train-graph nodes with no
event in or before the train window and at least one event in the test
window. Test features are computed on the train graph, never on test edges.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import AuthorProfile, EdgeTable
from .features import FEATURE_NAMES, FeatureExtractor
from .graph import (
    GraphView,
    YearWindow,
    build_graph,
    largest_connected_component,
    pack_pairs,
)


class DatasetError(Exception):
    """Raised when a dataset cannot be built as specified."""


@dataclass(frozen=True)
class SplitSpec:
    """Train window strictly before test window."""

    train_window: YearWindow
    test_window: YearWindow

    def __post_init__(self):
        if self.train_window.end >= self.test_window.start:
            raise ValueError(
                f"train window {self.train_window} must end before "
                f"test window {self.test_window} starts"
            )


@dataclass
class LabeledDataset:
    """Balanced pair dataset: ids, 10-column features, 0/1 labels.

    graph is the GraphView the features were computed on (the train graph,
    for both splits).
    """

    u: np.ndarray
    v: np.ndarray
    X: np.ndarray
    y: np.ndarray
    graph: GraphView
    seed: int

    def __len__(self) -> int:
        return len(self.y)

    @property
    def n_pos(self) -> int:
        return int(np.sum(self.y == 1))

    @property
    def n_neg(self) -> int:
        return int(np.sum(self.y == 0))

    def pair_keys(self) -> np.ndarray:
        return pack_pairs(self.u, self.v)


def ever_linked_keys(edges: EdgeTable) -> np.ndarray:
    """Sorted packed keys of every pair with at least one event, any year."""
    return np.unique(pack_pairs(edges.u, edges.v))


def _sample_negative_pairs(
    node_ids: np.ndarray,
    linked_keys: np.ndarray,
    needed: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Uniformly sample `needed` distinct never-linked pairs of node_ids.

    Rejection sampling with a seeded generator; a pair is rejected when it is
    a self-pair, was already drawn, or carries an event anywhere in the
    corpus. Errors out if the candidate pool is too small or after
    1000 * needed attempts.
    """
    n = len(node_ids)
    total = n * (n - 1) // 2
    linked_u, linked_v = np.divmod(linked_keys, np.uint64(1) << np.uint64(32))
    both_in = np.isin(linked_u.astype(np.int64), node_ids) & np.isin(
        linked_v.astype(np.int64), node_ids
    )
    candidates = total - int(np.sum(both_in))
    if candidates < needed:
        raise DatasetError(
            f"only {candidates} never-linked pairs available, "
            f"need {needed} negatives"
        )
    linked = set(map(int, linked_keys))
    rng = np.random.default_rng(seed)
    chosen_u = np.empty(needed, dtype=np.int64)
    chosen_v = np.empty(needed, dtype=np.int64)
    chosen: set[int] = set()
    attempts = 0
    cap = 1000 * needed
    count = 0
    while count < needed:
        if attempts >= cap:
            raise DatasetError(
                f"negative sampling gave up after {cap} attempts "
                f"({count} of {needed} found)"
            )
        i, j = rng.integers(0, n, size=2)
        attempts += 1
        if i == j:
            continue
        a = int(node_ids[i])
        b = int(node_ids[j])
        if a > b:
            a, b = b, a
        key = (a << 32) | b
        if key in linked or key in chosen:
            continue
        chosen.add(key)
        chosen_u[count] = a
        chosen_v[count] = b
        count += 1
    return chosen_u, chosen_v


def _assemble(
    pos_u, pos_v, neg_u, neg_v, graph: GraphView, profiles, seed: int
) -> LabeledDataset:
    u = np.concatenate([pos_u, neg_u])
    v = np.concatenate([pos_v, neg_v])
    y = np.concatenate(
        [np.ones(len(pos_u), dtype=np.int64), np.zeros(len(neg_u), dtype=np.int64)]
    )
    X = FeatureExtractor(graph, profiles).matrix(u, v)
    return LabeledDataset(u=u, v=v, X=X, y=y, graph=graph, seed=seed)


def train_lcc(edges: EdgeTable, spec: SplitSpec) -> GraphView:
    """Largest connected component of the train-window graph."""
    return largest_connected_component(build_graph(edges, spec.train_window))


def build_train_dataset(
    edges: EdgeTable,
    profiles: dict[int, AuthorProfile],
    spec: SplitSpec,
    seed: int,
    *,
    graph: GraphView | None = None,
) -> LabeledDataset:
    """Positives = train-LCC edges; negatives = never-linked pairs, matched.

    `graph` may carry a precomputed train LCC to avoid rebuilding it; it must
    equal train_lcc(edges, spec).
    """
    g_tr = graph if graph is not None else train_lcc(edges, spec)
    pos_u, pos_v = g_tr.edge_pairs()
    neg_u, neg_v = _sample_negative_pairs(
        g_tr.node_ids, ever_linked_keys(edges), len(pos_u), seed
    )
    return _assemble(pos_u, pos_v, neg_u, neg_v, g_tr, profiles, seed)


def new_link_pairs(
    edges: EdgeTable, spec: SplitSpec, train_graph: GraphView
) -> tuple[np.ndarray, np.ndarray]:
    """Pairs of train-graph nodes whose first event falls in the test window.

    Sorted by (u, v). A pair qualifies when it has no event in or before the
    train window and at least one event inside the test window.
    """
    keys = pack_pairs(edges.u, edges.v)
    seen_by_train = np.unique(keys[edges.year <= spec.train_window.end])
    mask_test = (edges.year >= spec.test_window.start) & (
        edges.year <= spec.test_window.end
    )
    in_test = np.unique(keys[mask_test])
    fresh = np.setdiff1d(in_test, seen_by_train, assume_unique=True)
    u = (fresh >> np.uint64(32)).astype(np.int64)
    v = (fresh & np.uint64(0xFFFFFFFF)).astype(np.int64)
    keep = np.isin(u, train_graph.node_ids) & np.isin(v, train_graph.node_ids)
    return u[keep], v[keep]


def build_test_dataset(
    edges: EdgeTable,
    profiles: dict[int, AuthorProfile],
    spec: SplitSpec,
    seed: int,
    train_graph: GraphView,
) -> LabeledDataset:
    """Positives = new links among train nodes; features on the train graph."""
    pos_u, pos_v = new_link_pairs(edges, spec, train_graph)
    if len(pos_u) == 0:
        raise DatasetError("no new links in test window among train nodes")
    neg_u, neg_v = _sample_negative_pairs(
        train_graph.node_ids, ever_linked_keys(edges), len(pos_u), seed
    )
    return _assemble(pos_u, pos_v, neg_u, neg_v, train_graph, profiles, seed)


@dataclass
class Standardizer:
    """Per-feature affine transform fitted on train rows only."""

    mean: np.ndarray
    std: np.ndarray

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.std


def fit_standardizer(train: LabeledDataset) -> Standardizer:
    """Column means and stds of the train matrix; constant columns get std 1."""
    if len(train) == 0:
        raise ValueError("cannot fit standardizer on empty dataset")
    mean = train.X.mean(axis=0)
    std = train.X.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return Standardizer(mean=mean, std=std)


def apply_standardizer(s: Standardizer, dataset: LabeledDataset) -> LabeledDataset:
    """Same dataset with transformed features; stats are not recomputed."""
    return LabeledDataset(
        u=dataset.u,
        v=dataset.v,
        X=s.transform(dataset.X),
        y=dataset.y,
        graph=dataset.graph,
        seed=dataset.seed,
    )


_CSV_HEADER = "u,v," + ",".join(FEATURE_NAMES)


def write_feature_csv(path, u, v, X, y=None) -> None:
    """CSV feature matrix: ids, reals at 9 significant digits, optional label."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_CSV_HEADER + (",label\n" if y is not None else "\n"))
        for i in range(len(u)):
            cells = [str(int(u[i])), str(int(v[i]))]
            cells += ["%.9g" % x for x in X[i]]
            if y is not None:
                cells.append(str(int(y[i])))
            fh.write(",".join(cells) + "\n")


def read_feature_csv(path):
    """Read write_feature_csv output; returns (u, v, X, y) with y possibly None."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"empty feature csv {path}")
    header = lines[0]
    if header == _CSV_HEADER + ",label":
        labeled = True
    elif header == _CSV_HEADER:
        labeled = False
    else:
        raise ValueError(f"unexpected feature csv header in {path}: {header!r}")
    n = len(lines) - 1
    u = np.empty(n, dtype=np.int64)
    v = np.empty(n, dtype=np.int64)
    X = np.empty((n, len(FEATURE_NAMES)), dtype=np.float64)
    y = np.empty(n, dtype=np.int64) if labeled else None
    width = 2 + len(FEATURE_NAMES) + (1 if labeled else 0)
    for i, ln in enumerate(lines[1:]):
        parts = ln.split(",")
        if len(parts) != width:
            raise ValueError(f"bad row {i + 2} in {path}: {ln!r}")
        u[i] = int(parts[0])
        v[i] = int(parts[1])
        X[i] = [float(x) for x in parts[2 : 2 + len(FEATURE_NAMES)]]
        if labeled:
            y[i] = int(parts[-1])
    return u, v, X, y


def write_dataset_csv(path, dataset: LabeledDataset) -> None:
    write_feature_csv(path, dataset.u, dataset.v, dataset.X, dataset.y)


def write_split_metadata(path, spec: SplitSpec, seed: int, train, test) -> None:
    """Sidecar recording the split windows, seed, and row counts."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"train_window = {spec.train_window}\n")
        fh.write(f"test_window = {spec.test_window}\n")
        fh.write(f"seed = {seed}\n")
        fh.write(f"train_positives = {train.n_pos}\n")
        fh.write(f"train_negatives = {train.n_neg}\n")
        fh.write(f"test_positives = {test.n_pos}\n")
        fh.write(f"test_negatives = {test.n_neg}\n")
