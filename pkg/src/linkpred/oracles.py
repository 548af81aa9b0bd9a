"""Brute-force oracles and seeded self-checks.

Each production algorithm with a subtle implementation has a deliberately
naive counterpart here: set-based node similarities, transitive-closure
components, all-pairs AUC, and finite-difference gradients. run_all executes
every check on seeded random instances and reports pass/fail plus a digest
of the instances, so a fixed seed is fully reproducible.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .classifiers import lr_gradient, lr_loss
from .corpus import EdgeTable
from .evaluation import roc_auc
from .graph import GraphView, YearWindow, build_graph, connected_components
from .seeding import child_seed


def naive_node_similarity(graph: GraphView, u: int, v: int) -> tuple[float, float, float]:
    """(jaccard, dice, adamic_adar) from materialized neighbor sets."""
    nu = set(int(x) for x in graph.neighbors(u))
    nv = set(int(x) for x in graph.neighbors(v))
    inter = nu & nv
    union = nu | nv
    jac = len(inter) / len(union) if union else 0.0
    dice = 2.0 * len(inter) / (graph.degree(u) + graph.degree(v))
    aa = 0.0
    for z in sorted(inter):
        aa += 1.0 / math.log(graph.degree(z))
    return jac, dice, aa


def closure_components(graph: GraphView) -> list[frozenset]:
    """Components via boolean transitive closure; quadratic, small graphs only."""
    n = graph.n_nodes
    reach = np.eye(n, dtype=bool)
    for pos in range(n):
        run = graph.indices[graph.indptr[pos] : graph.indptr[pos + 1]]
        reach[pos, run] = True
    while True:
        nxt = (reach.astype(np.uint8) @ reach.astype(np.uint8)) > 0
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    seen = set()
    groups = []
    for pos in range(n):
        members = frozenset(int(x) for x in graph.node_ids[reach[pos]])
        if members not in seen:
            seen.add(members)
            groups.append(members)
    return groups


def pairwise_auc(labels, scores) -> float:
    """All-pairs concordance with half credit for ties; O(n^2)."""
    labels = np.asarray(labels)
    scores = np.asarray(scores, dtype=np.float64)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("AUC undefined for single-class labels")
    total = 0.0
    for p in pos:
        total += float(np.sum(p > neg)) + 0.5 * float(np.sum(p == neg))
    return total / (len(pos) * len(neg))


def finite_difference_gradient(weights, bias, dataset, l2, eps=1e-5) -> np.ndarray:
    """Central differences of lr_loss over (weights, bias)."""
    weights = np.asarray(weights, dtype=np.float64)
    out = np.empty(len(weights) + 1)
    for i in range(len(weights)):
        wp = weights.copy()
        wm = weights.copy()
        wp[i] += eps
        wm[i] -= eps
        out[i] = (lr_loss(wp, bias, dataset, l2) - lr_loss(wm, bias, dataset, l2)) / (
            2 * eps
        )
    out[-1] = (lr_loss(weights, bias + eps, dataset, l2)
               - lr_loss(weights, bias - eps, dataset, l2)) / (2 * eps)
    return out


def random_graph(n: int, p: float, rng) -> GraphView:
    """Seeded G(n, p); nodes with no edges do not appear in the view."""
    iu, iv = np.triu_indices(n, k=1)
    hit = rng.random(len(iu)) < p
    table = EdgeTable(
        u=iu[hit].astype(np.int64),
        v=iv[hit].astype(np.int64),
        year=np.full(int(hit.sum()), 2000, dtype=np.int64),
    )
    return build_graph(table, YearWindow(2000, 2000))


@dataclass
class OracleResult:
    name: str
    passed: bool
    instances: int
    digest: str
    detail: str = ""


def _digest(h) -> str:
    return h.hexdigest()[:12]


def check_similarities(count: int, seed: int, max_nodes: int = 50, p: float = 0.2,
                       tol: float = 1e-12) -> OracleResult:
    """Kernel similarities vs naive set recomputation on random graphs."""
    h = hashlib.blake2b(digest_size=8)
    rng = np.random.default_rng(seed)
    names = ("jaccard", "dice", "adamic_adar")
    for g_idx in range(count):
        n = int(rng.integers(4, max_nodes + 1))
        g = random_graph(n, p, rng)
        if g.n_nodes < 2:
            continue
        h.update(g.node_ids.tobytes())
        h.update(g.indices.tobytes())
        deg = g.degrees().astype(np.float64)
        with np.errstate(divide="ignore"):
            inv = 1.0 / np.log(deg)
        inv[deg < 2.0] = 0.0
        pu, pv = np.triu_indices(g.n_nodes, k=1)
        got = _kernels.node_similarity_batch(
            g.indptr, g.indices, inv, pu.astype(np.int64), pv.astype(np.int64)
        )
        for i in range(len(pu)):
            u = int(g.node_ids[pu[i]])
            v = int(g.node_ids[pv[i]])
            want = naive_node_similarity(g, u, v)
            for k in range(3):
                if abs(got[i, k] - want[k]) > tol:
                    return OracleResult(
                        "similarity-oracle", False, g_idx + 1, _digest(h),
                        f"{names[k]} mismatch on graph {g_idx} pair ({u},{v}): "
                        f"kernel {got[i, k]!r} vs naive {want[k]!r}",
                    )
            if got[i, 1] + tol < got[i, 0]:
                return OracleResult(
                    "similarity-oracle", False, g_idx + 1, _digest(h),
                    f"dice < jaccard on graph {g_idx} pair ({u},{v})",
                )
    return OracleResult("similarity-oracle", True, count, _digest(h))


def check_components(count: int, seed: int, max_nodes: int = 50, p: float = 0.08) -> OracleResult:
    """BFS components vs transitive-closure oracle."""
    h = hashlib.blake2b(digest_size=8)
    rng = np.random.default_rng(seed)
    for g_idx in range(count):
        n = int(rng.integers(2, max_nodes + 1))
        g = random_graph(n, p, rng)
        if g.n_nodes == 0:
            continue
        h.update(g.node_ids.tobytes())
        h.update(g.indices.tobytes())
        got = {frozenset(int(x) for x in comp) for comp in connected_components(g)}
        want = set(closure_components(g))
        if got != want:
            return OracleResult(
                "components-oracle", False, g_idx + 1, _digest(h),
                f"component partition mismatch on graph {g_idx}",
            )
    return OracleResult("components-oracle", True, count, _digest(h))


def check_auc(count: int, seed: int, length: int = 200, tol: float = 1e-9) -> OracleResult:
    """Rank-based AUC vs the all-pairs oracle, with and without ties."""
    h = hashlib.blake2b(digest_size=8)
    rng = np.random.default_rng(seed)
    for idx in range(count):
        labels = rng.integers(0, 2, size=length)
        if labels.min() == labels.max():
            labels[0] = 1 - labels[0]
        scores = rng.random(length)
        if idx % 2 == 1:
            scores = np.round(scores, 1)  # force heavy ties
        h.update(labels.tobytes())
        h.update(scores.tobytes())
        got = roc_auc(labels, scores)
        want = pairwise_auc(labels, scores)
        if abs(got - want) > tol:
            return OracleResult(
                "auc-oracle", False, idx + 1, _digest(h),
                f"auc mismatch on instance {idx}: {got!r} vs {want!r}",
            )
    return OracleResult("auc-oracle", True, count, _digest(h))


def check_gradient(count: int, seed: int, max_rows: int = 50, tol: float = 1e-5) -> OracleResult:
    """Analytic LR gradient vs central finite differences."""
    h = hashlib.blake2b(digest_size=8)
    rng = np.random.default_rng(seed)
    l2 = 1e-4
    for idx in range(count):
        n = int(rng.integers(4, max_rows + 1))
        d = 10
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 2, size=n)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        w = rng.normal(size=d)
        b = float(rng.normal())
        h.update(X.tobytes())
        h.update(y.tobytes())
        got = lr_gradient(w, b, (X, y), l2)
        want = finite_difference_gradient(w, b, (X, y), l2)
        rel = np.abs(got - want) / np.maximum(
            np.maximum(np.abs(got), np.abs(want)), 1e-6
        )
        if np.max(rel) > tol:
            j = int(np.argmax(rel))
            return OracleResult(
                "gradient-oracle", False, idx + 1, _digest(h),
                f"gradient component {j} off by rel {rel[j]:.3g} on instance {idx}",
            )
    return OracleResult("gradient-oracle", True, count, _digest(h))


def run_all(size: int, seed: int) -> list[OracleResult]:
    """Every oracle check at `size` instances each; size is capped at 200."""
    if not (1 <= size <= 200):
        raise ValueError("size must be in 1..200")
    return [
        check_similarities(size, child_seed(seed, "oracle:sim")),
        check_components(size, child_seed(seed, "oracle:comp")),
        check_auc(size, child_seed(seed, "oracle:auc")),
        check_gradient(size, child_seed(seed, "oracle:grad")),
    ]
