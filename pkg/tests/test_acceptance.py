"""Acceptance checks, one test per criterion.

Each test emits one `criterion N: PASS/FAIL/SKIP` line (visible with -s or in
captured output). Checks use the stated tolerances; nothing here relaxes
them.
"""
import functools
import os
import time

import numpy as np
import pytest

from linkpred.classifiers import train as train_model
from linkpred.config import RunConfig
from linkpred.corpus import write_author_metadata, write_edge_file
from linkpred.datasets import (
    SplitSpec,
    build_test_dataset,
    build_train_dataset,
    ever_linked_keys,
    fit_standardizer,
    apply_standardizer,
)
from linkpred.evaluation import (
    ablation,
    basic_metrics,
    ConfusionCounts,
    evaluate,
    format_ablation,
    roc_auc,
)
from linkpred.features import (
    adamic_adar,
    cosine_similarity,
    tokenize,
)
from linkpred.graph import YearWindow, build_graph, pack_pairs
from linkpred.oracles import (
    check_auc,
    check_components,
    check_gradient,
    check_similarities,
)
from linkpred.pipeline import run_pipeline
from linkpred.seeding import child_seed
from linkpred.synth import SynthParams, generate_synthetic
from linkpred.corpus import EdgeTable


def criterion(n):
    """Print one pass/fail line per criterion, whatever the outcome."""

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                outcome = "SKIP" if type(exc).__name__ == "Skipped" else "FAIL"
                print(f"criterion {n}: {outcome} ({exc})")
                raise
            print(f"criterion {n}: PASS" + (f" ({detail})" if detail else ""))

        return wrapper

    return deco


@criterion(1)
def test_criterion_1_similarity_oracle():
    t0 = time.perf_counter()
    result = check_similarities(200, seed=0, max_nodes=50, p=0.2, tol=1e-12)
    assert result.passed, result.detail

    g = build_graph(
        EdgeTable.from_records([(1, 2, 2000), (2, 3, 2000)]), YearWindow(2000, 2000)
    )
    assert abs(adamic_adar(g, 1, 3) - 1.4426950408889634) <= 1e-12

    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"similarity oracle took {elapsed:.1f}s"
    return f"200 graphs in {elapsed:.1f}s"


@criterion(2)
def test_criterion_2_cosine():
    assert tokenize("Data Mining") == {"data": 1, "mining": 1}
    assert tokenize("data, data mining!") == {"data": 2, "mining": 1}
    a = {"data": 1, "mining": 1}
    b = {"data": 1, "mining": 1, "machine": 1, "learning": 1}
    assert abs(cosine_similarity(a, b) - np.sqrt(0.5)) <= 1e-9

    rng = np.random.default_rng(0)
    vocab = [f"w{i}" for i in range(20)]
    for _ in range(100):
        size = int(rng.integers(1, 9))
        picks = rng.choice(len(vocab), size=size, replace=False)
        vec = {vocab[i]: int(rng.integers(1, 6)) for i in picks}
        for k in (2, 3, 7):
            scaled = {w: k * c for w, c in vec.items()}
            assert abs(cosine_similarity(vec, scaled) - 1.0) <= 1e-12


@criterion(3)
def test_criterion_3_graph():
    result = check_components(100, seed=0, max_nodes=50)
    assert result.passed, result.detail


@criterion(4)
def test_criterion_4_metrics():
    m = basic_metrics(ConfusionCounts(tp=2, tn=2, fp=1, fn=1))
    assert m["accuracy"] == 4 / 6
    assert m["precision"] == 2 / 3
    assert m["recall"] == 2 / 3
    assert m["f1"] == 2 / 3

    assert roc_auc([1, 0, 1, 0], [0.8, 0.2, 0.3, 0.5]) == 0.75

    result = check_auc(100, seed=0, length=200, tol=1e-9)
    assert result.passed, result.detail


@criterion(5)
def test_criterion_5_lr():
    result = check_gradient(20, seed=0, max_rows=50, tol=1e-5)
    assert result.passed, result.detail

    rng = np.random.default_rng(1)
    X = np.vstack([
        rng.normal(-3.0, 0.5, size=(100, 2)),
        rng.normal(3.0, 0.5, size=(100, 2)),
    ])
    y = np.repeat([0, 1], 100)
    model = train_model("LR", None, (X, y), 0)
    assert np.all(np.diff(model.loss_history) <= 1e-12)
    preds = (model.score_matrix(X) >= 0.5).astype(int)
    acc = float(np.mean(preds == y))
    assert acc >= 0.99, f"train accuracy {acc}"
    return f"separable accuracy {acc:.3f}"


@criterion(6)
def test_criterion_6_datasets(small_corpus, small_split):
    edges, profiles = small_corpus
    train, test = small_split
    linked = ever_linked_keys(edges)
    from conftest import SMALL_SEED, SMALL_SPEC

    for ds in (train, test):
        assert ds.n_pos == ds.n_neg
        neg = ds.y == 0
        assert not np.any(np.isin(pack_pairs(ds.u[neg], ds.v[neg]), linked))
        assert np.all(np.isin(ds.u, train.graph.node_ids))
        assert np.all(np.isin(ds.v, train.graph.node_ids))

    again = build_train_dataset(
        edges, profiles, SMALL_SPEC, child_seed(SMALL_SEED, "split:train")
    )
    assert np.array_equal(train.u, again.u)
    assert np.array_equal(train.v, again.v)
    assert train.X.tobytes() == again.X.tobytes()
    assert np.array_equal(train.y, again.y)

    all_keys = pack_pairs(edges.u, edges.v)
    tr_end = SMALL_SPEC.train_window.end
    pos = test.y == 1
    for key in pack_pairs(test.u[pos], test.v[pos]):
        assert edges.year[all_keys == key].min() > tr_end


CRIT7_SPLIT = SplitSpec(YearWindow(2000, 2003), YearWindow(2004, 2005))


def _crit7_datasets(alignment: str, seed: int):
    params = SynthParams(
        communities=4,
        nodes_per_community=50,
        p_in=0.15,
        p_out=0.005,
        years=YearWindow(2000, 2005),
        interest_vocab_per_community=25,
        interest_alignment=alignment,
    )
    edges, profiles = generate_synthetic(params, seed)
    train = build_train_dataset(
        edges, profiles, CRIT7_SPLIT, child_seed(seed, "split:train")
    )
    test = build_test_dataset(
        edges, profiles, CRIT7_SPLIT, child_seed(seed, "split:test"), train.graph
    )
    return train, test


@criterion(7)
def test_criterion_7_end_to_end():
    t0 = time.perf_counter()
    seed = 0
    kinds = ("LR", "GNB", "KNN", "DT", "RF")

    train, test = _crit7_datasets("community", seed)
    full = evaluate(kinds, train, test, range(10), seed)
    for kind in ("LR", "RF"):
        auc = full.row(kind).auc
        assert auc >= 0.80, f"{kind} full-feature AUC {auc:.3f} < 0.80"

    node_only = evaluate(kinds, train, test, (7, 8, 9), seed)
    for kind in ("LR", "RF"):
        gap = 100.0 * abs(full.row(kind).accuracy - node_only.row(kind).accuracy)
        assert gap <= 5.0, f"{kind} Node-sim gap {gap:.1f} points"

    train_r, test_r = _crit7_datasets("random", seed)
    table = ablation(kinds, train_r, test_r, seed,
                     families=("RI-sim", "AFF-sim", "I-sum"))
    for kind in kinds:
        for fam in table.families:
            pct = 100.0 * table.cell(kind, fam)
            assert abs(pct - 50.0) <= 3.0, (
                f"{kind}/{fam} at {pct:.1f}%, outside 50 +/- 3"
            )

    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0, f"criterion 7 took {elapsed:.0f}s"
    return (
        f"LR auc {full.row('LR').auc:.3f}, RF auc {full.row('RF').auc:.3f}, "
        f"{elapsed:.0f}s"
    )


def _real_corpus_report(tmp_path, edge_env, meta_env, train_w, test_w):
    edge_file = os.environ.get(edge_env, "")
    if not edge_file:
        pytest.skip(f"dataset-gated: set {edge_env} to run")
    cfg = RunConfig(
        edge_file=edge_file,
        metadata_file=os.environ.get(meta_env) or None,
        train_window=YearWindow.parse(train_w),
        test_window=YearWindow.parse(test_w),
        seed=0,
        output_dir=str(tmp_path),
    )
    return run_pipeline(cfg, quiet=True)


@criterion("8a")
def test_criterion_8a_arnetminer(tmp_path):
    result = _real_corpus_report(
        tmp_path, "LINKPRED_ARNETMINER_EDGES", "LINKPRED_ARNETMINER_META",
        "1990..1993", "1994..1995",
    )
    lr = result.report.row("LR")
    acc = 100.0 * lr.accuracy
    ok = abs(acc - 84.0) <= 5.0 and abs(lr.auc - 0.838) <= 0.05
    if not ok:
        print(format_ablation(result.ablation))
    assert ok, f"LR accuracy {acc:.1f}, AUC {lr.auc:.3f}"
    return f"LR accuracy {acc:.1f}, AUC {lr.auc:.3f}"


@criterion("8b")
def test_criterion_8b_dblp(tmp_path):
    result = _real_corpus_report(
        tmp_path, "LINKPRED_DBLP_EDGES", "LINKPRED_DBLP_META",
        "1992..2010", "2011..2015",
    )
    lr = result.report.row("LR")
    acc = 100.0 * lr.accuracy
    if acc < 94.0:
        print(format_ablation(result.ablation))
    assert acc >= 94.0, f"LR accuracy {acc:.1f}"
    return f"LR accuracy {acc:.1f}"


@criterion(9)
def test_criterion_9_determinism(tmp_path):
    params = SynthParams(
        communities=2,
        nodes_per_community=14,
        p_in=0.3,
        p_out=0.02,
        years=YearWindow(2000, 2003),
        interest_vocab_per_community=8,
    )
    edges, profiles = generate_synthetic(params, 3)
    edge_file = tmp_path / "edges.tsv"
    meta_file = tmp_path / "authors.txt"
    write_edge_file(edges, edge_file)
    write_author_metadata(profiles, meta_file)
    cfg = RunConfig(
        edge_file=str(edge_file),
        metadata_file=str(meta_file),
        train_window=YearWindow(2000, 2001),
        test_window=YearWindow(2002, 2003),
        seed=3,
        output_dir=str(tmp_path / "out"),
    )
    run_pipeline(cfg, quiet=True)
    first = {
        name: (tmp_path / "out" / name).read_bytes()
        for name in ("report.csv", "ablation.csv")
    }
    run_pipeline(cfg, quiet=True)
    for name, payload in first.items():
        assert (tmp_path / "out" / name).read_bytes() == payload, name
