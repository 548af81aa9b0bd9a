"""Config-driven pipeline: ingest, graph, split, evaluate, ablate, report.

Every artifact lands under the configured output directory:

  run_status.txt      "incomplete" while running, "complete" at the end
  train_lcc.snapshot  train-window LCC in the snapshot format
  train.csv test.csv  labeled feature datasets
  split.meta          split windows, seed, and row counts
  standardizer.txt    column means/stds used for LR and KNN
  model_<KIND>.txt    trained full-feature models
  report.txt/.csv     full-feature evaluation, human and machine forms
  ablation.txt/.csv   per-family accuracy table

A failing stage aborts with the stage name and cause; run_status.txt then
stays at "incomplete". Machine-readable reports carry no paths or
timestamps, so equal configs give byte-identical report files.
"""
from __future__ import annotations

import hashlib
import os
from contextlib import contextmanager
from dataclasses import dataclass

from . import classifiers, corpus, datasets, evaluation, graph as graphmod
from .config import RunConfig
from .evaluation import column_stats
from .features import FEATURE_NAMES, family_columns
from .seeding import child_seed


class PipelineError(Exception):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause


@contextmanager
def _stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class PipelineResult:
    config: RunConfig
    train: datasets.LabeledDataset
    test: datasets.LabeledDataset
    report: evaluation.EvalReport
    ablation: evaluation.AblationTable
    artifacts: dict


def _write_standardizer(path, columns, mean, std) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("columns " + ",".join(FEATURE_NAMES[c] for c in columns) + "\n")
        fh.write("mean " + " ".join("%.17g" % x for x in mean) + "\n")
        fh.write("std " + " ".join("%.17g" % x for x in std) + "\n")


def load_corpus(config: RunConfig):
    """Edge table plus profiles resolved for every endpoint."""
    edges, _ = corpus.parse_edge_file(config.edge_file)
    if config.metadata_file:
        profiles, _ = corpus.parse_author_metadata(config.metadata_file)
    else:
        profiles = {}
    profiles, _ = corpus.resolve_profiles(edges, profiles)
    return edges, profiles


def run_pipeline(config: RunConfig, quiet: bool = False) -> PipelineResult:
    out = config.output_dir
    os.makedirs(out, exist_ok=True)
    paths = {
        name: os.path.join(out, name)
        for name in (
            "run_status.txt",
            "train_lcc.snapshot",
            "train.csv",
            "test.csv",
            "split.meta",
            "standardizer.txt",
            "report.txt",
            "report.csv",
            "ablation.txt",
            "ablation.csv",
        )
    }

    def say(msg: str) -> None:
        if not quiet:
            print(msg)

    with open(paths["run_status.txt"], "w", encoding="utf-8") as fh:
        fh.write("incomplete\n")

    with _stage("ingest"):
        edges, profiles = load_corpus(config)
        say(f"[ingest] {len(edges)} events, {len(profiles)} author profiles")

    spec = config.split_spec()
    with _stage("graph"):
        g_tr = datasets.train_lcc(edges, spec)
        graphmod.write_snapshot(g_tr, paths["train_lcc.snapshot"])
        say(f"[graph] train LCC: {g_tr.n_nodes} nodes, {g_tr.n_edges} edges")

    with _stage("split"):
        train = datasets.build_train_dataset(
            edges, profiles, spec, child_seed(config.seed, "split:train"), graph=g_tr
        )
        test = datasets.build_test_dataset(
            edges, profiles, spec, child_seed(config.seed, "split:test"), g_tr
        )
        datasets.write_dataset_csv(paths["train.csv"], train)
        datasets.write_dataset_csv(paths["test.csv"], test)
        datasets.write_split_metadata(paths["split.meta"], spec, config.seed, train, test)
        say(f"[split] train rows {len(train)}, test rows {len(test)}")

    columns = family_columns(config.feature_families)
    with _stage("evaluate"):
        report = evaluation.evaluate(
            config.classifiers, train, test, columns, config.seed
        )

    with _stage("train"):
        mean, std = column_stats(train.X[:, columns])
        _write_standardizer(paths["standardizer.txt"], columns, mean, std)
        for kind, model in report.models.items():
            paths[f"model_{kind}.txt"] = os.path.join(out, f"model_{kind}.txt")
            classifiers.save_model(model, paths[f"model_{kind}.txt"])
        say(f"[train] saved models: {','.join(report.models)}")

    with _stage("ablate"):
        table = evaluation.ablation(
            config.classifiers, train, test, config.seed,
            families=config.feature_families,
        )

    with _stage("report"):
        meta = {
            "train_window": str(spec.train_window),
            "test_window": str(spec.test_window),
            "classifiers": ",".join(report.models),
            "feature_families": ",".join(config.feature_families),
            "train_rows": str(len(train)),
            "test_rows": str(len(test)),
            "train_dataset_sha256": file_sha256(paths["train.csv"]),
            "test_dataset_sha256": file_sha256(paths["test.csv"]),
        }
        evaluation.write_report_csv(paths["report.csv"], report, meta)
        with open(paths["report.txt"], "w", encoding="utf-8") as fh:
            fh.write(evaluation.format_report(report))
        abl_meta = {"seed": str(config.seed), **meta}
        evaluation.write_ablation_csv(paths["ablation.csv"], table, abl_meta)
        with open(paths["ablation.txt"], "w", encoding="utf-8") as fh:
            fh.write(evaluation.format_ablation(table))

    with open(paths["run_status.txt"], "w", encoding="utf-8") as fh:
        fh.write("complete\n")
    say(f"[done] artifacts in {out}")
    return PipelineResult(
        config=config, train=train, test=test, report=report,
        ablation=table, artifacts=paths,
    )
