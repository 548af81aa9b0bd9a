"""Command-line interface.

Subcommands: ingest-check, lcc, features, split, train, evaluate, ablate,
run, synth, verify-oracles. Config-driven commands read the flat key=value
file given by --config; --seed and --out override the config's seed and
output_dir; --quiet silences progress output. All artifacts are written
under the output directory only.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from . import classifiers, corpus, datasets, evaluation, graph as graphmod
from . import oracles, pipeline, synth
from .config import ConfigError, RunConfig, load_run_config, thread_cap
from .datasets import DatasetError
from .features import FeatureExtractor, family_columns
from .graph import YearWindow
from .pipeline import PipelineError, file_sha256
from .seeding import child_seed


def _window(text: str) -> YearWindow:
    try:
        return YearWindow.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="flat key=value config file")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--out", default=None, help="override config output_dir")
    p.add_argument("--quiet", action="store_true", help="suppress progress output")


def _load_config(args) -> RunConfig:
    cfg = load_run_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = dataclasses.replace(cfg, output_dir=args.out)
    return cfg


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _require(path: str, producer: str) -> str:
    if not os.path.exists(path):
        raise DatasetError(f"{path} not found; run `linkpred {producer}` first")
    return path


def _read_dataset(path, seed: int) -> datasets.LabeledDataset:
    u, v, X, y = datasets.read_feature_csv(path)
    if y is None:
        raise DatasetError(f"{path} has no label column")
    return datasets.LabeledDataset(u=u, v=v, X=X, y=y, graph=None, seed=seed)


def cmd_ingest_check(args) -> int:
    cfg = _load_config(args)
    edges, stats = corpus.parse_edge_file(cfg.edge_file)
    _say(args, f"edges {stats.edges}")
    _say(args, f"self_loops {stats.self_loops}")
    _say(args, f"malformed {stats.malformed}")
    _say(args, f"comments {stats.comments}")
    if cfg.metadata_file:
        profiles, mstats = corpus.parse_author_metadata(cfg.metadata_file)
        covered = sum(1 for a in edges.endpoint_ids() if int(a) in profiles)
        _say(args, f"profiles {mstats.profiles}")
        _say(args, f"profiles_unknown_tags {mstats.unknown_tags}")
        _say(args, f"endpoints_with_profile {covered}/{len(edges.endpoint_ids())}")
    return 0


def cmd_lcc(args) -> int:
    cfg = _load_config(args)
    edges, _ = corpus.parse_edge_file(cfg.edge_file)
    g = datasets.train_lcc(edges, cfg.split_spec())
    os.makedirs(cfg.output_dir, exist_ok=True)
    out = os.path.join(cfg.output_dir, "train_lcc.snapshot")
    graphmod.write_snapshot(g, out)
    _say(args, f"nodes {g.n_nodes} edges {g.n_edges}")
    return 0


def cmd_features(args) -> int:
    cfg = _load_config(args)
    edges, profiles = pipeline.load_corpus(cfg)
    g = datasets.train_lcc(edges, cfg.split_spec())
    u, v = g.edge_pairs()
    X = FeatureExtractor(g, profiles).matrix(u, v)
    os.makedirs(cfg.output_dir, exist_ok=True)
    out = os.path.join(cfg.output_dir, "features.csv")
    datasets.write_feature_csv(out, u, v, X)
    _say(args, f"wrote {len(u)} feature rows to {out}")
    return 0


def cmd_split(args) -> int:
    cfg = _load_config(args)
    edges, profiles = pipeline.load_corpus(cfg)
    spec = cfg.split_spec()
    train = datasets.build_train_dataset(
        edges, profiles, spec, child_seed(cfg.seed, "split:train")
    )
    test = datasets.build_test_dataset(
        edges, profiles, spec, child_seed(cfg.seed, "split:test"), train.graph
    )
    os.makedirs(cfg.output_dir, exist_ok=True)
    datasets.write_dataset_csv(os.path.join(cfg.output_dir, "train.csv"), train)
    datasets.write_dataset_csv(os.path.join(cfg.output_dir, "test.csv"), test)
    datasets.write_split_metadata(
        os.path.join(cfg.output_dir, "split.meta"), spec, cfg.seed, train, test
    )
    _say(args, f"train rows {len(train)}, test rows {len(test)}")
    return 0


def cmd_train(args) -> int:
    cfg = _load_config(args)
    train = _read_dataset(
        _require(os.path.join(cfg.output_dir, "train.csv"), "split"), cfg.seed
    )
    columns = family_columns(cfg.feature_families)
    X = train.X[:, columns]
    mean, std = evaluation.column_stats(X)
    Z = (X - mean) / std
    pipeline._write_standardizer(
        os.path.join(cfg.output_dir, "standardizer.txt"), columns, mean, std
    )
    for kind in [k for k in classifiers.KINDS if k in cfg.classifiers]:
        fit_X = Z if kind in ("LR", "KNN") else X
        model = classifiers.train(
            kind, None, (fit_X, train.y), child_seed(cfg.seed, f"train:{kind}")
        )
        out = os.path.join(cfg.output_dir, f"model_{kind}.txt")
        classifiers.save_model(model, out)
        _say(args, f"trained {kind} -> {out}")
    return 0


def _load_split(cfg) -> tuple[datasets.LabeledDataset, datasets.LabeledDataset, dict]:
    train_path = _require(os.path.join(cfg.output_dir, "train.csv"), "split")
    test_path = _require(os.path.join(cfg.output_dir, "test.csv"), "split")
    train = _read_dataset(train_path, cfg.seed)
    test = _read_dataset(test_path, cfg.seed)
    meta = {
        "train_window": str(cfg.train_window),
        "test_window": str(cfg.test_window),
        "classifiers": ",".join(k for k in classifiers.KINDS if k in cfg.classifiers),
        "feature_families": ",".join(cfg.feature_families),
        "train_rows": str(len(train)),
        "test_rows": str(len(test)),
        "train_dataset_sha256": file_sha256(train_path),
        "test_dataset_sha256": file_sha256(test_path),
    }
    return train, test, meta


def cmd_evaluate(args) -> int:
    cfg = _load_config(args)
    train, test, meta = _load_split(cfg)
    report = evaluation.evaluate(
        cfg.classifiers, train, test, family_columns(cfg.feature_families), cfg.seed
    )
    evaluation.write_report_csv(os.path.join(cfg.output_dir, "report.csv"), report, meta)
    text = evaluation.format_report(report)
    with open(os.path.join(cfg.output_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(text)
    _say(args, text.rstrip("\n"))
    return 0


def cmd_ablate(args) -> int:
    cfg = _load_config(args)
    train, test, meta = _load_split(cfg)
    table = evaluation.ablation(
        cfg.classifiers, train, test, cfg.seed, families=cfg.feature_families
    )
    evaluation.write_ablation_csv(
        os.path.join(cfg.output_dir, "ablation.csv"), table,
        {"seed": str(cfg.seed), **meta},
    )
    text = evaluation.format_ablation(table)
    with open(os.path.join(cfg.output_dir, "ablation.txt"), "w", encoding="utf-8") as fh:
        fh.write(text)
    _say(args, text.rstrip("\n"))
    return 0


def cmd_run(args) -> int:
    cfg = _load_config(args)
    result = pipeline.run_pipeline(cfg, quiet=args.quiet)
    if not args.quiet:
        print(evaluation.format_report(result.report).rstrip("\n"))
        print(evaluation.format_ablation(result.ablation).rstrip("\n"))
    return 0


def cmd_synth(args) -> int:
    params = synth.SynthParams(
        communities=args.communities,
        nodes_per_community=args.nodes_per_community,
        p_in=args.p_in,
        p_out=args.p_out,
        years=args.years,
        interest_vocab_per_community=args.vocab,
        interest_alignment=args.interest_alignment,
    )
    edges, profiles = synth.generate_synthetic(params, args.seed)
    os.makedirs(args.out, exist_ok=True)
    edge_path = os.path.join(args.out, "edges.tsv")
    meta_path = os.path.join(args.out, "authors.txt")
    corpus.write_edge_file(edges, edge_path)
    corpus.write_author_metadata(profiles, meta_path)
    _say(args, f"wrote {len(edges)} events to {edge_path}")
    _say(args, f"wrote {len(profiles)} profiles to {meta_path}")
    return 0


def cmd_verify_oracles(args) -> int:
    results = oracles.run_all(args.size, args.seed)
    failed = False
    for r in results:
        line = (
            f"{'ok  ' if r.passed else 'FAIL'} {r.name:<18} "
            f"instances={r.instances} digest={r.digest}"
        )
        if not r.passed:
            failed = True
            print(line + f" : {r.detail}")
        elif not args.quiet:
            print(line)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkpred",
        description="Supervised link prediction on temporal co-authorship networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, blurb in (
        ("ingest-check", cmd_ingest_check, "parse the corpus and print counters"),
        ("lcc", cmd_lcc, "write the train-window largest connected component"),
        ("features", cmd_features, "write features for every train-LCC edge"),
        ("split", cmd_split, "build balanced train/test datasets"),
        ("train", cmd_train, "train classifiers on the split train dataset"),
        ("evaluate", cmd_evaluate, "evaluate classifiers on the split datasets"),
        ("ablate", cmd_ablate, "per-family single-feature ablation table"),
        ("run", cmd_run, "full pipeline: ingest through reports"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_config_flags(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--communities", type=int, default=4)
    p.add_argument("--nodes-per-community", type=int, default=50)
    p.add_argument("--p-in", type=float, default=0.15)
    p.add_argument("--p-out", type=float, default=0.005)
    p.add_argument("--years", type=_window, default=YearWindow(2000, 2005))
    p.add_argument("--vocab", type=int, default=25,
                   help="interest words per community")
    p.add_argument("--interest-alignment", choices=("community", "random"),
                   default="community")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify-oracles", help="run brute-force oracle checks")
    p.add_argument("--size", type=int, default=50, help="instances per check (<= 200)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_verify_oracles)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        thread_cap()
        return args.func(args)
    except (ConfigError, DatasetError, PipelineError, corpus.IngestError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
