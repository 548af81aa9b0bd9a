"""Metrics, evaluation runs, and per-family ablations.

confusion / basic_metrics / roc_auc are pure metric functions. evaluate
trains a set of classifier kinds on one dataset, scores another, and
collects accuracy, precision, recall, F1, and AUC per kind; ablation repeats
that once per feature family. Metrics that are undefined for a confusion
table (zero denominator) are reported as the string "undefined" in outputs,
never silently as 0.

Scale-sensitive classifiers (LR, KNN) see standardized copies of the
selected columns, with statistics fitted on the train rows only; GNB, DT,
and RF consume raw features.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import classifiers
from .classifiers import KINDS
from .features import FAMILY_COLUMNS, FAMILY_ORDER, FEATURE_NAMES, family_columns
from .seeding import child_seed

_STANDARDIZED_KINDS = ("LR", "KNN")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def confusion(labels, predictions) -> ConfusionCounts:
    """Count tp/tn/fp/fn for 0/1 label and prediction vectors."""
    labels = np.asarray(labels, dtype=np.int64)
    predictions = np.asarray(predictions, dtype=np.int64)
    if labels.shape != predictions.shape or labels.ndim != 1:
        raise ValueError("labels and predictions must be equal-length vectors")
    if len(labels) == 0:
        raise ValueError("empty confusion")
    for name, arr in (("labels", labels), ("predictions", predictions)):
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError(f"{name} must be 0/1")
    return ConfusionCounts(
        tp=int(np.sum((labels == 1) & (predictions == 1))),
        tn=int(np.sum((labels == 0) & (predictions == 0))),
        fp=int(np.sum((labels == 0) & (predictions == 1))),
        fn=int(np.sum((labels == 1) & (predictions == 0))),
    )


def basic_metrics(c: ConfusionCounts) -> dict:
    """Accuracy, precision, recall, f1 as fractions; None where undefined."""
    if c.total == 0:
        raise ValueError("empty confusion")
    accuracy = (c.tp + c.tn) / c.total
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp > 0 else None
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn > 0 else None
    if precision is None or recall is None:
        f1 = None
    else:
        f1 = 2 * c.tp / (2 * c.tp + c.fp + c.fn)
    return {"accuracy": accuracy, "precision": precision, "recall": recall, "f1": f1}


def roc_auc(labels, scores) -> float:
    """Probability a random positive outscores a random negative.

    Ties get half credit, which equals trapezoidal integration of the ROC
    curve over the distinct thresholds.
    """
    labels = np.asarray(labels, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    if labels.shape != scores.shape or labels.ndim != 1:
        raise ValueError("labels and scores must be equal-length vectors")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos + n_neg != len(labels):
        raise ValueError("labels must be 0/1")
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined for single-class labels")
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    mean_rank = starts + (counts + 1) / 2.0
    ranks = mean_rank[inverse]
    pos_rank_sum = float(np.sum(ranks[labels == 1]))
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


@dataclass
class ClassifierMetrics:
    kind: str
    counts: ConfusionCounts
    accuracy: float
    precision: float | None
    recall: float | None
    f1: float | None
    auc: float


@dataclass
class EvalReport:
    rows: list[ClassifierMetrics]
    columns: tuple[int, ...]
    seed: int
    metadata: dict
    models: dict = None  # kind -> TrainedModel, not serialized

    def row(self, kind: str) -> ClassifierMetrics:
        for r in self.rows:
            if r.kind == kind:
                return r
        raise KeyError(kind)


def column_stats(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column mean and std (population); zero stds become 1."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    return mean, np.where(std == 0.0, 1.0, std)


def _ordered_kinds(kinds) -> tuple[str, ...]:
    wanted = list(kinds)
    for k in wanted:
        if k not in KINDS:
            raise ValueError(f"unknown classifier kind {k!r}")
    if len(set(wanted)) != len(wanted):
        raise ValueError("duplicate classifier kind")
    return tuple(k for k in KINDS if k in wanted)


def _validate_columns(columns, width: int) -> tuple[int, ...]:
    cols = tuple(sorted(set(int(c) for c in columns)))
    if not cols:
        raise ValueError("empty feature column subset")
    if cols[0] < 0 or cols[-1] >= width:
        raise ValueError(f"feature column out of range 0..{width - 1}")
    return cols


def evaluate(kinds, train, test, columns, seed: int, hyper=None) -> EvalReport:
    """Train each kind on train[:, columns], score test, compute metrics.

    Rows come back in canonical kind order. Per-kind training seeds are
    derived from `seed`, so the report is a pure function of its inputs.
    """
    if train.X.shape[1] != test.X.shape[1]:
        raise ValueError("train and test datasets disagree on column layout")
    cols = _validate_columns(columns, train.X.shape[1])
    kinds = _ordered_kinds(kinds)
    hyper = hyper or {}
    X_tr = train.X[:, cols].copy()
    X_te = test.X[:, cols].copy()
    mean, std = column_stats(X_tr)
    Z_tr = (X_tr - mean) / std
    Z_te = (X_te - mean) / std
    rows = []
    models = {}
    for kind in kinds:
        fit_X, eval_X = (Z_tr, Z_te) if kind in _STANDARDIZED_KINDS else (X_tr, X_te)
        kind_hyper = dict(hyper.get(kind) or {})
        if kind == "RF" and "max_features" not in kind_hyper:
            default = classifiers.DEFAULT_HYPERPARAMETERS["RF"]["max_features"]
            kind_hyper["max_features"] = min(default, len(cols))
        model = classifiers.train(
            kind, kind_hyper, (fit_X, train.y), child_seed(seed, f"train:{kind}")
        )
        models[kind] = model
        scores = classifiers.score_matrix(model, eval_X)
        preds = (scores >= 0.5).astype(np.int64)
        c = confusion(test.y, preds)
        m = basic_metrics(c)
        rows.append(
            ClassifierMetrics(
                kind=kind,
                counts=c,
                accuracy=m["accuracy"],
                precision=m["precision"],
                recall=m["recall"],
                f1=m["f1"],
                auc=roc_auc(test.y, scores),
            )
        )
    metadata = {
        "seed": str(seed),
        "columns": ",".join(FEATURE_NAMES[c] for c in cols),
    }
    return EvalReport(rows=rows, columns=cols, seed=seed, metadata=metadata,
                      models=models)


@dataclass
class AblationTable:
    kinds: tuple[str, ...]
    families: tuple[str, ...]
    accuracy: np.ndarray  # fractions, shape (kinds, families)
    reports: dict  # family -> EvalReport

    def cell(self, kind: str, family: str) -> float:
        return float(
            self.accuracy[self.kinds.index(kind), self.families.index(family)]
        )


def ablation(kinds, train, test, seed: int, families=FAMILY_ORDER, hyper=None) -> AblationTable:
    """One evaluate run per feature family; cells are accuracies."""
    fams = tuple(families)
    for f in fams:
        if f not in FAMILY_COLUMNS:
            raise ValueError(f"unknown feature family {f!r}")
    kinds = _ordered_kinds(kinds)
    acc = np.empty((len(kinds), len(fams)))
    reports = {}
    for j, fam in enumerate(fams):
        rep = evaluate(kinds, train, test, family_columns(fam), seed, hyper)
        reports[fam] = rep
        for i, kind in enumerate(kinds):
            acc[i, j] = rep.row(kind).accuracy
    return AblationTable(kinds=kinds, families=fams, accuracy=acc, reports=reports)


# ------------------------------------------------------------- formatting


def _cell(value, fmt: str) -> str:
    return "undefined" if value is None else fmt % value


def format_report(report: EvalReport) -> str:
    """Human-readable table: accuracy as integer percent, AUC at 3 decimals."""
    lines = [
        "%-10s %9s %9s %9s %9s %9s"
        % ("classifier", "accuracy%", "precision", "recall", "f1", "auc")
    ]
    for r in report.rows:
        lines.append(
            "%-10s %9s %9s %9s %9s %9s"
            % (
                r.kind,
                "%.0f" % (100.0 * r.accuracy),
                _cell(r.precision, "%.2f"),
                _cell(r.recall, "%.2f"),
                _cell(r.f1, "%.2f"),
                "%.3f" % r.auc,
            )
        )
    return "\n".join(lines) + "\n"


def format_ablation(table: AblationTable) -> str:
    header = ["classifier"] + list(table.families)
    lines = ["%-10s" % header[0] + "".join("%10s" % h for h in header[1:])]
    for i, kind in enumerate(table.kinds):
        cells = "".join(
            "%10s" % ("%.0f" % (100.0 * table.accuracy[i, j]))
            for j in range(len(table.families))
        )
        lines.append("%-10s" % kind + cells)
    return "\n".join(lines) + "\n"


def write_report_csv(path, report: EvalReport, metadata=None) -> None:
    """Machine-readable report: '#' metadata lines, then full-precision rows."""
    meta = dict(report.metadata)
    if metadata:
        meta.update(metadata)
    with open(path, "w", encoding="utf-8") as fh:
        for key in meta:
            fh.write(f"# {key} = {meta[key]}\n")
        fh.write("classifier,accuracy_percent,precision,recall,f1,auc,tp,tn,fp,fn\n")
        for r in report.rows:
            fh.write(
                ",".join(
                    [
                        r.kind,
                        "%.17g" % (100.0 * r.accuracy),
                        _cell(r.precision, "%.17g"),
                        _cell(r.recall, "%.17g"),
                        _cell(r.f1, "%.17g"),
                        "%.17g" % r.auc,
                        str(r.counts.tp),
                        str(r.counts.tn),
                        str(r.counts.fp),
                        str(r.counts.fn),
                    ]
                )
                + "\n"
            )


def write_ablation_csv(path, table: AblationTable, metadata=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key} = {value}\n")
        fh.write("classifier," + ",".join(table.families) + "\n")
        for i, kind in enumerate(table.kinds):
            cells = ",".join(
                "%.17g" % (100.0 * table.accuracy[i, j])
                for j in range(len(table.families))
            )
            fh.write(f"{kind},{cells}\n")
