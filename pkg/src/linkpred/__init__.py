"""Supervised link prediction for temporal co-authorship networks.

Parse co-authorship corpora, build year-windowed graphs, extract pair
features (text similarity, research-index sums, neighborhood similarity),
construct balanced temporal train/test datasets, train from-scratch
classifiers, and evaluate with per-family ablations. See the README for the
file formats and the CLI.
"""

from ._kernels import BACKEND
from .classifiers import (
    KINDS,
    load_model,
    lr_gradient,
    lr_loss,
    predict_label,
    predict_score,
    save_model,
    train,
)
from .config import RunConfig, load_run_config
from .corpus import (
    AuthorProfile,
    EdgeTable,
    IngestError,
    parse_author_metadata,
    parse_edge_file,
    resolve_profiles,
)
from .datasets import (
    DatasetError,
    LabeledDataset,
    SplitSpec,
    Standardizer,
    apply_standardizer,
    build_test_dataset,
    build_train_dataset,
    fit_standardizer,
)
from .evaluation import (
    ConfusionCounts,
    EvalReport,
    ablation,
    basic_metrics,
    confusion,
    evaluate,
    roc_auc,
)
from .features import (
    FAMILY_ORDER,
    FEATURE_NAMES,
    FeatureExtractor,
    adamic_adar,
    batch_features,
    cosine_similarity,
    dice,
    index_sum,
    jaccard,
    pair_features,
    text_similarity,
    tokenize,
)
from .graph import (
    GraphView,
    YearWindow,
    build_graph,
    connected_components,
    largest_connected_component,
)
from .pipeline import PipelineError, run_pipeline
from .synth import SynthParams, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AuthorProfile", "BACKEND", "ConfusionCounts", "DatasetError", "EdgeTable",
    "EvalReport", "FAMILY_ORDER", "FEATURE_NAMES", "FeatureExtractor",
    "GraphView", "IngestError", "KINDS", "LabeledDataset", "PipelineError",
    "RunConfig", "SplitSpec", "Standardizer", "SynthParams", "YearWindow",
    "ablation", "adamic_adar", "apply_standardizer", "basic_metrics",
    "batch_features", "build_graph", "build_test_dataset",
    "build_train_dataset", "confusion", "connected_components",
    "cosine_similarity", "dice", "evaluate", "fit_standardizer",
    "generate_synthetic", "index_sum", "jaccard",
    "largest_connected_component", "load_model", "load_run_config",
    "lr_gradient", "lr_loss", "pair_features", "parse_author_metadata",
    "parse_edge_file", "predict_label", "predict_score", "resolve_profiles",
    "roc_auc", "run_pipeline", "save_model", "text_similarity", "tokenize",
    "train",
]
