"""Flat key = value run configuration.

One `key = value` per line; blank lines and lines starting with `#` are
ignored; year windows are written `1990..1993`. Example:

    edge_file = data/edges.tsv
    metadata_file = data/authors.txt
    train_window = 1990..1993
    test_window = 1994..1995
    seed = 42
    classifiers = LR,GNB,KNN,DT,RF
    feature_families = RI-sim,AFF-sim,I-sum,Node-sim
    output_dir = out
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from .classifiers import KINDS
from .datasets import SplitSpec
from .features import FAMILY_ORDER
from .graph import YearWindow


class ConfigError(Exception):
    """Raised for unreadable, malformed, or invalid configuration."""


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


@dataclass(frozen=True)
class RunConfig:
    edge_file: str
    train_window: YearWindow
    test_window: YearWindow
    seed: int
    output_dir: str
    metadata_file: str | None = None
    classifiers: tuple[str, ...] = KINDS
    feature_families: tuple[str, ...] = FAMILY_ORDER

    def __post_init__(self):
        SplitSpec(self.train_window, self.test_window)  # window ordering check
        if not self.classifiers:
            raise ConfigError("at least one classifier must be selected")
        for k in self.classifiers:
            if k not in KINDS:
                raise ConfigError(f"unknown classifier {k!r}")
        if not self.feature_families:
            raise ConfigError("at least one feature family must be selected")
        for f in self.feature_families:
            if f not in FAMILY_ORDER:
                raise ConfigError(f"unknown feature family {f!r}")

    def split_spec(self) -> SplitSpec:
        return SplitSpec(self.train_window, self.test_window)


_REQUIRED = ("edge_file", "train_window", "test_window", "seed", "output_dir")
_KNOWN = set(_REQUIRED) | {"metadata_file", "classifiers", "feature_families"}


def _csv_list(value: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in value.split(",") if x.strip())


def config_from_mapping(raw: dict[str, str], source: str = "<config>") -> RunConfig:
    unknown = set(raw) - _KNOWN
    if unknown:
        raise ConfigError(f"{source}: unknown keys {sorted(unknown)}")
    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise ConfigError(f"{source}: missing keys {missing}")
    try:
        train_window = YearWindow.parse(raw["train_window"])
        test_window = YearWindow.parse(raw["test_window"])
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    try:
        seed = int(raw["seed"])
    except ValueError as exc:
        raise ConfigError(f"{source}: seed must be an integer") from exc
    kwargs = {}
    if "metadata_file" in raw and raw["metadata_file"]:
        kwargs["metadata_file"] = raw["metadata_file"]
    if "classifiers" in raw:
        kwargs["classifiers"] = _csv_list(raw["classifiers"])
    if "feature_families" in raw:
        kwargs["feature_families"] = _csv_list(raw["feature_families"])
    try:
        return RunConfig(
            edge_file=raw["edge_file"],
            train_window=train_window,
            test_window=test_window,
            seed=seed,
            output_dir=raw["output_dir"],
            **kwargs,
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def load_run_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_mapping(parse_config_text(text, str(path)), str(path))


def thread_cap() -> int:
    """Worker-count ceiling from LINKPRED_THREADS; unset or empty means 1."""
    raw = os.environ.get("LINKPRED_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"LINKPRED_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError("LINKPRED_THREADS must be >= 1")
    return n
