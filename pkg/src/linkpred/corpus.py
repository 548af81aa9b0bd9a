"""Corpus ingestion: co-authorship event files and author metadata files.

Edge files are UTF-8 text, one event per line as ``u<TAB>v<TAB>year`` with
decimal integer fields; lines starting with ``#`` are comments. Events are
canonicalized to u < v at parse time; self-loops are dropped and counted.

Author metadata files are UTF-8 text in a tagged-record style: each record
starts with ``#index <id>`` and may carry ``#n`` (name), ``#a`` (affiliation),
``#t`` (research interests), ``#pc`` (paper count), ``#cn`` (citation count),
``#hi`` (h-index), ``#pi`` and ``#upi`` (productivity indices). Records are
separated by blank lines (a new ``#index`` also closes the previous record).
Unknown tags are ignored and counted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple

import numpy as np


class IngestError(Exception):
    """Raised for unreadable files or files that fail format sanity checks."""


class TemporalEdge(NamedTuple):
    u: int
    v: int
    year: int


@dataclass(slots=True)
class AuthorProfile:
    id: int
    name: str = ""
    affiliation: str = ""
    interests: str = ""
    pc: int = 0
    cn: int = 0
    hi: int = 0
    pi: float = 0.0
    upi: float = 0.0


@dataclass
class EdgeTable:
    """Column-oriented collection of temporal co-authorship events.

    Rows keep file order; duplicates (same pair, same or different year) are
    retained so that ingest stays lossless. Orientation is canonical: u < v.
    """

    u: np.ndarray
    v: np.ndarray
    year: np.ndarray

    def __len__(self) -> int:
        return len(self.u)

    def __iter__(self) -> Iterator[TemporalEdge]:
        for i in range(len(self.u)):
            yield TemporalEdge(int(self.u[i]), int(self.v[i]), int(self.year[i]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeTable):
            return NotImplemented
        return (
            np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.year, other.year)
        )

    @classmethod
    def from_records(cls, records) -> "EdgeTable":
        """Build a table from (u, v, year) triples, canonicalizing orientation."""
        if not records:
            return cls.empty()
        arr = np.asarray(records, dtype=np.int64).reshape(-1, 3)
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        if np.any(u == v):
            raise IngestError("self-loop in edge records")
        return cls(u=u, v=v, year=arr[:, 2].copy())

    @classmethod
    def empty(cls) -> "EdgeTable":
        z = np.empty(0, dtype=np.int64)
        return cls(u=z, v=z.copy(), year=z.copy())

    def endpoint_ids(self) -> np.ndarray:
        """Sorted unique author ids appearing in any event."""
        return np.unique(np.concatenate([self.u, self.v]))


@dataclass
class EdgeStats:
    edges: int = 0
    self_loops: int = 0
    malformed: int = 0
    comments: int = 0
    blank: int = 0


@dataclass
class MetadataStats:
    profiles: int = 0
    duplicate_ids: int = 0
    skipped_blocks: int = 0
    unknown_tags: int = 0
    field_warnings: int = 0


def parse_edge_file(
    path,
    *,
    year_range: tuple[int, int] = (1000, 2999),
    max_malformed_frac: float = 0.01,
) -> tuple[EdgeTable, EdgeStats]:
    """Parse a co-authorship event file.

    Returns all well-formed events in file order (canonical u < v) together
    with counters. Self-loops are dropped, not treated as malformed. A
    malformed-line fraction above ``max_malformed_frac`` aborts: that almost
    always means the file is in the wrong format.
    """
    stats = EdgeStats()
    us: list[int] = []
    vs: list[int] = []
    years: list[int] = []
    y_lo, y_hi = year_range
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read edge file {path}: {exc}") from exc
    with fh:
        for line in fh:
            line = line.strip()
            if not line:
                stats.blank += 1
                continue
            if line.startswith("#"):
                stats.comments += 1
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                stats.malformed += 1
                continue
            try:
                a = int(parts[0])
                b = int(parts[1])
                y = int(parts[2])
            except ValueError:
                stats.malformed += 1
                continue
            if a < 0 or b < 0 or not (y_lo <= y <= y_hi):
                stats.malformed += 1
                continue
            if a == b:
                stats.self_loops += 1
                continue
            if a > b:
                a, b = b, a
            us.append(a)
            vs.append(b)
            years.append(y)
            stats.edges += 1
    candidates = stats.edges + stats.self_loops + stats.malformed
    if candidates and stats.malformed / candidates > max_malformed_frac:
        raise IngestError(
            f"{stats.malformed} of {candidates} lines malformed in {path} "
            f"(> {max_malformed_frac:.0%}); wrong format?"
        )
    table = EdgeTable(
        u=np.array(us, dtype=np.int64),
        v=np.array(vs, dtype=np.int64),
        year=np.array(years, dtype=np.int64),
    )
    return table, stats


def write_edge_file(edges: EdgeTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(edges)):
            fh.write(f"{edges.u[i]}\t{edges.v[i]}\t{edges.year[i]}\n")


_INT_TAGS = {"pc": "pc", "cn": "cn", "hi": "hi"}
_FLOAT_TAGS = {"pi": "pi", "upi": "upi"}
_TEXT_TAGS = {"n": "name", "a": "affiliation", "t": "interests"}


def parse_author_metadata(path) -> tuple[dict[int, AuthorProfile], MetadataStats]:
    """Parse a tagged author metadata file into id -> AuthorProfile.

    Missing fields keep their empty defaults. A block whose ``#index`` is not
    a valid integer is skipped and counted; duplicate ids keep the last record
    seen, with a counted warning.
    """
    stats = MetadataStats()
    profiles: dict[int, AuthorProfile] = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read metadata file {path}: {exc}") from exc

    current: AuthorProfile | None = None
    skipping = False

    def close_block():
        nonlocal current
        if current is not None:
            if current.id in profiles:
                stats.duplicate_ids += 1
            else:
                stats.profiles += 1
            profiles[current.id] = current
            current = None

    with fh:
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                close_block()
                skipping = False
                continue
            if not line.startswith("#"):
                # stray text outside any tag: tolerated, counted once per line
                stats.field_warnings += 1
                continue
            body = line[1:]
            tag, _, value = body.partition(" ")
            value = value.strip()
            if tag == "index":
                close_block()
                try:
                    idx = int(value)
                    if idx < 0:
                        raise ValueError
                except ValueError:
                    stats.skipped_blocks += 1
                    skipping = True
                    continue
                skipping = False
                current = AuthorProfile(id=idx)
                continue
            if skipping or current is None:
                if not skipping:
                    stats.field_warnings += 1
                continue
            if tag in _TEXT_TAGS:
                setattr(current, _TEXT_TAGS[tag], value)
            elif tag in _INT_TAGS:
                try:
                    n = int(value)
                    if n < 0:
                        raise ValueError
                    setattr(current, _INT_TAGS[tag], n)
                except ValueError:
                    stats.field_warnings += 1
            elif tag in _FLOAT_TAGS:
                try:
                    x = float(value)
                    if not math.isfinite(x) or x < 0:
                        raise ValueError
                    setattr(current, _FLOAT_TAGS[tag], x)
                except ValueError:
                    stats.field_warnings += 1
            else:
                stats.unknown_tags += 1
        close_block()
    return profiles, stats


def write_author_metadata(profiles: dict[int, AuthorProfile], path) -> None:
    """Write profiles in the tagged format, one blank-line-separated block each."""
    with open(path, "w", encoding="utf-8") as fh:
        for pid in sorted(profiles):
            p = profiles[pid]
            fh.write(f"#index {p.id}\n")
            if p.name:
                fh.write(f"#n {p.name}\n")
            if p.affiliation:
                fh.write(f"#a {p.affiliation}\n")
            if p.interests:
                fh.write(f"#t {p.interests}\n")
            fh.write(f"#pc {p.pc}\n")
            fh.write(f"#cn {p.cn}\n")
            fh.write(f"#hi {p.hi}\n")
            fh.write(f"#pi {p.pi!r}\n")
            fh.write(f"#upi {p.upi!r}\n")
            fh.write("\n")


def resolve_profiles(
    edges: EdgeTable, profiles: dict[int, AuthorProfile]
) -> tuple[dict[int, AuthorProfile], int]:
    """Return a profile map covering every edge endpoint.

    Ids missing from ``profiles`` get an empty-default profile; the second
    return value counts how many were synthesized. The input map is not
    mutated.
    """
    out = dict(profiles)
    synthesized = 0
    for pid in edges.endpoint_ids():
        pid = int(pid)
        if pid not in out:
            out[pid] = AuthorProfile(id=pid)
            synthesized += 1
    return out, synthesized


def copy_profile(p: AuthorProfile) -> AuthorProfile:
    return replace(p)
