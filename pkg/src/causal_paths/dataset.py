"""Cause-effect pair files: parsing, exclusion rules and preprocessing.

Pair files hold one observation per line with whitespace-separated numeric
columns. A metadata file lists, per pair, the 1-based column ranges of the
cause and of the effect plus a dataset weight::

    pair0001 1 1 2 2 1.0
    pair0052 1 4 5 8 1.0
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import DegenerateDataError, FormatError, MissingFileError, ParseError

# Resolution of the scale-canonicalizing grid applied before standardization.
SNAP_GRID = 2.0**-30


class Direction(str, enum.Enum):
    XtoY = "XtoY"
    YtoX = "YtoX"

    def flipped(self) -> "Direction":
        return Direction.YtoX if self is Direction.XtoY else Direction.XtoY


@dataclass(frozen=True)
class PairSample:
    """Two aligned numeric columns; ``x`` is the candidate cause."""

    id: str
    x: np.ndarray
    y: np.ndarray
    ground_truth: Direction | None = None
    weight: float = 1.0

    def __post_init__(self):
        x = np.array(self.x, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if x.ndim != 1 or y.ndim != 1:
            raise FormatError(f"pair {self.id}: columns must be one-dimensional")
        if x.shape != y.shape:
            raise FormatError(f"pair {self.id}: column lengths differ ({x.size} vs {y.size})")
        if x.size < 3:
            raise DegenerateDataError(f"pair {self.id}: need at least 3 observations, got {x.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ParseError(f"pair {self.id}: non-finite values")
        if not self.weight >= 0:
            raise ValueError(f"pair {self.id}: weight must be >= 0")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.ground_truth is not None:
            object.__setattr__(self, "ground_truth", Direction(self.ground_truth))

    @property
    def n(self) -> int:
        return self.x.size

    def swapped(self) -> "PairSample":
        gt = None if self.ground_truth is None else self.ground_truth.flipped()
        return PairSample(self.id, self.y, self.x, gt, self.weight)

    def take(self, rows) -> "PairSample":
        """Subset (or resample) rows, keeping the pairing intact."""
        rows = np.asarray(rows)
        return PairSample(self.id, self.x[rows], self.y[rows], self.ground_truth, self.weight)

    def degenerate_column(self) -> str | None:
        """Name of the first constant column, if any."""
        if np.ptp(self.x) == 0:
            return "x"
        if np.ptp(self.y) == 0:
            return "y"
        return None


@dataclass(frozen=True)
class PairMetadata:
    pair_id: str
    cause_first_col: int
    cause_last_col: int
    effect_first_col: int
    effect_last_col: int
    weight: float = 1.0

    def __post_init__(self):
        cols = (self.cause_first_col, self.cause_last_col, self.effect_first_col, self.effect_last_col)
        if min(cols) < 1:
            raise FormatError(f"{self.pair_id}: column indices must be >= 1")
        if self.cause_last_col < self.cause_first_col or self.effect_last_col < self.effect_first_col:
            raise FormatError(f"{self.pair_id}: column range ends before it starts")
        if not (self.cause_last_col < self.effect_first_col or self.effect_last_col < self.cause_first_col):
            raise FormatError(f"{self.pair_id}: cause and effect column ranges overlap")

    @property
    def multivariate(self) -> bool:
        return self.cause_last_col > self.cause_first_col or self.effect_last_col > self.effect_first_col

    def line(self) -> str:
        return (
            f"{self.pair_id} {self.cause_first_col} {self.cause_last_col} "
            f"{self.effect_first_col} {self.effect_last_col} {self.weight!r}"
        )


class Skip(NamedTuple):
    pair_id: str
    reason: str


@dataclass
class LoadResult:
    pairs: list[PairSample] = field(default_factory=list)
    skipped: list[Skip] = field(default_factory=list)


def parse_pair_file(text: str) -> np.ndarray:
    """Parse whitespace-separated numeric columns into an ``(n, k)`` array.

    Blank lines are ignored. Non-numeric or non-finite tokens raise
    :class:`ParseError` and ragged rows raise :class:`FormatError`, both
    carrying the 1-based line number.
    """
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        try:
            values = [float(t) for t in tokens]
        except ValueError:
            bad = next(t for t in tokens if not _is_float(t))
            raise ParseError(f"non-numeric token {bad!r}", line=lineno) from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite value (NaN/inf rows are rejected)", line=lineno)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise FormatError(f"ragged row: expected {width} columns, got {len(values)}", line=lineno)
        rows.append(values)
    if not rows:
        raise FormatError("no data rows")
    return np.array(rows, dtype=np.float64)


def _is_float(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def format_pair_file(matrix) -> str:
    """Serialize a matrix in pair-file format; round-trips exactly through :func:`parse_pair_file`."""
    matrix = np.asarray(matrix, dtype=np.float64)
    return "".join(" ".join(repr(float(v)) for v in row) + "\n" for row in matrix)


def parse_metadata(text: str) -> list[PairMetadata]:
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 6:
            raise FormatError(f"expected 6 fields (id c1 c2 e1 e2 weight), got {len(fields)}", line=lineno)
        pid, *cols, weight = fields
        try:
            idx = [int(c) for c in cols]
            w = float(weight)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        entries.append(PairMetadata(pid, *idx, weight=w))
    return entries


def load_dataset(
    pair_texts: Mapping[str, str],
    metadata: Iterable[PairMetadata],
    include: Iterable[str] | None = None,
) -> LoadResult:
    """Build :class:`PairSample` records from raw pair files and metadata.

    Every metadata entry ends up either in ``result.pairs`` or in
    ``result.skipped``. ``x`` is always the earlier of the two file columns and
    ``ground_truth`` says whether it is the cause.
    """
    wanted = None if include is None else set(include)
    result = LoadResult()
    for meta in metadata:
        if wanted is not None and meta.pair_id not in wanted:
            result.skipped.append(Skip(meta.pair_id, "not in include list"))
            continue
        if meta.pair_id not in pair_texts:
            raise MissingFileError(f"no data file for pair {meta.pair_id}")
        if meta.multivariate:
            result.skipped.append(Skip(meta.pair_id, "multivariate"))
            continue
        try:
            data = parse_pair_file(pair_texts[meta.pair_id])
        except ParseError as exc:
            raise type(exc)(f"pair {meta.pair_id}: {exc}") from None
        c, e = meta.cause_first_col, meta.effect_first_col
        if max(c, e) > data.shape[1]:
            result.skipped.append(Skip(meta.pair_id, f"column out of range (file has {data.shape[1]})"))
            continue
        if data.shape[0] < 3:
            result.skipped.append(Skip(meta.pair_id, "fewer than 3 observations"))
            continue
        first, second = sorted((c, e))
        truth = Direction.XtoY if c < e else Direction.YtoX
        result.pairs.append(
            PairSample(meta.pair_id, data[:, first - 1], data[:, second - 1], truth, meta.weight)
        )
    return result


def load_directory(data_dir, metadata_path, include_path=None, suffix=".txt") -> LoadResult:
    """Load ``<data_dir>/<pair_id><suffix>`` files listed in a metadata file."""
    data_dir = Path(data_dir)
    metadata = parse_metadata(Path(metadata_path).read_text())
    include = None
    if include_path is not None:
        include = [ln.split()[0] for ln in Path(include_path).read_text().splitlines() if ln.strip()]
    texts = {}
    for meta in metadata:
        if include is not None and meta.pair_id not in include:
            continue
        path = data_dir / f"{meta.pair_id}{suffix}"
        if not path.exists():
            raise MissingFileError(f"no data file for pair {meta.pair_id}: {path}")
        texts[meta.pair_id] = path.read_text()
    return load_dataset(texts, metadata, include)


def standardize(v) -> tuple[np.ndarray, bool]:
    """Zero mean, unit sample standard deviation (ddof=1).

    Returns ``(z, degenerate)``; a constant vector gives zeros and
    ``degenerate=True``.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size < 2:
        raise DegenerateDataError(f"standardize needs at least 2 values, got {v.size}")
    centered = v - v.mean()
    sd = centered.std(ddof=1)
    if sd == 0 or np.ptp(v) == 0:
        return np.zeros_like(v), True
    z = centered / sd
    # second pass removes the residual O(eps) drift in the mean
    z -= z.mean()
    return z, False


def snap_unit(v) -> np.ndarray:
    """Map ``v`` affinely onto [0, 1] and round to a 2**-30 grid.

    Positive rescaling of the raw column leaves the output bit-identical
    (barring values within rounding error of a grid midpoint), which makes
    every downstream score exactly scale invariant.
    """
    v = np.asarray(v, dtype=np.float64)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v)
    return np.round((v - lo) / (hi - lo) / SNAP_GRID) * SNAP_GRID


def prepare(v, column="x") -> np.ndarray:
    """Scale-canonicalize then standardize one column; refuse constant input."""
    z, degenerate = standardize(snap_unit(v))
    if degenerate:
        raise DegenerateDataError(f"column {column} is constant", column=column)
    return z


def read_challenge_pairs(pairs_csv: str, targets_csv: str) -> tuple[dict[str, str], list[PairMetadata], list[Skip]]:
    """Convert the challenge CSV layout (``SampleID,A,B`` plus ``SampleID,Target``).

    Each cell holds a whitespace-separated series. Targets follow the
    challenge convention: ``1`` means A causes B, ``-1`` B causes A and ``0``
    no causal ground truth (reported as skipped).
    """
    csv.field_size_limit(1 << 30)
    targets = {}
    for row in csv.DictReader(io.StringIO(targets_csv)):
        targets[row["SampleID"].strip()] = float(row["Target"])
    texts, metadata, skipped = {}, [], []
    for row in csv.DictReader(io.StringIO(pairs_csv)):
        pid = row["SampleID"].strip()
        target = targets.get(pid)
        if target is None or target == 0:
            skipped.append(Skip(pid, "no causal ground truth"))
            continue
        a = row["A"].split()
        b = row["B"].split()
        if len(a) != len(b):
            raise FormatError(f"pair {pid}: A and B lengths differ ({len(a)} vs {len(b)})")
        texts[pid] = "".join(f"{u} {w}\n" for u, w in zip(a, b))
        if target > 0:
            metadata.append(PairMetadata(pid, 1, 1, 2, 2))
        else:
            metadata.append(PairMetadata(pid, 2, 2, 1, 1))
    return texts, metadata, skipped


def write_pairs(pairs: Iterable[PairSample], out_dir, metadata_name="pairmeta.txt") -> Path:
    """Write pairs as ``<id>.txt`` files plus a metadata file; returns the metadata path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = []
    for p in pairs:
        (out_dir / f"{p.id}.txt").write_text(format_pair_file(np.column_stack([p.x, p.y])))
        if p.ground_truth is Direction.YtoX:
            meta = PairMetadata(p.id, 2, 2, 1, 1, p.weight)
        else:
            meta = PairMetadata(p.id, 1, 1, 2, 2, p.weight)
        lines.append(meta.line())
    meta_path = out_dir / metadata_name
    meta_path.write_text("\n".join(lines) + "\n")
    return meta_path
