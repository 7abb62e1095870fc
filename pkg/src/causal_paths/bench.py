"""Benchmark pipeline: per-pair decision records, summary tables and their serialization."""

from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .bootstrap import DEFAULT_ITERATIONS, ROW_CAP_STREAM, p_cause, stream_rng
from .criteria import ALL_METHODS, Method, analyze, score_analysis
from .dataset import Direction, PairSample, Skip
from .ensemble import vote
from .errors import ConfigurationError, DegenerateDataError
from .kernelreg import BANDWIDTH_RULES
from .metrics import (
    DecisionRecord,
    by_ensemble,
    by_method,
    by_vote,
    confusion,
    filter_by_correlation,
    filter_by_pcause,
    filter_by_unanimity,
    summarize,
    sweep_by_n_observations,
)

METRIC_COLUMNS = ["n_pairs", "tp", "fn", "fp", "tn", "accuracy", "sensitivity", "specificity", "balanced_accuracy", "kappa"]


@dataclass(frozen=True)
class RunConfig:
    data_dir: str | None = None
    metadata_path: str | None = None
    include_list: str | None = None
    methods: tuple[Method, ...] = ALL_METHODS
    leader: Method = Method.M2
    bootstrap_iterations: int = DEFAULT_ITERATIONS
    seed: int = 42
    pcause_threshold: float = 0.9
    min_abs_r: float = 0.1
    max_p: float = 0.05
    output_format: str = "csv"
    max_rows: int | None = None
    bandwidth: str = "rot"
    workers: int = 1

    def __post_init__(self):
        methods = tuple(Method(m) for m in self.methods)
        if not methods:
            raise ConfigurationError("at least one method is required")
        if len(set(methods)) != len(methods):
            raise ConfigurationError("duplicate methods")
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "leader", Method(self.leader))
        if self.leader not in methods:
            raise ConfigurationError(f"leader {self.leader.value} must be one of the methods")
        for name in ("pcause_threshold", "min_abs_r", "max_p"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
        if self.bootstrap_iterations < 0:
            raise ConfigurationError("bootstrap_iterations must be >= 0 (0 disables the bootstrap)")
        if self.output_format not in ("csv", "json"):
            raise ConfigurationError(f"output_format must be csv or json, got {self.output_format!r}")
        if self.max_rows is not None and self.max_rows < 3:
            raise ConfigurationError("max_rows must be >= 3")
        if self.bandwidth not in BANDWIDTH_RULES:
            raise ConfigurationError(f"bandwidth must be one of {sorted(BANDWIDTH_RULES)}")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")

    def to_json(self) -> dict:
        out = asdict(self)
        out["methods"] = [m.value for m in self.methods]
        out["leader"] = self.leader.value
        # execution detail, not part of the result
        out.pop("workers")
        return out


def cap_rows(pair: PairSample, max_rows: int | None, seed: int) -> PairSample:
    """Seeded subsample without replacement down to ``max_rows`` rows (order kept)."""
    if max_rows is None or pair.n <= max_rows:
        return pair
    rng = stream_rng(seed, pair.id, ROW_CAP_STREAM)
    rows = sorted(rng.choice(pair.n, size=max_rows, replace=False))
    return pair.take(rows)


def process_pair(pair: PairSample, config: RunConfig) -> DecisionRecord:
    """Score all four methods, vote the configured ensemble and bootstrap it."""
    pair = cap_rows(pair, config.max_rows, config.seed)
    analysis = analyze(pair, config.bandwidth)
    scores = tuple(score_analysis(analysis, ALL_METHODS))
    primary = vote([s for s in scores if s.method in config.methods], config.leader)
    pc = None
    if config.bootstrap_iterations > 0:
        pc = p_cause(
            pair,
            config.methods,
            config.leader,
            config.bootstrap_iterations,
            config.seed,
            full_decision=primary.decision,
            bandwidth_rule=config.bandwidth,
        ).p_cause
    return DecisionRecord(pair.id, pair.n, scores, primary, pc, analysis.pearson, pair.ground_truth)


def _process_or_skip(args):
    pair, config = args
    try:
        return process_pair(pair, config)
    except DegenerateDataError as exc:
        return Skip(pair.id, f"degenerate: {exc}")


@dataclass
class BenchResult:
    config: RunConfig
    records: list[DecisionRecord]
    skipped: list[Skip] = field(default_factory=list)
    summaries: dict = field(default_factory=dict)


def run_benchmark(pairs: Sequence[PairSample], config: RunConfig, skipped: Iterable[Skip] = ()) -> BenchResult:
    """Process every pair (optionally in worker processes); output ordered by pair id."""
    jobs = [(p, config) for p in pairs]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_process_or_skip, jobs))
    else:
        results = [_process_or_skip(j) for j in jobs]
    records = sorted((r for r in results if isinstance(r, DecisionRecord)), key=lambda r: r.pair_id)
    skips = list(skipped) + [r for r in results if isinstance(r, Skip)]
    skips.sort(key=lambda s: s.pair_id)
    result = BenchResult(config, records, skips)
    result.summaries = build_summaries(records, config)
    return result


def _combo_label(methods):
    return "+".join(m.value for m in methods)


def build_summaries(records: Sequence[DecisionRecord], config: RunConfig) -> dict:
    """Tables 1-4, the observation-count sweep and the p-cause scatter data."""
    labelled = [r for r in records if r.ground_truth is not None]
    primary = _combo_label(config.methods)

    def row(label, subset, selector):
        return {"label": label, **summarize(confusion(subset, selector))}

    methods = [row(m.value, labelled, by_method(m)) for m in ALL_METHODS]
    ensembles = [row(f"All (leader {m.value})", labelled, by_vote(ALL_METHODS, m)) for m in ALL_METHODS]
    for combo in itertools.combinations(ALL_METHODS, 3):
        ensembles.append(row(_combo_label(combo), labelled, by_vote(combo, combo[0])))
    thr = config.pcause_threshold
    filters = [
        row(f"{primary} (all)", labelled, by_ensemble),
        row(f"{primary} (p_cause>={thr:g})", filter_by_pcause(labelled, thr), by_ensemble),
        row(f"{primary} (p_cause=1)", filter_by_pcause(labelled, 1.0), by_ensemble),
        row(f"{primary} (unanimity)", filter_by_unanimity(labelled), by_ensemble),
    ]
    correlation = [
        row(f"{primary} (all)", labelled, by_ensemble),
        row(
            f"{primary} (|r|>{config.min_abs_r:g}, p<{config.max_p:g})",
            filter_by_correlation(labelled, config.min_abs_r, config.max_p),
            by_ensemble,
        ),
    ]
    sweep = [r._asdict() for r in sweep_by_n_observations(labelled, by_ensemble)]
    pcause_rows = [
        {
            "pair_id": r.pair_id,
            "n": r.n,
            "p_cause": r.p_cause,
            "correct": None if r.ground_truth is None else r.ensemble.decision is r.ground_truth,
            "unanimous": r.unanimous,
        }
        for r in records
    ]
    return {
        "methods": methods,
        "ensembles": ensembles,
        "filters": filters,
        "correlation": correlation,
        "sweep_n": sweep,
        "pcause": pcause_rows,
    }


def record_to_dict(rec: DecisionRecord) -> dict:
    out = {
        "pair_id": rec.pair_id,
        "n": rec.n,
        "ground_truth": None if rec.ground_truth is None else rec.ground_truth.value,
    }
    for s in rec.scores:
        out[f"{s.method.value}_score_xy"] = s.score_xy
        out[f"{s.method.value}_score_yx"] = s.score_yx
        out[f"{s.method.value}_decision"] = s.decision.value
        out[f"{s.method.value}_tie"] = s.tie
    e = rec.ensemble
    out.update(
        {
            "ensemble_decision": e.decision.value,
            "votes_xy": e.votes_xy,
            "votes_yx": e.votes_yx,
            "leader": e.leader.value,
            "leader_used": e.leader_used,
            "unanimous": e.unanimous,
            "n_tied": e.n_tied,
            "p_cause": rec.p_cause,
            "pearson_r": rec.pearson.r,
            "pearson_p": rec.pearson.p_value,
            "correct": None if rec.ground_truth is None else e.decision is rec.ground_truth,
        }
    )
    return out


def _cell(value, digits):
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{digits}f}" if digits is not None else repr(value)
    if isinstance(value, Direction):
        return value.value
    return str(value)


def to_csv(rows: Sequence[dict], digits: int | None = 4, columns: Sequence[str] | None = None) -> str:
    """RFC-4180 CSV; floats rounded to ``digits`` (``None`` keeps full precision)."""
    buf = io.StringIO()
    if columns is None:
        columns = list(rows[0]) if rows else []
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r.get(c), digits) for c in columns])
    return buf.getvalue()


TABLE_FILES = {
    "methods": "table1_methods.csv",
    "ensembles": "table2_ensembles.csv",
    "filters": "table3_filters.csv",
    "correlation": "table4_correlation.csv",
    "sweep_n": "sweep_n_observations.csv",
    "pcause": "pcause.csv",
}


def render_csv_files(result: BenchResult) -> dict[str, str]:
    """File name -> CSV text for every output table."""
    files = {"records.csv": to_csv([record_to_dict(r) for r in result.records], digits=None)}
    for key, name in TABLE_FILES.items():
        rows = result.summaries[key]
        columns = ["label", *METRIC_COLUMNS] if key in ("methods", "ensembles", "filters", "correlation") else None
        files[name] = to_csv(rows, digits=4, columns=columns)
    files["skipped.csv"] = to_csv([s._asdict() for s in result.skipped], columns=["pair_id", "reason"])
    return files


def render_json(result: BenchResult) -> str:
    summaries = dict(result.summaries)
    summaries["skipped"] = [s._asdict() for s in result.skipped]
    doc = {
        "config": result.config.to_json(),
        "records": [record_to_dict(r) for r in result.records],
        "summaries": summaries,
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_outputs(result: BenchResult, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if result.config.output_format == "json":
        path = out_dir / "bench.json"
        path.write_text(render_json(result))
        return [path]
    written = []
    for name, text in render_csv_files(result).items():
        path = out_dir / name
        path.write_text(text, encoding="utf-8", newline="")
        written.append(path)
    return written


def format_table(rows: Sequence[dict], columns: Sequence[str], title: str) -> str:
    """Fixed-width text rendering for the terminal."""
    cells = [[_cell(r.get(c), 4) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c) for i, c in enumerate(columns)]
    lines = [title, "  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)
