"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 degenerate data, 3 empty result set.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bench import (
    METRIC_COLUMNS,
    RunConfig,
    cap_rows,
    format_table,
    record_to_dict,
    run_benchmark,
    write_outputs,
)
from .bootstrap import p_cause
from .criteria import ALL_METHODS, Method, analyze, score_analysis
from .dataset import PairSample, load_dataset, load_directory, parse_pair_file, read_challenge_pairs, write_pairs
from .ensemble import vote
from .errors import CausalPathError, ConfigurationError, DegenerateDataError
from .metrics import DecisionRecord
from .synth import MECHANISMS, NONLINEAR, generate_suite

log = logging.getLogger("causal_paths")

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_EMPTY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _methods(text):
    try:
        return tuple(Method.parse(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _method(text):
    try:
        return Method.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_decision_flags(p):
    p.add_argument("--methods", type=_methods, default=ALL_METHODS, help="comma-separated subset of M1,M2,M3,M4")
    p.add_argument("--leader", type=_method, default=Method.M2, help="method breaking 2-2 ties (default M2)")
    p.add_argument("--boot-iters", type=int, default=10, help="bootstrap iterations for p-cause; 0 disables")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-rows", type=int, default=None, help="seeded subsample of larger pairs")
    p.add_argument("--bandwidth", choices=["rot", "lscv"], default="rot",
                   help="kernel bandwidth rule: Silverman rule of thumb or least-squares CV")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="causal-paths", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decide", help="infer the causal direction of one pair file")
    p.add_argument("pair_file")
    p.add_argument("--cols", default="1,2", help="1-based columns used as x,y (default 1,2)")
    _add_decision_flags(p)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("bench", help="benchmark every pair of a dataset against its ground truth")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--meta", required=True, help="metadata file: id c1 c2 e1 e2 weight")
    p.add_argument("--include", default=None, help="file listing pair ids to keep, one per line")
    _add_decision_flags(p)
    p.add_argument("--pcause-min", type=float, default=0.9)
    p.add_argument("--min-abs-r", type=float, default=0.1)
    p.add_argument("--max-p", type=float, default=0.05)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help="output directory; tables are printed when omitted")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("synth", help="write a synthetic additive-noise suite in pair-file format")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--mechanisms", default=",".join(NONLINEAR), help=f"comma-separated, from {sorted(MECHANISMS)}")
    p.add_argument("--noise-sd", type=float, default=0.2)
    p.add_argument("--cause-dist", choices=["uniform", "gaussian"], default="gaussian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("convert", help="convert challenge-format CSVs (SampleID,A,B + targets) to pair files")
    p.add_argument("--pairs", required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--out", required=True)
    return parser


def cmd_decide(args) -> int:
    try:
        cx, cy = (int(c) for c in args.cols.split(","))
    except ValueError:
        raise ConfigurationError(f"--cols must look like 1,2, got {args.cols!r}") from None
    config = RunConfig(methods=args.methods, leader=args.leader, bootstrap_iterations=args.boot_iters,
                       seed=args.seed, bandwidth=args.bandwidth)
    data = parse_pair_file(Path(args.pair_file).read_text())
    if max(cx, cy) > data.shape[1] or min(cx, cy) < 1:
        raise ConfigurationError(f"file has {data.shape[1]} columns; --cols {args.cols} out of range")
    pair = PairSample(Path(args.pair_file).stem, data[:, cx - 1], data[:, cy - 1])
    column = pair.degenerate_column()
    if column is not None:
        idx = cx if column == "x" else cy
        raise DegenerateDataError(f"column {idx} ({column}) is constant", column=column)
    if args.max_rows is not None:
        pair = cap_rows(pair, args.max_rows, args.seed)
    analysis = analyze(pair, config.bandwidth)
    scores = tuple(score_analysis(analysis, config.methods))
    ens = vote(scores, config.leader)
    pc = None
    if config.bootstrap_iterations > 0:
        pc = p_cause(pair, config.methods, config.leader, config.bootstrap_iterations, config.seed,
                     full_decision=ens.decision, bandwidth_rule=config.bandwidth).p_cause
    record = DecisionRecord(pair.id, pair.n, scores, ens, pc, analysis.pearson, None)
    if args.format == "json":
        print(json.dumps(record_to_dict(record), indent=2))
        return EXIT_OK
    rows = [
        {"method": s.method.label, "score_xy": s.score_xy, "score_yx": s.score_yx,
         "decision": s.decision.value, "tie": s.tie}
        for s in scores
    ]
    rows.append({"method": f"ensemble (leader {ens.leader.value})", "decision": ens.decision.value,
                 "votes_xy": ens.votes_xy, "votes_yx": ens.votes_yx, "leader_used": ens.leader_used,
                 "unanimous": ens.unanimous})
    cols = ["method", "score_xy", "score_yx", "decision", "tie", "votes_xy", "votes_yx", "leader_used", "unanimous"]
    print(format_table(rows, cols, f"pair {pair.id}  n={pair.n}  pearson r={analysis.pearson.r:.4f}"))
    print(f"p_cause: {'NA' if pc is None else f'{pc:.4f}'}")
    return EXIT_OK


def cmd_bench(args) -> int:
    config = RunConfig(
        data_dir=args.data_dir,
        metadata_path=args.meta,
        include_list=args.include,
        methods=args.methods,
        leader=args.leader,
        bootstrap_iterations=args.boot_iters,
        seed=args.seed,
        pcause_threshold=args.pcause_min,
        min_abs_r=args.min_abs_r,
        max_p=args.max_p,
        output_format=args.format,
        max_rows=args.max_rows,
        bandwidth=args.bandwidth,
        workers=args.workers,
    )
    loaded = load_directory(config.data_dir, config.metadata_path, config.include_list)
    for skip in loaded.skipped:
        log.info("skipped %s: %s", skip.pair_id, skip.reason)
    if not loaded.pairs:
        print("error: no pairs left after exclusion rules", file=sys.stderr)
        return EXIT_EMPTY
    result = run_benchmark(loaded.pairs, config, loaded.skipped)
    if not result.records:
        print("error: every pair was excluded as degenerate", file=sys.stderr)
        return EXIT_EMPTY
    if args.out:
        for path in write_outputs(result, args.out):
            log.info("wrote %s", path)
        print(f"{len(result.records)} pairs benchmarked, {len(result.skipped)} skipped; outputs in {args.out}")
        return EXIT_OK
    cols = ["label", *METRIC_COLUMNS]
    titles = {
        "methods": "Per-method accuracy",
        "ensembles": "Majority-vote combinations",
        "filters": "Primary ensemble on certainty-filtered subsets",
        "correlation": "Primary ensemble after the correlation filter",
    }
    for key, title in titles.items():
        print(format_table(result.summaries[key], cols, title))
        print()
    print(f"{len(result.records)} pairs benchmarked, {len(result.skipped)} skipped")
    return EXIT_OK


def cmd_synth(args) -> int:
    mechanisms = tuple(m.strip() for m in args.mechanisms.split(",") if m.strip())
    unknown = [m for m in mechanisms if m not in MECHANISMS]
    if unknown or not mechanisms:
        raise ConfigurationError(f"unknown mechanisms {unknown}; choose from {sorted(MECHANISMS)}")
    pairs = generate_suite(args.count, args.seed, mechanisms, args.n, args.noise_sd, args.cause_dist)
    meta = write_pairs(pairs, args.out)
    print(f"wrote {len(pairs)} pairs and {meta}")
    return EXIT_OK


def cmd_convert(args) -> int:
    texts, metadata, skipped = read_challenge_pairs(Path(args.pairs).read_text(), Path(args.targets).read_text())
    loaded = load_dataset(texts, metadata)
    meta = write_pairs(loaded.pairs, args.out)
    for skip in skipped + loaded.skipped:
        print(f"skipped {skip.pair_id}: {skip.reason}", file=sys.stderr)
    print(f"wrote {len(loaded.pairs)} pairs and {meta}")
    return EXIT_OK


COMMANDS = {"decide": cmd_decide, "bench": cmd_bench, "synth": cmd_synth, "convert": cmd_convert}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except DegenerateDataError as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigurationError, CausalPathError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
