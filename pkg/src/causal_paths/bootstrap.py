"""Bootstrap certainty of a direction decision ("p-cause")."""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .criteria import ALL_METHODS, Method, analyze, score_analysis
from .dataset import Direction, PairSample
from .ensemble import vote
from .errors import ConfigurationError, DegenerateDataError

DEFAULT_ITERATIONS = 10
MAX_REDRAWS = 100


@dataclass(frozen=True)
class PCauseResult:
    p_cause: float
    full_sample_decision: Direction
    iterations: int
    seed: int
    agreements: int = 0
    failed_resamples: int = 0


def pair_key(pair_id: str) -> int:
    """Stable 64-bit integer derived from a pair id (independent of PYTHONHASHSEED)."""
    return int.from_bytes(hashlib.blake2b(pair_id.encode(), digest_size=8).digest(), "little")


def stream_rng(seed: int, pair_id: str, stream: int, index: int = 0) -> np.random.Generator:
    """Counter-based RNG depending only on (seed, pair id, stream tag, index).

    Entropy is always four words so distinct tags never alias.
    """
    words = [seed & (2**63 - 1), pair_key(pair_id), stream, index]
    return np.random.default_rng(np.random.SeedSequence(words))


BOOTSTRAP_STREAM = 0
ROW_CAP_STREAM = 1


def iteration_rng(seed: int, pair_id: str, iteration: int) -> np.random.Generator:
    return stream_rng(seed, pair_id, BOOTSTRAP_STREAM, iteration)


def ensemble_decision(pair: PairSample, methods: Sequence[Method], leader: Method, bandwidth_rule="rot") -> Direction:
    return vote(score_analysis(analyze(pair, bandwidth_rule), methods), leader).decision


def _resample_decision(pair, methods, leader, seed, iteration, bandwidth_rule):
    rng = iteration_rng(seed, pair.id, iteration)
    n = pair.n
    for _ in range(MAX_REDRAWS):
        rows = rng.integers(0, n, n)
        sample = pair.take(rows)
        if sample.degenerate_column() is None:
            return ensemble_decision(sample, methods, leader, bandwidth_rule)
    return None


def p_cause(
    pair: PairSample,
    methods: Sequence[Method] = ALL_METHODS,
    leader: Method = Method.M2,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 42,
    workers: int = 1,
    full_decision: Direction | None = None,
    bandwidth_rule="rot",
) -> PCauseResult:
    """Share of row-resampled ensemble decisions agreeing with the full-sample decision.

    Each iteration draws ``n`` rows with replacement from its own RNG stream
    (see :func:`iteration_rng`), so the result does not depend on ``workers``.
    A resample with a constant column is redrawn up to 100 times and then
    counted as a disagreement. ``full_decision`` may be passed when the
    caller has already scored the full sample.
    """
    if iterations < 1:
        raise ConfigurationError(f"iterations must be >= 1, got {iterations}")
    methods = [Method(m) for m in methods]
    if not methods:
        raise ConfigurationError("methods must be non-empty")
    leader = Method(leader)
    if leader not in methods:
        raise ConfigurationError(f"leader {leader.value} not in methods")
    column = pair.degenerate_column()
    if column is not None:
        raise DegenerateDataError(f"pair {pair.id}: column {column} is constant", column=column)

    full = full_decision if full_decision is not None else ensemble_decision(pair, methods, leader, bandwidth_rule)
    args = [(pair, methods, leader, seed, i, bandwidth_rule) for i in range(iterations)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            decisions = list(pool.map(lambda a: _resample_decision(*a), args))
    else:
        decisions = [_resample_decision(*a) for a in args]
    agree = sum(d is full for d in decisions)
    failed = sum(d is None for d in decisions)
    return PCauseResult(agree / iterations, full, iterations, seed, agree, failed)
