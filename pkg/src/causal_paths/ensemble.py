"""Majority voting over method decisions, with a leader breaking exact ties."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .criteria import DirectionScore, Method
from .dataset import Direction
from .errors import ConfigurationError


@dataclass(frozen=True)
class EnsembleResult:
    decision: Direction
    unanimous: bool
    votes_xy: int
    votes_yx: int
    leader: Method
    leader_used: bool
    n_tied: int = 0


def majority_vote(
    decisions: Sequence[tuple[Method, Direction]],
    leader: Method,
    tied: Iterable[Method] = (),
) -> EnsembleResult:
    """Combine ``(method, direction)`` votes.

    The side with strictly more votes wins; on an even split the leader's
    vote decides. ``tied`` names voters whose own scores were tied; they
    still vote and are only counted in ``n_tied``.
    """
    if not decisions:
        raise ConfigurationError("majority_vote needs at least one decision")
    votes = {}
    for method, direction in decisions:
        method = Method(method)
        if method in votes:
            raise ConfigurationError(f"duplicate vote from {method.value}")
        votes[method] = Direction(direction)
    leader = Method(leader)
    if leader not in votes:
        raise ConfigurationError(f"leader {leader.value} is not among the voters {[m.value for m in votes]}")
    xy = sum(d is Direction.XtoY for d in votes.values())
    yx = len(votes) - xy
    if xy == yx:
        decision, used = votes[leader], True
    else:
        decision, used = (Direction.XtoY if xy > yx else Direction.YtoX), False
    n_tied = len(set(tied) & set(votes))
    return EnsembleResult(decision, xy == 0 or yx == 0, xy, yx, leader, used, n_tied)


def vote(scores: Sequence[DirectionScore], leader: Method) -> EnsembleResult:
    """:func:`majority_vote` over scored methods, recording tied voters."""
    return majority_vote(
        [(s.method, s.decision) for s in scores],
        leader,
        tied=[s.method for s in scores if s.tie],
    )
