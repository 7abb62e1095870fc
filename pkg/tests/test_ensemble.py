import itertools

import pytest

from causal_paths.criteria import ALL_METHODS, DirectionScore, Method
from causal_paths.dataset import Direction
from causal_paths.ensemble import majority_vote, vote
from causal_paths.errors import ConfigurationError

XY, YX = Direction.XtoY, Direction.YtoX


def test_examples():
    r = majority_vote([(Method.M1, XY), (Method.M2, XY), (Method.M3, YX), (Method.M4, XY)], Method.M2)
    assert (r.decision, r.votes_xy, r.votes_yx, r.unanimous, r.leader_used) == (XY, 3, 1, False, False)
    r = majority_vote([(Method.M1, XY), (Method.M2, YX), (Method.M3, YX), (Method.M4, XY)], Method.M2)
    assert r.decision is YX and r.leader_used
    r = majority_vote([(Method.M2, YX), (Method.M3, YX), (Method.M4, YX)], Method.M2)
    assert r.decision is YX and r.unanimous


def test_single_voter():
    r = majority_vote([(Method.M4, YX)], Method.M4)
    assert r.decision is YX and r.unanimous and not r.leader_used


@pytest.mark.parametrize("bad", [
    ([], Method.M2),
    ([(Method.M1, XY), (Method.M1, YX)], Method.M1),
    ([(Method.M1, XY), (Method.M3, YX)], Method.M2),
])
def test_errors(bad):
    with pytest.raises(ConfigurationError):
        majority_vote(*bad)


def test_tied_voters_counted():
    scores = [
        DirectionScore(Method.M2, 1.0, 1.0, XY, True),
        DirectionScore(Method.M3, 0.2, 0.5, YX, False),
        DirectionScore(Method.M4, 0.1, 0.1, XY, True),
    ]
    r = vote(scores, Method.M3)
    assert r.n_tied == 2 and r.decision is XY and not r.leader_used


def test_exhaustive_patterns():
    cases = 0
    for pattern in itertools.product((XY, YX), repeat=4):
        for leader in ALL_METHODS:
            r = majority_vote(list(zip(ALL_METHODS, pattern)), leader)
            xy = pattern.count(XY)
            assert (r.votes_xy, r.votes_yx) == (xy, 4 - xy)
            assert r.unanimous == (xy in (0, 4))
            if xy == 2:
                assert r.leader_used and r.decision is pattern[ALL_METHODS.index(leader)]
            else:
                assert not r.leader_used and r.decision is (XY if xy > 2 else YX)
            cases += 1
    assert cases == 64


def test_order_independent():
    votes = list(zip(ALL_METHODS, (XY, YX, YX, XY)))
    for perm in itertools.permutations(votes):
        assert majority_vote(list(perm), Method.M4) == majority_vote(votes, Method.M4)
