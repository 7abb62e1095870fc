import numpy as np
import pytest

from causal_paths import bootstrap
from causal_paths.bootstrap import iteration_rng, p_cause, pair_key, stream_rng
from causal_paths.criteria import Method
from causal_paths.dataset import Direction, PairSample
from causal_paths.errors import ConfigurationError, DegenerateDataError
from causal_paths.synth import SynthSpec, generate

M234 = (Method.M2, Method.M3, Method.M4)


@pytest.fixture(scope="module")
def strong():
    return generate(SynthSpec(200, "cubic", 0.2, "gaussian", seed=11))


def test_deterministic_and_quantized(strong):
    a = p_cause(strong, M234, Method.M2, iterations=7, seed=3)
    b = p_cause(strong, M234, Method.M2, iterations=7, seed=3)
    assert a == b
    assert (a.p_cause * 7) == pytest.approx(round(a.p_cause * 7), abs=1e-12)
    assert a.agreements == round(a.p_cause * 7)


def test_workers_do_not_change_result(strong):
    serial = p_cause(strong, iterations=6, seed=9)
    threaded = p_cause(strong, iterations=6, seed=9, workers=3)
    assert serial == threaded


def test_strong_pair_is_certain(strong):
    res = p_cause(strong, M234, Method.M2, iterations=10)
    assert res.full_sample_decision is Direction.XtoY
    assert res.p_cause >= 0.9


def test_independent_data_is_uncertain():
    values = []
    for seed in range(9):
        rng = np.random.default_rng(seed)
        p = PairSample(f"ind{seed}", rng.normal(size=80), rng.normal(size=80))
        values.append(p_cause(p, iterations=10, seed=seed).p_cause)
    assert np.median(values) < 1.0


def test_full_decision_reused(strong):
    res = p_cause(strong, iterations=3, full_decision=Direction.YtoX)
    assert res.full_sample_decision is Direction.YtoX


def test_errors(strong):
    with pytest.raises(ConfigurationError):
        p_cause(strong, iterations=0)
    with pytest.raises(ConfigurationError):
        p_cause(strong, methods=(Method.M3,), leader=Method.M2)
    with pytest.raises(DegenerateDataError):
        p_cause(PairSample("c", [1.0, 2.0, 3.0], [4.0, 4.0, 4.0]))


def test_degenerate_resamples_count_as_disagreement(monkeypatch):
    # a lone distinct x value is missed by about a third of resamples
    monkeypatch.setattr(bootstrap, "MAX_REDRAWS", 1)
    x = np.r_[np.zeros(30), 1.0]
    p = PairSample("rare", x, np.arange(31.0))
    res = p_cause(p, (Method.M2,), Method.M2, iterations=20)
    assert res.failed_resamples > 0
    assert res.agreements <= 20 - res.failed_resamples
    assert res.p_cause == res.agreements / 20


def test_streams_independent():
    draws = {
        (s, pid, tag, i): stream_rng(s, pid, tag, i).integers(0, 2**62)
        for s in (0, 1) for pid in ("a", "b") for tag in (0, 1) for i in (0, 1)
    }
    assert len(set(draws.values())) == len(draws)
    assert iteration_rng(5, "a", 2).random() == stream_rng(5, "a", 0, 2).random()
    assert pair_key("pair1") == pair_key("pair1") != pair_key("pair2")
