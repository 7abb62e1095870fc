import numpy as np
import pytest

from causal_paths.dataset import Direction
from causal_paths.synth import MECHANISMS, NONLINEAR, SynthSpec, generate, generate_suite


def test_deterministic():
    a = generate(SynthSpec(500, "cubic", 0.2, "uniform", seed=1))
    b = generate(SynthSpec(500, "cubic", 0.2, "uniform", seed=1))
    assert a.x.tobytes() == b.x.tobytes() and a.y.tobytes() == b.y.tobytes()
    assert a.ground_truth is Direction.XtoY


@pytest.mark.parametrize("kwargs", [
    {"n": 5}, {"mechanism": "sine"}, {"noise_sd": 0.0}, {"cause_dist": "cauchy"},
])
def test_invalid_spec(kwargs):
    with pytest.raises(ValueError):
        SynthSpec(**kwargs)


def test_uniform_support():
    p = generate(SynthSpec(1000, "linear", 0.1, "uniform", seed=2))
    assert p.x.min() >= -2 and p.x.max() <= 2


def test_suite_balanced_and_swapped():
    suite = generate_suite(4, base_seed=3)
    assert [p.ground_truth for p in suite].count(Direction.XtoY) == 2
    again = generate_suite(4, base_seed=3)
    assert all(a.id == b.id and np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y) for a, b in zip(suite, again))
    for i, p in enumerate(suite):
        mech = MECHANISMS[NONLINEAR[i % 4]]
        cause, effect = (p.y, p.x) if i % 2 else (p.x, p.y)
        assert p.ground_truth is (Direction.YtoX if i % 2 else Direction.XtoY)
        assert np.std(effect - mech(cause)) == pytest.approx(0.2, rel=0.2)


def test_suite_seeds_differ():
    a, b = generate_suite(2, base_seed=0, mechanisms=("cubic",))
    assert not np.array_equal(a.x, b.y)


def test_noise_uncorrelated_with_cause():
    bad = 0
    for seed in range(200):
        spec = SynthSpec(500, "sigmoid", 0.2, "gaussian", seed=seed)
        p = generate(spec)
        eps = p.y - MECHANISMS["sigmoid"](p.x)
        bad += abs(np.corrcoef(p.x, eps)[0, 1]) >= 3 / np.sqrt(500)
    assert bad <= 2
