"""Synthetic additive-noise pairs ``y = f(x) + e`` with known direction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import Direction, PairSample

MECHANISMS = {
    "linear": lambda x: x,
    "quadratic": lambda x: x**2,
    "cubic": lambda x: x**3,
    "sigmoid": lambda x: 1.0 / (1.0 + np.exp(-2.0 * x)),
    "piecewise": lambda x: np.where(x < 0, 0.5 * x, 2.5 * x),
}
NONLINEAR = ("cubic", "sigmoid", "quadratic", "piecewise")
CAUSE_DISTS = ("uniform", "gaussian")


@dataclass(frozen=True)
class SynthSpec:
    n: int = 500
    mechanism: str = "cubic"
    noise_sd: float = 0.2
    cause_dist: str = "gaussian"
    seed: int = 0

    def __post_init__(self):
        if self.n < 10:
            raise ValueError(f"n must be >= 10, got {self.n}")
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.mechanism!r}; choose from {sorted(MECHANISMS)}")
        if not self.noise_sd > 0:
            raise ValueError("noise_sd must be > 0")
        if self.cause_dist not in CAUSE_DISTS:
            raise ValueError(f"unknown cause_dist {self.cause_dist!r}; choose from {CAUSE_DISTS}")


def sample_cause(rng, dist, n):
    if dist == "uniform":
        return rng.uniform(-2.0, 2.0, n)
    return rng.standard_normal(n)


def generate(spec: SynthSpec, pair_id: str | None = None) -> PairSample:
    """Draw one pair; x is the cause and ``ground_truth`` is XtoY."""
    rng = np.random.default_rng(spec.seed)
    x = sample_cause(rng, spec.cause_dist, spec.n)
    noise = rng.normal(0.0, spec.noise_sd, spec.n)
    y = MECHANISMS[spec.mechanism](x) + noise
    pid = pair_id or f"synth-{spec.mechanism}-{spec.seed}"
    return PairSample(pid, x, y, Direction.XtoY)


def generate_suite(
    count: int,
    base_seed: int = 0,
    mechanisms: Sequence[str] = NONLINEAR,
    n: int = 500,
    noise_sd: float = 0.2,
    cause_dist: str = "gaussian",
) -> list[PairSample]:
    """``count`` pairs cycling through ``mechanisms``.

    Odd-indexed pairs have their columns swapped (ground truth YtoX) so both
    classes are present. Pair ``i`` is seeded from ``(base_seed, i)``.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    pairs = []
    for i in range(count):
        mech = mechanisms[i % len(mechanisms)]
        seed = int(np.random.SeedSequence([base_seed, i]).generate_state(1)[0])
        pair = generate(SynthSpec(n, mech, noise_sd, cause_dist, seed), pair_id=f"synth{i:04d}")
        pairs.append(pair.swapped() if i % 2 else pair)
    return pairs
