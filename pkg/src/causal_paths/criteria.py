"""Direction criteria M1-M4 for a bivariate pair.

All four criteria compare the regression of ``y`` on ``x`` with the reverse
regression of ``x`` on ``y``. Both kernel fits are computed once per pair in
:func:`analyze` and shared.

M1  mean |d E(y|x)/dx| -- smaller slope magnitude wins
M2  mean absolute residual -- smaller wins
M3  generalized correlation |r*| -- the direction whose regressor better
    predicts the other variable wins
M4  bivariate causal-additive-model score, -log(residual sd) -- larger wins
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .dataset import Direction, PairSample, prepare
from .errors import DegenerateDataError
from .kernelreg import KernelFit, evaluate

TIE_RTOL = 1e-12
VAR_FLOOR = 1e-12


class Method(str, enum.Enum):
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "Method":
        key = text.strip().upper()
        for m in cls:
            if key in (m.value, m.label.upper()):
                return m
        raise ValueError(f"unknown method {text!r}")


_LABELS = {
    Method.M1: "M1_gradient",
    Method.M2: "M2_residual",
    Method.M3: "M3_gencorr",
    Method.M4: "M4_cam",
}

ALL_METHODS = (Method.M1, Method.M2, Method.M3, Method.M4)


@dataclass(frozen=True)
class DirectionScore:
    method: Method
    score_xy: float
    score_yx: float
    decision: Direction
    tie: bool


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p_value: float
    n: int


def _decide(method, score_xy, score_yx, xy_wins_if_smaller):
    if not (math.isfinite(score_xy) and math.isfinite(score_yx)):
        raise DegenerateDataError(f"{method.label}: non-finite score ({score_xy}, {score_yx})")
    scale = max(1.0, abs(score_xy), abs(score_yx))
    if abs(score_xy - score_yx) <= TIE_RTOL * scale:
        return DirectionScore(method, score_xy, score_yx, Direction.XtoY, True)
    xy = score_xy < score_yx if xy_wins_if_smaller else score_xy > score_yx
    return DirectionScore(method, score_xy, score_yx, Direction.XtoY if xy else Direction.YtoX, False)


def pearson(x, y) -> PearsonResult:
    """Sample Pearson correlation with a two-sided t-test p-value (n-2 df)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    n = x.size
    if n < 3:
        raise DegenerateDataError(f"pearson needs at least 3 observations, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = dx @ dx
    syy = dy @ dy
    if sxx == 0 or syy == 0 or np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DegenerateDataError("pearson undefined for a constant vector")
    r = float(np.clip((dx @ dy) / math.sqrt(sxx * syy), -1.0, 1.0))
    if abs(r) == 1.0:
        return PearsonResult(r, 0.0, n)
    t = r * math.sqrt((n - 2) / (1 - r * r))
    p = float(min(1.0, 2 * stats.t.sf(abs(t), n - 2)))
    return PearsonResult(r, p, n)


@dataclass(frozen=True)
class DirectionalFit:
    """Kernel regression of ``target`` on ``regressor`` evaluated in-sample."""

    fitted: np.ndarray
    gradient: np.ndarray
    residuals: np.ndarray
    target_var: float

    @classmethod
    def compute(cls, regressor, target, bandwidth_rule="rot"):
        fit = KernelFit.auto(regressor, target, bandwidth_rule)
        fitted, gradient = evaluate(fit, fit.x)
        return cls(fitted, gradient, fit.y - fitted, float(np.var(target, ddof=1)))

    def gmc(self) -> float:
        return _clamp01(1.0 - np.mean(self.residuals**2) / self.target_var)

    def mean_abs_gradient(self) -> float:
        return float(np.mean(np.abs(self.gradient)))

    def mean_abs_residual(self) -> float:
        return float(np.mean(np.abs(self.residuals)))

    def cam_score(self) -> float:
        return -0.5 * math.log(max(float(np.var(self.residuals, ddof=1)), VAR_FLOOR))


def _clamp01(v):
    return float(min(1.0, max(0.0, v)))


@dataclass(frozen=True)
class PairAnalysis:
    """Standardized pair plus both directional fits."""

    x: np.ndarray
    y: np.ndarray
    y_on_x: DirectionalFit
    x_on_y: DirectionalFit
    pearson: PearsonResult


def analyze(pair: PairSample, bandwidth_rule="rot") -> PairAnalysis:
    """Preprocess both columns and fit both regression directions.

    Raises :class:`DegenerateDataError` naming the column if either is
    constant.
    """
    x = prepare(pair.x, "x")
    y = prepare(pair.y, "y")
    return PairAnalysis(
        x,
        y,
        DirectionalFit.compute(x, y, bandwidth_rule),
        DirectionalFit.compute(y, x, bandwidth_rule),
        pearson(x, y),
    )


def gmc(x, y) -> float:
    """Generalized measure of correlation GMC(y|x): share of var(y) explained by E(y|x)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DegenerateDataError("gmc undefined for a constant vector")
    return DirectionalFit.compute(x, y).gmc()


def generalized_correlation(x, y) -> float:
    """Signed generalized correlation r*(y|x) = sign(r_xy) * sqrt(GMC(y|x))."""
    r = pearson(x, y).r
    return math.copysign(math.sqrt(gmc(x, y)), r) if r != 0 else 0.0


def _score_gradient(a: PairAnalysis):
    return _decide(Method.M1, a.y_on_x.mean_abs_gradient(), a.x_on_y.mean_abs_gradient(), True)


def _score_residual(a: PairAnalysis):
    return _decide(Method.M2, a.y_on_x.mean_abs_residual(), a.x_on_y.mean_abs_residual(), True)


def _score_gc(a: PairAnalysis):
    # |r*| = sqrt(GMC); the sign factor drops out under the absolute value
    return _decide(Method.M3, math.sqrt(a.y_on_x.gmc()), math.sqrt(a.x_on_y.gmc()), False)


def _score_cam(a: PairAnalysis):
    return _decide(Method.M4, a.y_on_x.cam_score(), a.x_on_y.cam_score(), False)


_SCORERS = {
    Method.M1: _score_gradient,
    Method.M2: _score_residual,
    Method.M3: _score_gc,
    Method.M4: _score_cam,
}


def criterion_gradient(pair: PairSample) -> DirectionScore:
    return _score_gradient(analyze(pair))


def criterion_residual(pair: PairSample) -> DirectionScore:
    return _score_residual(analyze(pair))


def criterion_gc(pair: PairSample) -> DirectionScore:
    return _score_gc(analyze(pair))


def criterion_cam(pair: PairSample) -> DirectionScore:
    return _score_cam(analyze(pair))


def score_analysis(analysis: PairAnalysis, methods: Iterable[Method] = ALL_METHODS) -> list[DirectionScore]:
    return [_SCORERS[Method(m)](analysis) for m in methods]


def decide_all(pair: PairSample, methods: Sequence[Method] = ALL_METHODS, bandwidth_rule="rot") -> list[DirectionScore]:
    """Scores for ``methods`` (default M1..M4, in that order) on one standardized pair."""
    return score_analysis(analyze(pair, bandwidth_rule), methods)
