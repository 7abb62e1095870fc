"""Scoring decisions against ground truth; XtoY is the positive class."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .criteria import DirectionScore, Method, PearsonResult
from .dataset import Direction
from .ensemble import EnsembleResult, majority_vote
from .errors import UndefinedMetricError


@dataclass(frozen=True)
class DecisionRecord:
    pair_id: str
    n: int
    scores: tuple[DirectionScore, ...]
    ensemble: EnsembleResult
    p_cause: float | None
    pearson: PearsonResult
    ground_truth: Direction | None

    @property
    def unanimous(self) -> bool:
        return self.ensemble.unanimous

    def decision(self, method: Method) -> Direction:
        for s in self.scores:
            if s.method is method:
                return s.decision
        raise KeyError(f"record {self.pair_id} has no score for {Method(method).value}")


Selector = Callable[[DecisionRecord], Direction]


def by_ensemble(record: DecisionRecord) -> Direction:
    return record.ensemble.decision


def by_method(method: Method) -> Selector:
    method = Method(method)
    return lambda record: record.decision(method)


def by_vote(methods: Sequence[Method], leader: Method) -> Selector:
    """Re-vote the stored per-method decisions of a record with another combination."""
    methods = [Method(m) for m in methods]

    def select(record):
        return majority_vote([(m, record.decision(m)) for m in methods], leader).decision

    return select


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.fp + self.tn


def confusion(records: Iterable[DecisionRecord], selector: Selector = by_ensemble) -> ConfusionMatrix:
    tp = fn = fp = tn = 0
    for rec in records:
        if rec.ground_truth is None:
            raise ValueError(f"record {rec.pair_id} has no ground truth")
        predicted = selector(rec)
        if rec.ground_truth is Direction.XtoY:
            if predicted is Direction.XtoY:
                tp += 1
            else:
                fn += 1
        elif predicted is Direction.XtoY:
            fp += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fn, fp, tn)


def _ratio(num, den, what):
    if den == 0:
        raise UndefinedMetricError(f"{what} undefined: zero denominator")
    return num / den


def accuracy(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp + cm.tn, cm.total, "accuracy")


def sensitivity(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.positives, "sensitivity")


def specificity(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tn, cm.negatives, "specificity")


def balanced_accuracy(cm: ConfusionMatrix) -> float:
    return (sensitivity(cm) + specificity(cm)) / 2


def cohens_kappa(cm: ConfusionMatrix) -> float:
    """Agreement beyond chance between predictions and ground truth."""
    total = cm.total
    if total == 0:
        raise UndefinedMetricError("kappa undefined for an empty matrix")
    p_o = (cm.tp + cm.tn) / total
    p_e = ((cm.tp + cm.fn) * (cm.tp + cm.fp) + (cm.fp + cm.tn) * (cm.fn + cm.tn)) / total**2
    if p_e == 1:
        raise UndefinedMetricError("kappa undefined: chance agreement is 1")
    return (p_o - p_e) / (1 - p_e)


def _safe(fn, cm):
    try:
        return fn(cm)
    except UndefinedMetricError:
        return None


METRICS = {
    "accuracy": accuracy,
    "sensitivity": sensitivity,
    "specificity": specificity,
    "balanced_accuracy": balanced_accuracy,
    "kappa": cohens_kappa,
}


def summarize(cm: ConfusionMatrix) -> dict:
    """All metrics for one matrix; undefined ones are ``None``."""
    out = {"n_pairs": cm.total, "tp": cm.tp, "fn": cm.fn, "fp": cm.fp, "tn": cm.tn}
    out.update({name: _safe(fn, cm) for name, fn in METRICS.items()})
    return out


def filter_by_pcause(records: Iterable[DecisionRecord], threshold: float) -> list[DecisionRecord]:
    """Keep records with ``p_cause >= threshold`` (inclusive)."""
    return [r for r in records if r.p_cause is not None and r.p_cause >= threshold]


def filter_by_correlation(
    records: Iterable[DecisionRecord], min_abs_r: float = 0.1, max_p: float = 0.05
) -> list[DecisionRecord]:
    """Keep records whose Pearson |r| exceeds ``min_abs_r`` and is significant at ``max_p``."""
    return [r for r in records if abs(r.pearson.r) > min_abs_r and r.pearson.p_value < max_p]


def filter_by_unanimity(records: Iterable[DecisionRecord]) -> list[DecisionRecord]:
    return [r for r in records if r.unanimous]


class SweepRow(NamedTuple):
    n_threshold: int
    n_pairs: int
    balanced_accuracy: float | None
    accuracy: float | None
    kappa: float | None


def sweep_by_n_observations(
    records: Sequence[DecisionRecord], selector: Selector = by_ensemble
) -> list[SweepRow]:
    """Cumulative metric curve: for each distinct n, metrics over records with ``n <= threshold``."""
    rows = []
    for threshold in sorted({r.n for r in records}):
        cm = confusion([r for r in records if r.n <= threshold], selector)
        rows.append(
            SweepRow(
                threshold,
                cm.total,
                _safe(balanced_accuracy, cm),
                _safe(accuracy, cm),
                _safe(cohens_kappa, cm),
            )
        )
    return rows
