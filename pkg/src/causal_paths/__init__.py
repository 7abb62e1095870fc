"""Data-driven causal direction discovery for bivariate pairs."""

from .bootstrap import PCauseResult, p_cause
from .criteria import (
    ALL_METHODS,
    DirectionScore,
    Method,
    PearsonResult,
    criterion_cam,
    criterion_gc,
    criterion_gradient,
    criterion_residual,
    decide_all,
    generalized_correlation,
    gmc,
    pearson,
)
from .dataset import Direction, PairMetadata, PairSample, load_dataset, parse_metadata, parse_pair_file, standardize
from .ensemble import EnsembleResult, majority_vote, vote
from .kernelreg import BACKEND, KernelFit, bandwidth_rot, nw_fitted, nw_gradient, nw_predict, residuals
from .metrics import ConfusionMatrix, DecisionRecord, confusion

__version__ = "0.1.0"

__all__ = [
    "ALL_METHODS",
    "BACKEND",
    "ConfusionMatrix",
    "DecisionRecord",
    "Direction",
    "DirectionScore",
    "EnsembleResult",
    "KernelFit",
    "Method",
    "PCauseResult",
    "PairMetadata",
    "PairSample",
    "PearsonResult",
    "bandwidth_rot",
    "confusion",
    "criterion_cam",
    "criterion_gc",
    "criterion_gradient",
    "criterion_residual",
    "decide_all",
    "generalized_correlation",
    "gmc",
    "load_dataset",
    "majority_vote",
    "nw_fitted",
    "nw_gradient",
    "nw_predict",
    "p_cause",
    "parse_metadata",
    "parse_pair_file",
    "pearson",
    "residuals",
    "standardize",
    "vote",
]
