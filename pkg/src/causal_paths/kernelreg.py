"""Nadaraya-Watson kernel regression with a Gaussian kernel.

The O(n**2) kernel sums run in a compiled extension when it is available and
in chunked numpy otherwise. Set ``CAUSAL_PATHS_BACKEND=python`` to force the
numpy path, or call :func:`set_backend`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _nwcore_py
from .errors import DegenerateDataError

try:
    from . import _nwcore as _nwcore_ext
except ImportError:  # pragma: no cover - depends on build
    _nwcore_ext = None

_BACKENDS = {"python": _nwcore_py}
if _nwcore_ext is not None:
    _BACKENDS["cython"] = _nwcore_ext

BACKEND = "cython" if "cython" in _BACKENDS else "python"
if os.environ.get("CAUSAL_PATHS_BACKEND"):
    BACKEND = os.environ["CAUSAL_PATHS_BACKEND"]
_kernel_sums = _BACKENDS[BACKEND].kernel_sums
_kernel_sums_self = _BACKENDS[BACKEND].kernel_sums_self


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def set_backend(name: str) -> None:
    global BACKEND, _kernel_sums, _kernel_sums_self
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}")
    BACKEND = name
    _kernel_sums = _BACKENDS[name].kernel_sums
    _kernel_sums_self = _BACKENDS[name].kernel_sums_self


def bandwidth_rot(x) -> float:
    """Silverman's rule of thumb, ``1.06 * min(sd, IQR/1.34) * n**(-1/5)``.

    Falls back to the sample sd when the IQR is zero (heavily tied data).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size < 2:
        raise DegenerateDataError("bandwidth needs at least 2 observations")
    sd = x.std(ddof=1)
    if sd == 0 or np.ptp(x) == 0:
        raise DegenerateDataError("bandwidth undefined for a constant vector")
    q75, q25 = np.percentile(x, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34)
    if spread <= 0:
        spread = sd
    return 1.06 * spread * x.size ** (-0.2)


def bandwidth_lscv(x, y, grid=None) -> float:
    """Least-squares leave-one-out cross-validated bandwidth.

    Searches multiples of the rule-of-thumb bandwidth (default 25 points on a
    log scale from 0.05x to 5x). Points whose leave-one-out weight sum is
    numerically zero are predicted by the mean of ``y``.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    h0 = bandwidth_rot(x)
    if grid is None:
        grid = np.logspace(np.log10(0.05), np.log10(5.0), 25)
    best_h, best_err = h0, np.inf
    for factor in grid:
        h = h0 * factor
        s0, s1, _, _ = _kernel_sums_self(x, y, h)
        # own point has weight exp(0) = 1
        rest = s0 - 1.0
        ok = rest > 1e-10
        loo = np.full_like(y, y.mean())
        loo[ok] = (s1[ok] - y[ok]) / rest[ok]
        err = np.mean((y - loo) ** 2)
        if err < best_err:
            best_h, best_err = h, err
    return float(best_h)


BANDWIDTH_RULES = {
    "rot": lambda x, y: bandwidth_rot(x),
    "lscv": bandwidth_lscv,
}


@dataclass(frozen=True)
class KernelFit:
    """Regression of ``y`` on ``x`` with bandwidth ``h`` (units of ``x``)."""

    x: np.ndarray
    y: np.ndarray
    bandwidth: float

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if x.size < 3:
            raise DegenerateDataError(f"kernel fit needs at least 3 observations, got {x.size}")
        h = float(self.bandwidth)
        if not (np.isfinite(h) and h > 0):
            raise ValueError(f"bandwidth must be finite and > 0, got {self.bandwidth}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "bandwidth", h)

    @classmethod
    def auto(cls, x, y, rule: str | Callable = "rot") -> "KernelFit":
        """Fit with a named rule (``"rot"``, ``"lscv"``) or a callable ``rule(x, y) -> h``."""
        fn = BANDWIDTH_RULES[rule] if isinstance(rule, str) else rule
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        return cls(x, y, fn(x, y))


def evaluate(fit: KernelFit, points) -> tuple[np.ndarray, np.ndarray]:
    """Predictions and analytic derivatives at ``points`` in one kernel pass."""
    if points is fit.x:
        q = fit.x
        s0, s1, ds0, ds1 = _kernel_sums_self(fit.x, fit.y, fit.bandwidth)
    else:
        q = np.ascontiguousarray(np.atleast_1d(np.asarray(points, dtype=np.float64)))
        s0, s1, ds0, ds1 = _kernel_sums(fit.x, fit.y, fit.bandwidth, q)
    ok = s0 > 0
    pred = np.empty_like(q)
    grad = np.empty_like(q)
    pred[ok] = s1[ok] / s0[ok]
    # d/dq (s1/s0) written as (s1' - pred * s0') / s0 to avoid cancellation
    grad[ok] = (ds1[ok] - pred[ok] * ds0[ok]) / s0[ok]
    if not ok.all():
        bad = q[~ok]
        pred[~ok] = _nearest_y(fit, bad)
        step = fit.bandwidth / 100.0
        grad[~ok] = (_predict_raw(fit, bad + step) - _predict_raw(fit, bad - step)) / (2 * step)
    return pred, grad


def _nearest_y(fit, q):
    idx = np.abs(q[:, None] - fit.x[None, :]).argmin(axis=1)
    return fit.y[idx]


def _predict_raw(fit, q):
    s0, s1, _, _ = _kernel_sums(fit.x, fit.y, fit.bandwidth, np.ascontiguousarray(q))
    out = np.empty_like(q)
    ok = s0 > 0
    out[ok] = s1[ok] / s0[ok]
    out[~ok] = _nearest_y(fit, q[~ok])
    return out


def nw_predict(fit: KernelFit, x0):
    """Kernel-weighted mean of ``y`` at ``x0`` (scalar or array)."""
    pred, _ = evaluate(fit, x0)
    return float(pred[0]) if np.ndim(x0) == 0 else pred


def nw_gradient(fit: KernelFit, x0):
    """Analytic derivative of :func:`nw_predict` with respect to ``x0``."""
    _, grad = evaluate(fit, x0)
    return float(grad[0]) if np.ndim(x0) == 0 else grad


def nw_fitted(fit: KernelFit) -> np.ndarray:
    """In-sample fitted values (each point's own observation included)."""
    pred, _ = evaluate(fit, fit.x)
    return pred


def residuals(fit: KernelFit) -> np.ndarray:
    return fit.y - nw_fitted(fit)
