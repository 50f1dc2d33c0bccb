"""
Decay-rate extraction from ``|O1(t)|``.

All fits are unweighted ordinary least squares in log space:
``ln|O1|`` against ``t`` (exponential) or against ``ln t`` (power law).
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError, InvalidWindowError, NoWindowError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitResult:
    kind: str
    exponent: float
    window: tuple
    r_squared: float
    stderr_exponent: float
    intercept: float = 0.0

    def predict(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "exponential":
            return np.exp(self.intercept - self.exponent * t)
        return np.exp(self.intercept) * t**self.exponent

    def as_dict(self):
        d = asdict(self)
        d["window"] = list(self.window)
        return d


@dataclass(frozen=True)
class WindowPolicy:
    """
    Rules for automatic exponential-window detection.

    ``t_min_hint`` defaults to ``ceil(ehrenfest_scale * ln D)``, an Ehrenfest
    time with unit Lyapunov exponent. It is a soft guard: windows starting at
    or after it are preferred, and the search falls back to earlier starts
    only when none qualifies.
    """

    min_length: int = 4
    t_min_hint: Optional[int] = None
    ehrenfest_scale: float = 1.0
    saturation_margin: float = 0.1
    r2_floor: float = 0.98
    tail_fraction: float = 0.25
    require_decay: bool = True

    def __post_init__(self):
        if self.min_length < 3:
            raise InvalidArgumentError("min_length must be >= 3")
        if not 0 < self.saturation_margin < 1:
            raise InvalidArgumentError("saturation_margin must lie in (0, 1)")
        if not 0 < self.tail_fraction <= 0.5:
            raise InvalidArgumentError("tail_fraction must lie in (0, 0.5]")

    def hint_for(self, D):
        if self.t_min_hint is not None:
            return int(self.t_min_hint)
        if D is None:
            return 0
        return int(math.ceil(self.ehrenfest_scale * math.log(D)))


def _series_arrays(series):
    """(times, |O1|, D) from a CorrelatorSeries or a bare sequence of values."""
    if hasattr(series, "o1"):
        return np.asarray(series.times), np.abs(series.o1), series.params.D
    y = np.abs(np.asarray(series))
    return np.arange(y.size), y, None


def _ols(x, y):
    n = x.size
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    ssr = float(np.sum((y - intercept - slope * x) ** 2))
    sst = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if sst <= 1e-30 * max(1.0, float(np.sum(y**2))) else max(0.0, 1.0 - ssr / sst)
    stderr = math.sqrt(ssr / (n - 2) / sxx) if n > 2 else float("nan")
    return float(slope), float(intercept), r2, stderr


def _window_slice(times, window):
    t0, t1 = int(window[0]), int(window[1])
    sel = (times >= t0) & (times <= t1)
    if t1 < t0 or sel.sum() < 3 or t0 < times[0] or t1 > times[-1]:
        raise InvalidWindowError(f"window {window} is outside the series or too short")
    return sel


def fit_exponential(series, window):
    """
    Fit ``|O1(t)| ~ A exp(-gamma t)`` on the inclusive window.

    Returns a FitResult with ``exponent = gamma``.
    """
    times, y, _ = _series_arrays(series)
    sel = _window_slice(times, window)
    if np.any(y[sel] <= 0):
        raise InvalidWindowError(f"non-positive |O1| inside window {window}")
    slope, icpt, r2, se = _ols(times[sel].astype(float), np.log(y[sel]))
    return FitResult("exponential", -slope, (int(window[0]), int(window[1])), r2, se, icpt)


def fit_power_law(series, window):
    """Fit ``|O1(t)| ~ A t**alpha``; ``exponent = alpha``."""
    times, y, _ = _series_arrays(series)
    if window[0] < 1:
        raise InvalidWindowError("power-law windows must start at t >= 1")
    sel = _window_slice(times, window)
    if np.any(y[sel] <= 0):
        raise InvalidWindowError(f"non-positive |O1| inside window {window}")
    slope, icpt, r2, se = _ols(np.log(times[sel].astype(float)), np.log(y[sel]))
    return FitResult("power-law", slope, (int(window[0]), int(window[1])), r2, se, icpt)


def saturation_value(series, tail_fraction=0.25):
    """Mean of ``|O1|`` over the final ``tail_fraction`` of the series."""
    if not 0 < tail_fraction <= 0.5:
        raise InvalidArgumentError("tail_fraction must lie in (0, 0.5]")
    _, y, _ = _series_arrays(series)
    n_tail = max(1, int(round(tail_fraction * y.size)))
    return float(np.mean(y[-n_tail:]))


def _scan(times, y, start_min, t_stop, policy):
    best = None
    n = y.size
    logy = np.log(np.where(y > 0, y, np.nan))
    for i in range(n):
        if times[i] < start_min:
            continue
        for j in range(i + policy.min_length - 1, n):
            if times[j] >= t_stop:
                break
            seg = logy[i:j + 1]
            if np.isnan(seg).any():
                break
            slope, _, r2, _ = _ols(times[i:j + 1].astype(float), seg)
            if r2 < policy.r2_floor or (policy.require_decay and slope >= 0):
                continue
            key = (j - i + 1, r2)
            if best is None or key > best[0]:
                best = (key, (int(times[i]), int(times[j])))
    return None if best is None else best[1]


def detect_exponential_window(series, policy: WindowPolicy = WindowPolicy(), D=None):
    """
    Longest window with ``r^2 >= r2_floor`` that ends before saturation.

    The saturation band is ``saturation_value * (1 + saturation_margin)``;
    windows must end strictly before the first time ``|O1|`` drops into it.
    Ties in length go to the higher ``r^2``.
    """
    times, y, series_D = _series_arrays(series)
    D = D if D is not None else series_D
    if y.size < policy.min_length + 2:
        raise InvalidArgumentError("series too short for window detection")
    band = saturation_value(series, policy.tail_fraction) * (1 + policy.saturation_margin)
    hint = policy.hint_for(D)
    for start_min in dict.fromkeys((hint, 0)):
        inside = np.nonzero((y <= band) & (times >= start_min))[0]
        t_stop = times[inside[0]] if inside.size else times[-1] + 1
        win = _scan(times, y, start_min, t_stop, policy)
        if win is not None:
            if start_min != hint:
                log.info("no window after t_min_hint=%d; using earliest-start search", hint)
            return win
    raise NoWindowError(f"no window of length >= {policy.min_length} reaches r^2 >= {policy.r2_floor}")
