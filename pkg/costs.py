# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Segment cost functions
File    : costs.py
Date    : Monday 05 October 2026
Desc.   : Costs C(y_{a..b}) of a half-open segment (a, b]: gaussian and poisson from prefix sums, mad and
          quantile from the sorted window.
History : 05/10/2026 - v1.0 - Gaussian and poisson costs.
          07/10/2026 - v1.1 - MAD and quantile costs, split inequality check used to gate pruning.
"""

__author__ = "SVP maintainers"
__version__ = "1.1"
__status__ = "Production"  # or "Development"

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core import DomainError, TimeSeries

KINDS = ("gaussian", "poisson", "mad", "quantile")
ALIASES = {"gauss": "gaussian", "normal": "gaussian", "range": "quantile"}


@dataclass(frozen=True)
class CostModel:
    kind: str = "gaussian"
    x: float = 0.0  # quantile fraction, quantile kind only

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise DomainError(f"Unknown cost kind '{self.kind}', expected one of {KINDS}")
        if not 0.0 <= self.x < 0.5:
            raise DomainError("Quantile fraction must lie in [0, 0.5)")

    @property
    def supports_pruning(self) -> bool:
        return passes_split_inequality(self)


def _gaussian(s1: float, s2: float, length: int) -> float:
    return max(0.5 * (s2 - s1 * s1 / length), 0.0)


def _poisson(s1: float, length: int) -> float:
    mean = s1 / length
    if mean <= 0.0:
        return 0.0
    return length * mean * (1.0 - math.log(mean))


def _mad(window: np.ndarray) -> float:
    return float(np.abs(window - np.median(window)).sum())


def _order_stat(ordered: np.ndarray, fraction: float) -> float:
    # lower empirical quantile, 1-based index ceil(fraction * length)
    index = math.ceil(fraction * ordered.size - 1e-12)
    return float(ordered[min(max(index, 1), ordered.size) - 1])


def _quantile(window: np.ndarray, x: float) -> float:
    ordered = np.sort(window)
    return _order_stat(ordered, 1.0 - x) - _order_stat(ordered, x)


def cost(series: TimeSeries, a: int, b: int, model: CostModel) -> float:
    """
    Cost of segment (a, b] under the given model.
    :param series: the time series
    :param a: index before the first element of the segment
    :param b: index of the last element of the segment
    :param model: cost model
    :returns: the segment cost
    """
    series.check_range(a, b)
    if model.kind == "gaussian":
        return _gaussian(series.segment_sum(a, b), float(series.cumsum_sq[b] - series.cumsum_sq[a]), b - a)
    if model.kind == "poisson":
        if series.cumneg[b] - series.cumneg[a] > 0:
            raise DomainError(f"Poisson cost needs nonnegative values on segment ({a}, {b}]")
        return _poisson(series.segment_sum(a, b), b - a)
    window = series.values[a:b]
    if model.kind == "mad":
        return _mad(window)
    return _quantile(window, model.x)


def make_cost_function(series: TimeSeries, model: CostModel) -> Callable[[int, int], float]:
    """ Unchecked cost closure over plain Python lists, for the DP inner loops """
    if model.kind == "gaussian":
        cs = series.cumsum.tolist()
        csq = series.cumsum_sq.tolist()

        def gaussian_cost(a, b):
            s1 = cs[b] - cs[a]
            value = 0.5 * (csq[b] - csq[a] - s1 * s1 / (b - a))
            return value if value > 0.0 else 0.0
        return gaussian_cost

    if model.kind == "poisson":
        if series.cumneg[-1] > 0:
            raise DomainError("Poisson cost needs a nonnegative series")
        cs = series.cumsum.tolist()
        return lambda a, b: _poisson(cs[b] - cs[a], b - a)

    values = series.values
    if model.kind == "mad":
        return lambda a, b: _mad(values[a:b])
    return lambda a, b: _quantile(values[a:b], model.x)


@functools.lru_cache(maxsize=None)
def passes_split_inequality(model: CostModel, trials: int = 300, seed: int = 20261005) -> bool:
    """
    Randomized check of C(s..u) >= C(s..t) + C(t..u) for s < t < u.
    The PELT-style rules are only sound for models passing it.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    for _ in range(trials):
        n = int(rng.integers(3, 40))
        if model.kind == "poisson":
            data = rng.poisson(rng.uniform(0.2, 6.0), size=n).astype(float)
        else:
            data = rng.standard_normal(n) * rng.uniform(0.1, 5.0) + rng.uniform(-5.0, 5.0)
        series = TimeSeries(data)
        s, t, u = sorted(rng.choice(np.arange(n + 1), size=3, replace=False).tolist())
        whole = cost(series, s, u, model)
        parts = cost(series, s, t, model) + cost(series, t, u, model)
        if whole < parts - 1e-9 * max(1.0, abs(whole), abs(parts)):
            return False
    return True
