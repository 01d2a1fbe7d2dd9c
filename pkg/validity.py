# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Validity tests for candidate segments
File    : validity.py
Date    : Tuesday 06 October 2026
Desc.   : Single-change scan statistics f(y_{s..t}) compared against a threshold. Each test has a naive full
          scan and an incremental detector used by the engine, one detector per candidate start.
History : 06/10/2026 - v1.0 - Range, naive GLR, Wilcoxon and Mood scans.
          08/10/2026 - v1.1 - FOCuS detector for the Gaussian GLR, sticky wrapper, Sidak thresholds.
          12/10/2026 - v1.2 - Length dependent Mood thresholds, prefix checks for post-hoc validation.
"""

__author__ = "SVP maintainers"
__version__ = "1.2"
__status__ = "Production"  # or "Development"

import functools
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

import costs
from core import DomainError, TimeSeries

KINDS = ("glr_gaussian_naive", "glr_gaussian_focus", "wilcoxon", "mood", "range")
ALIASES = {"glr": "glr_gaussian_focus", "focus": "glr_gaussian_focus", "glr-naive": "glr_gaussian_naive",
           "glr_naive": "glr_gaussian_naive"}
GLR_KINDS = ("glr_gaussian_naive", "glr_gaussian_focus")


@dataclass(frozen=True)
class ValidityTest:
    """
    A segment is valid when its statistic is at most the threshold.
    :param kind: one of KINDS
    :param gamma: fixed threshold, ignored when alpha is set
    :param sticky: once a start trips, every extension of it stays invalid
    :param alpha: mood only, segment-wise level for the length dependent Sidak threshold
    """
    kind: str
    gamma: float = 0.0
    sticky: bool = False
    alpha: Optional[float] = None

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise DomainError(f"Unknown validity test '{self.kind}', expected one of {KINDS}")
        if self.alpha is not None:
            if kind != "mood":
                raise DomainError("A Sidak level only applies to the mood test")
            if not 0.0 < self.alpha < 1.0:
                raise DomainError("alpha must lie in (0, 1)")
        elif not (self.gamma >= 0.0 and math.isfinite(self.gamma)):
            raise DomainError("gamma must be a finite nonnegative number")

    @property
    def gamma_stable(self) -> bool:
        return self.sticky or self.kind == "range"

    @property
    def inverse_stable(self) -> bool:
        # max - min can only grow when a segment is extended to the left
        return self.kind == "range"

    def threshold(self, length: int) -> float:
        if self.alpha is None:
            return self.gamma
        if length < 2:
            return math.inf
        return sidak_threshold(length - 1, self.alpha)


# naive scans, one window at a time

def _glr_profile(window: np.ndarray) -> np.ndarray:
    # gain of every admissible split tau = 1..len-1, centred on the first value
    size = window.size
    if size < 2:
        return np.zeros(0)
    centred = np.cumsum(window - window[0])
    total = centred[-1]
    tau = np.arange(1, size, dtype=float)
    left = centred[:-1]
    return 0.5 * (left * left / tau + (total - left) ** 2 / (size - tau) - total * total / size)


def _wilcoxon_table(window: np.ndarray) -> np.ndarray:
    # P[a, b] = sum over i < a, j < b of (I{y_i <= y_j} - 1/2)
    size = window.size
    pairs = (window[:, None] <= window[None, :]) - 0.5
    table = np.zeros((size + 1, size + 1))
    table[1:, 1:] = pairs.cumsum(axis=0).cumsum(axis=1)
    return table


def _mood_profile(window: np.ndarray) -> np.ndarray:
    size = window.size
    if size < 2:
        return np.zeros(0)
    below = np.cumsum(window <= np.median(window))
    low_total = float(below[-1])
    high_total = size - low_total
    u = np.arange(1, size, dtype=float)
    n1_low = below[:-1].astype(float)
    n1_high = u - n1_low
    n2_low = low_total - n1_low
    n2_high = (size - u) - n2_low
    result = np.zeros(size - 1)
    for observed, rows, column in ((n1_low, u, low_total), (n1_high, u, high_total),
                                   (n2_low, size - u, low_total), (n2_high, size - u, high_total)):
        expected = rows * column / size
        safe = np.where(expected > 0, expected, 1.0)
        result += np.where(expected > 0, (observed - expected) ** 2 / safe, 0.0)
    return result


def _max_or_zero(values: np.ndarray) -> float:
    return max(float(values.max()), 0.0) if values.size else 0.0


def glr_scan_naive(series: TimeSeries, a: int, b: int) -> float:
    """ max over a < tau < b of C(a..b) - C(a..tau) - C(tau..b) under the gaussian cost """
    series.check_range(a, b)
    model = costs.CostModel("gaussian")
    full = costs.cost(series, a, b, model)
    best = 0.0
    for tau in range(a + 1, b):
        gain = full - costs.cost(series, a, tau, model) - costs.cost(series, tau, b, model)
        best = max(best, gain)
    return best


def wilcoxon_scan(window) -> float:
    w = np.asarray(window, dtype=float)
    size = w.size
    if size < 2:
        return 0.0
    table = _wilcoxon_table(w)
    u = np.arange(1, size)
    return float(np.abs(table[u, size] - table[u, u]).max())


def mood_scan(window) -> float:
    return _max_or_zero(_mood_profile(np.asarray(window, dtype=float)))


def range_scan(window) -> float:
    w = np.asarray(window, dtype=float)
    return float(w.max() - w.min()) if w.size else 0.0


def naive_statistic(window, kind: str) -> float:
    w = np.asarray(window, dtype=float)
    kind = ALIASES.get(kind, kind)
    if kind in GLR_KINDS:
        return _max_or_zero(_glr_profile(w))
    if kind == "wilcoxon":
        return wilcoxon_scan(w)
    if kind == "mood":
        return mood_scan(w)
    return range_scan(w)


def prefix_statistics(window, kind: str) -> np.ndarray:
    """ Statistic of every prefix of the window; entry L - 1 belongs to the prefix of length L """
    w = np.asarray(window, dtype=float)
    size = w.size
    kind = ALIASES.get(kind, kind)
    if kind == "range":
        return np.maximum.accumulate(w) - np.minimum.accumulate(w)
    if kind == "wilcoxon":
        table = _wilcoxon_table(w)
        block = np.abs(table[:size, :] - np.diag(table)[:size, None])  # row u, column L
        lengths = np.arange(size + 1)
        admissible = (np.arange(size)[:, None] >= 1) & (lengths[None, :] > np.arange(size)[:, None])
        best = np.where(admissible, block, 0.0).max(axis=0)
        return best[1:]
    return np.array([naive_statistic(w[:length], kind) for length in range(1, size + 1)])


def segment_is_valid(series: TimeSeries, a: int, b: int, test: ValidityTest, tol: float = 0.0) -> bool:
    """
    Naive validity of segment (a, b]. Gamma-stable tests check every prefix of the segment, which is
    what the sticky flag remembers.
    """
    window = series.window(a, b)
    if test.gamma_stable:
        values = prefix_statistics(window, test.kind)
        for length, value in enumerate(values, start=1):
            limit = test.threshold(length)
            if value > limit + tol * max(1.0, abs(limit)):
                return False
        return True
    limit = test.threshold(window.size)
    return naive_statistic(window, test.kind) <= limit + tol * max(1.0, abs(limit))


# incremental detectors

class RangeDetector:
    def __init__(self):
        self.low = math.inf
        self.high = -math.inf

    def push(self, value: float) -> float:
        self.low = min(self.low, value)
        self.high = max(self.high, value)
        return self.high - self.low


class BufferDetector:
    """ Keeps the segment values and rescans them on every push """

    def __init__(self, kind: str):
        self.kind = kind
        self.buffer = np.empty(16)
        self.length = 0
        self.splits = np.zeros(17) if kind == "wilcoxon" else None  # W_u for u = 0..length

    def _grow(self):
        self.buffer = np.concatenate((self.buffer, np.empty(self.buffer.size)))
        if self.splits is not None:
            self.splits = np.concatenate((self.splits, np.zeros(self.buffer.size + 1 - self.splits.size)))

    def push(self, value: float) -> float:
        size = self.length
        if size == self.buffer.size:
            self._grow()
        if self.kind == "wilcoxon":
            if size:
                # the new point joins the right side of every split u = 1..size
                self.splits[1:size + 1] += np.cumsum((self.buffer[:size] <= value) - 0.5)
            self.buffer[size] = value
            self.length = size + 1
            return float(np.abs(self.splits[1:self.length]).max()) if self.length > 1 else 0.0
        self.buffer[size] = value
        self.length = size + 1
        window = self.buffer[:self.length]
        if self.kind == "mood":
            return mood_scan(window)
        return _max_or_zero(_glr_profile(window))


class FocusDetector:
    """
    Exact sequential max-GLR for a change in Gaussian mean with unknown pre and post change means.

    Split tau contributes the quadratic p_tau(mu) = tau/2 * (mu - mean_tau)^2 where mean_tau is the mean of
    the first tau values. These never change as the segment grows, and
    max_tau p_tau(mu) = 1/2 * (max over the lines +-(sqrt(tau) * mu - S_tau / sqrt(tau)))^2,
    so a split can only ever be optimal while one of its two lines is on the upper envelope. The envelope is
    the upper hull of the dual points (+-sqrt(tau), -+S_tau / sqrt(tau)), which only ever gains points at its
    two ends and is kept in a deque.
    """

    def __init__(self):
        self.length = 0
        self.offset = 0.0
        self.total = 0.0
        self.hull = deque()
        self.pieces = {}  # tau -> [S_tau, S_tau^2 / (2 tau), points on hull]

    @property
    def candidate_count(self) -> int:
        return len(self.pieces)

    def push(self, value: float) -> float:
        if self.length == 0:
            self.offset = value
        self.length += 1
        self.total += value - self.offset
        n, total = self.length, self.total
        statistic = 0.0
        if self.pieces:
            best = -math.inf
            for tau, (prefix, fitted, _) in self.pieces.items():
                rest = total - prefix
                candidate = fitted + rest * rest / (2.0 * (n - tau))
                if candidate > best:
                    best = candidate
            statistic = max(best - total * total / (2.0 * n), 0.0)
        self._add_split(n, total)
        return statistic

    def _add_split(self, tau: int, prefix: float):
        root = math.sqrt(tau)
        self.pieces[tau] = [prefix, prefix * prefix / (2.0 * tau), 2]
        right = (root, -prefix / root, tau)
        left = (-root, prefix / root, tau)
        hull = self.hull
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], right) >= 0.0:
            self._release(hull.pop())
        hull.append(right)
        while len(hull) >= 2 and _cross(left, hull[0], hull[1]) >= 0.0:
            self._release(hull.popleft())
        hull.appendleft(left)

    def _release(self, point):
        piece = self.pieces[point[2]]
        piece[2] -= 1
        if piece[2] == 0:
            del self.pieces[point[2]]


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _make_detector(kind: str):
    if kind == "range":
        return RangeDetector()
    if kind == "glr_gaussian_focus":
        return FocusDetector()
    return BufferDetector(kind)


class ValidityState:
    __slots__ = ("test", "start", "length", "statistic", "tripped", "detector")

    def __init__(self, test: ValidityTest, start: int):
        self.test = test
        self.start = start
        self.length = 0
        self.statistic = 0.0
        self.tripped = False
        self.detector = _make_detector(test.kind)

    @property
    def end(self) -> int:
        return self.start + self.length

    @property
    def is_valid(self) -> bool:
        if self.tripped:
            return False
        if self.test.gamma_stable:
            return True
        return self.statistic <= self.test.threshold(self.length)

    def push(self, value: float) -> float:
        self.statistic = self.detector.push(value)
        self.length += 1
        if self.test.gamma_stable and self.statistic > self.test.threshold(self.length):
            self.tripped = True
        return self.statistic


def state_new(test: ValidityTest, start: int) -> ValidityState:
    return ValidityState(test, start)


def state_push(state: ValidityState, value: float) -> float:
    return state.push(value)


# thresholds

def wilcoxon_threshold(typical_len: float) -> float:
    if typical_len < 0:
        raise DomainError("Typical segment length must be positive")
    return 1.5 * math.sqrt(typical_len ** 3 / 12.0)


@functools.lru_cache(maxsize=4096)
def sidak_threshold(num_splits: int, alpha: float) -> float:
    """
    Chi-square(1) critical value for the maximum over num_splits split points at overall level alpha.
    :returns: the (1 - alpha_split) quantile with alpha_split = 1 - (1 - alpha)^(1 / num_splits)
    """
    if num_splits < 1 or not 0.0 < alpha < 1.0:
        raise DomainError("Sidak threshold needs num_splits >= 1 and 0 < alpha < 1")
    alpha_split = -math.expm1(math.log1p(-alpha) / num_splits)
    return float(stats.chi2.isf(alpha_split, df=1))
