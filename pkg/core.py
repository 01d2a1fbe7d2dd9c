# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Shared domain types for segmentation
File    : core.py
Date    : Monday 05 October 2026
Desc.   : Time series with cumulative statistics, lexicographic bi-points, segmentations, the DP table and
          the error classes every other module raises.
History : 05/10/2026 - v1.0 - Load basic project file.
          09/10/2026 - v1.1 - Backtracking checks segment count against r[n].
"""

__author__ = "SVP maintainers"
__version__ = "1.1"
__status__ = "Production"  # or "Development"

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np


class SegmentationError(Exception):
    pass


class InvalidRangeError(SegmentationError, ValueError):
    pass


class DomainError(SegmentationError, ValueError):
    pass


class CorruptTableError(SegmentationError):
    pass


class InfeasibleError(SegmentationError):
    pass


class ConfigurationError(SegmentationError, ValueError):
    pass


class TimeSeries:
    """
    Immutable univariate series with prefix sums.
    cumsum[s] is the sum of the first s values, so a segment (a, b] sums to cumsum[b] - cumsum[a].
    :param values: finite real observations, at least one
    """

    def __init__(self, values: Iterable[float]):
        arr = np.array(values, dtype=float).ravel()
        if arr.size < 1:
            raise DomainError("A time series needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise DomainError("A time series may only hold finite values")
        self.values = arr
        self.cumsum = np.concatenate(([0.0], np.cumsum(arr)))
        self.cumsum_sq = np.concatenate(([0.0], np.cumsum(arr * arr)))
        self.cumneg = np.concatenate(([0], np.cumsum(arr < 0)))  # negative count, poisson domain check
        for a in (self.values, self.cumsum, self.cumsum_sq, self.cumneg):
            a.flags.writeable = False

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def check_range(self, a: int, b: int):
        if not 0 <= a < b <= self.n:
            raise InvalidRangeError(f"Segment ({a}, {b}] is not inside a series of length {self.n}")

    def window(self, a: int, b: int) -> np.ndarray:
        self.check_range(a, b)
        return self.values[a:b]

    def segment_sum(self, a: int, b: int) -> float:
        return float(self.cumsum[b] - self.cumsum[a])


@dataclass(frozen=True, order=True)
class BiPoint:
    """ (segment count, total cost), ordered lexicographically by field order """
    k: float
    q: float

    def extend(self, cost: float) -> "BiPoint":
        return BiPoint(self.k + 1, self.q + cost)

    def __add__(self, other: "BiPoint") -> "BiPoint":
        return BiPoint(self.k + other.k, self.q + other.q)

    @property
    def is_finite(self) -> bool:
        return not math.isinf(self.k)


INFINITE = BiPoint(math.inf, math.inf)
ORIGIN = BiPoint(0, 0.0)


def lex_min(candidates: Iterable[BiPoint]) -> BiPoint:
    return min(candidates, default=INFINITE)


@dataclass(frozen=True)
class Segmentation:
    boundaries: Tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if len(b) < 2 or b[0] != 0:
            raise DomainError("Boundaries must start at 0 and hold at least one segment")
        if any(right <= left for left, right in zip(b, b[1:])):
            raise DomainError(f"Boundaries must be strictly increasing: {b}")

    @property
    def n(self) -> int:
        return self.boundaries[-1]

    @property
    def k(self) -> int:
        return len(self.boundaries) - 1

    @property
    def change_points(self) -> Tuple[int, ...]:
        return self.boundaries[1:-1]

    def segments(self) -> List[Tuple[int, int]]:
        return list(zip(self.boundaries, self.boundaries[1:]))

    def short_segments(self, min_seg_len: int) -> List[Tuple[int, int]]:
        return [(a, b) for a, b in self.segments() if b - a < min_seg_len]


@dataclass(frozen=True)
class DpTable:
    r: Tuple[BiPoint, ...]
    s: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(self.r))
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        if len(self.r) != len(self.s):
            raise CorruptTableError("r and s must have the same length")

    @property
    def n(self) -> int:
        return len(self.r) - 1

    @property
    def value(self) -> BiPoint:
        return self.r[-1]


def trace_links(links: Sequence[int], n: int) -> Tuple[int, ...]:
    """ Follow last-change links back from n, returning boundaries in increasing order """
    boundaries = [n]
    t = n
    while t > 0:
        prev = int(links[t])
        if not 0 <= prev < t:
            raise CorruptTableError(f"Link s[{t}] = {prev} does not strictly decrease")
        boundaries.append(prev)
        t = prev
    return tuple(reversed(boundaries))


def backtrack(table: DpTable) -> Segmentation:
    best = table.value
    if not best.is_finite:
        raise InfeasibleError("No valid segmentation exists for the full series")
    boundaries = trace_links(table.s, table.n)
    if len(boundaries) - 1 != best.k:
        raise CorruptTableError(f"Links give {len(boundaries) - 1} segments but r[n] holds {best.k}")
    return Segmentation(boundaries)
