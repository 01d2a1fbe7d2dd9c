# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Smallest valid partitioning and optimal partitioning solvers
File    : engine.py
Date    : Wednesday 07 October 2026
Desc.   : Lexicographic DP over (segment count, cost) with one validity state per candidate start, bucketed by
          segment count. Candidates are dropped by the sticky rule and the PELT-style inequality. Also holds
          the penalized OP/PELT baseline and a plain double loop reference.
History : 07/10/2026 - v1.0 - Load basic project file.
          09/10/2026 - v1.1 - Grouped scan over K buckets with lazy state catch-up.
          11/10/2026 - v1.2 - PELT-style pruning, observer hook, post-hoc segment check.
"""

__author__ = "SVP maintainers"
__version__ = "1.2"
__status__ = "Production"  # or "Development"

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

import costs
import validity
from core import (INFINITE, ORIGIN, BiPoint, ConfigurationError, DpTable, Segmentation, TimeSeries,
                  backtrack, trace_links)
from costs import CostModel
from validity import ValidityState, ValidityTest

logger = logging.getLogger(__name__)

PRUNING_RULES = ("sticky_validity", "pelt_rule")
Observer = Callable[[int, int, float], None]


@dataclass(frozen=True)
class EngineConfig:
    cost: CostModel
    test: ValidityTest
    min_seg_len: int = 1
    pruning: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "pruning", frozenset(self.pruning))
        unknown = self.pruning - set(PRUNING_RULES)
        if unknown:
            raise ConfigurationError(f"Unknown pruning rules {sorted(unknown)}, expected {PRUNING_RULES}")
        if self.min_seg_len < 1:
            raise ConfigurationError("min_seg_len must be at least 1")
        if "pelt_rule" in self.pruning:
            if not self.test.inverse_stable:
                raise ConfigurationError(f"pelt_rule needs a left-extension stable test, not {self.test.kind}")
            if self.min_seg_len != 1:
                raise ConfigurationError("pelt_rule needs min_seg_len = 1")
            if not self.cost.supports_pruning:
                raise ConfigurationError(f"pelt_rule is unsound for the {self.cost.kind} cost")

    @property
    def gamma(self) -> float:
        return self.test.gamma


class Candidate:
    __slots__ = ("s", "r_s", "state")

    def __init__(self, s: int, r_s: BiPoint, state: ValidityState):
        self.s = s
        self.r_s = r_s
        self.state = state

    @property
    def k(self) -> int:
        return self.r_s.k

    def catch_up(self, t: int, values: List[float], observer: Optional[Observer] = None):
        # pushes y_{end+1..t}; a sticky state stops at its first failure
        state = self.state
        while state.end < t and not state.tripped:
            statistic = state.push(values[state.end])
            if observer is not None:
                observer(self.s, state.end, statistic)


class CandidateBuckets:
    """ Active candidates grouped by their segment count, each bucket ordered by start index """

    def __init__(self):
        self.buckets: Dict[int, List[Candidate]] = {}

    def add(self, candidate: Candidate):
        self.buckets.setdefault(candidate.k, []).append(candidate)

    def groups(self):
        for k in sorted(self.buckets):
            yield k, self.buckets[k]

    def __iter__(self):
        for _, group in self.groups():
            yield from group

    def __len__(self):
        return sum(len(group) for group in self.buckets.values())

    def replace(self, k: int, group: List[Candidate]):
        if group:
            self.buckets[k] = group
        else:
            self.buckets.pop(k, None)


def dp_step(t: int, candidates: CandidateBuckets, values: List[float], cost_fn: Callable[[int, int], float],
            config: EngineConfig, observer: Optional[Observer] = None) -> Tuple[BiPoint, int]:
    """
    One step of the recursion: scan groups in increasing K_s and take the cost minimum in the first group
    holding a valid candidate. Ties go to the latest start.
    :returns: (R_t, best last change index)
    """
    for k, group in candidates.groups():
        best_q = math.inf
        best_s = -1
        for candidate in group:
            if t - candidate.s < config.min_seg_len:
                continue
            candidate.catch_up(t, values, observer)
            if not candidate.state.is_valid:
                continue
            q = candidate.r_s.q + cost_fn(candidate.s, t)
            if q <= best_q:
                best_q, best_s = q, candidate.s
        if best_s >= 0:
            return BiPoint(k + 1, best_q), best_s
    return INFINITE, 0


def prune_candidates(candidates: CandidateBuckets, t: int, r_t: BiPoint, cost_fn: Callable[[int, int], float],
                     config: EngineConfig) -> int:
    """
    Drop candidates that can never be the last change again.
    :returns: the number of candidates removed
    """
    removed = 0
    sticky = "sticky_validity" in config.pruning and config.test.gamma_stable
    pelt = "pelt_rule" in config.pruning and r_t.is_finite
    if not (sticky or pelt):
        return removed
    for k, group in list(candidates.groups()):
        # with a gamma-stable test K_t never decreases, so only groups below K_t have ever been scanned
        check_sticky = sticky and (not r_t.is_finite or k < r_t.k)
        check_pelt = pelt and k == r_t.k
        if not (check_sticky or check_pelt):
            continue
        kept = []
        for candidate in group:
            if check_sticky and candidate.state.tripped:
                removed += 1
            elif check_pelt and candidate.r_s.q + cost_fn(candidate.s, t) > r_t.q:
                removed += 1
            else:
                kept.append(candidate)
        candidates.replace(k, kept)
    return removed


def svp_run(series: TimeSeries, config: EngineConfig,
            observer: Optional[Observer] = None) -> Tuple[DpTable, Segmentation]:
    """
    Smallest valid partitioning: fewest segments first, then lowest total cost, every segment valid.
    :param series: the time series
    :param config: cost, validity test, min_seg_len and pruning rules
    :param observer: called with (s, t, statistic) for every validity update
    :returns: the DP table and its backtracked segmentation
    """
    n = series.n
    values = series.values.tolist()
    cost_fn = costs.make_cost_function(series, config.cost)
    r: List[BiPoint] = [INFINITE] * (n + 1)
    links = [0] * (n + 1)
    r[0] = ORIGIN
    candidates = CandidateBuckets()
    candidates.add(Candidate(0, ORIGIN, validity.state_new(config.test, 0)))
    removed = 0
    for t in range(1, n + 1):
        r[t], links[t] = dp_step(t, candidates, values, cost_fn, config, observer)
        removed += prune_candidates(candidates, t, r[t], cost_fn, config)
        if r[t].is_finite:
            candidates.add(Candidate(t, r[t], validity.state_new(config.test, t)))
    logger.debug("svp_run n=%d K=%s removed=%d active=%d", n, r[n].k, removed, len(candidates))
    table = DpTable(r, links)
    return table, backtrack(table)


def svp_run_reference(series: TimeSeries, config: EngineConfig) -> Tuple[DpTable, Segmentation]:
    """ Literal double loop over all (s, t) with naive validity scans, no candidate states or pruning """
    n = series.n
    r: List[BiPoint] = [INFINITE] * (n + 1)
    links = [0] * (n + 1)
    r[0] = ORIGIN
    for t in range(1, n + 1):
        for s in range(t - config.min_seg_len + 1):
            if not r[s].is_finite or not validity.segment_is_valid(series, s, t, config.test):
                continue
            candidate = r[s].extend(costs.cost(series, s, t, config.cost))
            if candidate <= r[t]:
                r[t], links[t] = candidate, s
    table = DpTable(r, links)
    return table, backtrack(table)


def check_segmentation(series: TimeSeries, segmentation: Segmentation, config: EngineConfig,
                       tol: float = 1e-9) -> List[Tuple[int, int]]:
    """ Segments that fail the naive validity scan or min_seg_len """
    short = set(segmentation.short_segments(config.min_seg_len))
    return [(a, b) for a, b in segmentation.segments()
            if (a, b) in short or not validity.segment_is_valid(series, a, b, config.test, tol)]


def op_pelt_run(series: TimeSeries, cost: CostModel, penalty: float,
                prune: bool = True) -> Tuple[float, Segmentation]:
    """
    Penalized optimal partitioning, minimizing the sum over segments of C + penalty.
    PELT pruning is applied when prune is set and the cost satisfies the split inequality.
    :returns: (optimal penalized cost, segmentation)
    """
    if prune and not cost.supports_pruning:
        logger.warning("PELT pruning disabled: %s cost fails the split inequality", cost.kind)
        prune = False
    n = series.n
    cost_fn = costs.make_cost_function(series, cost)
    f = [0.0] * (n + 1)
    links = [0] * (n + 1)
    active = [0]
    for t in range(1, n + 1):
        best = math.inf
        best_s = 0
        scores = []
        for s in active:
            score = f[s] + cost_fn(s, t)
            scores.append(score)
            if score <= best:
                best, best_s = score, s
        f[t] = best + penalty
        links[t] = best_s
        if prune:
            active = [s for s, score in zip(active, scores) if score <= f[t]]
        active.append(t)
    return f[n], Segmentation(trace_links(links, n))
