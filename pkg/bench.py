# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Simulation studies
File    : bench.py
Date    : Thursday 08 October 2026
Desc.   : Piecewise constant scenarios with Gaussian or Student-t noise, tolerance based matching of detected
          change points, F1 / robustness / runtime studies and the segment count audit against OP.
History : 08/10/2026 - v1.0 - Scenarios and matching.
          12/10/2026 - v1.1 - Study grid with worker pool, CSV and JSON writers.
          14/10/2026 - v1.2 - Runtime study and segment count audit.
          17/10/2026 - v1.3 - Non-sticky robust variants, detected locations, runtime against change count.
"""

__author__ = "SVP maintainers"
__version__ = "1.3"
__status__ = "Production"  # or "Development"

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
import constants
import engine
import validity
from core import DomainError, Segmentation, TimeSeries
from costs import CostModel
from validity import ValidityTest

logger = logging.getLogger(__name__)

SCENARIOS = ("none", "up", "step", "updown")
NOISES = ("gaussian", "student_t")
METHODS = ("svp-glr", "svp-glr15", "svp-glr-plain", "svp-wilcoxon", "svp-wilcoxon-plain", "svp-mood",
           "svp-mood-plain", "pelt", "op")


@dataclass(frozen=True)
class Scenario:
    """
    Piecewise constant mean plus i.i.d. noise.
    none is flat, up climbs by jump at every change, step has one change to jump and updown alternates
    between 0 and jump. Changes default to an even split into `segments` pieces (n / 2 for step).
    """
    name: str = "up"
    n: int = constants.default_n
    jump: float = 1.0
    true_changes: Optional[Tuple[int, ...]] = None
    noise: str = "gaussian"
    sigma: float = 1.0
    df: float = constants.student_df
    seed: int = 0
    segments: int = constants.default_segments

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise DomainError(f"Unknown scenario '{self.name}', expected one of {SCENARIOS}")
        if self.noise not in NOISES:
            raise DomainError(f"Unknown noise '{self.noise}', expected one of {NOISES}")
        if self.n < 1 or self.segments < 1:
            raise DomainError("n and segments must be positive")
        if self.sigma < 0 or self.df <= 0 or not math.isfinite(self.jump):
            raise DomainError("sigma must be nonnegative, df positive and jump finite")
        changes = self.true_changes
        if changes is None:
            if self.name == "none":
                changes = ()
            elif self.name == "step":
                changes = (self.n // 2,)
            else:
                changes = tuple(self.n * i // self.segments for i in range(1, self.segments))
        changes = tuple(int(c) for c in changes)
        if self.name == "none" and changes:
            raise DomainError("The none scenario has no change points")
        bounds = (0,) + changes + (self.n,)
        if any(right <= left for left, right in zip(bounds, bounds[1:])):
            raise DomainError(f"Change points must be strictly increasing inside (0, {self.n}): {changes}")
        object.__setattr__(self, "true_changes", changes)

    @property
    def reconstructed(self) -> bool:
        return self.name in constants.reconstructed_scenarios

    @property
    def oracle_segments(self) -> int:
        return len(self.true_changes) + 1

    def means(self) -> np.ndarray:
        bounds = (0,) + self.true_changes + (self.n,)
        signal = np.zeros(self.n)
        for i, (a, b) in enumerate(zip(bounds, bounds[1:])):
            if self.name == "up":
                level = i * self.jump
            elif self.name == "updown":
                level = (i % 2) * self.jump
            else:
                level = self.jump if i > 0 else 0.0
            signal[a:b] = level
        return signal


def generate(scenario: Scenario) -> TimeSeries:
    # Philox is counter based, so draws do not depend on the platform
    rng = np.random.Generator(np.random.Philox(scenario.seed))
    noise = rng.standard_normal(scenario.n)
    if scenario.noise == "student_t":
        noise = noise / np.sqrt(rng.chisquare(scenario.df, scenario.n) / scenario.df)
    return TimeSeries(scenario.means() + scenario.sigma * noise)


@dataclass
class MetricsReport:
    precision: float
    recall: float
    f1: float
    detected: Tuple[int, ...] = ()
    matched_pairs: Tuple[Tuple[int, int], ...] = ()
    runtime: float = 0.0


def match_and_score(true_changes: Sequence[int], detected: Sequence[int],
                    tolerance: float = constants.match_tolerance, runtime: float = 0.0) -> MetricsReport:
    """
    Greedy one-to-one matching of detections to true changes within the tolerance, closest pairs first and
    ties to the earlier true change.
    """
    truth = sorted(int(x) for x in true_changes)
    found = sorted(int(x) for x in detected)
    pairs = sorted((abs(t - d), i, j) for i, t in enumerate(truth) for j, d in enumerate(found)
                   if abs(t - d) <= tolerance)
    used_true, used_found, matched = set(), set(), []
    for _, i, j in pairs:
        if i in used_true or j in used_found:
            continue
        used_true.add(i)
        used_found.add(j)
        matched.append((truth[i], found[j]))
    precision = len(matched) / len(found) if found else 1.0
    recall = len(matched) / len(truth) if truth else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return MetricsReport(precision, recall, f1, tuple(found), tuple(sorted(matched)), runtime)


# methods

def penalty_for(rule: str, n: int) -> float:
    if rule == "bic":
        return constants.bic_factor * math.log(n)
    if rule == "bic15":
        return constants.bic15_factor * math.log(n)
    raise DomainError(f"Unknown penalty rule '{rule}'")


def method_config(method: str, n: int, segments: int = constants.default_segments) -> engine.EngineConfig:
    gaussian = CostModel("gaussian")
    sticky = frozenset({"sticky_validity"})
    if method in ("svp-glr", "svp-focus"):
        return engine.EngineConfig(gaussian, ValidityTest("glr_gaussian_focus", penalty_for("bic", n), True),
                                   pruning=sticky)
    if method == "svp-glr15":
        return engine.EngineConfig(gaussian, ValidityTest("glr_gaussian_focus", penalty_for("bic15", n), True),
                                   pruning=sticky)
    if method == "svp-glr-plain":
        return engine.EngineConfig(gaussian, ValidityTest("glr_gaussian_focus", penalty_for("bic", n)))
    # the -plain variants keep a start whose scan recovers below the threshold, so nothing is pruned
    if method in ("svp-wilcoxon", "svp-wilcoxon-plain"):
        plain = method.endswith("-plain")
        test = ValidityTest("wilcoxon", validity.wilcoxon_threshold(n / segments), not plain)
        return engine.EngineConfig(CostModel("mad"), test, pruning=frozenset() if plain else sticky)
    if method in ("svp-mood", "svp-mood-plain"):
        plain = method.endswith("-plain")
        test = ValidityTest("mood", sticky=not plain, alpha=constants.sidak_alpha)
        return engine.EngineConfig(CostModel("mad"), test, pruning=frozenset() if plain else sticky)
    raise DomainError(f"'{method}' is not an SVP method")


def run_method(method: str, series: TimeSeries, segments: int = constants.default_segments) -> Segmentation:
    if method in ("pelt", "op"):
        _, segmentation = engine.op_pelt_run(series, CostModel("gaussian"), penalty_for("bic", series.n),
                                             prune=method == "pelt")
        return segmentation
    _, segmentation = engine.svp_run(series, method_config(method, series.n, segments))
    return segmentation


# studies

@dataclass
class StudyConfig:
    scenarios: Tuple[str, ...] = ("up",)
    jumps: Tuple[float, ...] = constants.default_jumps
    methods: Tuple[str, ...] = ("svp-glr", "pelt")
    replicates: int = constants.default_replicates
    n: int = constants.default_n
    noise: str = "gaussian"
    sigma: float = 1.0
    df: float = constants.student_df
    base_seed: int = 0
    tolerance: float = constants.match_tolerance
    workers: int = 1

    def __post_init__(self):
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise DomainError(f"Unknown methods {unknown}, expected some of {METHODS}")
        if self.replicates < 1:
            raise DomainError("replicates must be positive")

    def scenario(self, name: str, jump: float, replicate: int) -> Scenario:
        return Scenario(name=name, n=self.n, jump=jump, noise=self.noise, sigma=self.sigma, df=self.df,
                        seed=self.base_seed + replicate)

    def cells(self) -> List[Tuple[str, float, int]]:
        cells = []
        for name in self.scenarios:
            jumps = (0.0,) if name == "none" else self.jumps
            for jump in jumps:
                cells.extend((name, float(jump), replicate) for replicate in range(self.replicates))
        return cells


@dataclass
class ResultRow:
    scenario: str
    method: str
    jump: float
    replicate: int
    precision: float
    recall: float
    f1: float
    k_detected: int
    runtime_s: float
    status: str = "ok"
    detected: Tuple[int, ...] = ()


def _run_cell(task) -> List[ResultRow]:
    name, jump, replicate, study = task
    scenario = study.scenario(name, jump, replicate)
    series = generate(scenario)
    rows = []
    for method in study.methods:
        start = time.perf_counter()
        try:
            segmentation = run_method(method, series, scenario.oracle_segments)
        except Exception as e:
            logger.warning("cell %s/%s/%s/%s failed: %s", name, method, jump, replicate, e)
            rows.append(ResultRow(name, method, jump, replicate, math.nan, math.nan, math.nan, -1,
                                  time.perf_counter() - start, f"failed: {e}"))
            continue
        runtime = time.perf_counter() - start
        report = match_and_score(scenario.true_changes, segmentation.change_points, study.tolerance, runtime)
        rows.append(ResultRow(name, method, jump, replicate, report.precision, report.recall, report.f1,
                              segmentation.k - 1, runtime, detected=segmentation.change_points))
    return rows


def run_study(study: StudyConfig) -> List[ResultRow]:
    """
    Run every scenario x jump x replicate cell for every method.
    Replicate r uses seed base_seed + r, so rows do not depend on scheduling.
    """
    tasks = [cell + (study,) for cell in study.cells()]
    workers = max(1, min(study.workers, config.get_threads()))
    logger.info("study: %d cells, %d methods, %d workers", len(tasks), len(study.methods), workers)
    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_run_cell, tasks)
    else:
        results = [_run_cell(task) for task in tasks]
    return [row for rows in results for row in rows]


def summarize(rows: Sequence[ResultRow]) -> List[Dict[str, object]]:
    """ Mean metrics per (scenario, method, jump) cell, failed rows counted but not averaged """
    cells: Dict[Tuple[str, str, float], List[ResultRow]] = {}
    for row in rows:
        cells.setdefault((row.scenario, row.method, row.jump), []).append(row)
    summary = []
    for (scenario, method, jump), group in cells.items():
        ok = [row for row in group if row.status == "ok"]

        def mean(attr):
            return float(np.mean([getattr(row, attr) for row in ok])) if ok else math.nan
        summary.append({"scenario": scenario, "method": method, "jump": jump, "replicates": len(group),
                        "failures": len(group) - len(ok), "precision": mean("precision"),
                        "recall": mean("recall"), "f1": mean("f1"), "k_detected": mean("k_detected"),
                        "runtime_s": mean("runtime_s"),
                        "reconstructed": scenario in constants.reconstructed_scenarios})
    return summary


def f1_monotonicity_violations(summary: Sequence[Dict[str, object]], method: str,
                               scenario: str = "up") -> List[Tuple[float, float]]:
    """ Consecutive jump pairs where mean F1 drops """
    points = sorted((cell["jump"], cell["f1"]) for cell in summary
                    if cell["method"] == method and cell["scenario"] == scenario)
    return [(a[0], b[0]) for a, b in zip(points, points[1:]) if b[1] < a[1]]


def write_results_csv(rows: Sequence[ResultRow], path: str):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(constants.results_header)
        for row in rows:
            record = asdict(row)
            writer.writerow(["" if isinstance(record[key], float) and math.isnan(record[key]) else record[key]
                             for key in constants.results_header])


def write_locations_csv(rows: Sequence[ResultRow], path: str):
    """ One line per detected change point, for location histograms around the true changes """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(constants.locations_header)
        for row in rows:
            for change_point in row.detected:
                writer.writerow((row.scenario, row.method, row.jump, row.replicate, change_point))


def write_summary_json(summary, path: str, metadata: Optional[Dict[str, object]] = None):
    payload = {"metadata": metadata or {}, "cells": list(summary)}
    with open(path, "w") as handle:
        json.dump(_strip_nan(payload), handle, indent=2, allow_nan=False)


def _strip_nan(value):
    # NaN is not valid JSON
    if isinstance(value, dict):
        return {k: _strip_nan(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_strip_nan(v) for v in value]
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


# segment count audit and runtime study

@dataclass
class AuditResult:
    pairs: List[Tuple[int, int]] = field(default_factory=list)  # (K_SVP, K_OP) per replicate
    violations: int = 0


def audit_segment_counts(study: StudyConfig) -> AuditResult:
    """ SVP with the plain GLR test never uses more segments than OP with the same penalty """
    result = AuditResult()
    for name, jump, replicate in study.cells():
        series = generate(study.scenario(name, jump, replicate))
        k_svp = run_method("svp-glr-plain", series).k
        k_op = run_method("pelt", series).k
        result.pairs.append((k_svp, k_op))
        if k_svp > k_op:
            result.violations += 1
            logger.warning("segment count audit: K_SVP=%d > K_OP=%d on %s/%s/%s", k_svp, k_op, name, jump,
                           replicate)
    return result


def run_runtime_study(ns: Sequence[int] = constants.runtime_ns, methods: Sequence[str] = ("svp-focus", "op"),
                      seed: int = 0, repeats: int = 1) -> List[Dict[str, object]]:
    """ Wall time on change-free Gaussian data, best of `repeats` """
    rows = []
    for n in ns:
        series = generate(Scenario(name="none", n=n, seed=seed))
        for method in methods:
            best = math.inf
            for _ in range(repeats):
                start = time.perf_counter()
                run_method("svp-glr" if method == "svp-focus" else method, series)
                best = min(best, time.perf_counter() - start)
            rows.append({"method": method, "n": n, "runtime_s": best})
    return rows


def run_changes_runtime_study(n: int = constants.runtime_changes_n,
                              change_counts: Sequence[int] = constants.runtime_change_counts,
                              methods: Sequence[str] = ("svp-focus", "pelt"), jump: float = constants.runtime_jump,
                              seed: int = 0, repeats: int = 1) -> List[Dict[str, object]]:
    """
    Wall time against the number of equally spaced changes at a fixed length.
    Levels alternate between 0 and jump. Rows carry the detected count, the axis runtime is read against.
    """
    rows = []
    for count in change_counts:
        if not 0 <= count < n:
            raise DomainError(f"Change count {count} does not fit a series of length {n}")
        name = "updown" if count else "none"
        series = generate(Scenario(name=name, n=n, jump=jump, seed=seed, segments=count + 1))
        for method in methods:
            best, detected = math.inf, 0
            for _ in range(repeats):
                start = time.perf_counter()
                segmentation = run_method("svp-glr" if method == "svp-focus" else method, series)
                best = min(best, time.perf_counter() - start)
                detected = segmentation.k - 1
            rows.append({"method": method, "n": n, "true_changes": count, "k_detected": detected,
                         "runtime_s": best})
    logger.info("changes runtime study: %d rows at n=%d", len(rows), n)
    return rows


def fit_loglog_slope(ns: Sequence[float], times: Sequence[float]) -> float:
    return float(np.polyfit(np.log(np.asarray(ns, dtype=float)), np.log(np.asarray(times, dtype=float)), 1)[0])
