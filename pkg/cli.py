# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Command line front end
File    : cli.py
Date    : Friday 09 October 2026
Desc.   : detect, simulate and bench commands. Reads a numeric CSV column, runs the solver and writes the
          segmentation JSON, a per-point CSV and a replayable run manifest.
History : 09/10/2026 - v1.0 - detect command.
          13/10/2026 - v1.1 - simulate and bench commands, exit codes.
          15/10/2026 - v1.2 - mad-diff standardization, manifests.
          17/10/2026 - v1.3 - Replayable manifest arguments, robust and change count studies.
"""

__author__ = "SVP maintainers"
__version__ = "1.3"
__status__ = "Production"  # or "Development"

import csv
import hashlib
import json
import logging
import math
import os
import platform
import shlex
import time
from importlib import metadata

import click
import numpy as np

import bench
import config
import constants
import costs
import engine
import svplogging
import validation
import validity
from core import SegmentationError, TimeSeries
from costs import CostModel
from validity import ValidityTest


class CliError(click.ClickException):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _parse_cell(cell: str):
    try:
        value = float(cell.strip())
    except (ValueError, AttributeError):
        return None
    return value if math.isfinite(value) else None


def read_series(path: str, column=None, header=None):
    """
    Read one numeric column from a CSV file.
    :param column: header name or zero based index, first numeric column when None
    :param header: True / False, or None to treat a first row with non-numeric cells as a header
    :returns: (values, column label)
    """
    try:
        with open(path, newline="") as handle:
            rows = [row for row in csv.reader(handle) if row]
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise CliError(f"Cannot read {path}: {e}", constants.EXIT_UNREADABLE)
    if not rows:
        raise CliError(f"{path} holds no rows", constants.EXIT_UNREADABLE)
    if header is None:
        # a header cell is text above a number
        first = [_parse_cell(cell) is None for cell in rows[0]]
        if len(rows) > 1:
            header = any(text and i < len(rows[1]) and _parse_cell(rows[1][i]) is not None
                         for i, text in enumerate(first))
        else:
            header = all(first)
    names = [cell.strip() for cell in rows[0]] if header else []
    data = rows[1:] if header else rows
    if not data:
        raise CliError(f"{path} holds no data rows", constants.EXIT_UNREADABLE)

    if column is None:
        index = next((i for i, cell in enumerate(data[0]) if _parse_cell(cell) is not None), None)
        if index is None:
            raise CliError("No numeric column found", constants.EXIT_NON_NUMERIC)
    elif column.isdigit():
        index = int(column)
        width = max(len(data[0]), len(names))
        if index >= width:
            raise CliError(f"Column index {index} is out of range, {path} has {width} columns",
                           constants.EXIT_BAD_FLAGS)
    elif column in names:
        index = names.index(column)
    else:
        raise CliError(f"Column '{column}' not found in header {names}", constants.EXIT_BAD_FLAGS)

    values = []
    for line, row in enumerate(data, start=2 if header else 1):
        value = _parse_cell(row[index]) if index < len(row) else None
        if value is None:
            raise CliError(f"Non-numeric or empty cell at row {line}, column {index}", constants.EXIT_NON_NUMERIC)
        values.append(value)
    label = names[index] if header and index < len(names) else str(index)
    return np.asarray(values), label


def mad_diff_scale(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return constants.mad_to_sigma * float(np.median(np.abs(np.diff(values)))) / math.sqrt(2.0)


def resolve_test(kind: str, gamma, gamma_rule, sticky: bool, n: int) -> ValidityTest:
    """ Turn --gamma or --gamma-rule into a validity test """
    if gamma is not None and gamma_rule is not None:
        raise CliError("Give either --gamma or --gamma-rule, not both", constants.EXIT_BAD_FLAGS)
    if gamma is not None:
        return ValidityTest(kind, gamma, sticky)
    rule = gamma_rule or "bic"
    if validation.validate_gamma_rule(rule) is None:
        raise CliError(f"Unknown gamma rule '{rule}'", constants.EXIT_BAD_FLAGS)
    name, _, argument = rule.partition(":")
    if name in ("bic", "bic15"):
        return ValidityTest(kind, bench.penalty_for(name, n), sticky)
    if name == "wilcoxon":
        return ValidityTest(kind, validity.wilcoxon_threshold(float(argument)), sticky)
    return ValidityTest(kind, sticky=sticky, alpha=float(argument))


def parse_noise(noise: str):
    if validation.validate_noise(noise) is None:
        raise CliError(f"Unknown noise '{noise}', expected gaussian or t<df>", constants.EXIT_BAD_FLAGS)
    if noise == "gaussian":
        return "gaussian", float(constants.student_df)
    return "student_t", float(noise[1:])


def replay_args(input_path, column, header, cost_kind, quantile_x, test_kind, gamma, gamma_rule, sticky,
                pruning, min_seg_len, standardize):
    """ detect arguments that reproduce a run from any working directory, output paths left out """
    args = ["detect", os.path.abspath(input_path), "--cost", cost_kind, "--quantile-x", repr(quantile_x),
            "--test", test_kind, "--sticky" if sticky else "--no-sticky", "--min-seg-len", str(min_seg_len),
            "--standardize", standardize]
    if column is not None:
        args += ["--column", column]
    if header is not None:
        args.append("--header" if header else "--no-header")
    if gamma is not None:
        args += ["--gamma", repr(gamma)]
    if gamma_rule is not None:
        args += ["--gamma-rule", gamma_rule]
    for rule in pruning or ("",):
        args += ["--pruning", rule]
    return args


def versions():
    found = {"svp": __version__, "python": platform.python_version()}
    for package in ("numpy", "scipy", "click", "python-dotenv"):
        try:
            found[package] = metadata.version(package)
        except metadata.PackageNotFoundError:
            found[package] = "unknown"
    return found


def write_json(path, payload):
    text = json.dumps(payload, indent=2)
    if path in (None, "-"):
        click.echo(text)
        return
    with open(path, "w") as handle:
        handle.write(text + "\n")


@click.group()
@click.option('--verbose', is_flag=True, help='Log debug statistics of every run.')
def main(verbose):
    svplogging.config_logger()
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


@main.command()
@click.argument('input_path', metavar='INPUT', type=str)
@click.option('--column', default=None, help='Header name or zero based index (first numeric column by default).')
@click.option('--header/--no-header', default=None, help='Force header handling (detected by default).')
@click.option('--cost', 'cost_kind', default='gaussian', help='gaussian, poisson, mad or quantile.')
@click.option('--quantile-x', default=0.0, type=float, help='Quantile fraction for the quantile cost.')
@click.option('--test', 'test_kind', default='glr', help='glr, glr-naive, wilcoxon, mood or range.')
@click.option('--gamma', default=None, type=float, help='Explicit validity threshold.')
@click.option('--gamma-rule', default=None, help='bic, bic15, wilcoxon:<typical length> or mood:<alpha>.')
@click.option('--sticky/--no-sticky', default=True, help='Keep a tripped segment start invalid.')
@click.option('--pruning', multiple=True, default=('sticky_validity',), help='sticky_validity and/or pelt_rule.')
@click.option('--min-seg-len', default=1, type=int)
@click.option('--standardize', default='none', help='none or mad-diff.')
@click.option('--output', default='-', help='Segmentation JSON path, stdout by default.')
@click.option('--points', default=None, help='Per-point CSV path.')
@click.option('--manifest', default=None, help='Run manifest JSON path.')
def detect(input_path, column, header, cost_kind, quantile_x, test_kind, gamma, gamma_rule, sticky, pruning,
           min_seg_len, standardize, output, points, manifest):
    """ Segment one numeric CSV column """
    started = time.perf_counter()
    if column is not None and validation.validate_column(column) is None:
        raise CliError(f"Invalid column '{column}'", constants.EXIT_BAD_FLAGS)
    if standardize not in ("none", "mad-diff"):
        raise CliError(f"Unknown standardization '{standardize}'", constants.EXIT_BAD_FLAGS)
    raw, label = read_series(input_path, column, header)
    scale = 1.0
    if standardize == "mad-diff":
        scale = mad_diff_scale(raw)
        if scale <= 0.0:
            svplogging.log_run_unhappy("detect", f"{input_path}: zero mad-diff scale, series left unscaled")
            scale = 1.0
    series = TimeSeries(raw / scale)

    pruning = tuple(p for part in pruning for p in part.split(",") if p)
    try:
        test = resolve_test(test_kind, gamma, gamma_rule, sticky, series.n)
        run_config = engine.EngineConfig(CostModel(cost_kind, quantile_x), test, min_seg_len, frozenset(pruning))
        table, segmentation = engine.svp_run(series, run_config)
    except CliError:
        raise
    except SegmentationError as e:
        svplogging.log_run_unhappy("detect", f"{input_path}: {e}")
        raise CliError(str(e), constants.EXIT_BAD_FLAGS)

    per_segment = []
    for a, b in segmentation.segments():
        per_segment.append({"start": a, "end": b, "cost": costs.cost(series, a, b, run_config.cost),
                            "validity_stat": validity.naive_statistic(series.values[a:b], test.kind)})
    result = {"boundaries": list(segmentation.boundaries), "k": segmentation.k, "q": table.value.q,
              "gamma": test.gamma if test.alpha is None else None, "per_segment": per_segment}
    write_json(output, result)

    if points:
        with open(points, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(("index", "value", "segment_id", "segment_mean", "segment_median"))
            for segment_id, (a, b) in enumerate(segmentation.segments()):
                window = raw[a:b]
                mean, median = float(window.mean()), float(np.median(window))
                for i in range(a, b):
                    writer.writerow((i, repr(float(raw[i])), segment_id, repr(mean), repr(median)))

    if manifest:
        args = replay_args(input_path, column, header, cost_kind, quantile_x, test_kind, gamma, gamma_rule, sticky,
                           sorted(run_config.pruning), min_seg_len, standardize)
        write_json(manifest, {
            "command": shlex.join(["python", os.path.abspath(__file__)] + args),
            "args": args,
            "config": {"cost": run_config.cost.kind, "quantile_x": run_config.cost.x, "test": test.kind,
                       "gamma": test.gamma if test.alpha is None else None, "alpha": test.alpha,
                       "gamma_rule": gamma_rule, "sticky": test.sticky, "pruning": sorted(run_config.pruning),
                       "min_seg_len": min_seg_len, "standardize": standardize, "scale": scale, "column": label},
            "input": {"path": os.path.abspath(input_path), "length": series.n, "sha256": _sha256_file(input_path)},
            "outputs": {"boundaries": list(segmentation.boundaries),
                        "per_segment_costs": [segment["cost"] for segment in per_segment],
                        "r_n": [table.value.k, table.value.q]},
            "versions": versions(),
            "wall_time_s": time.perf_counter() - started,
        })
    svplogging.log_run_happy("detect", f"{input_path} n={series.n} k={segmentation.k}")


@main.command()
@click.option('--scenario', default='up', help='none, up, step or updown.')
@click.option('--n', 'length', default=constants.default_n, type=int)
@click.option('--jump', default=1.0, type=float)
@click.option('--sigma', default=1.0, type=float)
@click.option('--noise', default='gaussian', help='gaussian or t<df>, e.g. t2.')
@click.option('--changes', default=None, help='Comma separated change indices (scenario default otherwise).')
@click.option('--segments', default=constants.default_segments, type=int)
@click.option('--seed', default=0, type=int)
@click.option('--output', required=True, help='Series CSV path.')
@click.option('--truth', default=None, help='Truth JSON path, <output>.truth.json by default.')
def simulate(scenario, length, jump, sigma, noise, changes, segments, seed, output, truth):
    """ Write a simulated series and its true change points """
    if validation.validate_scenario(scenario) is None:
        raise CliError(f"Unknown scenario '{scenario}'", constants.EXIT_BAD_FLAGS)
    noise_kind, df = parse_noise(noise)
    true_changes = None
    if changes is not None:
        if validation.validate_index_list(changes) is None:
            raise CliError(f"Invalid change list '{changes}'", constants.EXIT_BAD_FLAGS)
        true_changes = tuple(int(c) for c in changes.replace(" ", "").split(",") if c)
    try:
        setup = bench.Scenario(scenario, length, jump, true_changes, noise_kind, sigma, df, seed, segments)
    except SegmentationError as e:
        raise CliError(str(e), constants.EXIT_BAD_FLAGS)
    series = bench.generate(setup)
    with open(output, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(("value",))
        for value in series.values:
            writer.writerow((repr(float(value)),))
    write_json(truth or output + ".truth.json", {
        "scenario": setup.name, "n": setup.n, "jump": setup.jump, "sigma": setup.sigma, "noise": noise,
        "df": setup.df if noise_kind == "student_t" else None, "seed": setup.seed,
        "true_changes": list(setup.true_changes), "reconstructed": setup.reconstructed})
    svplogging.log_run_happy("simulate", f"{scenario} n={length} seed={seed} -> {output}")


def _split(text, cast):
    return tuple(cast(part) for part in text.replace(" ", "").split(",") if part)


def _write_rows(path, rows):
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]) if rows else ["method", "n", "runtime_s"])
        writer.writeheader()
        writer.writerows(rows)


@main.command(name='bench')
@click.option('--study', default='f1', help='f1, robust, runtime, runtime-changes or prop2.')
@click.option('--scenarios', default=None, help='Comma separated scenario names.')
@click.option('--jumps', default=None, help='Comma separated jump sizes.')
@click.option('--methods', default=None, help='Comma separated methods.')
@click.option('--baseline', default=None, help='pelt adds the OP/PELT baseline to the grid.')
@click.option('--replicates', default=None, type=int)
@click.option('--n', 'length', default=None, type=int, help='Length, 10000 for runtime-changes and 1000 otherwise.')
@click.option('--noise', default=None, help='gaussian or t<df>.')
@click.option('--seed', default=0, type=int)
@click.option('--ns', default=None, help='Comma separated lengths for the runtime study.')
@click.option('--counts', default=None, help='Comma separated change counts for the runtime-changes study.')
@click.option('--workers', default=None, type=int, help='Worker processes, capped by SVP_THREADS.')
@click.option('--full', is_flag=True, help='100 replicates over the full jump grid.')
@click.option('--output-dir', default='bench_out')
def bench_command(study, scenarios, jumps, methods, baseline, replicates, length, noise, seed, ns, counts, workers,
                  full, output_dir):
    """ Run a simulation study and write results.csv, locations.csv and summary.json """
    presets = {
        "f1": (("none", "up"), constants.default_jumps, ("svp-glr", "svp-glr15"), "gaussian"),
        "robust": (bench.SCENARIOS, constants.robust_jumps,
                   ("svp-wilcoxon", "svp-wilcoxon-plain", "svp-mood", "svp-mood-plain"), "t2"),
        "prop2": (("none", "up", "step", "updown"), constants.default_jumps, ("svp-glr-plain",), "gaussian"),
        "runtime": ((), (), ("svp-focus", "pelt", "op"), "gaussian"),
        "runtime-changes": ((), (), ("svp-focus", "pelt"), "gaussian"),
    }
    if study not in presets:
        raise CliError(f"Unknown study '{study}', expected one of {sorted(presets)}", constants.EXIT_BAD_FLAGS)
    default_scenarios, default_jumps, default_methods, default_noise = presets[study]
    if jumps is not None and validation.validate_number_list(jumps) is None:
        raise CliError(f"Invalid jump list '{jumps}'", constants.EXIT_BAD_FLAGS)
    for text in (ns, counts):
        if text is not None and validation.validate_index_list(text) is None:
            raise CliError(f"Invalid list '{text}'", constants.EXIT_BAD_FLAGS)
    if baseline not in (None, "pelt"):
        raise CliError(f"Unknown baseline '{baseline}'", constants.EXIT_BAD_FLAGS)
    n = length or (constants.runtime_changes_n if study == "runtime-changes" else constants.default_n)
    os.makedirs(output_dir, exist_ok=True)
    started = time.perf_counter()

    if study == "runtime":
        chosen = _split(methods, str) if methods else default_methods
        rows = bench.run_runtime_study(_split(ns, int) if ns else constants.runtime_ns, chosen, seed)
        _write_rows(os.path.join(output_dir, "runtime.csv"), rows)
        slopes = {m: bench.fit_loglog_slope([r["n"] for r in rows if r["method"] == m],
                                            [r["runtime_s"] for r in rows if r["method"] == m])
                  for m in chosen if sum(r["method"] == m for r in rows) > 1}
        write_json(os.path.join(output_dir, "summary.json"), {"study": study, "slopes": slopes, "rows": rows})
        svplogging.log_run_happy("bench", f"runtime slopes {slopes}")
        return

    if study == "runtime-changes":
        chosen = _split(methods, str) if methods else default_methods
        try:
            change_counts = _split(counts, int) if counts else constants.runtime_change_counts
            rows = bench.run_changes_runtime_study(n, change_counts, chosen, seed=seed)
        except SegmentationError as e:
            raise CliError(str(e), constants.EXIT_BAD_FLAGS)
        _write_rows(os.path.join(output_dir, "runtime.csv"), rows)
        write_json(os.path.join(output_dir, "summary.json"), {"study": study, "n": n, "rows": rows})
        svplogging.log_run_happy("bench", f"runtime against change count: {len(rows)} rows at n={n}")
        return

    noise_kind, df = parse_noise(noise or default_noise)
    scenario_names = _split(scenarios, str) if scenarios else default_scenarios
    for name in scenario_names:
        if validation.validate_scenario(name) is None:
            raise CliError(f"Unknown scenario '{name}'", constants.EXIT_BAD_FLAGS)
    chosen = list(_split(methods, str) if methods else default_methods)
    if baseline == "pelt" or (study in ("f1", "robust") and not methods):
        chosen += [] if "pelt" in chosen else ["pelt"]
    try:
        config_ = bench.StudyConfig(
            scenarios=scenario_names,
            jumps=constants.full_jumps if full and not jumps else (_split(jumps, float) if jumps else default_jumps),
            methods=tuple(chosen),
            replicates=replicates or (constants.full_replicates if full else constants.default_replicates),
            n=n, noise=noise_kind, df=df, base_seed=seed,
            workers=workers or config.get_threads())
    except SegmentationError as e:
        raise CliError(str(e), constants.EXIT_BAD_FLAGS)

    if study == "prop2":
        audit = bench.audit_segment_counts(config_)
        write_json(os.path.join(output_dir, "summary.json"),
                   {"study": study, "violations": audit.violations, "pairs": audit.pairs})
        log = svplogging.log_run_happy if audit.violations == 0 else svplogging.log_run_unhappy
        log("bench", f"prop2 audit: {audit.violations} violations over {len(audit.pairs)} replicates")
        return

    rows = bench.run_study(config_)
    summary = bench.summarize(rows)
    bench.write_results_csv(rows, os.path.join(output_dir, "results.csv"))
    bench.write_locations_csv(rows, os.path.join(output_dir, "locations.csv"))
    monotone = {m: bench.f1_monotonicity_violations(summary, m) for m in config_.methods}
    bench.write_summary_json(summary, os.path.join(output_dir, "summary.json"), {
        "study": study, "n": n, "replicates": config_.replicates, "noise": noise or default_noise,
        "seed": seed, "f1_drops": monotone, "wall_time_s": time.perf_counter() - started,
        "reconstructed_scenarios": [s for s in scenario_names if s in constants.reconstructed_scenarios]})
    failed = [row for row in rows if row.status != "ok"]
    if failed:
        svplogging.log_run_unhappy("bench", f"{len(failed)} cells failed")
        raise CliError(f"{len(failed)} benchmark cells failed, see results.csv", constants.EXIT_CELL_FAILED)
    svplogging.log_run_happy("bench", f"{study}: {len(rows)} rows -> {output_dir}")


if __name__ == '__main__':
    main()
