import csv
import json
import math
import os
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

import bench
import constants
import core
from bench import Scenario, StudyConfig


class TestScenarios(unittest.TestCase):

    def test_default_changes(self):
        self.assertEqual(Scenario("up", 1000).true_changes, (250, 500, 750))
        self.assertEqual(Scenario("updown", 1000).true_changes, (250, 500, 750))
        self.assertEqual(Scenario("step", 1000).true_changes, (500,))
        self.assertEqual(Scenario("none", 1000).true_changes, ())

    def test_noiseless_none(self):
        series = bench.generate(Scenario("none", 50, sigma=0.0))
        self.assertTrue(np.all(series.values == 0.0))

    def test_noiseless_up(self):
        series = bench.generate(Scenario("up", 500, jump=0.6, true_changes=(100, 300), sigma=0.0))
        self.assertTrue(np.all(series.values[:100] == 0.0))
        self.assertTrue(np.allclose(series.values[100:300], 0.6))
        self.assertTrue(np.allclose(series.values[300:], 1.2))

    def test_noiseless_updown(self):
        series = bench.generate(Scenario("updown", 8, jump=2.0, sigma=0.0, segments=4))
        self.assertEqual(list(series.values), [0.0, 0.0, 2.0, 2.0, 0.0, 0.0, 2.0, 2.0])

    def test_deterministic(self):
        first = bench.generate(Scenario("up", 300, seed=12))
        second = bench.generate(Scenario("up", 300, seed=12))
        other = bench.generate(Scenario("up", 300, seed=13))
        self.assertTrue(np.array_equal(first.values, second.values))
        self.assertFalse(np.array_equal(first.values, other.values))

    def test_student_t(self):
        series = bench.generate(Scenario("none", 4000, noise="student_t", df=2, seed=3))
        self.assertEqual(series.n, 4000)
        self.assertLess(abs(float(np.median(series.values))), 0.1)
        # heavier tails than the gaussian draw with the same seed
        gaussian = bench.generate(Scenario("none", 4000, seed=3))
        self.assertGreater(np.abs(series.values).max(), np.abs(gaussian.values).max())

    def test_reconstructed_flag(self):
        self.assertTrue(Scenario("step", 100).reconstructed)
        self.assertFalse(Scenario("up", 100).reconstructed)

    def test_invalid(self):
        for kwargs in ({"name": "zigzag"}, {"noise": "cauchy"}, {"name": "none", "true_changes": (5,)},
                       {"true_changes": (0, 5)}, {"n": 10, "true_changes": (10,)}, {"true_changes": (6, 4)},
                       {"sigma": -1.0}, {"n": 0}):
            with self.assertRaises(core.DomainError):
                Scenario(**{"n": 100, **kwargs})


class TestMatching(unittest.TestCase):

    def test_perfect(self):
        report = bench.match_and_score([250, 500, 750], [250, 500, 750])
        self.assertEqual((report.precision, report.recall, report.f1), (1.0, 1.0, 1.0))

    def test_single_change(self):
        self.assertEqual(bench.match_and_score([500], [501]).f1, 1.0)
        report = bench.match_and_score([500], [504])
        self.assertEqual((report.precision, report.recall, report.f1), (0.0, 0.0, 0.0))

    def test_extra_far_detection(self):
        report = bench.match_and_score([100, 200], [101, 199, 350])
        self.assertAlmostEqual(report.precision, 2 / 3)
        self.assertEqual(report.recall, 1.0)
        self.assertAlmostEqual(report.f1, 0.8)

    def test_partial(self):
        report = bench.match_and_score([250, 500, 750], [249, 503, 800])
        self.assertAlmostEqual(report.precision, 1 / 3)
        self.assertAlmostEqual(report.recall, 1 / 3)
        self.assertAlmostEqual(report.f1, 1 / 3)
        self.assertEqual(report.matched_pairs, ((250, 249),))

    def test_extra_detection(self):
        report = bench.match_and_score([100], [100, 400])
        self.assertEqual((report.precision, report.recall), (0.5, 1.0))
        self.assertAlmostEqual(report.f1, 2 / 3)

    def test_within_tolerance_edge(self):
        self.assertEqual(bench.match_and_score([100], [102]).recall, 1.0)
        self.assertEqual(bench.match_and_score([100], [103]).recall, 0.0)

    def test_one_to_one(self):
        report = bench.match_and_score([100], [99, 101])
        self.assertEqual(len(report.matched_pairs), 1)
        self.assertEqual(report.precision, 0.5)

    def test_tie_goes_to_earlier_true_change(self):
        report = bench.match_and_score([100, 104], [102])
        self.assertEqual(report.matched_pairs, ((100, 102),))

    def test_both_empty(self):
        report = bench.match_and_score([], [])
        self.assertEqual((report.precision, report.recall, report.f1), (1.0, 1.0, 1.0))

    def test_false_positive_only(self):
        report = bench.match_and_score([], [40])
        self.assertEqual(report.precision, 0.0)
        self.assertEqual(report.f1, 0.0)

    def test_missed_only(self):
        report = bench.match_and_score([40], [])
        self.assertEqual(report.recall, 0.0)
        self.assertEqual(report.f1, 0.0)

    def test_permutation_safe(self):
        first = bench.match_and_score([250, 500, 750], [751, 249, 620, 505])
        second = bench.match_and_score([750, 250, 500], [505, 620, 249, 751])
        self.assertEqual(first, second)


class TestMethods(unittest.TestCase):

    def test_penalties(self):
        self.assertAlmostEqual(bench.penalty_for("bic", 1000), 13.8155, places=4)
        self.assertAlmostEqual(bench.penalty_for("bic15", 1000), 1.5 * math.log(1000))
        with self.assertRaises(core.DomainError):
            bench.penalty_for("aic", 1000)

    def test_method_configs(self):
        self.assertTrue(bench.method_config("svp-glr", 500).test.sticky)
        self.assertFalse(bench.method_config("svp-glr-plain", 500).test.sticky)
        self.assertEqual(bench.method_config("svp-wilcoxon", 1000).cost.kind, "mad")
        self.assertAlmostEqual(bench.method_config("svp-wilcoxon", 1000, 4).gamma, 1711.63, places=2)
        self.assertEqual(bench.method_config("svp-mood", 200).test.alpha, constants.sidak_alpha)
        for method in ("svp-wilcoxon-plain", "svp-mood-plain"):
            plain = bench.method_config(method, 1000)
            self.assertFalse(plain.test.sticky)
            self.assertEqual(plain.pruning, frozenset())
        self.assertEqual(bench.method_config("svp-wilcoxon-plain", 1000).gamma,
                         bench.method_config("svp-wilcoxon", 1000).gamma)
        with self.assertRaises(core.DomainError):
            bench.method_config("pelt", 100)

    def test_methods_find_clear_steps(self):
        series = bench.generate(Scenario("up", 400, jump=4.0, seed=2))
        for method in ("svp-glr", "svp-glr-plain", "svp-wilcoxon", "svp-wilcoxon-plain", "svp-mood", "svp-mood-plain",
                       "pelt", "op"):
            segmentation = bench.run_method(method, series)
            report = bench.match_and_score((100, 200, 300), segmentation.change_points)
            self.assertEqual(report.recall, 1.0, method)


class TestStudies(unittest.TestCase):

    def setUp(self):
        self.study = StudyConfig(scenarios=("none", "up"), jumps=(2.0,), methods=("svp-glr", "pelt"), replicates=2,
                                 n=200, workers=1)

    def test_cells(self):
        self.assertEqual(self.study.cells(), [("none", 0.0, 0), ("none", 0.0, 1), ("up", 2.0, 0), ("up", 2.0, 1)])

    def test_invalid_study(self):
        with self.assertRaises(core.DomainError):
            StudyConfig(methods=("svp-magic",))
        with self.assertRaises(core.DomainError):
            StudyConfig(replicates=0)

    def test_run_study(self):
        rows = bench.run_study(self.study)
        self.assertEqual(len(rows), 8)
        self.assertTrue(all(row.status == "ok" for row in rows))
        self.assertTrue(all(len(row.detected) == row.k_detected for row in rows))
        repeat = bench.run_study(self.study)
        self.assertEqual([(r.f1, r.k_detected) for r in rows], [(r.f1, r.k_detected) for r in repeat])

    def test_failed_cell_is_marked(self):
        original = bench.run_method

        def flaky(method, series, segments=constants.default_segments):
            if method == "pelt":
                raise core.DomainError("boom")
            return original(method, series, segments)

        with patch("bench.run_method", side_effect=flaky):
            rows = bench.run_study(self.study)
        failed = [row for row in rows if row.status != "ok"]
        self.assertEqual(len(failed), 4)
        self.assertTrue(all(row.method == "pelt" and math.isnan(row.f1) for row in failed))

    def test_summarize_and_write(self):
        rows = [bench.ResultRow("up", "svp-glr", 1.0, 0, 1.0, 1.0, 1.0, 3, 0.1),
                bench.ResultRow("up", "svp-glr", 1.0, 1, 0.5, 1.0, 2 / 3, 5, 0.3),
                bench.ResultRow("up", "svp-glr", 1.0, 2, math.nan, math.nan, math.nan, -1, 0.0, "failed: x")]
        summary = bench.summarize(rows)
        self.assertEqual(len(summary), 1)
        self.assertEqual(summary[0]["failures"], 1)
        self.assertAlmostEqual(summary[0]["f1"], 5 / 6)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "results.csv")
            bench.write_results_csv(rows, path)
            with open(path, newline="") as handle:
                records = list(csv.reader(handle))
            self.assertEqual(tuple(records[0]), constants.results_header)
            self.assertEqual(records[3][6], "")
            self.assertEqual(records[3][-1], "failed: x")
            summary_path = os.path.join(directory, "summary.json")
            bench.write_summary_json(bench.summarize(rows[2:]), summary_path, {"study": "f1"})
            with open(summary_path) as handle:
                payload = json.load(handle)
            self.assertIsNone(payload["cells"][0]["f1"])
            self.assertEqual(payload["metadata"]["study"], "f1")

    def test_write_locations(self):
        rows = [bench.ResultRow("up", "pelt", 1.0, 0, 1.0, 1.0, 1.0, 2, 0.1, detected=(249, 501)),
                bench.ResultRow("none", "pelt", 0.0, 0, 0.0, 1.0, 0.0, 0, 0.1)]
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "locations.csv")
            bench.write_locations_csv(rows, path)
            with open(path, newline="") as handle:
                records = list(csv.reader(handle))
        self.assertEqual(tuple(records[0]), constants.locations_header)
        self.assertEqual(records[1:], [["up", "pelt", "1.0", "0", "249"], ["up", "pelt", "1.0", "0", "501"]])

    def test_f1_drops(self):
        summary = [{"scenario": "up", "method": "m", "jump": 0.5, "f1": 0.4},
                   {"scenario": "up", "method": "m", "jump": 1.0, "f1": 0.9},
                   {"scenario": "up", "method": "m", "jump": 1.5, "f1": 0.85}]
        self.assertEqual(bench.f1_monotonicity_violations(summary, "m"), [(1.0, 1.5)])

    def test_audit(self):
        audit = bench.audit_segment_counts(StudyConfig(scenarios=("none", "step"), jumps=(1.0,), replicates=2,
                                                       n=150))
        self.assertEqual(len(audit.pairs), 4)
        self.assertEqual(audit.violations, 0)


class TestRuntime(unittest.TestCase):

    def test_slope_of_power_law(self):
        ns = [100, 200, 400, 800]
        self.assertAlmostEqual(bench.fit_loglog_slope(ns, [n ** 2 * 1e-6 for n in ns]), 2.0)

    def test_changes_runtime_rows(self):
        rows = bench.run_changes_runtime_study(400, (0, 3), ("svp-focus", "pelt"))
        self.assertEqual([(row["method"], row["true_changes"]) for row in rows],
                         [("svp-focus", 0), ("pelt", 0), ("svp-focus", 3), ("pelt", 3)])
        self.assertTrue(all(row["n"] == 400 and row["runtime_s"] > 0 and row["k_detected"] >= 0 for row in rows))
        with self.assertRaises(core.DomainError):
            bench.run_changes_runtime_study(50, (50,), ("pelt",))

    def test_runtime_rows(self):
        rows = bench.run_runtime_study((100, 200), ("svp-focus", "pelt"))
        self.assertEqual([(row["method"], row["n"]) for row in rows],
                         [("svp-focus", 100), ("pelt", 100), ("svp-focus", 200), ("pelt", 200)])
        self.assertTrue(all(row["runtime_s"] > 0 for row in rows))


if __name__ == '__main__':
    unittest.main()
