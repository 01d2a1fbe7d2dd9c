#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""File of constants

File    : constants.py
Date    : Monday 05 October 2026
Desc.   : Defaults shared by the benchmark harness and the command line front end.
History : 05/10/2026 - v1.0 - Create project file
          10/10/2026 - v1.1 - Added exit codes and study grids
          17/10/2026 - v1.2 - Robust grid, change count runtime study, locations file
"""

__author__ = "SVP maintainers"
__version__ = "1.2"
__status__ = "Production"  # or "Development"

# Exit codes, frozen for downstream scripts
EXIT_OK = 0
EXIT_UNREADABLE = 2
EXIT_NON_NUMERIC = 3
EXIT_BAD_FLAGS = 4
EXIT_CELL_FAILED = 5

# Matching and calibration
match_tolerance = 2.5  # detections within +-2.5 observations count
sidak_alpha = 0.01  # segment-wise level for Mood
wilcoxon_factor = 1.5  # gamma = factor * sqrt(len^3 / 12)
mad_to_sigma = 1.4826  # MAD of a Gaussian sample to its sigma
bic_factor = 2.0  # gamma = 2 log n
bic15_factor = 1.5  # ^ with the lower false positive rate

# Simulation study
default_n = 1000
default_segments = 4  # up and updown patterns
default_replicates = 20  # desk scale
full_replicates = 100
default_jumps = (0.5, 1.0, 1.5)
full_jumps = tuple(round(0.1 * i, 1) for i in range(1, 21))  # 0.1 .. 2.0
runtime_ns = (1000, 2000, 4000, 8000)
runtime_changes_n = 10000  # length for the runtime against change count study
runtime_change_counts = (0, 1, 2, 5, 10, 20, 50, 100, 200)
runtime_jump = 2.0
robust_jumps = (0.5, 1.0, 1.5, 2.0)
student_df = 2  # heavy tailed noise
reconstructed_scenarios = ("step", "updown")  # shapes not fully specified upstream

results_header = ("scenario", "method", "jump", "replicate", "precision", "recall", "f1", "k_detected",
                  "runtime_s", "status")
locations_header = ("scenario", "method", "jump", "replicate", "change_point")
