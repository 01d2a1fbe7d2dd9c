# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Helper Functions for validation
File    : validation.py
Date    : Saturday 10 October 2026
Desc.   : Validation functions for command line strings - prevents circular referencing between cli.py and
          bench.py
History : 10/10/2026 - v1.0 - Load basic project file.
          13/10/2026 - v1.1 - Noise and list validators for the simulate and bench commands.
"""

__author__ = "SVP maintainers"
__version__ = "1.1"
__status__ = "Production"  # or "Development"

import re

max_column_length = 64  # Arbitrary choice
max_list_length = 2000  # ^
scenario_names = ("none", "up", "step", "updown")


# bic, bic15, wilcoxon:<typical length> or mood:<alpha>
def validate_gamma_rule(user_input: str):
    matched = re.match(r"^(bic|bic15|wilcoxon:\d+(\.\d+)?|mood:0?\.\d+)$", user_input)
    return matched.string if matched else matched


# gaussian or t<df>, df positive
def validate_noise(user_input: str):
    matched = re.match(r"^(gaussian|t(?!0+(\.0+)?$)\d+(\.\d+)?)$", user_input)
    return matched.string if matched else matched


def validate_scenario(user_input: str):
    matched = re.match(r"^(" + "|".join(scenario_names) + r")$", user_input)
    return matched.string if matched else matched


# Comma separated nonnegative integers, empty allowed
def validate_index_list(user_input: str):
    if len(user_input) > max_list_length:
        return None
    matched = re.match(r"^(\d+(,\d+)*)?$", user_input.replace(" ", ""))
    return matched.string if matched else matched


# Comma separated nonnegative decimals
def validate_number_list(user_input: str):
    if len(user_input) > max_list_length:
        return None
    matched = re.match(r"^\d+(\.\d+)?(,\d+(\.\d+)?)*$", user_input.replace(" ", ""))
    return matched.string if matched else matched


# Header name or zero based index
def validate_column(user_input: str):
    matched = re.match(r"^[\w .-]{1,64}$", user_input)
    return matched.string if matched else matched
