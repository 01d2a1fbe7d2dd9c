# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Environment settings
File    : config.py
Date    : Saturday 10 October 2026
Desc.   : Reads the SVP_* settings from the environment, with a .env file loaded first.
History : 10/10/2026 - v1.0 - Thread cap and logging settings.
"""

__author__ = "SVP maintainers"
__version__ = "1.0"
__status__ = "Production"  # or "Development"

import logging
import os

from dotenv import load_dotenv

load_dotenv(override=True)


def get_threads() -> int:
    try:
        return max(1, int(os.environ.get("SVP_THREADS", "1")))
    except ValueError:
        return 1


def get_log_dir() -> str:
    log_dir = os.environ.get("SVP_LOG_DIR", "logs/")
    return log_dir if log_dir.endswith("/") else log_dir + "/"


def get_log_level() -> int:
    level = logging.getLevelName(os.environ.get("SVP_LOG_LEVEL", "INFO").upper())
    return level if isinstance(level, int) else logging.INFO


def flag_enabled(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


def full_acceptance() -> bool:
    return flag_enabled("SVP_FULL_ACCEPTANCE")


def runtime_tests() -> bool:
    return flag_enabled("SVP_RUNTIME_TESTS")
