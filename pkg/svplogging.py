# !/usr/bin/env python
# -*- coding: utf-8 -*-

""" Logger for detection runs
File    : svplogging.py
Date    : Saturday 10 October 2026
Desc.   : Logging wrapper functions for command line runs and benchmark cells
History : 10/10/2026 - v1.0 - Basic functions.
"""

__author__ = "SVP maintainers"
__version__ = "1.0"
__status__ = "Production"  # or "Development"

import datetime
import logging
import os

import config

previous_date = None


def get_file_location():
    base = config.get_log_dir()
    if not os.path.isdir(base):
        os.makedirs(base)
    return base + get_date() + ".log"


def get_date():
    date = datetime.date.today()
    return date.strftime('%Y-%m-%d')


def config_logger():
    try:
        logging.basicConfig(filename=get_file_location(),
                            format='%(asctime)s : %(levelname)s : %(message)s',
                            level=config.get_log_level())
    except OSError:
        # log directory not writable, fall back to the console
        logging.basicConfig(format='%(asctime)s : %(levelname)s : %(message)s',
                            level=config.get_log_level())

    global previous_date
    previous_date = get_date()


def log_run_happy(command: str, detail: str):
    if previous_date != get_date():
        config_logger()
    logging.info(f'[Run: {command}, {detail}]')


def log_run_unhappy(command: str, detail: str):
    if previous_date != get_date():
        config_logger()
    logging.warning(f'[Run: {command}, {detail}]')
