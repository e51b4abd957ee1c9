"""Shared pytest fixtures."""

import pytest

from pebble.utils.logging_utils import logger


@pytest.fixture(autouse=True)
def _reset_pebble_log_handler():
    """Drop the package log handler after each test.

    The handler binds to the ``sys.stderr`` of the moment; pytest closes each
    test's captured stderr, so a handler left over from one test would flush a
    closed stream in the next.
    """
    yield
    for handler in [h for h in logger.handlers if getattr(h, "_pebble", False)]:
        logger.removeHandler(handler)
