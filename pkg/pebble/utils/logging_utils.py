import json
import logging
import sys
import time
from collections.abc import Callable
from functools import wraps
from typing import Any

logger = logging.getLogger("pebble")


def configure_logging(level: str = "WARNING") -> None:
    """Install a stderr handler on the package logger.

    Reports go to stdout; log records never do, so command output stays
    byte-deterministic.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ERROR)

    """
    installed = [h for h in logger.handlers if getattr(h, "_pebble", False)]
    if installed:
        # Follow sys.stderr if it was replaced since the last call.
        installed[0].setStream(sys.stderr)
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
        handler._pebble = True
        logger.addHandler(handler)
    logger.setLevel(level.upper())
    logger.propagate = False


def log_event(name: str, level: str = "INFO", **fields: Any) -> None:
    """Log a named event as one JSON record

    Args:
        name: Event name
        level: Logging level (INFO, WARNING, ERROR, DEBUG)
        **fields: Event payload

    """
    log_message = json.dumps({"event": name, **fields}, default=str, sort_keys=True)
    if level == "ERROR":
        logger.error(log_message)
    elif level == "WARNING":
        logger.warning(log_message)
    elif level == "DEBUG":
        logger.debug(log_message)
    else:
        logger.info(log_message)


def log_command_execution(func: Callable) -> Callable:
    """Decorator to log subcommand execution details

    Args:
        func: Subcommand handler taking parsed arguments and returning
            a (exit_code, report) pair

    Returns:
        Wrapped function with logging

    """

    @wraps(func)
    def wrapper(args, *rest, **kwargs):
        start_time = time.time()
        command = getattr(args, "command", func.__name__)

        logger.info(
            json.dumps(
                {
                    "message": "Command execution started",
                    "command": command,
                    "handler": func.__name__,
                },
                sort_keys=True,
            )
        )

        try:
            exit_code, report = func(args, *rest, **kwargs)

            execution_time = time.time() - start_time
            logger.info(
                json.dumps(
                    {
                        "message": "Command execution completed",
                        "command": command,
                        "executionTimeMs": int(execution_time * 1000),
                        "exitCode": exit_code,
                    },
                    sort_keys=True,
                )
            )

            return exit_code, report

        except Exception as e:
            execution_time = time.time() - start_time
            logger.error(
                json.dumps(
                    {
                        "message": "Command execution failed",
                        "command": command,
                        "executionTimeMs": int(execution_time * 1000),
                        "error": str(e),
                        "errorType": e.__class__.__name__,
                    },
                    sort_keys=True,
                )
            )

            raise

    return wrapper
