"""Error handling utilities for the pebble toolkit.

This module provides the exception hierarchy shared by every module and a single
function that turns an exception into a logged record, an exit code and the text
the command-line front end prints. It keeps error reporting uniform across the
parser, the evaluators, the Minsky translation and the model search.
"""

import json
import logging
import traceback
from typing import Any

logger = logging.getLogger("pebble")


class PebbleError(Exception):
    """Base exception class for pebble errors.

    All custom error types should inherit from this class.
    It provides common attributes like exit_code and error_type
    that are used to generate the command-line report.

    Attributes:
        exit_code (int): process exit code to return (defaults to 2)
        error_type (str): Error type identifier for reports
        message (str): Human-readable error message
        details (dict): Additional error context information

    """

    exit_code = 2
    error_type = "PebbleError"

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        """Initialize a new PebbleError.

        Args:
            message: Human-readable error message
            details: Additional context about the error (optional)

        """
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(PebbleError):
    """Raised when arguments fail validation (undeclared symbols, bad bounds)."""

    error_type = "ValidationError"


class ParseError(PebbleError):
    """Raised when formula text does not parse.

    The offending region of the input is kept in ``span`` (a SourceSpan).
    """

    error_type = "ParseError"

    def __init__(
        self, message: str, span: Any = None, details: dict[str, Any] | None = None
    ):
        """Keep the span and copy its bounds into the details."""
        self.span = span
        details = dict(details or {})
        if span is not None:
            details.setdefault("start", span.start)
            details.setdefault("end", span.end)
        super().__init__(message, details)


class FormatError(PebbleError):
    """Raised when a model or machine file is malformed."""

    error_type = "FormatError"


class ModelError(PebbleError):
    """Raised when a trace model violates its invariants."""

    error_type = "ModelError"


class HorizonError(PebbleError):
    """Raised on access beyond the end of a finite (non-lasso) model."""

    error_type = "HorizonError"


class EvaluationError(PebbleError):
    """Raised for unbound variables or assignment targets outside the domain."""

    error_type = "EvaluationError"


class MachineError(PebbleError):
    """Raised for invalid Minsky machine programs."""

    error_type = "MachineError"


class FlickerError(PebbleError):
    """Raised when the flicker extension cannot be represented."""

    error_type = "FlickerError"


class AlphabetMismatchError(PebbleError):
    """Raised when two models under comparison disagree on their symbols."""

    error_type = "AlphabetMismatchError"


class ScopeTooLargeError(PebbleError):
    """Raised when a small-scope search exceeds the enumeration ceiling."""

    error_type = "ScopeTooLargeError"


def handle_error(
    e: Exception, context: dict[str, Any] | None = None
) -> tuple[int, str]:
    """Handle exceptions and return the exit code and report text.

    This function processes exceptions, logs error details, and formats
    a standardized report line for the command-line front end.

    Args:
        e: The exception to handle
        context: Additional context information like the subcommand and its inputs

    Returns:
        Tuple of exit code and the report text to print

    """
    context = context or {}

    if isinstance(e, PebbleError):
        exit_code = e.exit_code
        error_type = e.error_type
        message = e.message
        details = e.details
    else:
        # Anything else is a defect, not a user error
        exit_code = 3
        error_type = "InternalError"
        message = str(e) or "An unexpected error occurred"
        details = {}

    log_data = {
        "error_type": error_type,
        "message": message,
        "details": details,
        "context": context,
    }

    if exit_code >= 3:
        log_data["traceback"] = traceback.format_exc()
        logger.error(json.dumps(log_data, default=str, sort_keys=True))
    else:
        logger.warning(json.dumps(log_data, default=str, sort_keys=True))

    report = f"{error_type}: {message}"
    if details:
        rendered = ", ".join(f"{key}={details[key]}" for key in sorted(details))
        report = f"{report} ({rendered})"
    return exit_code, report
