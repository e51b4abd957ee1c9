import dataclasses
import json
from enum import Enum
from typing import Any

import pandas as pd

from .error_handler import ValidationError


class ReportEncoder(json.JSONEncoder):
    """JSON encoder that handles enums, sets, tuples and dataclasses."""

    def default(self, obj):
        """Encode the report values the standard encoder rejects."""
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, (set, frozenset)):
            return sorted(obj, key=str)
        if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
        if isinstance(obj, pd.DataFrame):
            return obj.to_dict(orient="split")
        return json.JSONEncoder.default(self, obj)


def _plain_value(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (set, frozenset)):
        return "{" + ", ".join(sorted(map(str, value))) + "}"
    if isinstance(value, (list, tuple)):
        return ", ".join(_plain_value(v) for v in value)
    if value is None:
        return "-"
    return str(value)


def format_report(body: dict[str, Any], fmt: str = "plain") -> str:
    """Format a report body for standard output

    Args:
        body: Ordered mapping of report fields
        fmt: ``plain`` for aligned ``key: value`` lines, ``json`` for sorted JSON

    Returns:
        The rendered report, newline-terminated

    """
    if fmt == "json":
        return json.dumps(body, cls=ReportEncoder, sort_keys=True, indent=2) + "\n"
    if fmt != "plain":
        raise ValidationError(f"Unknown report format: {fmt}", {"format": fmt})

    lines = []
    width = max((len(key) for key in body), default=0)
    for key, value in body.items():
        if isinstance(value, pd.DataFrame):
            lines.append(f"{key}:")
            lines.append(format_table(value))
        elif isinstance(value, str) and "\n" in value:
            lines.append(f"{key}:")
            lines.extend(f"  {line}" for line in value.rstrip("\n").splitlines())
        else:
            lines.append(f"{key.ljust(width)} : {_plain_value(value)}")
    return "\n".join(lines) + "\n"


def format_table(frame: pd.DataFrame) -> str:
    """Render a DataFrame as a fixed-width text table

    Args:
        frame: The table to render

    Returns:
        The table text without a trailing newline

    """
    if frame.empty:
        return "(empty)"
    return frame.to_string()


def format_csv(frame: pd.DataFrame) -> str:
    """Render a DataFrame as CSV content

    Args:
        frame: The table to render

    Returns:
        The CSV content as a string

    """
    return frame.to_csv(lineterminator="\n")
