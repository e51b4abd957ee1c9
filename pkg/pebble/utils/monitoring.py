import json
import logging
import threading
import time
from collections import Counter

logger = logging.getLogger("pebble")

_metrics: Counter = Counter()
_lock = threading.Lock()


def put_metric(
    namespace: str,
    metric_name: str,
    value: int | float,
    unit: str = "Count",
    dimensions: dict[str, str] | None = None,
) -> None:
    """Record a metric in the process counters and the log

    Args:
        namespace: Metric namespace ("Pebble/Search", "Pebble/Certify", ...)
        metric_name: Metric name
        value: Metric value
        unit: Metric unit
        dimensions: Metric dimensions

    """
    with _lock:
        _metrics[f"{namespace}.{metric_name}"] += value
    logger.debug(
        json.dumps(
            {
                "metric": f"{namespace}.{metric_name}",
                "value": value,
                "unit": unit,
                "dimensions": dimensions or {},
            },
            sort_keys=True,
        )
    )


def track_latency(name: str, duration_ms: float, success: bool = True) -> None:
    """Track the latency of a named operation

    Args:
        name: Operation name
        duration_ms: Duration in milliseconds
        success: Whether the operation finished without raising

    """
    dimensions = {"Operation": name, "Success": "True" if success else "False"}
    put_metric(
        "Pebble/Latency",
        f"{name}.Milliseconds",
        duration_ms,
        unit="Milliseconds",
        dimensions=dimensions,
    )
    put_metric(
        "Pebble/Latency",
        f"{name}.Invocations",
        1,
        unit="Count",
        dimensions=dimensions,
    )


def track_error(error_type: str, name: str | None = None, count: int = 1) -> None:
    """Track an error

    Args:
        error_type: Error type
        name: Operation name
        count: Error count

    """
    put_metric(
        "Pebble/Errors",
        "ErrorCount",
        count,
        "Count",
        {"ErrorType": error_type, "Operation": name or "unknown"},
    )


def snapshot() -> dict[str, float]:
    """Return a copy of the accumulated metrics."""
    with _lock:
        return dict(_metrics)


def reset() -> None:
    """Clear the accumulated metrics."""
    with _lock:
        _metrics.clear()


class LatencyTracker:
    """Context manager for tracking operation latency"""

    def __init__(self, name: str):
        """Track latency and errors of the operation ``name``."""
        self.name = name
        self.start_time = None
        self.success = True

    def __enter__(self):
        self.start_time = time.time()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time:
            duration_ms = (time.time() - self.start_time) * 1000
            self.success = exc_type is None
            track_latency(self.name, duration_ms, self.success)

            if exc_type:
                track_error(exc_type.__name__, self.name)

        # Don't suppress exceptions
        return False
