from collections.abc import Iterable

from .error_handler import ValidationError


def validate_declared(
    names: Iterable[str], declared: Iterable[str] | None, kind: str
) -> None:
    """Validate that every name is declared in the alphabet

    Args:
        names: Symbol names to check
        declared: Declared names, or None when nothing is declared (check skipped)
        kind: Symbol kind for the message ("constant", "predicate", ...)

    Raises:
        ValidationError: If a name is undeclared

    """
    if declared is None:
        return
    declared = set(declared)
    undeclared = sorted({name for name in names if name not in declared})
    if undeclared:
        raise ValidationError(
            f"Undeclared {kind}: {', '.join(undeclared)}",
            {"kind": kind, "names": undeclared},
        )


def validate_distinct(names: list[str], field: str) -> None:
    """Validate that the names are pairwise distinct

    Raises:
        ValidationError: If a name repeats

    """
    if len(set(names)) != len(names):
        raise ValidationError(
            f"{field} must be pairwise distinct, got {', '.join(names)}",
            {"field": field, "value": list(names)},
        )


def validate_minimum(value: int, field: str, minimum: int) -> None:
    """Validate that an integer bound is at least ``minimum``

    Raises:
        ValidationError: If the value is not an int or is below the minimum

    """
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(
            f"Invalid type for {field}. Expected int, got {type(value).__name__}",
            {"field": field, "value": str(value)},
        )
    if value < minimum:
        raise ValidationError(
            f"{field} must be >= {minimum}, got {value}",
            {"field": field, "value": value},
        )
