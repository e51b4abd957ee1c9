"""Shared utilities: errors, validation, logging, metrics and reports."""
