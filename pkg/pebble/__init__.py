"""Temporal logic with flexible constants and predicate abstraction.

The package parses and prints formulas, evaluates them on finite prefixes and
on lasso-shaped traces, decides pebble equivalence of models, translates
two-counter Minsky machines into sentences and searches small scopes for models.
"""

from .evaluate import Verdict, eval_bounded, eval_lasso, eval_sentence
from .model import Lasso, TraceModel, format_model, parse_model
from .parser import parse_formula, parse_formula_file, print_formula

__version__ = "0.1.0"

__all__ = [
    "Lasso",
    "TraceModel",
    "Verdict",
    "eval_bounded",
    "eval_lasso",
    "eval_sentence",
    "format_model",
    "parse_formula",
    "parse_formula_file",
    "parse_model",
    "print_formula",
]
