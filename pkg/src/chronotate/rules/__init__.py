"""The meta-rule DSL: parsing, checking, printing, evaluation."""

from .ast import MetaRule, RuleSet
from .checker import EventTypeRegistry, check_rules
from .evaluator import (
    EvalLimits,
    EvaluationFault,
    EvaluationResult,
    LimitExceeded,
    Provenance,
    RawAssertion,
    evaluate,
)
from .parser import parse_rules
from .printer import pretty_print

__all__ = [
    "EvalLimits",
    "EvaluationFault",
    "EvaluationResult",
    "EventTypeRegistry",
    "LimitExceeded",
    "MetaRule",
    "Provenance",
    "RawAssertion",
    "RuleSet",
    "check_rules",
    "evaluate",
    "parse_rules",
    "pretty_print",
]
