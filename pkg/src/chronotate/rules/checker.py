"""Type and reference checking for parsed rule sets.

Expressions are typed over {int, decimal, string, bool, event,
interval}. Events enter through bindings; temporal predicates and the
distinct() built-in relate bound variables; duration/start/end/gap/span
accept anything interval-bearing (a bound variable or a span() call).
Attribute access is checked against the event-type registry; `confidence`
is available on every event type.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field as dc_field

from .. import ontology as ont
from ..diagnostics import Diagnostic, DiagnosticsError
from .ast import (
    BinaryOp,
    BoolOp,
    Call,
    DecimalLit,
    Expr,
    FieldAccess,
    IntLit,
    MetaRule,
    NotOp,
    RuleSet,
    Span,
    StringLit,
    TemporalPred,
    UnaryOp,
    VarRef,
)

_NUMERIC = ("int", "decimal")


@dataclass
class EventTypeRegistry:
    """Known event types and their attribute schemas."""

    schemas: dict[str, dict[str, str]] = dc_field(default_factory=dict)

    @classmethod
    def default(cls) -> "EventTypeRegistry":
        return cls({
            "shot": {"index": "int", "stream": "int"},
            "ocr_text": {"text": "string", "track_id": "int"},
            "template_match": {"template": "string", "score": "decimal"},
        })

    def declare(self, event_type: str, schema: dict[str, str]) -> None:
        merged = dict(self.schemas.get(event_type, {}))
        for key, value_type in schema.items():
            merged.setdefault(key, value_type)
        self.schemas[event_type] = merged

    def absorb_events(self, events) -> None:
        """Extend the registry with types and attributes seen in data."""
        for event in events:
            schema = {}
            for key, value in event.attributes:
                schema[key] = {str: "string", int: "int", float: "decimal"}[type(value)]
            self.declare(event.event_type, schema)

    def has_type(self, event_type: str) -> bool:
        return event_type in self.schemas

    def field_type(self, event_type: str, field: str) -> str | None:
        if field == "confidence":
            return "decimal"
        return self.schemas.get(event_type, {}).get(field)


class _Checker:
    def __init__(
        self,
        filename: str,
        dom: ont.DomainOntology,
        time: ont.TimeOntology,
        registry: EventTypeRegistry,
    ):
        self.filename = filename
        self.dom = dom
        self.time = time
        self.registry = registry
        self.diagnostics: list[Diagnostic] = []

    def error(self, span: Span, code: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(
            self.filename, span.line, span.col, code, message,
            end_line=span.end_line, end_col=span.end_col,
        ))

    def check_rule(self, rule: MetaRule) -> None:
        env: dict[str, str] = {}
        for binding in rule.bindings:
            if not self.registry.has_type(binding.event_type):
                self.error(
                    binding.span, "unknown_event_type",
                    f"unknown event type {binding.event_type!r}",
                )
            env[binding.var] = binding.event_type

        guard_type = self.expr_type(rule.guard, env)
        if guard_type not in ("bool", "error"):
            self.error(
                _expr_span(rule.guard), "type_mismatch",
                f"guard must be a boolean expression, got {guard_type}",
            )

        template = rule.template
        self._check_concept(template.concept, template.span, domain_only=True)
        interval_type = self.expr_type(template.interval, env)
        if interval_type not in ("event", "interval", "error"):
            self.error(
                _expr_span(template.interval), "type_mismatch",
                f"'interval' must name a bound variable or a span(), got {interval_type}",
            )
        for key, value in template.attributes:
            value_type = self.expr_type(value, env)
            if value_type not in ("int", "decimal", "string", "error"):
                self.error(
                    _expr_span(value), "type_mismatch",
                    f"attribute {key!r} must be an int, decimal or string expression, got {value_type}",
                )

    def _check_concept(self, name: str, span: Span, domain_only: bool = False) -> None:
        try:
            entity = ont.resolve(self.dom, name)
            if isinstance(entity, ont.Concept):
                return
        except ont.NotFound:
            pass
        if not domain_only:
            try:
                ont.resolve(self.time, name)
                return
            except ont.NotFound:
                pass
        self.error(span, "unknown_concept", f"unknown concept {name!r}")

    # -- expression typing -------------------------------------------------

    def expr_type(self, expr: Expr, env: dict[str, str]) -> str:
        if isinstance(expr, IntLit):
            return "int"
        if isinstance(expr, DecimalLit):
            return "decimal"
        if isinstance(expr, StringLit):
            return "string"
        if isinstance(expr, VarRef):
            if expr.name not in env:
                self.error(expr.span, "unbound_variable", f"unbound variable {expr.name!r}")
                return "error"
            return "event"
        if isinstance(expr, FieldAccess):
            if expr.var not in env:
                self.error(expr.span, "unbound_variable", f"unbound variable {expr.var!r}")
                return "error"
            event_type = env[expr.var]
            field_type = self.registry.field_type(event_type, expr.name)
            if field_type is None:
                if self.registry.has_type(event_type):
                    self.error(
                        expr.span, "unknown_field",
                        f"event type {event_type!r} has no field {expr.name!r}",
                    )
                return "error"
            return field_type
        if isinstance(expr, UnaryOp):
            operand = self.expr_type(expr.operand, env)
            if operand in _NUMERIC or operand == "error":
                return operand
            self.error(expr.span, "type_mismatch", f"unary '-' needs a numeric operand, got {operand}")
            return "error"
        if isinstance(expr, NotOp):
            operand = self.expr_type(expr.operand, env)
            if operand not in ("bool", "error"):
                self.error(expr.span, "type_mismatch", f"'not' needs a boolean operand, got {operand}")
            return "bool"
        if isinstance(expr, BoolOp):
            for side in (expr.left, expr.right):
                side_type = self.expr_type(side, env)
                if side_type not in ("bool", "error"):
                    self.error(
                        _expr_span(side), "type_mismatch",
                        f"{expr.op!r} needs boolean operands, got {side_type}",
                    )
            return "bool"
        if isinstance(expr, TemporalPred):
            for side in (expr.left, expr.right):
                if not isinstance(side, VarRef):
                    self.error(
                        _expr_span(side), "type_mismatch",
                        f"temporal predicate {expr.op!r} relates bound variables",
                    )
                else:
                    self.expr_type(side, env)
            return "bool"
        if isinstance(expr, BinaryOp):
            return self._binary_type(expr, env)
        if isinstance(expr, Call):
            return self._call_type(expr, env)
        raise TypeError(f"unknown expression node: {expr!r}")

    def _binary_type(self, expr: BinaryOp, env: dict[str, str]) -> str:
        left = self.expr_type(expr.left, env)
        right = self.expr_type(expr.right, env)
        if "error" in (left, right):
            return "bool" if expr.op in ("==", "!=", "<", "<=", ">", ">=") else "error"
        if expr.op in ("+", "-", "*", "/"):
            if left not in _NUMERIC or right not in _NUMERIC:
                self.error(
                    expr.span, "type_mismatch",
                    f"arithmetic {expr.op!r} needs numeric operands, got {left} and {right}",
                )
                return "error"
            if expr.op == "/":
                return "decimal"
            return "decimal" if "decimal" in (left, right) else "int"
        if expr.op in ("==", "!="):
            compatible = (left in _NUMERIC and right in _NUMERIC) or left == right
            if not compatible or left in ("event", "interval", "bool"):
                self.error(
                    expr.span, "type_mismatch",
                    f"{expr.op!r} cannot compare {left} with {right}",
                )
            return "bool"
        # Ordered comparisons are numeric-only: no string < int, no string order.
        if left not in _NUMERIC or right not in _NUMERIC:
            self.error(
                expr.span, "type_mismatch",
                f"{expr.op!r} needs numeric operands, got {left} and {right}",
            )
        return "bool"

    def _call_type(self, expr: Call, env: dict[str, str]) -> str:
        def arity(n: int) -> bool:
            if len(expr.args) != n:
                self.error(
                    expr.span, "invalid_call",
                    f"{expr.func}() takes {n} argument{'s' if n != 1 else ''}, got {len(expr.args)}",
                )
                return False
            return True

        def interval_bearing(arg: Expr) -> None:
            arg_type = self.expr_type(arg, env)
            if arg_type not in ("event", "interval", "error"):
                self.error(
                    _expr_span(arg), "type_mismatch",
                    f"{expr.func}() needs an interval-bearing argument, got {arg_type}",
                )

        if expr.func in ("duration", "start", "end"):
            if arity(1):
                interval_bearing(expr.args[0])
            return "int"
        if expr.func == "gap":
            if arity(2):
                interval_bearing(expr.args[0])
                interval_bearing(expr.args[1])
            return "int"
        if expr.func == "span":
            if arity(2):
                interval_bearing(expr.args[0])
                interval_bearing(expr.args[1])
            return "interval"
        if expr.func == "distinct":
            if arity(2):
                for arg in expr.args:
                    if not isinstance(arg, VarRef):
                        self.error(
                            _expr_span(arg), "type_mismatch",
                            "distinct() relates bound variables",
                        )
                    else:
                        self.expr_type(arg, env)
            return "bool"
        if expr.func == "concept":
            if arity(1):
                arg = expr.args[0]
                if not isinstance(arg, StringLit):
                    self.error(
                        _expr_span(arg), "type_mismatch",
                        "concept() takes a quoted qualified name",
                    )
                else:
                    self._check_concept(arg.value, _expr_span(arg))
            return "string"
        raise TypeError(f"unknown built-in: {expr.func}")


def _expr_span(expr: Expr) -> Span:
    return expr.span  # type: ignore[attr-defined]


def check_rules(
    ruleset: RuleSet,
    dom: ont.DomainOntology,
    time: ont.TimeOntology,
    registry: EventTypeRegistry | None = None,
) -> RuleSet:
    """Resolve and type-check a parsed rule set.

    Returns a copy marked `checked`; raises DiagnosticsError carrying
    every finding otherwise.
    """
    checker = _Checker(
        ruleset.source_name, dom, time, registry or EventTypeRegistry.default()
    )
    for rule in ruleset.rules:
        checker.check_rule(rule)
    if checker.diagnostics:
        raise DiagnosticsError(checker.diagnostics)
    return dataclasses.replace(ruleset, checked=True)
