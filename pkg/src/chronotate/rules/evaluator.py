"""Rule evaluation over a merged event timeline.

For each rule, every assignment of timeline events to its bindings
(filtered by event type, enumerated in timeline order) is tested against
the guard; matches instantiate the annotation template. Duplicate
assertions collapse into one with merged provenance. Runtime faults
(division by zero, an attribute missing on a concrete event) skip the
faulting binding, are reported in the result and never abort evaluation.

A rule with k bindings over n events costs O(n^k); the limits guard
refuses clearly rather than running away.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from dataclasses import field as dc_field

from .. import ontology as ont
from ..media import AttrValue, Event
from ..temporal import AllenRelation, Interval, relation
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
    StringLit,
    TemporalPred,
    UnaryOp,
    VarRef,
)


@dataclass(frozen=True)
class Provenance:
    """One rule firing: the rule's name and the bound events' ids."""

    rule: str
    events: tuple[str, ...]


@dataclass(frozen=True)
class RawAssertion:
    concept: str
    interval: Interval
    attributes: tuple[tuple[str, AttrValue], ...]
    provenance: tuple[Provenance, ...]


@dataclass(frozen=True)
class EvaluationFault:
    rule: str
    binding: tuple[tuple[str, str], ...]  # (variable, event id)
    message: str


@dataclass(frozen=True)
class EvaluationResult:
    assertions: tuple[RawAssertion, ...]
    faults: tuple[EvaluationFault, ...]


@dataclass(frozen=True)
class EvalLimits:
    max_bindings: int = 4
    max_candidate_tuples: int = 10**8


class LimitExceeded(Exception):
    pass


class _Fault(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


def _to_interval(value: object) -> Interval:
    if isinstance(value, Event):
        return value.interval
    if isinstance(value, Interval):
        return value
    raise _Fault(f"expected an interval-bearing value, got {type(value).__name__}")


def _numeric(value: object, context: str) -> int | float:
    if type(value) in (int, float):
        return value  # type: ignore[return-value]
    raise _Fault(f"{context}: expected a number, got {type(value).__name__}")


def eval_expr(expr: Expr, env: dict[str, Event]) -> object:
    if isinstance(expr, (IntLit, DecimalLit, StringLit)):
        return expr.value
    if isinstance(expr, VarRef):
        return env[expr.name]
    if isinstance(expr, FieldAccess):
        event = env[expr.var]
        if expr.name == "confidence":
            return event.confidence
        value = event.attr(expr.name)
        if value is None:
            raise _Fault(f"event {event.event_id} has no attribute {expr.name!r}")
        return value
    if isinstance(expr, UnaryOp):
        return -_numeric(eval_expr(expr.operand, env), "unary '-'")
    if isinstance(expr, NotOp):
        return not eval_expr(expr.operand, env)
    if isinstance(expr, BoolOp):
        left = eval_expr(expr.left, env)
        if expr.op == "and":
            return bool(left) and bool(eval_expr(expr.right, env))
        return bool(left) or bool(eval_expr(expr.right, env))
    if isinstance(expr, TemporalPred):
        left = _to_interval(eval_expr(expr.left, env))
        right = _to_interval(eval_expr(expr.right, env))
        return relation(left, right) is AllenRelation.from_tag(expr.op)
    if isinstance(expr, BinaryOp):
        left = eval_expr(expr.left, env)
        right = eval_expr(expr.right, env)
        op = expr.op
        if op in ("+", "-", "*", "/"):
            a = _numeric(left, f"operator {op!r}")
            b = _numeric(right, f"operator {op!r}")
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if b == 0:
                raise _Fault("division by zero")
            return a / b
        if op in ("==", "!="):
            if (type(left) is str) != (type(right) is str):
                raise _Fault(f"cannot compare {type(left).__name__} with {type(right).__name__}")
            return (left == right) if op == "==" else (left != right)
        a = _numeric(left, f"operator {op!r}")
        b = _numeric(right, f"operator {op!r}")
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
    if isinstance(expr, Call):
        return _eval_call(expr, env)
    raise TypeError(f"unknown expression node: {expr!r}")


def _eval_call(expr: Call, env: dict[str, Event]) -> object:
    if expr.func == "duration":
        return _to_interval(eval_expr(expr.args[0], env)).duration_ms
    if expr.func == "start":
        return _to_interval(eval_expr(expr.args[0], env)).start_ms
    if expr.func == "end":
        return _to_interval(eval_expr(expr.args[0], env)).end_ms
    if expr.func == "gap":
        a = _to_interval(eval_expr(expr.args[0], env))
        b = _to_interval(eval_expr(expr.args[1], env))
        return max(0, max(a.start_ms, b.start_ms) - min(a.end_ms, b.end_ms))
    if expr.func == "span":
        a = _to_interval(eval_expr(expr.args[0], env))
        b = _to_interval(eval_expr(expr.args[1], env))
        return Interval.of(min(a.start_ms, b.start_ms), max(a.end_ms, b.end_ms))
    if expr.func == "distinct":
        left = env[expr.args[0].name]  # type: ignore[attr-defined]
        right = env[expr.args[1].name]  # type: ignore[attr-defined]
        return left.event_id != right.event_id
    if expr.func == "concept":
        return expr.args[0].value  # type: ignore[attr-defined]
    raise TypeError(f"unknown built-in: {expr.func}")


def _literal_value(value: object, key: str) -> AttrValue:
    if type(value) in (str, int, float):
        return value  # type: ignore[return-value]
    raise _Fault(f"attribute {key!r} evaluated to a non-literal value")


def evaluate(
    ruleset: RuleSet,
    timeline: list[Event],
    dom: ont.DomainOntology | None = None,
    time: ont.TimeOntology | None = None,
    limits: EvalLimits | None = None,
) -> EvaluationResult:
    """Match every rule against the timeline and build raw assertions.

    The timeline must come from merge_timeline (sorted, ids assigned).
    Assertions are ordered by (rule priority descending, rule order,
    binding enumeration order); duplicates collapse into the first
    occurrence with provenance merged.
    """
    if not ruleset.checked:
        raise ValueError("rule set must pass check_rules before evaluation")
    for event in timeline:
        if event.event_id is None:
            raise ValueError("timeline events must carry ids; run merge_timeline first")
    if dom is not None:
        for rule in ruleset.rules:
            ont.resolve(dom, rule.template.concept)

    limits = limits or EvalLimits()
    pools: dict[str, list[Event]] = {}
    for event in timeline:
        pools.setdefault(event.event_type, []).append(event)

    ordered_rules = sorted(
        enumerate(ruleset.rules), key=lambda pair: (-pair[1].priority, pair[0])
    )

    by_key: dict[tuple, int] = {}
    assertions: list[RawAssertion] = []
    faults: list[EvaluationFault] = []

    for _, rule in ordered_rules:
        if len(rule.bindings) > limits.max_bindings:
            raise LimitExceeded(
                f"rule {rule.name!r} binds {len(rule.bindings)} events; "
                f"the limit is {limits.max_bindings}"
            )
        rule_pools = [pools.get(b.event_type, []) for b in rule.bindings]
        candidates = math.prod(len(pool) for pool in rule_pools)
        if candidates > limits.max_candidate_tuples:
            raise LimitExceeded(
                f"rule {rule.name!r} would enumerate {candidates} candidate tuples; "
                f"the limit is {limits.max_candidate_tuples}"
            )
        for combo in itertools.product(*rule_pools):
            env = {b.var: event for b, event in zip(rule.bindings, combo)}
            try:
                if not eval_expr(rule.guard, env):
                    continue
                interval = _to_interval(eval_expr(rule.template.interval, env))
                attributes = tuple(sorted(
                    (key, _literal_value(eval_expr(value, env), key))
                    for key, value in rule.template.attributes
                ))
            except _Fault as fault:
                faults.append(EvaluationFault(
                    rule.name,
                    tuple((b.var, event.event_id or "?") for b, event in zip(rule.bindings, combo)),
                    fault.message,
                ))
                continue
            event_ids = []
            for event in combo:
                if event.event_id not in event_ids:
                    event_ids.append(event.event_id)
            entry = Provenance(rule.name, tuple(event_ids))  # type: ignore[arg-type]
            key = (rule.template.concept, interval, attributes)
            if key in by_key:
                index = by_key[key]
                existing = assertions[index]
                if entry not in existing.provenance:
                    assertions[index] = RawAssertion(
                        existing.concept, existing.interval, existing.attributes,
                        existing.provenance + (entry,),
                    )
            else:
                by_key[key] = len(assertions)
                assertions.append(RawAssertion(
                    rule.template.concept, interval, attributes, (entry,)
                ))

    return EvaluationResult(tuple(assertions), tuple(faults))
