"""Canonical pretty-printer; parse(pretty_print(rs)) equals rs modulo spans."""

from __future__ import annotations

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
from .lexer import escape_string

_OR, _AND, _NOT, _CMP, _ADD, _MUL, _UNARY, _ATOM = 1, 2, 3, 4, 5, 6, 7, 8


def _prec(expr: Expr) -> int:
    if isinstance(expr, BoolOp):
        return _OR if expr.op == "or" else _AND
    if isinstance(expr, NotOp):
        return _NOT
    if isinstance(expr, (TemporalPred,)):
        return _CMP
    if isinstance(expr, BinaryOp):
        if expr.op in ("+", "-"):
            return _ADD
        if expr.op in ("*", "/"):
            return _MUL
        return _CMP
    if isinstance(expr, UnaryOp):
        return _UNARY
    return _ATOM


def print_expr(expr: Expr, min_prec: int = 1) -> str:
    prec = _prec(expr)
    text = _render(expr, prec)
    if prec < min_prec:
        return f"({text})"
    return text


def _render(expr: Expr, prec: int) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, DecimalLit):
        return repr(expr.value)
    if isinstance(expr, StringLit):
        return escape_string(expr.value)
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, FieldAccess):
        return f"{expr.var}.{expr.name}"
    if isinstance(expr, Call):
        return f"{expr.func}({', '.join(print_expr(a) for a in expr.args)})"
    if isinstance(expr, UnaryOp):
        return f"-{print_expr(expr.operand, _UNARY)}"
    if isinstance(expr, NotOp):
        return f"not {print_expr(expr.operand, _CMP)}"
    if isinstance(expr, TemporalPred):
        left = print_expr(expr.left, _ADD)
        right = print_expr(expr.right, _ADD)
        return f"{left} {expr.op} {right}"
    if isinstance(expr, BoolOp):
        left = print_expr(expr.left, prec)
        right = print_expr(expr.right, prec + 1)
        return f"{left} {expr.op} {right}"
    if isinstance(expr, BinaryOp):
        if prec == _CMP:
            return f"{print_expr(expr.left, _ADD)} {expr.op} {print_expr(expr.right, _ADD)}"
        return f"{print_expr(expr.left, prec)} {expr.op} {print_expr(expr.right, prec + 1)}"
    raise TypeError(f"unknown expression node: {expr!r}")


def print_rule(rule: MetaRule) -> str:
    header = f'rule {escape_string(rule.name)}'
    if rule.priority != 0:
        header += f" priority {rule.priority}"
    bindings = ", ".join(f"{b.event_type} {b.var}" for b in rule.bindings)
    args = ["interval = " + print_expr(rule.template.interval)]
    args += [f"{key} = {print_expr(value)}" for key, value in rule.template.attributes]
    return "\n".join([
        header + " {",
        f"  when {bindings}",
        f"  where {print_expr(rule.guard)}",
        f"  annotate {rule.template.concept}({', '.join(args)})",
        "}",
    ])


def pretty_print(ruleset: RuleSet) -> str:
    """Deterministic canonical text for a rule set."""
    if not ruleset.rules:
        return ""
    return "\n\n".join(print_rule(rule) for rule in ruleset.rules) + "\n"
