"""AST for the meta-rule language.

Nodes are immutable; every node carries a source span excluded from
equality, so parse -> print -> parse round-trips compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int


NO_SPAN = Span(0, 0, 0, 0)


def _span_field() -> Span:
    return field(default=NO_SPAN, compare=False, repr=False)  # type: ignore[return-value]


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    span: Span = _span_field()


@dataclass(frozen=True)
class DecimalLit(Expr):
    value: float
    span: Span = _span_field()


@dataclass(frozen=True)
class StringLit(Expr):
    value: str
    span: Span = _span_field()


@dataclass(frozen=True)
class VarRef(Expr):
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class FieldAccess(Expr):
    var: str
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str  # "-"
    operand: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class BinaryOp(Expr):
    op: str  # + - * / == != < <= > >=
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class BoolOp(Expr):
    op: str  # "and" | "or"
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class NotOp(Expr):
    operand: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class TemporalPred(Expr):
    op: str  # one of the 13 relation tags
    left: Expr
    right: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class Call(Expr):
    func: str  # duration | start | end | gap | span | distinct | concept
    args: tuple[Expr, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class BindingDecl:
    event_type: str
    var: str
    span: Span = _span_field()


@dataclass(frozen=True)
class Template:
    concept: str  # qualified name
    interval: Expr
    attributes: tuple[tuple[str, Expr], ...] = ()
    span: Span = _span_field()


@dataclass(frozen=True)
class MetaRule:
    name: str
    bindings: tuple[BindingDecl, ...]
    guard: Expr
    template: Template
    priority: int = 0
    span: Span = _span_field()


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[MetaRule, ...] = ()
    checked: bool = False
    source_name: str = field(default="<rules>", compare=False)
