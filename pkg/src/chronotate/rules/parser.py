"""Recursive-descent parser for the meta-rule language.

Grammar reference: docs/rules-grammar.md. Parsing collects diagnostics
instead of failing fast: a malformed rule is skipped up to the next
`rule` keyword and parsing resumes, so one pass reports every broken
rule. If any diagnostic was produced, no RuleSet is returned.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, DiagnosticsError
from .ast import (
    BindingDecl,
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
    Template,
    TemporalPred,
    UnaryOp,
    VarRef,
)
from .lexer import BUILTINS, TEMPORAL_KEYWORDS, Token, tokenize

_COMPARISON_OPS = {"==", "!=", "<", "<=", ">", ">="}


class _Abort(Exception):
    """Internal: unwind to the rule boundary after a reported error."""


class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.tokens = tokens
        self.filename = filename
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def error(self, tok: Token, message: str, code: str = "syntax_error") -> None:
        self.diagnostics.append(Diagnostic(
            self.filename, tok.line, tok.col, code, message,
            end_line=tok.line, end_col=tok.col + max(len(tok.text), 1),
        ))

    def abort(self, message: str) -> _Abort:
        tok = self.peek()
        found = tok.text if tok.kind != "eof" else "end of input"
        self.error(tok, f"expected {message}, found {found!r}")
        return _Abort()

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if self.at(kind, text):
            return self.next()
        raise self.abort(what or (repr(text) if text is not None else kind))

    def span_from(self, start: Token) -> Span:
        prev = self.tokens[self.pos - 1] if self.pos > 0 else start
        return Span(start.line, start.col, prev.line, prev.col + len(prev.text))

    # -- document ----------------------------------------------------------

    def parse_ruleset(self) -> RuleSet:
        rules: list[MetaRule] = []
        names: dict[str, MetaRule] = {}
        while not self.at("eof"):
            if not self.at("keyword", "rule"):
                self.error(self.peek(), f"expected 'rule', found {self.peek().text!r}")
                self.resync()
                continue
            try:
                rule = self.parse_rule()
            except _Abort:
                self.resync()
                continue
            if rule.name in names:
                self.error(
                    self.tokens[self.pos - 1],
                    f"duplicate rule name {rule.name!r}",
                    code="duplicate_rule",
                )
                continue
            names[rule.name] = rule
            rules.append(rule)
        return RuleSet(tuple(rules), source_name=self.filename)

    def resync(self) -> None:
        """Skip forward to the next `rule` keyword."""
        self.next()
        while not self.at("eof") and not self.at("keyword", "rule"):
            self.next()

    def parse_rule(self) -> MetaRule:
        start = self.expect("keyword", "rule")
        name_tok = self.expect("string", what="a quoted rule name")
        priority = 0
        if self.at("keyword", "priority"):
            self.next()
            sign = 1
            if self.at("op", "-"):
                self.next()
                sign = -1
            priority = sign * int(self.expect("int", what="an integer priority").value)  # type: ignore[arg-type]
        self.expect("punct", "{")
        self.expect("keyword", "when")
        bindings = [self.parse_binding()]
        while self.at("punct", ","):
            self.next()
            bindings.append(self.parse_binding())
        seen_vars: set[str] = set()
        for binding in bindings:
            if binding.var in seen_vars:
                self.diagnostics.append(Diagnostic(
                    self.filename, binding.span.line, binding.span.col,
                    "duplicate_variable", f"variable {binding.var!r} is bound twice",
                ))
            seen_vars.add(binding.var)
        self.expect("keyword", "where")
        guard = self.parse_expr()
        self.expect("keyword", "annotate")
        template = self.parse_template()
        self.expect("punct", "}")
        return MetaRule(
            str(name_tok.value), tuple(bindings), guard, template, priority,
            self.span_from(start),
        )

    def parse_binding(self) -> BindingDecl:
        type_tok = self.expect("ident", what="an event type tag")
        var_tok = self.expect("ident", what="a variable name")
        if var_tok.text in BUILTINS:
            self.error(var_tok, f"{var_tok.text!r} is a built-in function name", code="reserved_word")
        span = Span(type_tok.line, type_tok.col, var_tok.line, var_tok.col + len(var_tok.text))
        return BindingDecl(type_tok.text, var_tok.text, span)

    def parse_template(self) -> Template:
        start = self.peek()
        prefix = self.expect("ident", what="a qualified concept name")
        self.expect("punct", ":")
        local = self.expect("ident", what="a concept name after ':'")
        concept = f"{prefix.text}:{local.text}"
        self.expect("punct", "(")
        interval: Expr | None = None
        attributes: list[tuple[str, Expr]] = []
        while True:
            key_tok = self.expect("ident", what="an attribute name")
            self.expect("punct", "=")
            value = self.parse_expr()
            if key_tok.text == "interval":
                if interval is not None:
                    self.error(key_tok, "duplicate 'interval' argument")
                interval = value
            elif any(k == key_tok.text for k, _ in attributes):
                self.error(key_tok, f"duplicate attribute {key_tok.text!r}")
            else:
                attributes.append((key_tok.text, value))
            if self.at("punct", ","):
                self.next()
                continue
            break
        close = self.expect("punct", ")")
        if interval is None:
            self.error(close, "annotation template requires an 'interval' argument")
            raise _Abort()
        return Template(concept, interval, tuple(attributes), self.span_from(start))

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Expr:
        return self.parse_or()

    def parse_or(self) -> Expr:
        start = self.peek()
        left = self.parse_and()
        while self.at("keyword", "or"):
            self.next()
            right = self.parse_and()
            left = BoolOp("or", left, right, self.span_from(start))
        return left

    def parse_and(self) -> Expr:
        start = self.peek()
        left = self.parse_not()
        while self.at("keyword", "and"):
            self.next()
            right = self.parse_not()
            left = BoolOp("and", left, right, self.span_from(start))
        return left

    def parse_not(self) -> Expr:
        if self.at("keyword", "not"):
            start = self.next()
            operand = self.parse_not()
            return NotOp(operand, self.span_from(start))
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        start = self.peek()
        left = self.parse_additive()
        tok = self.peek()
        if tok.kind == "op" and tok.text in _COMPARISON_OPS:
            self.next()
            right = self.parse_additive()
            return BinaryOp(tok.text, left, right, self.span_from(start))
        if tok.kind == "keyword" and tok.text in TEMPORAL_KEYWORDS:
            self.next()
            right = self.parse_additive()
            return TemporalPred(tok.text, left, right, self.span_from(start))
        return left

    def parse_additive(self) -> Expr:
        start = self.peek()
        left = self.parse_multiplicative()
        while self.at("op", "+") or self.at("op", "-"):
            op = self.next().text
            right = self.parse_multiplicative()
            left = BinaryOp(op, left, right, self.span_from(start))
        return left

    def parse_multiplicative(self) -> Expr:
        start = self.peek()
        left = self.parse_unary()
        while self.at("op", "*") or self.at("op", "/"):
            op = self.next().text
            right = self.parse_unary()
            left = BinaryOp(op, left, right, self.span_from(start))
        return left

    def parse_unary(self) -> Expr:
        if self.at("op", "-"):
            start = self.next()
            operand = self.parse_unary()
            return UnaryOp("-", operand, self.span_from(start))
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return IntLit(tok.value, self.span_from(tok))  # type: ignore[arg-type]
        if tok.kind == "decimal":
            self.next()
            return DecimalLit(tok.value, self.span_from(tok))  # type: ignore[arg-type]
        if tok.kind == "string":
            self.next()
            return StringLit(tok.value, self.span_from(tok))  # type: ignore[arg-type]
        if tok.kind == "punct" and tok.text == "(":
            self.next()
            inner = self.parse_expr()
            self.expect("punct", ")")
            return inner
        if tok.kind == "ident":
            self.next()
            if tok.text in BUILTINS:
                self.expect("punct", "(", what=f"'(' after built-in {tok.text!r}")
                args = [self.parse_expr()]
                while self.at("punct", ","):
                    self.next()
                    args.append(self.parse_expr())
                self.expect("punct", ")")
                return Call(tok.text, tuple(args), self.span_from(tok))
            if self.at("punct", "."):
                self.next()
                field_tok = self.expect("ident", what="a field name after '.'")
                return FieldAccess(tok.text, field_tok.text, self.span_from(tok))
            return VarRef(tok.text, self.span_from(tok))
        raise self.abort("an expression")


def parse_rules(text: str, filename: str = "<rules>") -> RuleSet:
    """Parse a rule document; raise DiagnosticsError on any syntax problem."""
    tokens, lex_diagnostics = tokenize(text, filename)
    parser = _Parser(tokens, filename)
    ruleset = parser.parse_ruleset()
    diagnostics = lex_diagnostics + parser.diagnostics
    if diagnostics:
        raise DiagnosticsError(diagnostics)
    return ruleset
