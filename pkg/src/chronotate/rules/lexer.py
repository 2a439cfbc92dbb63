"""Tokenizer for the meta-rule language."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..diagnostics import Diagnostic
from ..temporal import ALL_RELATIONS

TEMPORAL_KEYWORDS = frozenset(r.tag for r in ALL_RELATIONS)

KEYWORDS = frozenset({"rule", "when", "where", "annotate", "priority", "and", "or", "not"}) | TEMPORAL_KEYWORDS

BUILTINS = frozenset({"duration", "start", "end", "gap", "span", "distinct", "concept"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<decimal>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|!=|<=|>=|[<>+\-*/])
  | (?P<punct>[{}(),=.:])
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | ident | int | decimal | string | op | punct | eof
    text: str
    value: object
    line: int
    col: int


def tokenize(text: str, filename: str) -> tuple[list[Token], list[Diagnostic]]:
    """Scan the whole input, collecting diagnostics for bad characters."""
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            if ch == '"':
                diagnostics.append(Diagnostic(
                    filename, line, col, "syntax_error", "unterminated string literal",
                ))
                break
            diagnostics.append(Diagnostic(
                filename, line, col, "syntax_error", f"unexpected character {ch!r}",
            ))
            pos += 1
            col += 1
            continue
        kind = m.lastgroup
        raw = m.group()
        if kind == "int":
            tokens.append(Token("int", raw, int(raw), line, col))
        elif kind == "decimal":
            tokens.append(Token("decimal", raw, float(raw), line, col))
        elif kind == "string":
            tokens.append(Token("string", raw, _unescape(raw), line, col))
        elif kind == "ident":
            tok_kind = "keyword" if raw in KEYWORDS else "ident"
            tokens.append(Token(tok_kind, raw, raw, line, col))
        elif kind in ("op", "punct"):
            tokens.append(Token(kind, raw, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(Token("eof", "", None, line, col))
    return tokens, diagnostics


def _unescape(raw: str) -> str:
    out = []
    i = 1
    while i < len(raw) - 1:
        ch = raw[i]
        if ch == "\\" and i + 1 < len(raw) - 1:
            out.append(_ESCAPES.get(raw[i + 1], raw[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def escape_string(value: str) -> str:
    out = value.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'
