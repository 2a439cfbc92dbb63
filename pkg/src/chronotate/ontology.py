"""Domain and time ontology documents: loading, validation, queries.

An ontology document is UTF-8 text, one header line plus a sequence of
blocks (see docs/ontology-format.md for the grammar):

    ontology soccer version "1.0"
    concept Goal { scored_by: string; }
    concept FirstHalf { timeclass = soccertime:FirstHalf; }
    individual Reds : Team { name = "Reds"; }

Time ontologies use `timeclass` blocks instead, carrying duration axioms
in milliseconds and an ordered part structure:

    ontology soccertime version "1.0"
    timeclass HalfTime { duration = 2700000..2700000 ms; }
    timeclass Match { parts = FirstHalf before SecondHalf; }

A document containing `timeclass` blocks loads as a TimeOntology and may
not also declare concepts or individuals. Ontologies are immutable after
load; expressivity is deliberately small (no description-logic
reasoning): concepts form an acyclic subsumption DAG, individuals assert
one concept, attribute values are string, int or decimal literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .temporal import AllenRelation, Interval

AttrValue = Union[str, int, float]

VALUE_TYPES = ("string", "int", "decimal")


class ParseError(Exception):
    """Syntax error with 1-based source position."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class UnresolvedReference(Exception):
    def __init__(self, name: str):
        super().__init__(f"unresolved reference: {name}")
        self.name = name


class CyclicDefinition(Exception):
    def __init__(self, names: tuple[str, ...]):
        super().__init__("cyclic definition: " + " -> ".join(names))
        self.names = names


class NotFound(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"no entity named {self.name!r}"


class NoDurationAxiom(Exception):
    def __init__(self, name: str):
        super().__init__(f"time class {name!r} declares no duration bounds")
        self.name = name


@dataclass(frozen=True)
class Concept:
    """Named domain concept; `name` and all references are qualified."""

    name: str
    parents: tuple[str, ...] = ()
    properties: tuple[tuple[str, str], ...] = ()
    timeclass: str | None = None


@dataclass(frozen=True)
class Individual:
    name: str
    concept: str
    attributes: tuple[tuple[str, AttrValue], ...] = ()


@dataclass(frozen=True)
class TimeClass:
    name: str
    duration_ms: tuple[int, int] | None = None
    parts: tuple[str, ...] = ()
    part_relations: tuple[AllenRelation, ...] = ()


@dataclass(frozen=True)
class DomainOntology:
    namespace: str
    version: str
    concepts: tuple[Concept, ...] = ()
    individuals: tuple[Individual, ...] = ()

    def entities(self) -> Iterator[Concept | Individual]:
        yield from self.concepts
        yield from self.individuals


@dataclass(frozen=True)
class TimeOntology:
    namespace: str
    version: str
    classes: tuple[TimeClass, ...] = ()

    def entities(self) -> Iterator[TimeClass]:
        yield from self.classes


Ontology = Union[DomainOntology, TimeOntology]


@dataclass(frozen=True)
class ValidationIssue:
    kind: str  # "cycle" | "dangling"
    message: str
    names: tuple[str, ...]


@dataclass(frozen=True)
class DurationVerdict:
    """Outcome of checking an interval against a duration axiom.

    deviation_ms is 0 inside [min, max], positive above max (by how much),
    negative below min. Conformance applies the tolerance; the deviation
    is always measured against the raw bounds.
    """

    conforms: bool
    deviation_ms: int
    class_name: str
    duration_ms: int
    bounds: tuple[int, int]


# ---------------------------------------------------------------------------
# Tokenizer


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<decimal>-?\d+\.\d+)
  | (?P<int>-?\d+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<dots>\.\.)
  | (?P<punct>[{};:=,])
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


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


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | int | decimal | string | punct
    value: AttrValue
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        raw = m.group()
        if kind == "int":
            tokens.append(_Token("int", int(raw), line, col))
        elif kind == "decimal":
            tokens.append(_Token("decimal", float(raw), line, col))
        elif kind == "string":
            tokens.append(_Token("string", _unescape(raw), line, col))
        elif kind == "ident":
            tokens.append(_Token("ident", raw, line, col))
        elif kind in ("punct", "dots"):
            tokens.append(_Token("punct", raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("punct", "", 1, 1)
            raise ParseError(last.line, last.col, "unexpected end of document")
        self.pos += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(tok.line, tok.col, f"expected {want!r}, found {tok.value!r}")
        return tok

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "punct" and tok.value == value

    def at_ident(self, value: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "ident" and (value is None or tok.value == value)

    def qname(self) -> str:
        """A reference: `Local` or `prefix:Local` with no surrounding context."""
        first = self.expect("ident")
        if self.at_punct(":"):
            self.next()
            second = self.expect("ident")
            return f"{first.value}:{second.value}"
        return str(first.value)

    def parse_document(self) -> Ontology:
        self.expect("ident", "ontology")
        prefix = str(self.expect("ident").value)
        self.expect("ident", "version")
        version = str(self.expect("string").value)

        concepts: list[Concept] = []
        individuals: list[Individual] = []
        classes: list[TimeClass] = []
        seen: dict[str, _Token] = {}

        while (tok := self.peek()) is not None:
            if tok.kind != "ident":
                raise ParseError(tok.line, tok.col, f"expected a block keyword, found {tok.value!r}")
            if tok.value == "concept":
                concepts.append(self._concept(prefix, seen))
            elif tok.value == "individual":
                individuals.append(self._individual(prefix, seen))
            elif tok.value == "timeclass":
                classes.append(self._timeclass(prefix, seen))
            else:
                raise ParseError(
                    tok.line, tok.col,
                    f"expected 'concept', 'individual' or 'timeclass', found {tok.value!r}",
                )

        if classes and (concepts or individuals):
            raise ParseError(1, 1, "a document may declare either time classes or domain entities, not both")
        if classes:
            return TimeOntology(prefix, version, tuple(classes))
        return DomainOntology(prefix, version, tuple(concepts), tuple(individuals))

    def _declare(self, prefix: str, seen: dict[str, _Token], tok: _Token, local: str) -> str:
        name = f"{prefix}:{local}"
        if name in seen:
            raise ParseError(tok.line, tok.col, f"duplicate declaration of {name!r}")
        seen[name] = tok
        return name

    def _qualify(self, prefix: str, ref: str) -> str:
        return ref if ":" in ref else f"{prefix}:{ref}"

    def _concept(self, prefix: str, seen: dict[str, _Token]) -> Concept:
        self.expect("ident", "concept")
        name_tok = self.expect("ident")
        name = self._declare(prefix, seen, name_tok, str(name_tok.value))
        parents: list[str] = []
        if self.at_ident("extends"):
            self.next()
            parents.append(self._qualify(prefix, self.qname()))
            while self.at_punct(","):
                self.next()
                parents.append(self._qualify(prefix, self.qname()))
        self.expect("punct", "{")
        properties: list[tuple[str, str]] = []
        timeclass: str | None = None
        while not self.at_punct("}"):
            key_tok = self.expect("ident")
            key = str(key_tok.value)
            if key == "timeclass":
                self.expect("punct", "=")
                timeclass = self._qualify(prefix, self.qname())
            else:
                self.expect("punct", ":")
                type_tok = self.expect("ident")
                if type_tok.value not in VALUE_TYPES:
                    raise ParseError(
                        type_tok.line, type_tok.col,
                        f"unknown value type {type_tok.value!r}; expected one of {', '.join(VALUE_TYPES)}",
                    )
                if any(k == key for k, _ in properties):
                    raise ParseError(key_tok.line, key_tok.col, f"duplicate property {key!r}")
                properties.append((key, str(type_tok.value)))
            self.expect("punct", ";")
        self.expect("punct", "}")
        return Concept(name, tuple(parents), tuple(properties), timeclass)

    def _individual(self, prefix: str, seen: dict[str, _Token]) -> Individual:
        self.expect("ident", "individual")
        name_tok = self.expect("ident")
        name = self._declare(prefix, seen, name_tok, str(name_tok.value))
        self.expect("punct", ":")
        concept = self._qualify(prefix, self.qname())
        self.expect("punct", "{")
        attributes: list[tuple[str, AttrValue]] = []
        while not self.at_punct("}"):
            key_tok = self.expect("ident")
            self.expect("punct", "=")
            value_tok = self.next()
            if value_tok.kind not in ("string", "int", "decimal"):
                raise ParseError(
                    value_tok.line, value_tok.col,
                    f"expected a string, int or decimal literal, found {value_tok.value!r}",
                )
            if any(k == key_tok.value for k, _ in attributes):
                raise ParseError(key_tok.line, key_tok.col, f"duplicate attribute {key_tok.value!r}")
            attributes.append((str(key_tok.value), value_tok.value))
            self.expect("punct", ";")
        self.expect("punct", "}")
        return Individual(name, concept, tuple(attributes))

    def _timeclass(self, prefix: str, seen: dict[str, _Token]) -> TimeClass:
        self.expect("ident", "timeclass")
        name_tok = self.expect("ident")
        name = self._declare(prefix, seen, name_tok, str(name_tok.value))
        self.expect("punct", "{")
        duration: tuple[int, int] | None = None
        parts: list[str] = []
        relations: list[AllenRelation] = []
        while not self.at_punct("}"):
            key_tok = self.expect("ident")
            if key_tok.value == "duration":
                self.expect("punct", "=")
                lo_tok = self.expect("int")
                lo = int(lo_tok.value)
                hi = lo
                if self.at_punct(".."):
                    self.next()
                    hi = int(self.expect("int").value)
                self.expect("ident", "ms")
                if lo < 0 or hi < lo:
                    raise ParseError(lo_tok.line, lo_tok.col, f"invalid duration bounds {lo}..{hi}")
                duration = (lo, hi)
            elif key_tok.value == "parts":
                self.expect("punct", "=")
                parts.append(self._qualify(prefix, self.qname()))
                while self.at_ident() and not self.at_punct(";"):
                    rel_tok = self.expect("ident")
                    try:
                        relations.append(AllenRelation.from_tag(str(rel_tok.value)))
                    except ValueError:
                        raise ParseError(
                            rel_tok.line, rel_tok.col,
                            f"unknown relation keyword {rel_tok.value!r} between parts",
                        ) from None
                    parts.append(self._qualify(prefix, self.qname()))
            else:
                raise ParseError(
                    key_tok.line, key_tok.col,
                    f"expected 'duration' or 'parts', found {key_tok.value!r}",
                )
            self.expect("punct", ";")
        self.expect("punct", "}")
        return TimeClass(name, duration, tuple(parts), tuple(relations))


# ---------------------------------------------------------------------------
# Operations


def load_ontology(document: str) -> Ontology:
    """Parse and fully resolve an ontology document.

    Raises ParseError for syntax problems, UnresolvedReference for the
    first dangling internal reference and CyclicDefinition for cycles in
    the subsumption or part-of graph.
    """
    ontology = _Parser(document).parse_document()
    issues = validate(ontology)
    for issue in issues:
        if issue.kind == "dangling":
            raise UnresolvedReference(issue.names[-1])
    for issue in issues:
        if issue.kind == "cycle":
            raise CyclicDefinition(issue.names)
    return ontology


def _local(namespace: str, name: str) -> str:
    prefix, _, local = name.partition(":")
    return local if local and prefix == namespace else name


def _literal(value: AttrValue) -> str:
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        escaped = escaped.replace("\n", "\\n").replace("\t", "\\t")
        return f'"{escaped}"'
    return repr(value)


def serialize(ontology: Ontology) -> str:
    """Canonical document text; load_ontology(serialize(o)) == o."""
    ns = ontology.namespace
    lines = [f'ontology {ns} version "{ontology.version}"', ""]
    if isinstance(ontology, TimeOntology):
        for tc in ontology.classes:
            lines.append(f"timeclass {_local(ns, tc.name)} {{")
            if tc.duration_ms is not None:
                lo, hi = tc.duration_ms
                lines.append(f"  duration = {lo}..{hi} ms;")
            if tc.parts:
                chain = [_local(ns, tc.parts[0])]
                for rel, part in zip(tc.part_relations, tc.parts[1:]):
                    chain.append(rel.tag)
                    chain.append(_local(ns, part))
                lines.append(f"  parts = {' '.join(chain)};")
            lines.append("}")
        return "\n".join(lines) + "\n"
    for concept in ontology.concepts:
        head = f"concept {_local(ns, concept.name)}"
        if concept.parents:
            head += " extends " + ", ".join(_local(ns, p) for p in concept.parents)
        lines.append(head + " {")
        for key, value_type in concept.properties:
            lines.append(f"  {key}: {value_type};")
        if concept.timeclass is not None:
            lines.append(f"  timeclass = {concept.timeclass};")
        lines.append("}")
    for ind in ontology.individuals:
        lines.append(f"individual {_local(ns, ind.name)} : {_local(ns, ind.concept)} {{")
        for key, value in ind.attributes:
            lines.append(f"  {key} = {_literal(value)};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def _find_cycles(edges: dict[str, tuple[str, ...]]) -> list[tuple[str, ...]]:
    cycles = []
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    stack: list[str] = []

    def visit(node: str) -> None:
        state[node] = 1
        stack.append(node)
        for succ in edges.get(node, ()):
            if succ not in edges:
                continue
            if state.get(succ) == 1:
                cycles.append(tuple(stack[stack.index(succ):]) + (succ,))
            elif succ not in state:
                visit(succ)
        stack.pop()
        state[node] = 2

    for node in edges:
        if node not in state:
            visit(node)
    return cycles


def validate(ontology: Ontology) -> list[ValidationIssue]:
    """Report every dangling internal reference and every cycle.

    Empty exactly when the ontology's structural invariants hold. A
    concept's `timeclass` link points into a different ontology and is
    checked at annotation time, not here.
    """
    issues: list[ValidationIssue] = []
    if isinstance(ontology, TimeOntology):
        declared = {tc.name for tc in ontology.classes}
        edges = {tc.name: tc.parts for tc in ontology.classes}
        for tc in ontology.classes:
            for part in tc.parts:
                if part not in declared:
                    issues.append(ValidationIssue(
                        "dangling",
                        f"time class {tc.name!r} references undeclared part {part!r}",
                        (tc.name, part),
                    ))
        for cycle in _find_cycles(edges):
            issues.append(ValidationIssue(
                "cycle", "part-of cycle: " + " -> ".join(cycle), cycle,
            ))
        return issues

    declared = {c.name for c in ontology.concepts}
    edges = {c.name: c.parents for c in ontology.concepts}
    for concept in ontology.concepts:
        for parent in concept.parents:
            if parent not in declared:
                issues.append(ValidationIssue(
                    "dangling",
                    f"concept {concept.name!r} extends undeclared {parent!r}",
                    (concept.name, parent),
                ))
    for ind in ontology.individuals:
        if ind.concept not in declared:
            issues.append(ValidationIssue(
                "dangling",
                f"individual {ind.name!r} asserts undeclared concept {ind.concept!r}",
                (ind.name, ind.concept),
            ))
    for cycle in _find_cycles(edges):
        issues.append(ValidationIssue(
            "cycle", "subsumption cycle: " + " -> ".join(cycle), cycle,
        ))
    return issues


def resolve(ontology: Ontology, name: str):
    """Look up a concept, individual or time class by (qualified) name."""
    qualified = name if ":" in name else f"{ontology.namespace}:{name}"
    for entity in ontology.entities():
        if entity.name == qualified:
            return entity
    raise NotFound(name)


def ancestors(ontology: DomainOntology, name: str) -> set[str]:
    """All transitive parents of a concept (excluding itself)."""
    concept = resolve(ontology, name)
    if not isinstance(concept, Concept):
        raise NotFound(name)
    by_name = {c.name: c for c in ontology.concepts}
    out: set[str] = set()
    frontier = list(concept.parents)
    while frontier:
        parent = frontier.pop()
        if parent in out:
            continue
        out.add(parent)
        if parent in by_name:
            frontier.extend(by_name[parent].parents)
    return out


def check_duration(
    time_ontology: TimeOntology,
    class_name: str,
    interval: Interval,
    tolerance_ms: int = 0,
) -> DurationVerdict:
    """Check an interval's duration against a time class axiom."""
    tc = resolve(time_ontology, class_name)
    if tc.duration_ms is None:
        raise NoDurationAxiom(tc.name)
    lo, hi = tc.duration_ms
    duration = interval.duration_ms
    if duration > hi:
        deviation = duration - hi
    elif duration < lo:
        deviation = duration - lo
    else:
        deviation = 0
    conforms = lo - tolerance_ms <= duration <= hi + tolerance_ms
    return DurationVerdict(conforms, deviation, tc.name, duration, (lo, hi))
