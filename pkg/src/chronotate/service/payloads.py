"""Canonical JSON payload builders shared by the HTTP service and the CLI.

Both surfaces must emit byte-identical machine output for the same
operation, so every structured response is built here and serialized
with one canonical dumps configuration.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ..annotator import Annotation
from ..diagnostics import Diagnostic
from ..media import Event


def machine_json(payload) -> str:
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False)


def diagnostics_payload(diagnostics: list[Diagnostic]) -> dict:
    return {"diagnostics": [d.as_dict() for d in diagnostics]}


def event_payload(event: Event) -> dict:
    return {
        "id": event.event_id,
        "type": event.event_type,
        "start_ms": event.start_ms,
        "end_ms": event.end_ms,
        "confidence": event.confidence,
        "attributes": dict(sorted(event.attributes)),
    }


def timeline_payload(fps: Fraction | None, timeline: list[Event]) -> dict:
    return {
        "v": 1,
        "fps": None if fps is None else f"{fps.numerator}/{fps.denominator}",
        "events": [event_payload(e) for e in timeline],
    }


def annotation_payload(annotation: Annotation) -> dict:
    return {
        "id": annotation.id,
        "concept": annotation.concept,
        "start_ms": annotation.interval.start_ms,
        "end_ms": annotation.interval.end_ms,
        "attributes": dict(sorted(annotation.attributes)),
        "provenance": [
            {"rule": p.rule, "events": list(p.events)} for p in annotation.provenance
        ],
    }


def query_payload(result, pair_form: bool) -> dict:
    if pair_form:
        return {"pairs": [[annotation_payload(a), annotation_payload(b)] for a, b in result]}
    return {"annotations": [annotation_payload(a) for a in result]}


def shots_payload(shots: list[Event]) -> dict:
    return {"shots": [event_payload(s) for s in shots]}


def validation_payload(kind: str, issues) -> dict:
    return {
        "kind": kind,
        "issues": [
            {"kind": issue.kind, "message": issue.message, "names": list(issue.names)}
            for issue in issues
        ],
    }
