"""The temporal video annotator: pipeline, persistence, queries, checks.

`annotate` wires the whole flow for one project: ingest feature streams,
detect shots, ingest external detector events, merge the timeline,
check and evaluate the meta-rules, and materialize ontology-linked
annotations with provenance. The resulting AnnotationSet serializes to a
canonical, byte-stable document (docs/file-formats.md) used verbatim by
the CLI, the HTTP service and the golden-file tests.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import media, ontology as ont
from .rules import (
    EvalLimits,
    EventTypeRegistry,
    Provenance,
    RuleSet,
    check_rules,
    evaluate,
    parse_rules,
)
from .temporal import (
    AllenRelation,
    InconsistentNetwork,
    Interval,
    IntervalNetwork,
    RelationSet,
    propagate,
    relation,
)

logger = logging.getLogger(__name__)

DOCUMENT_VERSION = 1


class PipelineError(Exception):
    """An upstream failure, tagged with the pipeline stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage={stage}: {cause}")
        self.stage = stage
        self.cause = cause


class DocumentFormatError(ValueError):
    pass


class UnknownConcept(Exception):
    def __init__(self, name: str):
        super().__init__(f"unknown concept in query: {name!r}")
        self.name = name


@dataclass(frozen=True)
class DetectorParams:
    threshold: float = 0.5
    min_shot_frames: int = 5


@dataclass(frozen=True)
class OntologyPin:
    prefix: str
    version: str


@dataclass(frozen=True)
class Annotation:
    """An ontology-linked assertion over a media interval.

    The id is a content hash of (concept, interval, attributes), so
    identical assertions from different runs or machines share ids.
    Provenance lists every rule firing that produced the assertion.
    """

    id: str
    concept: str
    interval: Interval
    attributes: tuple[tuple[str, media.AttrValue], ...]
    provenance: tuple[Provenance, ...]

    @property
    def attrs_dict(self) -> dict[str, media.AttrValue]:
        return dict(self.attributes)


@dataclass(frozen=True)
class AnnotationSet:
    project_id: str
    fps: Fraction | None
    domain_pin: OntologyPin | None
    time_pin: OntologyPin | None
    rules_sha256: str
    detector: DetectorParams
    annotations: tuple[Annotation, ...]


@dataclass(frozen=True)
class Project:
    """Everything one annotation run needs, with paths resolved from `root`."""

    id: str
    root: Path
    features: tuple[str, ...]
    events: tuple[str, ...]
    domain_ontology: str
    time_ontology: str
    rules: str
    detector: DetectorParams = DetectorParams()
    duration_tolerance_ms: int = 0

    def path(self, name: str) -> Path:
        return self.root / name


@dataclass(frozen=True)
class TemporalQuery:
    """Interval form: (concept filter, relation, reference interval).
    Pair form: (concept, relation, concept_b)."""

    relation: AllenRelation
    concept: str | None = None
    interval: Interval | None = None
    concept_b: str | None = None

    def __post_init__(self) -> None:
        if (self.interval is None) == (self.concept_b is None):
            raise ValueError("query takes either a reference interval or a second concept")
        if self.concept_b is not None and self.concept is None:
            raise ValueError("pair-form query needs both concepts")


def annotation_id(concept: str, interval: Interval, attributes) -> str:
    payload = json.dumps(
        {
            "concept": concept,
            "start_ms": interval.start_ms,
            "end_ms": interval.end_ms,
            "attributes": dict(sorted(attributes)),
        },
        separators=(",", ":"),
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def load_project(path: str | Path) -> Project:
    """Read a project file (JSON, v=1); relative paths resolve beside it."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise PipelineError("project", exc) from exc
    if not isinstance(raw, dict) or raw.get("v") != 1:
        raise PipelineError("project", ValueError(f"{path}: expected a project object with v=1"))
    try:
        detector_raw = raw.get("detector", {})
        detector = DetectorParams(
            float(detector_raw.get("threshold", 0.5)),
            int(detector_raw.get("min_shot_frames", 5)),
        )
        project = Project(
            id=str(raw["id"]),
            root=path.parent,
            features=tuple(raw.get("features", [])),
            events=tuple(raw.get("events", [])),
            domain_ontology=str(raw["domain_ontology"]),
            time_ontology=str(raw["time_ontology"]),
            rules=str(raw["rules"]),
            detector=detector,
            duration_tolerance_ms=int(raw.get("duration_tolerance_ms", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise PipelineError("project", ValueError(f"{path}: {exc}")) from exc
    if project.detector.threshold < 0:
        raise PipelineError("project", ValueError("detector threshold must be non-negative"))
    if project.detector.min_shot_frames < 1:
        raise PipelineError("project", ValueError("min_shot_frames must be at least 1"))
    if project.duration_tolerance_ms < 0:
        raise PipelineError("project", ValueError("duration_tolerance_ms must be non-negative"))
    return project


def load_ontologies(project: Project) -> tuple[ont.DomainOntology, ont.TimeOntology]:
    try:
        dom = ont.load_ontology(project.path(project.domain_ontology).read_text(encoding="utf-8"))
        time = ont.load_ontology(project.path(project.time_ontology).read_text(encoding="utf-8"))
    except Exception as exc:
        raise PipelineError("ontology", exc) from exc
    if not isinstance(dom, ont.DomainOntology):
        raise PipelineError("ontology", ValueError("domain_ontology does not declare domain entities"))
    if not isinstance(time, ont.TimeOntology):
        raise PipelineError("ontology", ValueError("time_ontology does not declare time classes"))
    return dom, time


def build_timeline(project: Project) -> tuple[Fraction | None, list[media.Event]]:
    """Ingest + detect + merge, without touching the rules."""
    streams = []
    try:
        for feature_path in project.features:
            streams.append(media.ingest_features(project.path(feature_path)))
    except Exception as exc:
        raise PipelineError("ingest", exc) from exc
    if streams:
        fps_values = {s.fps for s in streams}
        bin_values = {s.bins for s in streams}
        if len(fps_values) > 1 or len(bin_values) > 1:
            raise PipelineError(
                "ingest", ValueError("all feature streams in a project must share fps and bin count")
            )
    sources: list[list[media.Event]] = []
    try:
        for index, stream in enumerate(streams):
            sources.append(media.detect_shots(
                stream, project.detector.threshold, project.detector.min_shot_frames, index,
            ))
    except Exception as exc:
        raise PipelineError("detect", exc) from exc
    try:
        for event_path in project.events:
            sources.append(media.ingest_events(project.path(event_path)))
    except Exception as exc:
        raise PipelineError("events", exc) from exc
    timeline = media.merge_timeline(sources)
    return (streams[0].fps if streams else None), timeline


def load_checked_rules(
    project: Project,
    dom: ont.DomainOntology,
    time: ont.TimeOntology,
    timeline: list[media.Event],
) -> tuple[RuleSet, str]:
    try:
        text = project.path(project.rules).read_text(encoding="utf-8")
    except OSError as exc:
        raise PipelineError("rules", exc) from exc
    digest = hashlib.sha256(text.encode()).hexdigest()
    registry = EventTypeRegistry.default()
    registry.absorb_events(timeline)
    try:
        ruleset = parse_rules(text, project.rules)
        ruleset = check_rules(ruleset, dom, time, registry)
    except Exception as exc:
        raise PipelineError("rules", exc) from exc
    return ruleset, digest


def annotate(project: Project, limits: EvalLimits | None = None) -> AnnotationSet:
    """Run the full pipeline for a project; deterministic for fixed inputs."""
    dom, time = load_ontologies(project)
    fps, timeline = build_timeline(project)
    ruleset, rules_digest = load_checked_rules(project, dom, time, timeline)

    try:
        result = evaluate(ruleset, timeline, dom, time, limits)
    except Exception as exc:
        raise PipelineError("evaluate", exc) from exc
    for fault in result.faults:
        logger.warning(
            "rule %r faulted on %s: %s", fault.rule, dict(fault.binding), fault.message
        )

    annotations = [
        Annotation(
            annotation_id(a.concept, a.interval, a.attributes),
            a.concept,
            a.interval,
            a.attributes,
            a.provenance,
        )
        for a in result.assertions
    ]
    annotations.sort(key=lambda a: (a.interval.start_ms, a.interval.end_ms, a.concept, a.id))
    return AnnotationSet(
        project_id=project.id,
        fps=fps,
        domain_pin=OntologyPin(dom.namespace, dom.version),
        time_pin=OntologyPin(time.namespace, time.version),
        rules_sha256=rules_digest,
        detector=project.detector,
        annotations=tuple(annotations),
    )


# ---------------------------------------------------------------------------
# Persistence: canonical, byte-stable annotation documents.


def _fps_str(fps: Fraction | None) -> str | None:
    return None if fps is None else f"{fps.numerator}/{fps.denominator}"


def _pin_obj(pin: OntologyPin | None):
    return None if pin is None else {"prefix": pin.prefix, "version": pin.version}


def serialize_annotations(aset: AnnotationSet) -> str:
    """Canonical document text: header line then one record per annotation."""
    lines = [json.dumps(
        {
            "v": DOCUMENT_VERSION,
            "project": aset.project_id,
            "fps": _fps_str(aset.fps),
            "domain_ontology": _pin_obj(aset.domain_pin),
            "time_ontology": _pin_obj(aset.time_pin),
            "rules_sha256": aset.rules_sha256,
            "detector": {
                "threshold": aset.detector.threshold,
                "min_shot_frames": aset.detector.min_shot_frames,
            },
        },
        separators=(",", ":"),
    )]
    for a in aset.annotations:
        lines.append(json.dumps(
            {
                "id": a.id,
                "concept": a.concept,
                "start_ms": a.interval.start_ms,
                "end_ms": a.interval.end_ms,
                "attributes": dict(sorted(a.attributes)),
                "provenance": [
                    {"rule": p.rule, "events": list(p.events)} for p in a.provenance
                ],
            },
            separators=(",", ":"),
        ))
    return "\n".join(lines) + "\n"


def save(aset: AnnotationSet, path: str | Path) -> None:
    Path(path).write_text(serialize_annotations(aset), encoding="utf-8")


def _parse_pin(obj) -> OntologyPin | None:
    if obj is None:
        return None
    return OntologyPin(str(obj["prefix"]), str(obj["version"]))


def load(path: str | Path) -> AnnotationSet:
    """Parse an annotation document; exact inverse of save."""
    return parse_annotations(Path(path).read_text(encoding="utf-8"))


def parse_annotations(text: str) -> AnnotationSet:
    lines = text.splitlines()
    if not lines:
        raise DocumentFormatError("empty annotation document")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DocumentFormatError(f"malformed header: {exc.msg}") from None
    if not isinstance(header, dict) or "v" not in header:
        raise DocumentFormatError("first line must be the document header")
    if header["v"] != DOCUMENT_VERSION:
        raise DocumentFormatError(
            f"unsupported document version {header['v']!r}; this build reads v={DOCUMENT_VERSION}"
        )
    fps = None
    if header.get("fps") is not None:
        num, _, den = str(header["fps"]).partition("/")
        fps = Fraction(int(num), int(den))
    detector_obj = header.get("detector", {})
    detector = DetectorParams(
        float(detector_obj["threshold"]), int(detector_obj["min_shot_frames"])
    )

    annotations = []
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DocumentFormatError(f"line {line_number}: {exc.msg}") from None
        try:
            interval = Interval.of(int(record["start_ms"]), int(record["end_ms"]))
            attributes = tuple(sorted(record.get("attributes", {}).items()))
            provenance = tuple(
                Provenance(str(p["rule"]), tuple(str(e) for e in p["events"]))
                for p in record["provenance"]
            )
            annotation = Annotation(
                str(record["id"]), str(record["concept"]), interval, attributes, provenance
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentFormatError(f"line {line_number}: {exc}") from exc
        expected = annotation_id(annotation.concept, interval, attributes)
        if annotation.id != expected:
            raise DocumentFormatError(
                f"line {line_number}: id {annotation.id!r} does not match content hash {expected!r}"
            )
        annotations.append(annotation)

    keys = [(a.interval.start_ms, a.interval.end_ms, a.concept, a.id) for a in annotations]
    if keys != sorted(keys):
        raise DocumentFormatError("annotation records are not in canonical order")
    if len({a.id for a in annotations}) != len(annotations):
        raise DocumentFormatError("duplicate annotation ids")

    return AnnotationSet(
        project_id=str(header["project"]),
        fps=fps,
        domain_pin=_parse_pin(header.get("domain_ontology")),
        time_pin=_parse_pin(header.get("time_ontology")),
        rules_sha256=str(header["rules_sha256"]),
        detector=detector,
        annotations=tuple(annotations),
    )


# ---------------------------------------------------------------------------
# Temporal queries


def query(
    aset: AnnotationSet,
    q: TemporalQuery,
    dom: ont.DomainOntology | None = None,
):
    """Run a temporal query against an annotation set.

    Interval form returns annotations; pair form returns (a, b) pairs of
    distinct annotations. When a domain ontology is supplied, filter
    concepts must resolve in it (UnknownConcept otherwise).
    """
    if dom is not None:
        for name in (q.concept, q.concept_b):
            if name is None:
                continue
            try:
                entity = ont.resolve(dom, name)
            except ont.NotFound:
                raise UnknownConcept(name) from None
            if not isinstance(entity, ont.Concept):
                raise UnknownConcept(name)

    if q.interval is not None:
        return [
            a
            for a in aset.annotations
            if (q.concept is None or a.concept == q.concept)
            and relation(a.interval, q.interval) is q.relation
        ]
    return [
        (a, b)
        for a in aset.annotations
        for b in aset.annotations
        if a.id != b.id
        and a.concept == q.concept
        and b.concept == q.concept_b
        and relation(a.interval, b.interval) is q.relation
    ]


# ---------------------------------------------------------------------------
# Consistency checking against the time ontology


@dataclass(frozen=True)
class DurationViolation:
    annotation_id: str
    concept: str
    time_class: str
    deviation_ms: int


@dataclass(frozen=True)
class OrderingViolation:
    annotation_a: str
    annotation_b: str
    required: AllenRelation
    observed: AllenRelation


@dataclass(frozen=True)
class LinkError:
    concept: str
    time_class: str


@dataclass(frozen=True)
class ConsistencyReport:
    duration_violations: tuple[DurationViolation, ...]
    ordering_violations: tuple[OrderingViolation, ...]
    link_errors: tuple[LinkError, ...]
    network_consistent: bool
    checked_annotations: int
    unlinked_annotations: int

    @property
    def ok(self) -> bool:
        return (
            not self.duration_violations
            and not self.ordering_violations
            and not self.link_errors
            and self.network_consistent
        )


def consistency_check(
    aset: AnnotationSet,
    time: ont.TimeOntology,
    dom: ont.DomainOntology,
    tolerance_ms: int = 0,
) -> ConsistencyReport:
    """Check annotations against the time ontology's axioms.

    Annotations map to time classes through their concept's `timeclass`
    attribute in the domain ontology; unlinked concepts are skipped and
    counted. Duration axioms run through check_duration; part-order
    axioms become constraints on the interval network built from the
    annotation intervals, and the propagated network's consistency is
    reported alongside the directly violated pairs.
    """
    linked: dict[str, ont.TimeClass] = {}  # annotation id -> time class
    link_errors: list[LinkError] = []
    unlinked = 0
    for a in aset.annotations:
        try:
            concept = ont.resolve(dom, a.concept)
        except ont.NotFound:
            unlinked += 1
            continue
        if not isinstance(concept, ont.Concept) or concept.timeclass is None:
            unlinked += 1
            continue
        try:
            tc = ont.resolve(time, concept.timeclass)
        except ont.NotFound:
            link_errors.append(LinkError(a.concept, concept.timeclass))
            continue
        linked[a.id] = tc

    duration_violations = []
    for a in aset.annotations:
        tc = linked.get(a.id)
        if tc is None or tc.duration_ms is None:
            continue
        verdict = ont.check_duration(time, tc.name, a.interval, tolerance_ms)
        if not verdict.conforms:
            duration_violations.append(
                DurationViolation(a.id, a.concept, tc.name, verdict.deviation_ms)
            )

    by_class: dict[str, list[Annotation]] = {}
    for a in aset.annotations:
        if a.id in linked:
            by_class.setdefault(linked[a.id].name, []).append(a)

    by_id = {a.id: a for a in aset.annotations}
    constraints: dict[tuple[str, str], RelationSet] = {}
    ids = [a.id for a in aset.annotations]
    for i in ids:
        for j in ids:
            if i != j:
                constraints[i, j] = RelationSet.of(
                    relation(by_id[i].interval, by_id[j].interval)
                )

    ordering_violations = []
    for tc in time.classes:
        for (part_a, required, part_b) in zip(tc.parts, tc.part_relations, tc.parts[1:]):
            for a in by_class.get(part_a, []):
                for b in by_class.get(part_b, []):
                    if a.id == b.id:
                        continue
                    observed = relation(a.interval, b.interval)
                    if observed is not required:
                        ordering_violations.append(
                            OrderingViolation(a.id, b.id, required, observed)
                        )
                    constraints[a.id, b.id] = constraints[a.id, b.id] & RelationSet.of(required)
                    constraints[b.id, a.id] = constraints[b.id, a.id] & RelationSet.of(required.invert())

    network_consistent = True
    if ids:
        try:
            net = IntervalNetwork(tuple(ids), {
                **constraints,
                **{(i, i): RelationSet.of(AllenRelation.EQUALS) for i in ids},
            })
            propagate(net)
        except InconsistentNetwork:
            network_consistent = False

    return ConsistencyReport(
        tuple(duration_violations),
        tuple(ordering_violations),
        tuple(link_errors),
        network_consistent,
        checked_annotations=len(linked),
        unlinked_annotations=unlinked,
    )


def replay_annotation(
    aset_rules: RuleSet,
    annotation: Annotation,
    timeline: list[media.Event],
) -> bool:
    """True if re-evaluating the provenance rules on just the provenance
    events reproduces the annotation (its concept, interval and attributes)."""
    by_id = {e.event_id: e for e in timeline}
    for prov in annotation.provenance:
        events = [by_id[eid] for eid in prov.events if eid in by_id]
        if len(events) != len(prov.events):
            return False
        subset = [e for e in timeline if e.event_id in set(prov.events)]
        result = evaluate(
            dataclasses.replace(
                aset_rules,
                rules=tuple(r for r in aset_rules.rules if r.name == prov.rule),
            ),
            subset,
        )
        reproduced = any(
            a.concept == annotation.concept
            and a.interval == annotation.interval
            and a.attributes == annotation.attributes
            for a in result.assertions
        )
        if not reproduced:
            return False
    return True
