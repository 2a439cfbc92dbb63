"""HTTP service exposing the annotation pipeline to clients and the web UI.

Endpoints (docs/http-api.md):

    POST /projects                      create a project from inline documents
    GET  /projects/{id}                 project info
    GET  /projects/{id}/rules           stored rule text
    PUT  /projects/{id}/rules           store rule text (no validation)
    POST /projects/{id}/rules:check     parse + check, never mutates state
    POST /projects/{id}/annotate        run the pipeline, return the document
    GET  /projects/{id}/annotations     last stored annotation document
    GET  /projects/{id}/timeline        merged events for visualization
    POST /projects/{id}/query           temporal query over stored annotations

Error bodies are `{"error": {"code", "message"}}` with codes from a
closed set; rule diagnostics travel as `{"diagnostics": [...]}` with
status 422. Annotation documents are returned verbatim (text), byte-equal
to the CLI's machine output. Concurrent annotate calls on one project
serialize on the store's per-project lock: the loser gets 409.
"""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path
from typing import Callable

from fastapi import Depends, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError

from .. import annotator, ontology as ont
from ..annotator import (
    DetectorParams,
    PipelineError,
    TemporalQuery,
    UnknownConcept,
    parse_annotations,
    serialize_annotations,
)
from ..diagnostics import DiagnosticsError
from ..rules import EventTypeRegistry, check_rules, parse_rules
from ..temporal import AllenRelation, Interval
from .models import (
    DetectorModel,
    ProjectCreateRequest,
    ProjectFiles,
    ProjectInfoResponse,
    QueryRequest,
    RulesCheckRequest,
    RulesPutRequest,
)
from .payloads import (
    diagnostics_payload,
    machine_json,
    query_payload,
    timeline_payload,
)
from .store import ProjectExists, ProjectNotFound, ProjectStore

logger = logging.getLogger(__name__)

ANNOTATION_MEDIA_TYPE = "application/x-ndjson"


class ApiError(Exception):
    """Maps to `{"error": {...}}` with a documented code."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _json_response(payload, status: int = 200) -> Response:
    return Response(machine_json(payload), status_code=status, media_type="application/json")


def create_app(
    root: str | Path,
    token: str | None = None,
    runner: Callable | None = None,
) -> FastAPI:
    """Build the service over a project root directory.

    `runner` replaces the annotate pipeline (tests inject slow or fake
    runners); it must accept a Project and return an AnnotationSet.
    """
    store = ProjectStore(root)
    run_pipeline = runner or annotator.annotate

    async def authorize(request: Request) -> None:
        if token is None:
            return
        supplied = request.headers.get("authorization", "")
        if supplied != f"Bearer {token}":
            raise ApiError(401, "unauthorized", "missing or invalid bearer token")

    app = FastAPI(title="chronotate", dependencies=[Depends(authorize)])
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError) -> Response:
        return _json_response({"error": {"code": exc.code, "message": exc.message}}, exc.status)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> Response:
        return _json_response(
            {"error": {"code": "validation_error", "message": str(exc.errors()[:3])}}, 400
        )

    @app.exception_handler(Exception)
    async def _internal_error(request: Request, exc: Exception) -> Response:
        logger.exception("internal error on %s", request.url.path)
        return _json_response({"error": {"code": "internal_error", "message": str(exc)}}, 500)

    def project_or_404(project_id: str):
        try:
            return store.load_project(project_id)
        except ProjectNotFound:
            raise ApiError(404, "project_not_found", f"no project named {project_id!r}") from None
        except PipelineError as exc:
            raise ApiError(500, "internal_error", str(exc)) from exc

    def project_info(project_id: str) -> ProjectInfoResponse:
        project = project_or_404(project_id)
        rules_text = project.path(project.rules).read_text(encoding="utf-8")
        return ProjectInfoResponse(
            id=project.id,
            detector=DetectorModel(
                threshold=project.detector.threshold,
                min_shot_frames=project.detector.min_shot_frames,
            ),
            duration_tolerance_ms=project.duration_tolerance_ms,
            files=ProjectFiles(features=list(project.features), events=list(project.events)),
            rules_sha256=hashlib.sha256(rules_text.encode()).hexdigest(),
            has_annotations=store.annotations_text(project_id) is not None,
        )

    # -- projects ----------------------------------------------------------

    @app.post("/projects", status_code=201)
    def create_project(body: ProjectCreateRequest) -> Response:
        for label, text in (("domain_ontology", body.domain_ontology), ("time_ontology", body.time_ontology)):
            try:
                ont.load_ontology(text)
            except Exception as exc:
                raise ApiError(400, "validation_error", f"{label}: {exc}") from exc
        try:
            store.create(
                body.id,
                domain_ontology=body.domain_ontology,
                time_ontology=body.time_ontology,
                rules=body.rules,
                features=body.features,
                events=body.events,
                detector=DetectorParams(body.detector.threshold, body.detector.min_shot_frames),
                duration_tolerance_ms=body.duration_tolerance_ms,
            )
        except ProjectExists as exc:
            raise ApiError(409, "project_exists", str(exc)) from exc
        return _json_response(project_info(body.id).model_dump(), 201)

    @app.get("/projects/{project_id}")
    def get_project(project_id: str) -> Response:
        return _json_response(project_info(project_id).model_dump())

    # -- rules ---------------------------------------------------------------

    @app.get("/projects/{project_id}/rules")
    def get_rules(project_id: str) -> Response:
        project_or_404(project_id)
        text = store.rules_text(project_id)
        return _json_response({
            "text": text,
            "rules_sha256": hashlib.sha256(text.encode()).hexdigest(),
        })

    @app.put("/projects/{project_id}/rules")
    def put_rules(project_id: str, body: RulesPutRequest) -> Response:
        project_or_404(project_id)
        digest = store.put_rules(project_id, body.text)
        return _json_response({"stored": True, "rules_sha256": digest})

    @app.post("/projects/{project_id}/rules:check")
    def rules_check(project_id: str, body: RulesCheckRequest) -> Response:
        project = project_or_404(project_id)
        text = body.text if body.text is not None else store.rules_text(project_id)
        try:
            dom, time = annotator.load_ontologies(project)
        except PipelineError as exc:
            raise ApiError(400, "ontology_error", str(exc)) from exc
        registry = EventTypeRegistry.default()
        try:
            _, timeline = annotator.build_timeline(project)
            registry.absorb_events(timeline)
        except PipelineError:
            pass  # checking rules must still work while data files are absent
        try:
            ruleset = parse_rules(text, project.rules)
            check_rules(ruleset, dom, time, registry)
        except DiagnosticsError as exc:
            return _json_response(diagnostics_payload(exc.diagnostics), 422)
        return _json_response(diagnostics_payload([]))

    # -- pipeline ------------------------------------------------------------

    @app.post("/projects/{project_id}/annotate")
    def annotate_project(project_id: str) -> Response:
        project = project_or_404(project_id)
        lock = store.lock(project_id)
        if not lock.acquire(blocking=False):
            raise ApiError(
                409, "annotate_in_progress",
                f"an annotation run for {project_id!r} is already in progress",
            )
        try:
            aset = run_pipeline(project)
            text = serialize_annotations(aset)
            store.save_annotations(project_id, text)
        except PipelineError as exc:
            if isinstance(exc.cause, DiagnosticsError):
                return _json_response(diagnostics_payload(exc.cause.diagnostics), 422)
            raise ApiError(400, "annotate_failed", str(exc)) from exc
        finally:
            lock.release()
        return Response(text, media_type=ANNOTATION_MEDIA_TYPE)

    @app.get("/projects/{project_id}/annotations")
    def get_annotations(project_id: str) -> Response:
        project_or_404(project_id)
        text = store.annotations_text(project_id)
        if text is None:
            raise ApiError(
                404, "annotations_not_found",
                f"project {project_id!r} has not been annotated yet",
            )
        return Response(text, media_type=ANNOTATION_MEDIA_TYPE)

    @app.get("/projects/{project_id}/timeline")
    def get_timeline(project_id: str) -> Response:
        project = project_or_404(project_id)
        try:
            fps, timeline = annotator.build_timeline(project)
        except PipelineError as exc:
            raise ApiError(400, "timeline_failed", str(exc)) from exc
        return _json_response(timeline_payload(fps, timeline))

    @app.post("/projects/{project_id}/query")
    def query_annotations(project_id: str, body: QueryRequest) -> Response:
        project = project_or_404(project_id)
        text = store.annotations_text(project_id)
        if text is None:
            raise ApiError(
                404, "annotations_not_found",
                f"project {project_id!r} has not been annotated yet",
            )
        aset = parse_annotations(text)
        try:
            relation = AllenRelation.from_tag(body.relation)
            interval = None
            if body.start_ms is not None or body.end_ms is not None:
                if body.start_ms is None or body.end_ms is None:
                    raise ValueError("reference interval needs both start_ms and end_ms")
                interval = Interval.of(body.start_ms, body.end_ms)
            q = TemporalQuery(
                relation, concept=body.concept, interval=interval, concept_b=body.concept_b
            )
        except ValueError as exc:
            raise ApiError(400, "validation_error", str(exc)) from exc
        try:
            dom, _ = annotator.load_ontologies(project)
            result = annotator.query(aset, q, dom)
        except UnknownConcept as exc:
            raise ApiError(400, "unknown_concept", str(exc)) from exc
        except PipelineError as exc:
            raise ApiError(400, "ontology_error", str(exc)) from exc
        return _json_response(query_payload(result, pair_form=q.concept_b is not None))

    return app
