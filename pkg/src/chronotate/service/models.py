"""Pydantic request and response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator

_NAME_PATTERN = r"^[A-Za-z0-9][A-Za-z0-9._-]*$"


class DetectorModel(BaseModel):
    threshold: float = Field(default=0.5, ge=0)
    min_shot_frames: int = Field(default=5, ge=1)


class ProjectCreateRequest(BaseModel):
    id: str = Field(pattern=_NAME_PATTERN, max_length=80)
    domain_ontology: str
    time_ontology: str
    rules: str = ""
    features: list[str] = []
    events: dict[str, str] = {}
    detector: DetectorModel = DetectorModel()
    duration_tolerance_ms: int = Field(default=0, ge=0)

    @field_validator("events")
    @classmethod
    def _safe_event_names(cls, value: dict[str, str]) -> dict[str, str]:
        import re

        for name in value:
            if not re.match(_NAME_PATTERN, name):
                raise ValueError(f"unsafe event file name {name!r}")
        return value


class RulesPutRequest(BaseModel):
    text: str


class RulesCheckRequest(BaseModel):
    text: str | None = None


class QueryRequest(BaseModel):
    relation: str
    concept: str | None = None
    start_ms: int | None = Field(default=None, ge=0)
    end_ms: int | None = Field(default=None, ge=0)
    concept_b: str | None = None


class ProjectFiles(BaseModel):
    features: list[str]
    events: list[str]


class ProjectInfoResponse(BaseModel):
    v: int = 1
    id: str
    detector: DetectorModel
    duration_tolerance_ms: int
    files: ProjectFiles
    rules_sha256: str
    has_annotations: bool


class DiagnosticModel(BaseModel):
    file: str
    line: int
    col: int
    code: str
    severity: str
    message: str
    end_line: int | None = None
    end_col: int | None = None


class DiagnosticsResponse(BaseModel):
    diagnostics: list[DiagnosticModel]
