"""Chronotate: ontology-driven temporal annotation of video event streams.

Define a domain ontology and a time ontology, describe patterns over
detector events as meta-rules, and get back temporally anchored,
ontology-linked annotations that support qualitative temporal queries.
"""

from .annotator import (
    Annotation,
    AnnotationSet,
    Project,
    TemporalQuery,
    annotate,
    consistency_check,
    load_project,
    query,
)
from .temporal import AllenRelation, Interval, Timestamp, relation

__version__ = "0.1.0"

__all__ = [
    "AllenRelation",
    "Annotation",
    "AnnotationSet",
    "Interval",
    "Project",
    "TemporalQuery",
    "Timestamp",
    "annotate",
    "consistency_check",
    "load_project",
    "query",
    "relation",
]
