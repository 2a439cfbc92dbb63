"""Command-line interface: thin wrappers over the library operations.

Exit codes: 0 success, 1 domain error (diagnostics emitted), 2 usage
error. With `--format json` exactly one structured document is written
to stdout and any diagnostics rendering stays on stderr; the json output
of each command is byte-identical to the HTTP service's response body
for the same operation.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import annotator, media, ontology as ont
from .annotator import PipelineError, TemporalQuery, UnknownConcept
from .diagnostics import DiagnosticsError
from .rules import EventTypeRegistry, check_rules, parse_rules
from .service.payloads import (
    diagnostics_payload,
    machine_json,
    query_payload,
    shots_payload,
    validation_payload,
)
from .temporal import AllenRelation, Interval

_FORMAT = click.option(
    "--format", "fmt", type=click.Choice(["text", "json"]), default="text",
    help="Output mode: human text or one machine-readable JSON document.",
)


def _emit(payload) -> None:
    sys.stdout.write(machine_json(payload) + "\n")


def _fail_diagnostics(fmt: str, diagnostics) -> None:
    if fmt == "json":
        _emit(diagnostics_payload(diagnostics))
    else:
        for diagnostic in diagnostics:
            click.echo(diagnostic.render(), err=True)
    sys.exit(1)


@click.group()
@click.version_option(package_name="chronotate")
def main() -> None:
    """Temporal video annotation: ontologies, meta-rules, event timelines."""


# -- ontology ----------------------------------------------------------------


@main.group()
def ontology() -> None:
    """Ontology document tools."""


@ontology.command("validate")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_FORMAT
def ontology_validate(file: Path, fmt: str) -> None:
    """Parse FILE and report dangling references and cycles."""
    try:
        loaded = ont.load_ontology(file.read_text(encoding="utf-8"))
    except ont.ParseError as exc:
        if fmt == "json":
            _emit({"error": {"code": "parse_error", "message": str(exc)}})
        else:
            click.echo(f"{file}:{exc.line}:{exc.col}: error: {exc.message}", err=True)
        sys.exit(1)
    except (ont.UnresolvedReference, ont.CyclicDefinition) as exc:
        if fmt == "json":
            _emit({"error": {"code": "invalid_ontology", "message": str(exc)}})
        else:
            click.echo(f"{file}: error: {exc}", err=True)
        sys.exit(1)
    kind = "time" if isinstance(loaded, ont.TimeOntology) else "domain"
    issues = ont.validate(loaded)
    if fmt == "json":
        _emit(validation_payload(kind, issues))
    else:
        for issue in issues:
            click.echo(f"{file}: error: {issue.message}", err=True)
        click.echo(f"{kind} ontology {loaded.namespace!r}: {len(issues)} issue(s)")
    sys.exit(1 if issues else 0)


# -- rules ---------------------------------------------------------------------


@main.group()
def rules() -> None:
    """Meta-rule tools."""


@rules.command("check")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--domain", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--time", "time_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_FORMAT
def rules_check(file: Path, domain: Path, time_path: Path, fmt: str) -> None:
    """Parse FILE and type-check it against the ontologies."""
    try:
        dom = ont.load_ontology(domain.read_text(encoding="utf-8"))
        time = ont.load_ontology(time_path.read_text(encoding="utf-8"))
    except Exception as exc:
        click.echo(f"error loading ontologies: {exc}", err=True)
        sys.exit(1)
    try:
        ruleset = parse_rules(file.read_text(encoding="utf-8"), str(file))
        check_rules(ruleset, dom, time, EventTypeRegistry.default())
    except DiagnosticsError as exc:
        _fail_diagnostics(fmt, exc.diagnostics)
    if fmt == "json":
        _emit(diagnostics_payload([]))
    else:
        click.echo(f"{file}: ok")


# -- pipeline --------------------------------------------------------------------


@main.command()
@click.option("--project", "project_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the annotation document here as well.")
@_FORMAT
def annotate(project_path: Path, out: Path | None, fmt: str) -> None:
    """Run the full pipeline for a project file."""
    try:
        project = annotator.load_project(project_path)
        aset = annotator.annotate(project)
    except PipelineError as exc:
        if isinstance(exc.cause, DiagnosticsError):
            _fail_diagnostics(fmt, exc.cause.diagnostics)
        click.echo(f"annotate failed at {exc}", err=True)
        sys.exit(1)
    document = annotator.serialize_annotations(aset)
    if out is not None:
        out.write_text(document, encoding="utf-8")
    if fmt == "json":
        sys.stdout.write(document)
    else:
        click.echo(f"project {aset.project_id}: {len(aset.annotations)} annotation(s)")
        for a in aset.annotations:
            click.echo(f"  {a.concept} [{a.interval.start_ms}, {a.interval.end_ms}) id={a.id}")
        if out is not None:
            click.echo(f"wrote {out}")


@main.command()
@click.option("--annotations", "annotations_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--relation", required=True, help="One of the 13 relation keywords.")
@click.option("--concept", help="Concept filter (interval form) or left concept (pair form).")
@click.option("--concept-b", help="Right concept: switches to pair form.")
@click.option("--start", type=int, help="Reference interval start, ms.")
@click.option("--end", type=int, help="Reference interval end, ms.")
@_FORMAT
def query(annotations_path: Path, relation: str, concept: str | None,
          concept_b: str | None, start: int | None, end: int | None, fmt: str) -> None:
    """Query an annotation document with a qualitative temporal relation."""
    try:
        aset = annotator.load(annotations_path)
    except annotator.DocumentFormatError as exc:
        click.echo(f"{annotations_path}: {exc}", err=True)
        sys.exit(1)
    try:
        rel = AllenRelation.from_tag(relation)
        interval = None
        if start is not None or end is not None:
            if start is None or end is None:
                raise ValueError("reference interval needs both --start and --end")
            interval = Interval.of(start, end)
        temporal_query = TemporalQuery(rel, concept=concept, interval=interval, concept_b=concept_b)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    try:
        result = annotator.query(aset, temporal_query)
    except UnknownConcept as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    if fmt == "json":
        _emit(query_payload(result, pair_form=concept_b is not None))
        return
    if concept_b is not None:
        for a, b in result:
            click.echo(f"{a.concept} [{a.interval.start_ms}, {a.interval.end_ms}) "
                       f"{relation} {b.concept} [{b.interval.start_ms}, {b.interval.end_ms})")
    else:
        for a in result:
            click.echo(f"{a.concept} [{a.interval.start_ms}, {a.interval.end_ms}) id={a.id}")
    click.echo(f"{len(result)} result(s)")


@main.command()
@click.option("--features", "features_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--min-frames", type=int, default=5, show_default=True)
@_FORMAT
def shots(features_path: Path, threshold: float, min_frames: int, fmt: str) -> None:
    """Run the shot-boundary detector over a feature stream."""
    try:
        stream = media.ingest_features(features_path)
        detected = media.merge_timeline([media.detect_shots(stream, threshold, min_frames)])
    except (media.FormatError, media.EmptyStream, ValueError) as exc:
        click.echo(f"{features_path}: {exc}", err=True)
        sys.exit(1)
    if fmt == "json":
        _emit(shots_payload(detected))
    else:
        for shot in detected:
            click.echo(f"shot {shot.attr('index')}: [{shot.start_ms}, {shot.end_ms})")


# -- service -----------------------------------------------------------------


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--root", envvar="CHRONOTATE_ROOT", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path),
              help="Project root directory (env: CHRONOTATE_ROOT).")
@click.option("--token", envvar="CHRONOTATE_TOKEN", default=None,
              help="Optional bearer token (env: CHRONOTATE_TOKEN).")
def serve(host: str, port: int, root: Path, token: str | None) -> None:
    """Run the HTTP service over a project root."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(root, token), host=host, port=port)


if __name__ == "__main__":
    main()
