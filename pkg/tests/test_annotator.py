import json

import pytest

from chronotate.annotator import (
    AnnotationSet,
    DocumentFormatError,
    PipelineError,
    annotate,
    build_timeline,
    consistency_check,
    load,
    load_checked_rules,
    load_ontologies,
    load_project,
    parse_annotations,
    save,
    serialize_annotations,
)
from chronotate.ontology import load_ontology
from chronotate.temporal import AllenRelation


@pytest.fixture
def soccer_project(soccer_dir):
    return load_project(soccer_dir / "project.json")


@pytest.fixture
def soccer_set(soccer_project):
    return annotate(soccer_project)


class TestAnnotate:
    def test_matches_committed_golden(self, soccer_set, golden_document):
        assert serialize_annotations(soccer_set) == golden_document

    def test_two_runs_byte_identical(self, soccer_project):
        first = serialize_annotations(annotate(soccer_project))
        second = serialize_annotations(annotate(soccer_project))
        assert first == second

    def test_expected_annotations(self, soccer_set):
        concepts = [a.concept for a in soccer_set.annotations]
        assert concepts == [
            "soccer:Transition",
            "soccer:GoalScene",
            "soccer:Transition",
            "soccer:Goal",
        ]
        goal = soccer_set.annotations[-1]
        assert (goal.interval.start_ms, goal.interval.end_ms) == (3500, 4200)
        assert goal.attrs_dict == {"source_track": 1}

    def test_zero_external_events_is_success(self, soccer_copy):
        (soccer_copy / "ocr.events").write_text('{"v": 1}\n')
        rules = (
            'rule "goal" { when ocr_text t where t.text == "GOAL" '
            "annotate soccer:Goal(interval = t) }\n"
        )
        (soccer_copy / "soccer.rules").write_text(rules)
        aset = annotate(load_project(soccer_copy / "project.json"))
        assert aset.annotations == ()

    def test_missing_feature_file_tagged_ingest(self, soccer_copy):
        (soccer_copy / "features.csv").unlink()
        with pytest.raises(PipelineError) as err:
            annotate(load_project(soccer_copy / "project.json"))
        assert err.value.stage == "ingest"

    def test_empty_feature_stream_rejected_at_detect(self, soccer_copy):
        # Ingestion accepts a zero-frame stream; the detector refuses it.
        (soccer_copy / "features.csv").write_text("fps=25/1,bins=8\n")
        with pytest.raises(PipelineError) as err:
            annotate(load_project(soccer_copy / "project.json"))
        assert err.value.stage == "detect"

    def test_streams_must_share_fps_and_bins(self, soccer_copy):
        (soccer_copy / "extra.csv").write_text(
            "fps=30/1,bins=8\n" + "0," + ",".join(["1"] * 8) + "\n"
        )
        config = json.loads((soccer_copy / "project.json").read_text())
        config["features"].append("extra.csv")
        (soccer_copy / "project.json").write_text(json.dumps(config))
        with pytest.raises(PipelineError) as err:
            annotate(load_project(soccer_copy / "project.json"))
        assert err.value.stage == "ingest"
        assert "share fps" in str(err.value)

    def test_bad_rules_tagged_rules(self, soccer_copy):
        (soccer_copy / "soccer.rules").write_text('rule "x" {')
        with pytest.raises(PipelineError) as err:
            annotate(load_project(soccer_copy / "project.json"))
        assert err.value.stage == "rules"

    def test_project_without_features(self, soccer_copy):
        config = json.loads((soccer_copy / "project.json").read_text())
        config["features"] = []
        (soccer_copy / "project.json").write_text(json.dumps(config))
        aset = annotate(load_project(soccer_copy / "project.json"))
        assert aset.fps is None
        # Only the ocr-driven rule can fire without shots.
        assert [a.concept for a in aset.annotations] == ["soccer:Goal"]

    def test_invalid_detector_params_rejected(self, soccer_copy):
        config = json.loads((soccer_copy / "project.json").read_text())
        config["detector"]["min_shot_frames"] = 0
        (soccer_copy / "project.json").write_text(json.dumps(config))
        with pytest.raises(PipelineError) as err:
            load_project(soccer_copy / "project.json")
        assert err.value.stage == "project"


class TestProvenance:
    def test_provenance_ids_exist_in_timeline(self, soccer_project, soccer_set):
        _, timeline = build_timeline(soccer_project)
        known = {e.event_id for e in timeline}
        for a in soccer_set.annotations:
            for prov in a.provenance:
                assert set(prov.events) <= known

    def test_replay_on_provenance_events_reproduces(self, soccer_project, soccer_set):
        from chronotate.annotator import replay_annotation

        dom, time = load_ontologies(soccer_project)
        _, timeline = build_timeline(soccer_project)
        ruleset, _ = load_checked_rules(soccer_project, dom, time, timeline)
        for a in soccer_set.annotations:
            assert replay_annotation(ruleset, a, timeline)


class TestPersistence:
    def test_round_trip_golden(self, soccer_set, tmp_path):
        path = tmp_path / "out.ann"
        save(soccer_set, path)
        assert load(path) == soccer_set

    def test_round_trip_empty_set(self, soccer_set, tmp_path):
        empty = AnnotationSet(
            soccer_set.project_id, soccer_set.fps, soccer_set.domain_pin,
            soccer_set.time_pin, soccer_set.rules_sha256, soccer_set.detector, (),
        )
        path = tmp_path / "empty.ann"
        save(empty, path)
        assert load(path) == empty

    def test_future_version_rejected_naming_versions(self, golden_document):
        doc = golden_document.replace('"v":1', '"v":3', 1)
        with pytest.raises(DocumentFormatError) as err:
            parse_annotations(doc)
        assert "3" in str(err.value) and "v=1" in str(err.value)

    def test_tampered_record_rejected(self, golden_document):
        doc = golden_document.replace('"start_ms":3500', '"start_ms":3501')
        with pytest.raises(DocumentFormatError) as err:
            parse_annotations(doc)
        assert "content hash" in str(err.value)

    def test_non_canonical_order_rejected(self, golden_document):
        lines = golden_document.splitlines()
        reordered = "\n".join([lines[0], lines[2], lines[1], *lines[3:]]) + "\n"
        with pytest.raises(DocumentFormatError):
            parse_annotations(reordered)


GAME_DOMAIN = """\
ontology soccer version "1.0"

concept FirstHalf { timeclass = soccertime:FirstHalf; }
concept SecondHalf { timeclass = soccertime:SecondHalf; }
concept Goal { }
"""

GAME_TIME = """\
ontology soccertime version "1.0"

timeclass FirstHalf { duration = 2700000..2700000 ms; }
timeclass SecondHalf { duration = 2700000..2700000 ms; }
timeclass Match { parts = FirstHalf before SecondHalf; }
"""


def make_set(*annotations):
    from chronotate.annotator import Annotation, DetectorParams, annotation_id
    from chronotate.rules import Provenance
    from chronotate.temporal import Interval

    built = []
    for concept, start, end in annotations:
        interval = Interval.of(start, end)
        built.append(Annotation(
            annotation_id(concept, interval, ()), concept, interval, (),
            (Provenance("r", ("e0000",)),),
        ))
    built.sort(key=lambda a: (a.interval.start_ms, a.interval.end_ms, a.concept, a.id))
    return AnnotationSet("t", None, None, None, "0" * 64, DetectorParams(), tuple(built))


class TestConsistencyCheck:
    def test_conforming_halves(self):
        dom = load_ontology(GAME_DOMAIN)
        time = load_ontology(GAME_TIME)
        aset = make_set(
            ("soccer:FirstHalf", 0, 2700000),
            ("soccer:SecondHalf", 2800000, 5500000),
        )
        report = consistency_check(aset, time, dom)
        assert report.ok
        assert report.checked_annotations == 2

    def test_short_half_reports_negative_deviation(self):
        dom = load_ontology(GAME_DOMAIN)
        time = load_ontology(GAME_TIME)
        aset = make_set(("soccer:FirstHalf", 0, 1200000))
        report = consistency_check(aset, time, dom)
        assert len(report.duration_violations) == 1
        assert report.duration_violations[0].deviation_ms == -1500000

    def test_part_order_violation_detected(self):
        dom = load_ontology(GAME_DOMAIN)
        time = load_ontology(GAME_TIME)
        # SecondHalf before FirstHalf although the ontology orders them the
        # other way round.
        aset = make_set(
            ("soccer:SecondHalf", 0, 2700000),
            ("soccer:FirstHalf", 2800000, 5500000),
        )
        report = consistency_check(aset, time, dom)
        assert not report.network_consistent
        assert len(report.ordering_violations) == 1
        violation = report.ordering_violations[0]
        assert violation.required is AllenRelation.BEFORE
        assert violation.observed is AllenRelation.AFTER

    def test_unlinked_concepts_counted(self):
        dom = load_ontology(GAME_DOMAIN)
        time = load_ontology(GAME_TIME)
        aset = make_set(("soccer:Goal", 100, 200))
        report = consistency_check(aset, time, dom)
        assert report.ok
        assert report.unlinked_annotations == 1
        assert report.checked_annotations == 0

    def test_broken_timeclass_link_reported(self):
        dom = load_ontology(
            'ontology soccer version "1"\nconcept Odd { timeclass = soccertime:Gone; }\n'
        )
        time = load_ontology(GAME_TIME)
        aset = make_set(("soccer:Odd", 0, 10))
        report = consistency_check(aset, time, dom)
        assert len(report.link_errors) == 1
        assert report.link_errors[0].time_class == "soccertime:Gone"

    def test_tolerance_applies(self):
        dom = load_ontology(GAME_DOMAIN)
        time = load_ontology(GAME_TIME)
        aset = make_set(("soccer:FirstHalf", 0, 2701000))
        strict = consistency_check(aset, time, dom)
        lax = consistency_check(aset, time, dom, tolerance_ms=2000)
        assert len(strict.duration_violations) == 1
        assert lax.ok
