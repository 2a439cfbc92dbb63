import pytest

from chronotate.diagnostics import DiagnosticsError
from chronotate.media import Event
from chronotate.ontology import load_ontology
from chronotate.rules import EventTypeRegistry, check_rules, parse_rules

from .corpus import CORPUS_DOCUMENT, CORPUS_DOMAIN_DOC, CORPUS_TIME_DOC

DOMAIN_DOC = """\
ontology soccer version "1.0"

concept Goal { }
concept Highlight { }
"""

TIME_DOC = """\
ontology soccertime version "1.0"

timeclass HalfTime {
  duration = 2700000..2700000 ms;
}
"""


@pytest.fixture
def dom():
    return load_ontology(DOMAIN_DOC)


@pytest.fixture
def time():
    return load_ontology(TIME_DOC)


def check(text, dom, time, registry=None):
    return check_rules(parse_rules(text, "rules.txt"), dom, time, registry)


def failures(text, dom, time, registry=None):
    with pytest.raises(DiagnosticsError) as err:
        check(text, dom, time, registry)
    return err.value.diagnostics


class TestCheckRules:
    def test_valid_rule_passes_and_marks_checked(self, dom, time):
        rs = check(
            'rule "r" { when shot s where duration(s) > 1 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        assert rs.checked

    def test_unknown_concept_with_span(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where duration(s) > 1 annotate soccer:Goel(interval = s) }',
            dom, time,
        )
        assert [d.code for d in diags] == ["unknown_concept"]
        assert diags[0].line == 1 and diags[0].col > 1

    def test_string_ordered_comparison_rejected(self, dom, time):
        diags = failures(
            'rule "r" { when ocr_text t where t.text > 5 annotate soccer:Goal(interval = t) }',
            dom, time,
        )
        assert [d.code for d in diags] == ["type_mismatch"]

    def test_unknown_event_type(self, dom, time):
        diags = failures(
            'rule "r" { when sonar s where duration(s) > 1 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        assert any(d.code == "unknown_event_type" for d in diags)

    def test_unknown_field(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where s.colour == 3 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        assert any(d.code == "unknown_field" for d in diags)

    def test_unbound_variable(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where duration(z) > 1 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        assert any(d.code == "unbound_variable" for d in diags)

    def test_temporal_predicate_needs_variables(self, dom, time):
        diags = failures(
            'rule "r" { when shot a, shot b where duration(a) before b '
            "annotate soccer:Goal(interval = a) }",
            dom, time,
        )
        assert any(d.code == "type_mismatch" for d in diags)

    def test_guard_must_be_boolean(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where duration(s) + 1 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        assert any("guard" in d.message for d in diags)

    def test_interval_argument_must_be_interval_bearing(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where duration(s) > 1 '
            "annotate soccer:Goal(interval = duration(s)) }",
            dom, time,
        )
        assert any("interval" in d.message for d in diags)

    def test_attribute_must_be_literal_typed(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where duration(s) > 1 '
            "annotate soccer:Goal(interval = s, other = s) }",
            dom, time,
        )
        assert any(d.code == "type_mismatch" for d in diags)

    def test_boolean_operand_enforced(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where duration(s) and 1 > 0 '
            "annotate soccer:Goal(interval = s) }",
            dom, time,
        )
        assert any(d.code == "type_mismatch" for d in diags)

    def test_mixed_numeric_comparison_allowed(self, dom, time):
        rs = check(
            'rule "r" { when ocr_text t where t.confidence * 100 > 50 '
            "annotate soccer:Goal(interval = t) }",
            dom, time,
        )
        assert rs.checked

    def test_concept_builtin_resolves_domain(self, dom, time):
        rs = check(
            'rule "r" { when shot s where concept("soccer:Goal") == "soccer:Goal" '
            "annotate soccer:Goal(interval = s) }",
            dom, time,
        )
        assert rs.checked

    def test_concept_builtin_resolves_time_ontology(self, dom, time):
        rs = check(
            'rule "r" { when shot s where concept("soccertime:HalfTime") == "x" '
            "annotate soccer:Goal(interval = s) }",
            dom, time,
        )
        assert rs.checked

    def test_concept_builtin_unknown(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where concept("soccer:Gone") == "x" '
            "annotate soccer:Goal(interval = s) }",
            dom, time,
        )
        assert any(d.code == "unknown_concept" for d in diags)

    def test_call_arity(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where duration(s, s) > 1 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        assert any(d.code == "invalid_call" for d in diags)

    def test_distinct_needs_variables(self, dom, time):
        diags = failures(
            'rule "r" { when shot a, shot b where distinct(duration(a), b) '
            "annotate soccer:Goal(interval = a) }",
            dom, time,
        )
        assert any(d.code == "type_mismatch" for d in diags)

    def test_registry_extension_from_events(self, dom, time):
        registry = EventTypeRegistry.default()
        registry.absorb_events([
            Event.of("whistle", 0, 100, 1.0, {"loudness": 0.8}),
        ])
        rs = check(
            'rule "r" { when whistle w where w.loudness > 0.5 annotate soccer:Goal(interval = w) }',
            dom, time, registry,
        )
        assert rs.checked

    def test_corpus_checks_clean(self, time):
        dom_corpus = load_ontology(CORPUS_DOMAIN_DOC)
        time_corpus = load_ontology(CORPUS_TIME_DOC)
        rs = check_rules(parse_rules(CORPUS_DOCUMENT), dom_corpus, time_corpus)
        assert rs.checked

    def test_multiple_diagnostics_collected(self, dom, time):
        diags = failures(
            'rule "r" { when shot s where s.colour == 1 annotate soccer:Goel(interval = s) }',
            dom, time,
        )
        codes = {d.code for d in diags}
        assert {"unknown_field", "unknown_concept"} <= codes
