import random

import pytest

from chronotate.media import Event, merge_timeline
from chronotate.ontology import load_ontology
from chronotate.rules import (
    EvalLimits,
    LimitExceeded,
    check_rules,
    evaluate,
    parse_rules,
)
from chronotate.temporal import ALL_RELATIONS, Interval, relation

from .generators import GEN_DOMAIN_DOC, GEN_TIME_DOC, random_rule_text, random_timeline
from .oracles import oracle_evaluate

DOMAIN_DOC = """\
ontology soccer version "1.0"

concept Goal { }
concept Pair { }
concept Ratio { }
"""

TIME_DOC = 'ontology soccertime version "1.0"\n\ntimeclass HalfTime { duration = 1..2 ms; }\n'


@pytest.fixture
def dom():
    return load_ontology(DOMAIN_DOC)


@pytest.fixture
def time():
    return load_ontology(TIME_DOC)


def checked(text, dom, time):
    return check_rules(parse_rules(text), dom, time)


def shots(*spans):
    return [
        Event.of("shot", s, e, 1.0, {"index": i, "stream": 0})
        for i, (s, e) in enumerate(spans)
    ]


def ocr(start, end, text, confidence=0.9):
    return Event.of("ocr_text", start, end, confidence, {"text": text, "track_id": 0})


class TestEvaluate:
    def test_goal_example(self, dom, time):
        rs = checked(
            'rule "goal" { when ocr_text t where t.text == "GOAL" '
            "annotate soccer:Goal(interval = t) }",
            dom, time,
        )
        timeline = merge_timeline([[ocr(61000, 62000, "GOAL")]])
        result = evaluate(rs, timeline, dom, time)
        assert len(result.assertions) == 1
        assertion = result.assertions[0]
        assert assertion.concept == "soccer:Goal"
        assert assertion.interval == Interval.of(61000, 62000)
        assert assertion.provenance[0].rule == "goal"
        assert assertion.provenance[0].events == (timeline[0].event_id,)

    def test_false_guard_empty(self, dom, time):
        rs = checked(
            'rule "never" { when shot s where 1 > 2 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        timeline = merge_timeline([shots((0, 10), (10, 20))])
        assert evaluate(rs, timeline).assertions == ()

    def test_sequential_pairs(self, dom, time):
        rs = checked(
            'rule "pairs" { when shot a, shot b where a before b '
            "annotate soccer:Pair(interval = span(a, b)) }",
            dom, time,
        )
        timeline = merge_timeline([shots((0, 10), (20, 30), (40, 50))])
        result = evaluate(rs, timeline)
        spans = [(a.interval.start_ms, a.interval.end_ms) for a in result.assertions]
        assert spans == [(0, 30), (0, 50), (20, 50)]

    def test_duplicate_assertions_merge_provenance(self, dom, time):
        rs = checked(
            'rule "first" { when shot s where duration(s) > 1 annotate soccer:Goal(interval = s) }\n'
            'rule "second" { when shot s where duration(s) > 2 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        timeline = merge_timeline([shots((0, 10))])
        result = evaluate(rs, timeline)
        assert len(result.assertions) == 1
        assert [p.rule for p in result.assertions[0].provenance] == ["first", "second"]

    def test_division_by_zero_reported_and_skipped(self, dom, time):
        rs = checked(
            'rule "ratio" { when shot a, shot b where duration(a) / (start(b) - start(b)) > 1 '
            "annotate soccer:Ratio(interval = a) }\n"
            'rule "ok" { when shot a where duration(a) > 1 annotate soccer:Goal(interval = a) }',
            dom, time,
        )
        timeline = merge_timeline([shots((0, 10))])
        result = evaluate(rs, timeline)
        assert len(result.faults) == 1
        assert result.faults[0].rule == "ratio"
        assert "division by zero" in result.faults[0].message
        assert [a.concept for a in result.assertions] == ["soccer:Goal"]

    def test_priority_orders_output(self, dom, time):
        rs = checked(
            'rule "low" { when shot s where duration(s) > 1 annotate soccer:Goal(interval = s) }\n'
            'rule "high" priority 9 { when shot s where duration(s) > 1 '
            "annotate soccer:Pair(interval = s) }",
            dom, time,
        )
        timeline = merge_timeline([shots((0, 10))])
        result = evaluate(rs, timeline)
        assert [a.concept for a in result.assertions] == ["soccer:Pair", "soccer:Goal"]

    def test_same_type_bindings_not_distinct_by_default(self, dom, time):
        rs = checked(
            'rule "refl" { when shot a, shot b where a equals b '
            "annotate soccer:Pair(interval = span(a, b)) }",
            dom, time,
        )
        timeline = merge_timeline([shots((0, 10))])
        # The single shot pairs with itself: equals holds reflexively.
        assert len(evaluate(rs, timeline).assertions) == 1

    def test_distinct_builtin_excludes_self_pairs(self, dom, time):
        rs = checked(
            'rule "refl" { when shot a, shot b where a equals b and distinct(a, b) '
            "annotate soccer:Pair(interval = span(a, b)) }",
            dom, time,
        )
        timeline = merge_timeline([shots((0, 10))])
        assert evaluate(rs, timeline).assertions == ()

    def test_temporal_keywords_agree_with_relation(self, dom, time):
        pairs = [
            ((0, 10), (20, 30)), ((20, 30), (0, 10)), ((0, 10), (10, 20)),
            ((10, 20), (0, 10)), ((0, 10), (5, 20)), ((5, 20), (0, 10)),
            ((5, 8), (0, 10)), ((0, 10), (5, 8)), ((0, 5), (0, 10)),
            ((0, 10), (0, 5)), ((5, 10), (0, 10)), ((0, 10), (5, 10)),
            ((0, 10), (0, 10)),
        ]
        for tag in (r.tag for r in ALL_RELATIONS):
            rs = checked(
                f'rule "t" {{ when shot a, shot b where a {tag} b '
                "annotate soccer:Pair(interval = span(a, b)) }",
                dom, time,
            )
            for (a_span, b_span) in pairs:
                a = Event.of("shot", *a_span, 1.0, {"index": 0, "stream": 0})
                b = Event.of("shot", *b_span, 1.0, {"index": 1, "stream": 1})
                timeline = merge_timeline([[a, b]])
                matched = [
                    assertion
                    for assertion in evaluate(rs, timeline).assertions
                ]
                # Find the combos where the bound (a, b) matched this tag.
                expected = sum(
                    1
                    for x in timeline
                    for y in timeline
                    if relation(x.interval, y.interval).tag == tag
                )
                total = sum(len(m.provenance) for m in matched)
                assert total == expected

    def test_unchecked_ruleset_rejected(self, dom, time):
        rs = parse_rules(
            'rule "r" { when shot s where 1 > 0 annotate soccer:Goal(interval = s) }'
        )
        with pytest.raises(ValueError):
            evaluate(rs, [])

    def test_timeline_without_ids_rejected(self, dom, time):
        rs = checked(
            'rule "r" { when shot s where 1 > 0 annotate soccer:Goal(interval = s) }',
            dom, time,
        )
        with pytest.raises(ValueError):
            evaluate(rs, shots((0, 10)))

    def test_binding_count_limit(self, dom, time):
        rs = checked(
            'rule "wide" { when shot a, shot b, shot c, shot d, shot e '
            "where 1 > 0 annotate soccer:Goal(interval = a) }",
            dom, time,
        )
        with pytest.raises(LimitExceeded):
            evaluate(rs, merge_timeline([shots((0, 10))]))

    def test_candidate_tuple_limit(self, dom, time):
        rs = checked(
            'rule "pairs" { when shot a, shot b where 1 > 0 '
            "annotate soccer:Pair(interval = span(a, b)) }",
            dom, time,
        )
        timeline = merge_timeline([shots(*[(i * 10, i * 10 + 5) for i in range(20)])])
        with pytest.raises(LimitExceeded):
            evaluate(rs, timeline, limits=EvalLimits(max_candidate_tuples=100))

    def test_monotone_under_timeline_extension(self, dom, time):
        rng = random.Random(5)
        gen_dom = load_ontology(GEN_DOMAIN_DOC)
        gen_time = load_ontology(GEN_TIME_DOC)
        for i in range(25):
            rule_text = random_rule_text(rng, f"r{i}")
            rs = check_rules(parse_rules(rule_text), gen_dom, gen_time)
            timeline = random_timeline(rng, max_events=4)
            extended = merge_timeline([
                [e for e in timeline],
                [Event.of("shot", 100, 120, 1.0, {"index": 99, "stream": 0})],
            ])
            before = {
                (a.concept, a.interval, a.attributes)
                for a in evaluate(rs, timeline).assertions
            }
            after = {
                (a.concept, a.interval, a.attributes)
                for a in evaluate(rs, extended).assertions
            }
            assert before <= after


class TestAgainstOracle:
    def test_randomized_cases_match_brute_force(self, dom, time):
        rng = random.Random(2024)
        gen_dom = load_ontology(GEN_DOMAIN_DOC)
        gen_time = load_ontology(GEN_TIME_DOC)
        for i in range(60):
            n_rules = rng.randint(1, 3)
            text = "\n".join(random_rule_text(rng, f"r{i}_{j}") for j in range(n_rules))
            rs = check_rules(parse_rules(text), gen_dom, gen_time)
            timeline = random_timeline(rng)
            result = evaluate(rs, timeline)
            got = [
                (a.concept, a.interval, a.attributes,
                 tuple((p.rule, p.events) for p in a.provenance))
                for a in result.assertions
            ]
            assert got == oracle_evaluate(rs, timeline)

    def test_determinism(self):
        rng = random.Random(99)
        gen_dom = load_ontology(GEN_DOMAIN_DOC)
        gen_time = load_ontology(GEN_TIME_DOC)
        text = "\n".join(random_rule_text(rng, f"d{j}") for j in range(3))
        rs = check_rules(parse_rules(text), gen_dom, gen_time)
        timeline = random_timeline(rng)
        assert evaluate(rs, timeline) == evaluate(rs, timeline)
