"""Rule corpus for round-trip tests: every grammar production appears.

Each entry is one standalone rule document fragment. Comments note the
production a rule is exercising beyond the shared skeleton.
"""

CORPUS_RULES = [
    # minimal rule, int literal comparison
    'rule "minimal" { when shot s where duration(s) > 1000 annotate soccer:Goal(interval = s) }',
    # decimal literal, field access on universal confidence
    'rule "confident" { when ocr_text t where t.confidence >= 0.75 annotate soccer:Goal(interval = t) }',
    # string literal and equality
    'rule "goal_text" { when ocr_text t where t.text == "GOAL" annotate soccer:Goal(interval = t) }',
    # string inequality
    'rule "not_goal_text" { when ocr_text t where t.text != "GOAL" annotate soccer:Goal(interval = t) }',
    # all remaining comparisons
    'rule "lt" { when shot s where duration(s) < 500 annotate soccer:Goal(interval = s) }',
    'rule "le" { when shot s where duration(s) <= 500 annotate soccer:Goal(interval = s) }',
    'rule "ge" { when shot s where duration(s) >= 500 annotate soccer:Goal(interval = s) }',
    'rule "ne" { when shot s where duration(s) != 500 annotate soccer:Goal(interval = s) }',
    # arithmetic: + - * /
    'rule "arith" { when shot s where duration(s) * 2 + 10 - 4 > duration(s) / 3 annotate soccer:Goal(interval = s) }',
    # unary minus and parenthesized arithmetic
    'rule "negate" { when shot s where -(duration(s) - 100) < -5 annotate soccer:Goal(interval = s) }',
    # boolean and / or / not with nesting
    'rule "boolean" { when shot s, ocr_text t where not (t.text == "X" or duration(s) < 10) and t.confidence > 0.5 annotate soccer:Goal(interval = s) }',
    # right-nested or requiring parens on the right child
    'rule "nested_or" { when shot s where duration(s) > 1 or (duration(s) > 2 or duration(s) > 3) annotate soccer:Goal(interval = s) }',
    # temporal keywords, one rule each for the 13 relations
    'rule "t_before" { when shot a, shot b where a before b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_after" { when shot a, shot b where a after b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_meets" { when shot a, shot b where a meets b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_met_by" { when shot a, shot b where a met_by b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_overlaps" { when shot a, shot b where a overlaps b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_overlapped_by" { when shot a, shot b where a overlapped_by b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_during" { when shot a, shot b where a during b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_contains" { when shot a, shot b where a contains b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_starts" { when shot a, shot b where a starts b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_started_by" { when shot a, shot b where a started_by b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_finishes" { when shot a, shot b where a finishes b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_finished_by" { when shot a, shot b where a finished_by b annotate soccer:Pair(interval = span(a, b)) }',
    'rule "t_equals" { when shot a, shot b where a equals b and distinct(a, b) annotate soccer:Pair(interval = span(a, b)) }',
    # start/end/gap built-ins
    'rule "builtins" { when shot a, ocr_text t where start(t) - end(a) > 0 and gap(a, t) < 2000 annotate soccer:Goal(interval = t) }',
    # concept() built-in and attribute template arguments
    'rule "attrs" { when ocr_text t where t.confidence > 0.1 annotate soccer:Mention(interval = t, about = concept("soccer:Goal"), label = t.text, score = t.confidence * 2.0) }',
    # priority clause, positive
    'rule "prio" priority 5 { when shot s where duration(s) > 0 annotate soccer:Goal(interval = s) }',
    # priority clause, negative
    'rule "prio_neg" priority -2 { when shot s where duration(s) > 0 annotate soccer:Goal(interval = s) }',
    # three bindings
    'rule "triple" { when shot a, shot b, ocr_text t where a before b and t during b annotate soccer:Pair(interval = span(a, b)) }',
    # redundant parentheses collapse to minimal form
    'rule "parens" { when shot a, shot b where ((a before b)) annotate soccer:Pair(interval = span(a, b)) }',
    # comment handling
    'rule "commented" { # trailing comment\n  when shot s # bind the shot\n  where duration(s) > 7 annotate soccer:Goal(interval = s) }',
]

CORPUS_DOCUMENT = "\n\n".join(CORPUS_RULES) + "\n"

# Attribute schema assumed by the corpus beyond the built-in registry.
CORPUS_DOMAIN_DOC = """\
ontology soccer version "1.0"

concept Goal { }
concept Pair { }
concept Mention {
  about: string;
  label: string;
  score: decimal;
}
"""

CORPUS_TIME_DOC = """\
ontology soccertime version "1.0"

timeclass HalfTime {
  duration = 2700000..2700000 ms;
}
"""
