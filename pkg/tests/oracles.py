"""Independent reference implementations used to check the package.

Everything here is deliberately written from first principles (endpoint
predicates, exhaustive enumeration) and never calls into the code paths
it is used to verify.
"""

from itertools import product

# Explicit endpoint predicate per relation, on (start, end) pairs.
RELATION_DEFS = {
    "before": lambda a, b: a[1] < b[0],
    "after": lambda a, b: b[1] < a[0],
    "meets": lambda a, b: a[1] == b[0],
    "met_by": lambda a, b: b[1] == a[0],
    "overlaps": lambda a, b: a[0] < b[0] < a[1] < b[1],
    "overlapped_by": lambda a, b: b[0] < a[0] < b[1] < a[1],
    "during": lambda a, b: b[0] < a[0] and a[1] < b[1],
    "contains": lambda a, b: a[0] < b[0] and b[1] < a[1],
    "starts": lambda a, b: a[0] == b[0] and a[1] < b[1],
    "started_by": lambda a, b: a[0] == b[0] and b[1] < a[1],
    "finishes": lambda a, b: a[1] == b[1] and b[0] < a[0],
    "finished_by": lambda a, b: a[1] == b[1] and a[0] < b[0],
    "equals": lambda a, b: a[0] == b[0] and a[1] == b[1],
}


def holding_relations(a, b):
    """All relation tags whose endpoint predicate holds for the pair."""
    return [tag for tag, pred in RELATION_DEFS.items() if pred(a, b)]


def classify(a, b):
    """The unique relation tag for a pair of (start, end) tuples."""
    tags = holding_relations(a, b)
    assert len(tags) == 1, f"expected exactly one relation for {a}, {b}: {tags}"
    return tags[0]


def all_intervals(max_endpoint):
    return [
        (s, e)
        for s in range(max_endpoint + 1)
        for e in range(s + 1, max_endpoint + 1)
    ]


def brute_force_composition(max_endpoint=8):
    """Composition table derived by enumerating interval triples."""
    intervals = all_intervals(max_endpoint)
    rel = {(a, b): classify(a, b) for a in intervals for b in intervals}
    table = {
        (r1, r2): set()
        for r1 in RELATION_DEFS
        for r2 in RELATION_DEFS
    }
    for a, b, c in product(intervals, repeat=3):
        table[rel[a, b], rel[b, c]].add(rel[a, c])
    return table


# ---------------------------------------------------------------------------
# Brute-force rule evaluation. Interprets the same AST as the package's
# evaluator but shares none of its code: expressions are evaluated by a
# separate recursive walk, temporal predicates go through the endpoint
# predicates above, and the tuple join is a plain itertools.product.

from chronotate.rules import ast as A  # noqa: E402  (data definitions only)


class OracleFault(Exception):
    pass


def _iv(value):
    """(start, end) pair of an event or interval value."""
    if hasattr(value, "interval"):
        value = value.interval
    return (value.start_ms, value.end_ms)


def oracle_eval_expr(expr, env):
    if isinstance(expr, (A.IntLit, A.DecimalLit, A.StringLit)):
        return expr.value
    if isinstance(expr, A.VarRef):
        return env[expr.name]
    if isinstance(expr, A.FieldAccess):
        event = env[expr.var]
        if expr.name == "confidence":
            return event.confidence
        for key, value in event.attributes:
            if key == expr.name:
                return value
        raise OracleFault(f"no attribute {expr.name}")
    if isinstance(expr, A.UnaryOp):
        return -oracle_eval_expr(expr.operand, env)
    if isinstance(expr, A.NotOp):
        return not oracle_eval_expr(expr.operand, env)
    if isinstance(expr, A.BoolOp):
        left = oracle_eval_expr(expr.left, env)
        right = oracle_eval_expr(expr.right, env)
        return (left and right) if expr.op == "and" else (left or right)
    if isinstance(expr, A.TemporalPred):
        a = _iv(oracle_eval_expr(expr.left, env))
        b = _iv(oracle_eval_expr(expr.right, env))
        return RELATION_DEFS[expr.op](a, b)
    if isinstance(expr, A.BinaryOp):
        left = oracle_eval_expr(expr.left, env)
        right = oracle_eval_expr(expr.right, env)
        op = expr.op
        if op == "/" and right == 0:
            raise OracleFault("division by zero")
        return {
            "+": lambda: left + right,
            "-": lambda: left - right,
            "*": lambda: left * right,
            "/": lambda: left / right,
            "==": lambda: left == right,
            "!=": lambda: left != right,
            "<": lambda: left < right,
            "<=": lambda: left <= right,
            ">": lambda: left > right,
            ">=": lambda: left >= right,
        }[op]()
    if isinstance(expr, A.Call):
        if expr.func == "duration":
            s, e = _iv(oracle_eval_expr(expr.args[0], env))
            return e - s
        if expr.func == "start":
            return _iv(oracle_eval_expr(expr.args[0], env))[0]
        if expr.func == "end":
            return _iv(oracle_eval_expr(expr.args[0], env))[1]
        if expr.func == "gap":
            a = _iv(oracle_eval_expr(expr.args[0], env))
            b = _iv(oracle_eval_expr(expr.args[1], env))
            return max(0, max(a[0], b[0]) - min(a[1], b[1]))
        if expr.func == "span":
            from chronotate.temporal import Interval

            a = _iv(oracle_eval_expr(expr.args[0], env))
            b = _iv(oracle_eval_expr(expr.args[1], env))
            return Interval.of(min(a[0], b[0]), max(a[1], b[1]))
        if expr.func == "distinct":
            return env[expr.args[0].name].event_id != env[expr.args[1].name].event_id
        if expr.func == "concept":
            return expr.args[0].value
    raise TypeError(f"oracle cannot evaluate {expr!r}")


def oracle_evaluate(ruleset, timeline):
    """Reference join: product over type-matching events, guard-filtered.

    Returns a list of (concept, interval, attributes, provenance) tuples
    in the contract order: priority descending, rule order, enumeration
    order, duplicates merged into their first occurrence.
    """
    from itertools import product as iproduct

    ordered = sorted(enumerate(ruleset.rules), key=lambda p: (-p[1].priority, p[0]))
    out = []
    index_of = {}
    for _, rule in ordered:
        pools = [
            [e for e in timeline if e.event_type == b.event_type]
            for b in rule.bindings
        ]
        for combo in iproduct(*pools):
            env = {b.var: e for b, e in zip(rule.bindings, combo)}
            try:
                if not oracle_eval_expr(rule.guard, env):
                    continue
                interval_value = oracle_eval_expr(rule.template.interval, env)
                if hasattr(interval_value, "interval"):
                    interval_value = interval_value.interval
                attrs = tuple(sorted(
                    (k, oracle_eval_expr(v, env)) for k, v in rule.template.attributes
                ))
            except OracleFault:
                continue
            ids = []
            for e in combo:
                if e.event_id not in ids:
                    ids.append(e.event_id)
            prov = (rule.name, tuple(ids))
            key = (rule.template.concept, interval_value, attrs)
            if key in index_of:
                concept, interval_value, attrs, provs = out[index_of[key]]
                if prov not in provs:
                    out[index_of[key]] = (concept, interval_value, attrs, provs + (prov,))
            else:
                index_of[key] = len(out)
                out.append((rule.template.concept, interval_value, attrs, (prov,)))
    return out
