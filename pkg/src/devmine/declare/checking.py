"""Finite-trace checking of (data-aware) Declare constraints.

Outcomes follow the activation/fulfillment reading: a constraint is violated
in a trace when at least one activation leads to a violation, vacuously
satisfied when it is never activated, and otherwise satisfied with the number
of fulfilled activations.

Activation events per template (the template descriptions only fix them by
example, so the table below is normative for this implementation):

==========================  =========================================
RespondedExistence,          A events
Response, AlternateResponse,
ChainResponse
Precedence, Alternate-,      B events
ChainPrecedence
CoExistence,                 A and B events
NotCoExistence
Succession family            A events (forward) and B events (backward)
NotSuccession,               A events
NotChainSuccession
Existence, Absence,          no activation; outcome decided by count and
Init, End                    position checks, never vacuous (an absence
                             bound holding trivially counts as satisfied)
==========================  =========================================

A data condition restricts which candidate events count as activations; the
recurrence checks of the alternate templates keep looking at plain
control-flow events.
"""

from __future__ import annotations

from devmine.declare import model as dm
from devmine.logmodel import NUMERIC_TAGS, Trace

_NO_ACTIVATION = dm.UNARY_TEMPLATES


def has_activations(template: dm.Template) -> bool:
    """Whether the template has a defined activation event."""
    return template.name not in _NO_ACTIVATION


def payload_view(trace: Trace, event_index: int) -> dict:
    """The payload a data condition sees: trace attributes overlaid by the
    event's own attributes."""
    view = dict(trace.attributes)
    view.update(trace.events[event_index].payload)
    return view


def _compare(attr, comparison: dm.Comparison, diagnostics=None) -> bool:
    value = attr.value
    target = comparison.value
    op = comparison.op
    if isinstance(target, bool) or isinstance(value, bool):
        if not isinstance(target, bool) or not isinstance(value, bool):
            if diagnostics is not None:
                diagnostics.append(comparison)
            return False
        return (value == target) if op == "=" else (value != target) if op == "!=" else False
    if isinstance(target, str):
        if attr.tag not in ("text", "identifier"):
            if diagnostics is not None:
                diagnostics.append(comparison)
            return False
        if op == "=":
            return value == target
        if op == "!=":
            return value != target
        if diagnostics is not None:
            diagnostics.append(comparison)
        return False
    # numeric comparison
    if attr.tag not in NUMERIC_TAGS:
        if diagnostics is not None:
            diagnostics.append(comparison)
        return False
    v = float(value)
    t = float(target)
    if op == "=":
        return v == t
    if op == "!=":
        return v != t
    if op == "<=":
        return v <= t
    return v > t


def eval_condition(payload: dict, condition: dm.DataCondition, diagnostics=None) -> bool:
    """Evaluate a condition on a payload. Missing attributes and type
    mismatches make the atomic comparison false (mismatches are appended to
    `diagnostics` when given)."""
    for clause in condition.clauses:
        ok = True
        for comparison in clause:
            attr = payload.get(comparison.key)
            if attr is None or not _compare(attr, comparison, diagnostics):
                ok = False
                break
        if ok:
            return True
    return False


def _positions(acts, name):
    return [i for i, a in enumerate(acts) if a == name]


def _activation_indices(trace: Trace, activity: str, condition) -> list:
    out = []
    for i, event in enumerate(trace.events):
        if event.activity != activity:
            continue
        if condition is not None and not eval_condition(payload_view(trace, i), condition):
            continue
        out.append(i)
    return out


def _records(trace: Trace, constraint: dm.Constraint) -> list:
    """Activation records for relation templates, in event order."""
    name = constraint.template.name
    acts = [e.activity for e in trace.events]
    n = len(acts)
    cond = constraint.condition
    a = constraint.activities[0]
    b = constraint.activities[1] if len(constraint.activities) > 1 else None
    a_pos = _positions(acts, a)
    b_pos = _positions(acts, b) if b is not None else []

    def fulfilled_forward(i):  # some b strictly after i
        return any(j > i for j in b_pos)

    def fulfilled_backward(j):  # some a strictly before j
        return any(i < j for i in a_pos)

    def alt_forward(i):  # b after i with no a in between
        for j in range(i + 1, n):
            if acts[j] == a:
                return False
            if acts[j] == b:
                return True
        return False

    def alt_backward(j):  # a before j with no b in between
        for i in range(j - 1, -1, -1):
            if acts[i] == b:
                return False
            if acts[i] == a:
                return True
        return False

    rules = {
        dm.RESPONDED_EXISTENCE: [(a, lambda i: bool(b_pos))],
        dm.RESPONSE: [(a, fulfilled_forward)],
        dm.ALTERNATE_RESPONSE: [(a, alt_forward)],
        dm.CHAIN_RESPONSE: [(a, lambda i: i + 1 < n and acts[i + 1] == b)],
        dm.PRECEDENCE: [(b, fulfilled_backward)],
        dm.ALTERNATE_PRECEDENCE: [(b, alt_backward)],
        dm.CHAIN_PRECEDENCE: [(b, lambda j: j >= 1 and acts[j - 1] == a)],
        dm.CO_EXISTENCE: [(a, lambda i: bool(b_pos)), (b, lambda j: bool(a_pos))],
        dm.SUCCESSION: [(a, fulfilled_forward), (b, fulfilled_backward)],
        dm.ALTERNATE_SUCCESSION: [(a, alt_forward), (b, alt_backward)],
        dm.CHAIN_SUCCESSION: [
            (a, lambda i: i + 1 < n and acts[i + 1] == b),
            (b, lambda j: j >= 1 and acts[j - 1] == a),
        ],
        dm.NOT_CO_EXISTENCE: [(a, lambda i: not b_pos), (b, lambda j: not a_pos)],
        dm.NOT_SUCCESSION: [(a, lambda i: not any(j > i for j in b_pos))],
        dm.NOT_CHAIN_SUCCESSION: [(a, lambda i: i + 1 >= n or acts[i + 1] != b)],
    }
    records = []
    for activity, verdict in rules[name]:
        for i in _activation_indices(trace, activity, cond):
            records.append(dm.ActivationRecord(i, payload_view(trace, i), verdict(i)))
    records.sort(key=lambda r: r.event_index)
    return records


def _verdicts_fast(acts, constraint: dm.Constraint):
    """(violated_any, fulfilled_count) for condition-free relation templates,
    without materializing activation records."""
    name = constraint.template.name
    n = len(acts)
    a, b = constraint.activities
    a_pos = _positions(acts, a)
    b_pos = _positions(acts, b)
    last_a = a_pos[-1] if a_pos else -1
    last_b = b_pos[-1] if b_pos else -1
    first_a = a_pos[0] if a_pos else n
    first_b = b_pos[0] if b_pos else n

    def tally(indices, ok) -> tuple:
        violated = False
        fulfilled = 0
        for i in indices:
            if ok(i):
                fulfilled += 1
            else:
                violated = True
        return violated, fulfilled

    def alt_forward(i):
        for j in range(i + 1, n):
            if acts[j] == a:
                return False
            if acts[j] == b:
                return True
        return False

    def alt_backward(j):
        for i in range(j - 1, -1, -1):
            if acts[i] == b:
                return False
            if acts[i] == a:
                return True
        return False

    if name == dm.RESPONDED_EXISTENCE:
        return tally(a_pos, lambda i: last_b >= 0)
    if name == dm.RESPONSE:
        return tally(a_pos, lambda i: last_b > i)
    if name == dm.ALTERNATE_RESPONSE:
        return tally(a_pos, alt_forward)
    if name == dm.CHAIN_RESPONSE:
        return tally(a_pos, lambda i: i + 1 < n and acts[i + 1] == b)
    if name == dm.PRECEDENCE:
        return tally(b_pos, lambda j: first_a < j)
    if name == dm.ALTERNATE_PRECEDENCE:
        return tally(b_pos, alt_backward)
    if name == dm.CHAIN_PRECEDENCE:
        return tally(b_pos, lambda j: j >= 1 and acts[j - 1] == a)
    if name == dm.CO_EXISTENCE:
        va, fa = tally(a_pos, lambda i: last_b >= 0)
        vb, fb = tally(b_pos, lambda j: last_a >= 0)
        return va or vb, fa + fb
    if name == dm.SUCCESSION:
        va, fa = tally(a_pos, lambda i: last_b > i)
        vb, fb = tally(b_pos, lambda j: first_a < j)
        return va or vb, fa + fb
    if name == dm.ALTERNATE_SUCCESSION:
        va, fa = tally(a_pos, alt_forward)
        vb, fb = tally(b_pos, alt_backward)
        return va or vb, fa + fb
    if name == dm.CHAIN_SUCCESSION:
        va, fa = tally(a_pos, lambda i: i + 1 < n and acts[i + 1] == b)
        vb, fb = tally(b_pos, lambda j: j >= 1 and acts[j - 1] == a)
        return va or vb, fa + fb
    if name == dm.NOT_CO_EXISTENCE:
        va, fa = tally(a_pos, lambda i: last_b < 0)
        vb, fb = tally(b_pos, lambda j: last_a < 0)
        return va or vb, fa + fb
    if name == dm.NOT_SUCCESSION:
        return tally(a_pos, lambda i: last_b <= i)
    if name == dm.NOT_CHAIN_SUCCESSION:
        return tally(a_pos, lambda i: i + 1 >= n or acts[i + 1] != b)
    raise ValueError(name)


def _check_unary(trace: Trace, constraint: dm.Constraint) -> dm.CheckOutcome:
    name = constraint.template.name
    activity = constraint.activities[0]
    cond = constraint.condition
    matches = _activation_indices(trace, activity, cond)
    if name == dm.EXISTENCE:
        return dm.satisfied(1) if len(matches) >= constraint.template.count else dm.violated()
    if name == dm.ABSENCE:
        return dm.satisfied(1) if len(matches) <= constraint.template.count - 1 else dm.violated()
    if name == dm.INIT:
        return dm.satisfied(1) if matches and matches[0] == 0 and trace.events else dm.violated()
    # End
    return dm.satisfied(1) if matches and matches[-1] == len(trace.events) - 1 else dm.violated()


def check(trace: Trace, constraint: dm.Constraint) -> dm.CheckOutcome:
    """Check one constraint on one trace."""
    if constraint.template.arity == 1:
        return _check_unary(trace, constraint)
    if constraint.condition is None:
        violated_any, fulfilled = _verdicts_fast(
            [e.activity for e in trace.events], constraint)
        if violated_any:
            return dm.violated()
        if fulfilled == 0:
            return dm.vacuous()
        return dm.satisfied(fulfilled)
    records = _records(trace, constraint)
    if any(not r.fulfilled for r in records):
        return dm.violated()
    if not records:
        return dm.vacuous()
    return dm.satisfied(len(records))


def activations(trace: Trace, constraint: dm.Constraint) -> list:
    """All activation records in event order. Templates without a defined
    activation (the existence family) yield an empty list; consult
    :func:`has_activations` to tell that apart from a vacuous case."""
    if not has_activations(constraint.template):
        return []
    return _records(trace, constraint)
