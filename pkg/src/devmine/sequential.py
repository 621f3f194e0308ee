"""Sequential pattern mining: tandem repeats, maximal repeats, and their
order-insensitive (alphabet) variants, plus per-trace relative supports.

Ordered patterns (IA/TR/MR) match contiguous subsequences; alphabet patterns
(TRA/MRA) match any contiguous window that is a permutation of the activity
set. Occurrences are always counted leftmost-greedy without overlap.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from devmine import kernels
from devmine._text import quote

from devmine.labeling import split_by_label
from devmine.logmodel import EventLog, LabeledLog, Trace

IA = "ia"
TR = "tr"
TRA = "tra"
MR = "mr"
MRA = "mra"
ORDERED_KINDS = (IA, TR, MR)
ALPHABET_KINDS = (TRA, MRA)
KINDS = (IA, TR, TRA, MR, MRA)


@dataclass(frozen=True)
class SequentialPattern:
    """A pattern body: an ordered activity list (IA/TR/MR) or a canonical
    sorted activity set (TRA/MRA)."""

    kind: str
    body: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        body = tuple(self.body)
        if not body:
            raise ValueError("pattern body must be non-empty")
        if self.kind in ALPHABET_KINDS:
            body = tuple(sorted(set(body)))
        if self.kind == IA and len(body) != 1:
            raise ValueError("IA patterns hold exactly one activity")
        object.__setattr__(self, "body", body)

    def canonical(self) -> str:
        inner = ",".join(quote(a) for a in self.body)
        if self.kind in ALPHABET_KINDS:
            return f"{self.kind}{{{inner}}}"
        return f"{self.kind}({inner})"


@dataclass
class SupportMatrix:
    """Per-trace, per-pattern relative supports over a log (matrix M)."""

    patterns: list
    values: np.ndarray
    class_support: dict = field(default_factory=dict)

    def column(self, pattern: SequentialPattern) -> np.ndarray:
        return self.values[:, self.patterns.index(pattern)]


class _Vocab:
    """Activity-name to small-int interning shared by the scans."""

    def __init__(self):
        self.ids = {}
        self.names = []

    def encode(self, activities) -> list:
        out = []
        for a in activities:
            i = self.ids.get(a)
            if i is None:
                i = len(self.names)
                self.ids[a] = i
                self.names.append(a)
            out.append(i)
        return out

    def decode(self, ids) -> tuple:
        return tuple(self.names[i] for i in ids)


def tandem_repeats(trace: Trace) -> dict:
    """Primitive tandem-repeat patterns of one trace with their maximal
    consecutive repetition counts (>= 2)."""
    if len(trace) == 0:
        raise ValueError("trace must be non-empty")
    vocab = _Vocab()
    seq = vocab.encode(trace.activities)
    return {
        SequentialPattern(TR, vocab.decode(body)): k
        for body, k in sorted(kernels.tandem_runs(seq).items())
    }


def alphabet_tandem_repeats(trace: Trace) -> dict:
    """Order-insensitive tandem repeats of one trace (consecutive permutation
    blocks), mapped to their maximal repetition counts."""
    if len(trace) == 0:
        raise ValueError("trace must be non-empty")
    vocab = _Vocab()
    seq = vocab.encode(trace.activities)
    return {
        SequentialPattern(TRA, vocab.decode(key)): k
        for key, k in sorted(kernels.window_tandem_runs(seq).items())
    }


def _suffix_array(s: list) -> list:
    n = len(s)
    sa = list(range(n))
    rank = list(s)
    k = 1
    while True:
        def key(i, rank=rank, k=k, n=n):
            return (rank[i], rank[i + k] if i + k < n else -1)

        sa.sort(key=key)
        tmp = [0] * n
        for idx in range(1, n):
            tmp[sa[idx]] = tmp[sa[idx - 1]] + (key(sa[idx]) != key(sa[idx - 1]))
        rank = tmp
        if rank[sa[-1]] == n - 1:
            return sa
        k <<= 1


def _lcp_array(s: list, sa: list) -> list:
    n = len(s)
    rank = [0] * n
    for i, p in enumerate(sa):
        rank[p] = i
    lcp = [0] * n
    h = 0
    for i in range(n):
        if rank[i] > 0:
            j = sa[rank[i] - 1]
            while i + h < n and j + h < n and s[i + h] == s[j + h]:
                h += 1
            lcp[rank[i]] = h
            if h:
                h -= 1
        else:
            h = 0
    return lcp


def _repeated_substrings(s: list) -> list:
    """(position, length) of every maximal repeat of `s`.

    Maximal = occurs at least twice, and no single-character extension to the
    left or to the right covers all occurrences. The lcp-interval walk makes
    the strings right-maximal by construction; left-maximality is the usual
    left-character diversity, with string start treated as a unique context.
    """
    n = len(s)
    if n < 2:
        return []
    sa = _suffix_array(s)
    lcp = _lcp_array(s, sa)

    def leaf(i):
        p = sa[i]
        # (diverse, common left char); starts get per-leaf unique contexts
        return (False, s[p - 1] if p > 0 else -(i + 2))

    def absorb(a, b):
        diverse = a[0] or b[0] or (a[1] is not None and b[1] is not None and a[1] != b[1])
        return (diverse, a[1] if a[1] is not None else b[1])

    out = []
    stack = [[0, (False, None), sa[0]]]  # [lcp, info, sample position]
    for i in range(1, n + 1):
        h = lcp[i] if i < n else 0
        carried = leaf(i - 1)
        pos = sa[i - 1]
        while stack[-1][0] > h:
            top = stack.pop()
            top[1] = absorb(top[1], carried)
            if top[1][0]:
                out.append((top[2], top[0]))
            carried = top[1]
            pos = top[2]
        if stack[-1][0] == h:
            stack[-1][1] = absorb(stack[-1][1], carried)
        else:
            stack.append([h, carried, pos])
    return out


def maximal_repeats(log: EventLog) -> set:
    """Maximal repeats across the log, occurrences pooled over all traces."""
    vocab = _Vocab()
    concat = []
    sep = None
    encoded = [vocab.encode(t.activities) for t in log.traces]
    sep_base = len(vocab.names)
    for i, seq in enumerate(encoded):
        concat.append(sep_base + i)
        concat.extend(seq)
    concat.append(sep_base + len(encoded))
    found = set()
    for pos, length in _repeated_substrings(concat):
        found.add(SequentialPattern(MR, vocab.decode(concat[pos:pos + length])))
    return found


def _distinct_windows(seq: list):
    """Yield (start, sorted id tuple) for every distinct-element window."""
    n = len(seq)
    for i in range(n):
        seen = set()
        for j in range(i, n):
            if seq[j] in seen:
                break
            seen.add(seq[j])
            yield i, tuple(sorted(seen))


def alphabet_maximal_repeats(log: EventLog) -> set:
    """Maximal repeats under order-insensitive (permutation window) matching.

    A set is a repeat when its non-overlapping window count across the log is
    at least 2; it is kept when no repeated strict superset's windows cover
    all of its windows.
    """
    vocab = _Vocab()
    encoded = [vocab.encode(t.activities) for t in log.traces]
    windows = {}
    for ti, seq in enumerate(encoded):
        for start, key in _distinct_windows(seq):
            windows.setdefault(key, []).append((ti, start))

    def nonoverlap(starts_by_trace, length):
        total = 0
        for starts in starts_by_trace.values():
            cur = -1
            for st in starts:
                if st >= cur:
                    total += 1
                    cur = st + length
        return total

    by_trace = {}
    for key, occs in windows.items():
        per = {}
        for ti, st in occs:
            per.setdefault(ti, []).append(st)
        by_trace[key] = per

    repeats = {key for key in windows if nonoverlap(by_trace[key], len(key)) >= 2}

    result = set()
    for key in repeats:
        length = len(key)
        covered = False
        for other in repeats:
            if len(other) <= length or not set(key) < set(other):
                continue
            olen = len(other)
            other_starts = by_trace[other]
            ok = True
            for ti, starts in by_trace[key].items():
                ostarts = other_starts.get(ti, [])
                for st in starts:
                    # need an `other` window [o, o+olen) with o <= st and
                    # st+length <= o+olen
                    lo = bisect_left(ostarts, st + length - olen)
                    hi = bisect_right(ostarts, st)
                    if lo >= hi:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                covered = True
                break
        if not covered:
            result.add(SequentialPattern(MRA, vocab.decode(key)))
    return result


def to_alphabet(patterns, target: str, log: EventLog) -> set:
    """Project TR/MR discovery to the alphabet kinds, recounting occurrences
    order-insensitively on the log. Matching runs directly on the traces:
    projecting the ordered bodies alone would miss activity sets realized
    only as permutations of one another."""
    if target == TRA:
        source = TR
    elif target == MRA:
        source = MR
    else:
        raise ValueError(f"target must be {TRA!r} or {MRA!r}")
    for p in patterns:
        if p.kind != source:
            raise ValueError(f"{target} must be derived from {source} patterns, got {p.kind}")
    if target == TRA:
        found = set()
        for trace in log.traces:
            found.update(alphabet_tandem_repeats(trace))
        return found
    return alphabet_maximal_repeats(log)


def occurrences(trace: Trace, pattern: SequentialPattern) -> int:
    """Leftmost-greedy non-overlapping occurrence count of pattern in trace."""
    vocab = _Vocab()
    seq = vocab.encode(trace.activities)
    ids = [vocab.ids.get(a, -1) for a in pattern.body]
    if -1 in ids:
        return 0
    if pattern.kind in ALPHABET_KINDS:
        return kernels.count_window_occurrences(seq, sorted(ids))
    return kernels.count_occurrences(seq, ids)


def relative_support(trace: Trace, pattern: SequentialPattern, raw: bool = False) -> float:
    """Occurrence count normalized by trace length (raw count with raw=True)."""
    if len(trace) == 0:
        return 0.0
    count = occurrences(trace, pattern)
    return float(count) if raw else count / len(trace)


def _class_fraction(traces, pattern) -> float:
    hits = sum(1 for t in traces if occurrences(t, pattern) > 0)
    return hits / len(traces)


def discover_patterns(labeled: LabeledLog, kind: str, theta: float = 0.3,
                      raw_support: bool = False):
    """Patterns of `kind` frequent in at least one class, plus the support
    matrix M over the full log.

    A pattern is kept when the fraction of traces containing it reaches
    `theta` in the deviant or in the non-deviant sub-log. Returns
    (patterns, SupportMatrix); the pattern list may be empty.
    """
    if not 0 < theta <= 1:
        raise ValueError("theta must be in (0, 1]")
    deviant, normal = split_by_label(labeled)

    if kind == IA:
        candidates = {SequentialPattern(IA, (a,)) for a in labeled.log.alphabet}
    elif kind == TR:
        candidates = set()
        for t in labeled.log.traces:
            if len(t):
                candidates.update(tandem_repeats(t))
    elif kind == TRA:
        candidates = set()
        for t in labeled.log.traces:
            if len(t):
                candidates.update(alphabet_tandem_repeats(t))
    elif kind == MR:
        candidates = maximal_repeats(deviant) | maximal_repeats(normal)
    elif kind == MRA:
        candidates = alphabet_maximal_repeats(deviant) | alphabet_maximal_repeats(normal)
    else:
        raise ValueError(f"unknown pattern kind {kind!r}")

    kept = []
    class_support = {}
    for pattern in sorted(candidates, key=lambda p: p.canonical()):
        sup_d = _class_fraction(deviant.traces, pattern)
        sup_n = _class_fraction(normal.traces, pattern)
        if sup_d >= theta or sup_n >= theta:
            kept.append(pattern)
            class_support[pattern] = {"deviant": sup_d, "normal": sup_n}

    values = np.zeros((len(labeled.log.traces), len(kept)))
    for j, pattern in enumerate(kept):
        for i, trace in enumerate(labeled.log.traces):
            values[i, j] = relative_support(trace, pattern, raw=raw_support)
    return kept, SupportMatrix(patterns=kept, values=values, class_support=class_support)


def pattern_to_json(pattern: SequentialPattern, class_support: dict | None = None) -> dict:
    doc = {"kind": pattern.kind, "body": list(pattern.body)}
    if class_support is not None:
        doc["classSupport"] = class_support
    return doc
