"""Naive enumeration oracles for sequential patterns (exhaustive scans)."""


def _primitive(body):
    n = len(body)
    for d in range(1, n):
        if n % d == 0 and body == body[:d] * (n // d):
            return False
    return True


def naive_tandem(acts):
    """{body tuple: max consecutive repetition count >= 2} by O(n^3) scan."""
    acts = tuple(acts)
    n = len(acts)
    best = {}
    for i in range(n):
        for length in range(1, (n - i) // 2 + 1):
            body = acts[i:i + length]
            if not _primitive(body):
                continue
            k = 1
            while acts[i + k * length:i + (k + 1) * length] == body:
                k += 1
            if k >= 2:
                best[body] = max(best.get(body, 0), k)
    return best


def naive_maximal(traces):
    """Maximal repeats of a list of traces by exhaustive substring counting.

    A body is kept when it occurs at least twice and neither all left
    contexts nor all right contexts agree (an occurrence at a trace boundary
    never agrees with anything).
    """
    traces = [tuple(t) for t in traces]
    occurrences = {}
    for ti, t in enumerate(traces):
        for i in range(len(t)):
            for j in range(i + 1, len(t) + 1):
                occurrences.setdefault(t[i:j], []).append((ti, i))
    out = set()
    for body, positions in occurrences.items():
        if len(positions) < 2:
            continue
        length = len(body)
        lefts = set()
        rights = set()
        left_boundary = False
        right_boundary = False
        for ti, i in positions:
            if i == 0:
                left_boundary = True
            else:
                lefts.add(traces[ti][i - 1])
            if i + length == len(traces[ti]):
                right_boundary = True
            else:
                rights.add(traces[ti][i + length])
        left_maximal = left_boundary or len(lefts) >= 2
        right_maximal = right_boundary or len(rights) >= 2
        if left_maximal and right_maximal:
            out.add(body)
    return out


def naive_count_nonoverlap(acts, body):
    """Leftmost-greedy non-overlapping occurrence count."""
    acts = tuple(acts)
    body = tuple(body)
    count = 0
    i = 0
    while i + len(body) <= len(acts):
        if acts[i:i + len(body)] == body:
            count += 1
            i += len(body)
        else:
            i += 1
    return count


def naive_window_tandem(acts):
    """{sorted activity tuple: max k} for consecutive permutation-block runs."""
    acts = tuple(acts)
    n = len(acts)
    best = {}
    for i in range(n):
        for length in range(1, (n - i) // 2 + 1):
            block = acts[i:i + length]
            if len(set(block)) != length:
                continue
            target = sorted(block)
            k = 1
            j = i + length
            while j + length <= n and sorted(acts[j:j + length]) == target:
                k += 1
                j += length
            if k >= 2:
                key = tuple(target)
                best[key] = max(best.get(key, 0), k)
    return best


def naive_window_maximal(traces):
    """Order-insensitive maximal repeats: permutation-window sets with a
    non-overlapping count of at least 2, dropping any set whose raw windows
    all sit inside a repeated strict superset's raw windows."""
    traces = [tuple(t) for t in traces]
    windows = {}
    for ti, t in enumerate(traces):
        n = len(t)
        for i in range(n):
            for j in range(i + 1, n + 1):
                block = t[i:j]
                if len(set(block)) != j - i:
                    break
                windows.setdefault(tuple(sorted(block)), []).append((ti, i))

    def nonoverlap(key):
        length = len(key)
        total = 0
        for ti in {t for t, _ in windows[key]}:
            starts = sorted(s for t, s in windows[key] if t == ti)
            cursor = -1
            for s in starts:
                if s >= cursor:
                    total += 1
                    cursor = s + length
        return total

    repeats = {k for k in windows if nonoverlap(k) >= 2}
    out = set()
    for key in repeats:
        length = len(key)
        covered = False
        for other in repeats:
            if len(other) <= length or not set(key) < set(other):
                continue
            olen = len(other)
            occ = windows[other]
            if all(any(t2 == t and s2 <= s and s + length <= s2 + olen for t2, s2 in occ)
                   for t, s in windows[key]):
                covered = True
                break
        if not covered:
            out.add(key)
    return out
