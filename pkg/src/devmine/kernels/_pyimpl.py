"""Pure-Python sequence-scan kernels (reference implementation).

All functions operate on sequences of small non-negative ints (activity ids).
Semantics are shared with the compiled twin in ``_speedups.pyx``; keep the two
in sync.
"""


def _period(body):
    # smallest period via the KMP failure function
    n = len(body)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and body[i] != body[k]:
            k = fail[k - 1]
        if body[i] == body[k]:
            k += 1
        fail[i] = k
    return n - fail[n - 1]


def _is_primitive(body):
    p = _period(body)
    return p == len(body) or len(body) % p != 0


def count_occurrences(seq, pattern):
    """Leftmost-greedy non-overlapping occurrences of `pattern` in `seq`."""
    seq = list(seq)
    pat = list(pattern)
    n, m = len(seq), len(pat)
    if m == 0 or m > n:
        return 0
    count = 0
    i = 0
    while i + m <= n:
        if seq[i:i + m] == pat:
            count += 1
            i += m
        else:
            i += 1
    return count


def count_window_occurrences(seq, window):
    """Leftmost-greedy non-overlapping windows that are permutations of `window`.

    `window` is a sorted sequence of distinct ids; a match is any contiguous
    block of the same length containing exactly those ids.
    """
    seq = list(seq)
    target = list(window)
    n, m = len(seq), len(target)
    if m == 0 or m > n:
        return 0
    count = 0
    i = 0
    while i + m <= n:
        if sorted(seq[i:i + m]) == target:
            count += 1
            i += m
        else:
            i += 1
    return count


def tandem_runs(seq):
    """Primitive tandem-repeat bodies with their maximal repetition counts.

    Returns {body tuple: k} for every primitive body repeated k >= 2 times
    consecutively somewhere in `seq` (k is the maximum over all runs).
    """
    seq = list(seq)
    n = len(seq)
    best = {}
    for length in range(1, n // 2 + 1):
        for i in range(n - 2 * length + 1):
            body = seq[i:i + length]
            if seq[i + length:i + 2 * length] != body or not _is_primitive(body):
                continue
            k = 2
            j = i + 2 * length
            while j + length <= n and seq[j:j + length] == body:
                k += 1
                j += length
            key = tuple(body)
            if k > best.get(key, 0):
                best[key] = k
    return best


def window_tandem_runs(seq):
    """Order-insensitive tandem runs: consecutive permutation blocks.

    Returns {sorted distinct-id tuple: k} for every activity set whose
    permutation blocks tile k >= 2 times consecutively somewhere in `seq`.
    """
    seq = list(seq)
    n = len(seq)
    best = {}
    # blocks need distinct elements, so no window can beat the distinct count
    max_len = min(n // 2, len(set(seq)))
    for length in range(1, max_len + 1):
        for i in range(n - 2 * length + 1):
            block = sorted(seq[i:i + length])
            if any(block[t] == block[t + 1] for t in range(length - 1)):
                continue
            k = 1
            j = i + length
            while j + length <= n and sorted(seq[j:j + length]) == block:
                k += 1
                j += length
            if k >= 2:
                key = tuple(block)
                if k > best.get(key, 0):
                    best[key] = k
    return best
