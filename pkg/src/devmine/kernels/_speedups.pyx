# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sequence-scan kernels. Semantics mirror ``_pyimpl`` exactly."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


cdef int* _to_buf(object seq, Py_ssize_t* out_n) except NULL:
    cdef Py_ssize_t n = len(seq)
    cdef int* buf = <int*> PyMem_Malloc(max(n, 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = seq[i]
    out_n[0] = n
    return buf


cdef Py_ssize_t _smallest_period(int* body, Py_ssize_t n, Py_ssize_t* fail):
    cdef Py_ssize_t i, k = 0
    fail[0] = 0
    for i in range(1, n):
        while k > 0 and body[i] != body[k]:
            k = fail[k - 1]
        if body[i] == body[k]:
            k += 1
        fail[i] = k
    return n - fail[n - 1]


cdef bint _block_is_perm(int* seq, Py_ssize_t i, Py_ssize_t m, int* target, int* scratch):
    # target sorted ascending; scratch has room for m ints
    cdef Py_ssize_t t, u
    for t in range(m):
        scratch[t] = seq[i + t]
    # insertion sort (m is tiny)
    cdef int v
    for t in range(1, m):
        v = scratch[t]
        u = t
        while u > 0 and scratch[u - 1] > v:
            scratch[u] = scratch[u - 1]
            u -= 1
        scratch[u] = v
    for t in range(m):
        if scratch[t] != target[t]:
            return 0
    return 1


def count_occurrences(seq, pattern):
    """Leftmost-greedy non-overlapping occurrences of `pattern` in `seq`."""
    cdef Py_ssize_t n = 0, m = 0
    cdef int* s = _to_buf(seq, &n)
    cdef int* p = NULL
    cdef Py_ssize_t i = 0, j
    cdef long count = 0
    cdef bint hit
    try:
        p = _to_buf(pattern, &m)
        if m == 0 or m > n:
            return 0
        while i + m <= n:
            hit = 1
            for j in range(m):
                if s[i + j] != p[j]:
                    hit = 0
                    break
            if hit:
                count += 1
                i += m
            else:
                i += 1
        return count
    finally:
        PyMem_Free(s)
        if p != NULL:
            PyMem_Free(p)


def count_window_occurrences(seq, window):
    """Leftmost-greedy non-overlapping permutation-window occurrences."""
    cdef Py_ssize_t n = 0, m = 0
    cdef int* s = _to_buf(seq, &n)
    cdef int* w = NULL
    cdef int* scratch = NULL
    cdef Py_ssize_t i = 0
    cdef long count = 0
    try:
        w = _to_buf(window, &m)
        if m == 0 or m > n:
            return 0
        scratch = <int*> PyMem_Malloc(m * sizeof(int))
        if scratch == NULL:
            raise MemoryError()
        while i + m <= n:
            if _block_is_perm(s, i, m, w, scratch):
                count += 1
                i += m
            else:
                i += 1
        return count
    finally:
        PyMem_Free(s)
        if w != NULL:
            PyMem_Free(w)
        if scratch != NULL:
            PyMem_Free(scratch)


def tandem_runs(seq):
    """Primitive tandem-repeat bodies mapped to maximal repetition counts."""
    cdef Py_ssize_t n = 0
    cdef int* s = _to_buf(seq, &n)
    cdef Py_ssize_t* fail = NULL
    cdef Py_ssize_t length, i, j, t, period, k
    cdef bint same
    best = {}
    try:
        fail = <Py_ssize_t*> PyMem_Malloc(max(n, 1) * sizeof(Py_ssize_t))
        if fail == NULL:
            raise MemoryError()
        for length in range(1, n // 2 + 1):
            for i in range(n - 2 * length + 1):
                same = 1
                for t in range(length):
                    if s[i + t] != s[i + length + t]:
                        same = 0
                        break
                if not same:
                    continue
                period = _smallest_period(s + i, length, fail)
                if period < length and length % period == 0:
                    continue
                k = 2
                j = i + 2 * length
                while j + length <= n:
                    same = 1
                    for t in range(length):
                        if s[j + t] != s[i + t]:
                            same = 0
                            break
                    if not same:
                        break
                    k += 1
                    j += length
                key = tuple([s[i + t] for t in range(length)])
                if k > best.get(key, 0):
                    best[key] = k
        return best
    finally:
        PyMem_Free(s)
        if fail != NULL:
            PyMem_Free(fail)


def window_tandem_runs(seq):
    """Order-insensitive tandem runs: consecutive permutation blocks."""
    cdef Py_ssize_t n = 0
    cdef int* s = _to_buf(seq, &n)
    cdef int* block = NULL
    cdef int* scratch = NULL
    cdef Py_ssize_t length, i, j, t, u, k, max_len
    cdef int v
    cdef bint distinct
    best = {}
    try:
        block = <int*> PyMem_Malloc(max(n, 1) * sizeof(int))
        scratch = <int*> PyMem_Malloc(max(n, 1) * sizeof(int))
        if block == NULL or scratch == NULL:
            raise MemoryError()
        # blocks need distinct elements, so no window can beat the distinct count
        max_len = len(set(seq))
        if max_len > n // 2:
            max_len = n // 2
        for length in range(1, max_len + 1):
            for i in range(n - 2 * length + 1):
                for t in range(length):
                    block[t] = s[i + t]
                for t in range(1, length):
                    v = block[t]
                    u = t
                    while u > 0 and block[u - 1] > v:
                        block[u] = block[u - 1]
                        u -= 1
                    block[u] = v
                distinct = 1
                for t in range(length - 1):
                    if block[t] == block[t + 1]:
                        distinct = 0
                        break
                if not distinct:
                    continue
                k = 1
                j = i + length
                while j + length <= n and _block_is_perm(s, j, length, block, scratch):
                    k += 1
                    j += length
                if k >= 2:
                    key = tuple([block[t] for t in range(length)])
                    if k > best.get(key, 0):
                        best[key] = k
        return best
    finally:
        PyMem_Free(s)
        if block != NULL:
            PyMem_Free(block)
        if scratch != NULL:
            PyMem_Free(scratch)
