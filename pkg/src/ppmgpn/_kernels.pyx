# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled edit-distance kernels; see ``_kernels_py`` for the reference."""

from libc.stdlib cimport malloc, free

cdef int MATCH = 0
cdef int SUBSTITUTE = 1
cdef int DELETE = 2
cdef int INSERT = 3


cdef int* _intern(seq, dict ids, Py_ssize_t n) except NULL:
    cdef int* out = <int*> malloc((n + 1) * sizeof(int))
    cdef Py_ssize_t i
    if out == NULL:
        raise MemoryError()
    for i in range(n):
        key = seq[i]
        v = ids.get(key)
        if v is None:
            v = len(ids)
            ids[key] = v
        out[i] = v
    return out


def edit_distance(a, b):
    cdef Py_ssize_t n = len(a), m = len(b), i, j
    if n < m:
        a, b = b, a
        n, m = m, n
    if m == 0:
        return n
    cdef dict ids = {}
    cdef int* x = _intern(a, ids, n)
    cdef int* y = _intern(b, ids, m)
    cdef int* prev = <int*> malloc((m + 1) * sizeof(int))
    cdef int* cur = <int*> malloc((m + 1) * sizeof(int))
    cdef int* tmp
    cdef int best, xi
    for j in range(m + 1):
        prev[j] = j
    for i in range(1, n + 1):
        cur[0] = i
        xi = x[i - 1]
        for j in range(1, m + 1):
            if xi == y[j - 1]:
                cur[j] = prev[j - 1]
            else:
                best = prev[j - 1]
                if prev[j] < best:
                    best = prev[j]
                if cur[j - 1] < best:
                    best = cur[j - 1]
                cur[j] = best + 1
        tmp = prev
        prev = cur
        cur = tmp
    best = prev[m]
    free(x)
    free(y)
    free(prev)
    free(cur)
    return best


def align_opcodes(a, b):
    cdef Py_ssize_t n = len(a), m = len(b), i, j, w = m + 1
    cdef dict ids = {}
    cdef int* x = _intern(a, ids, n)
    cdef int* y = _intern(b, ids, m)
    cdef int* dp = <int*> malloc((n + 1) * w * sizeof(int))
    cdef int best, d
    for i in range(n + 1):
        dp[i * w] = i
    for j in range(m + 1):
        dp[j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if x[i - 1] == y[j - 1]:
                dp[i * w + j] = dp[(i - 1) * w + j - 1]
            else:
                best = dp[(i - 1) * w + j - 1]
                if dp[(i - 1) * w + j] < best:
                    best = dp[(i - 1) * w + j]
                if dp[i * w + j - 1] < best:
                    best = dp[i * w + j - 1]
                dp[i * w + j] = best + 1
    ops = []
    i = n
    j = m
    while i > 0 or j > 0:
        d = dp[i * w + j]
        if i > 0 and j > 0:
            if x[i - 1] == y[j - 1] and dp[(i - 1) * w + j - 1] == d:
                ops.append(MATCH)
                i -= 1
                j -= 1
                continue
            if dp[(i - 1) * w + j - 1] + 1 == d:
                ops.append(SUBSTITUTE)
                i -= 1
                j -= 1
                continue
        if i > 0 and dp[(i - 1) * w + j] + 1 == d:
            ops.append(DELETE)
            i -= 1
        else:
            ops.append(INSERT)
            j -= 1
    free(x)
    free(y)
    free(dp)
    ops.reverse()
    return ops


def feature_edit_distance(a, b, const unsigned char[:] features, int n_feat):
    cdef Py_ssize_t n = len(a), m = len(b), i, j, k
    cdef const unsigned char[:] feats = features
    cdef double* prev = <double*> malloc((m + 1) * sizeof(double))
    cdef double* cur = <double*> malloc((m + 1) * sizeof(double))
    cdef double* tmp
    cdef double best, c
    cdef int diff
    cdef Py_ssize_t ra, rb
    for j in range(m + 1):
        prev[j] = j
    for i in range(1, n + 1):
        cur[0] = i
        ra = a[i - 1] * n_feat
        for j in range(1, m + 1):
            rb = b[j - 1] * n_feat
            diff = 0
            for k in range(n_feat):
                if feats[ra + k] != feats[rb + k]:
                    diff += 1
            best = prev[j - 1] + (<double> diff) / n_feat
            c = prev[j] + 1.0
            if c < best:
                best = c
            c = cur[j - 1] + 1.0
            if c < best:
                best = c
            cur[j] = best
        tmp = prev
        prev = cur
        cur = tmp
    best = prev[m]
    free(prev)
    free(cur)
    return best
