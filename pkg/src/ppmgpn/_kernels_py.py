"""Pure-Python edit-distance kernels.

Reference implementation of the functions compiled in ``_kernels.pyx``.
Both modules expose the same names and must agree exactly; the test-suite
runs every kernel test against each available backend.
"""

from __future__ import annotations

from collections.abc import Sequence

MATCH, SUBSTITUTE, DELETE, INSERT = 0, 1, 2, 3


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Unit-cost Levenshtein distance between two sequences of hashables."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            if x == y:
                cur.append(prev[j - 1])
            else:
                cur.append(1 + min(prev[j - 1], prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def align_opcodes(a: Sequence, b: Sequence) -> list[int]:
    """Minimum-edit alignment as a list of opcodes, in sequence order.

    Backtrace prefers match > substitute > delete > insert among co-optimal
    predecessors.  ``DELETE`` consumes an element of ``a`` only, ``INSERT`` an
    element of ``b`` only.
    """
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        row, up = dp[i], dp[i - 1]
        x = a[i - 1]
        for j in range(1, m + 1):
            if x == b[j - 1]:
                row[j] = up[j - 1]
            else:
                row[j] = 1 + min(up[j - 1], up[j], row[j - 1])
    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        d = dp[i][j]
        if i > 0 and j > 0:
            if a[i - 1] == b[j - 1] and dp[i - 1][j - 1] == d:
                ops.append(MATCH)
                i -= 1
                j -= 1
                continue
            if dp[i - 1][j - 1] + 1 == d:
                ops.append(SUBSTITUTE)
                i -= 1
                j -= 1
                continue
        if i > 0 and dp[i - 1][j] + 1 == d:
            ops.append(DELETE)
            i -= 1
        else:
            ops.append(INSERT)
            j -= 1
    ops.reverse()
    return ops


def feature_edit_distance(
    a: Sequence[int], b: Sequence[int], features: bytes, n_feat: int
) -> float:
    """Levenshtein distance over feature-table rows.

    ``a`` and ``b`` hold row indices into ``features``, a flat row-major
    byte matrix of encoded ternary values with ``n_feat`` columns.
    Substitution costs the fraction of differing features; insertion and
    deletion cost 1.0.
    """
    n, m = len(a), len(b)
    prev = [float(j) for j in range(m + 1)]
    for i in range(1, n + 1):
        ra = a[i - 1] * n_feat
        cur = [float(i)]
        for j in range(1, m + 1):
            rb = b[j - 1] * n_feat
            diff = 0
            for k in range(n_feat):
                if features[ra + k] != features[rb + k]:
                    diff += 1
            cur.append(min(prev[j - 1] + diff / n_feat, prev[j] + 1.0, cur[j - 1] + 1.0))
        prev = cur
    return prev[m]
