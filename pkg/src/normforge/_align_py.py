"""Pure-Python Damerau-Levenshtein kernel (fallback for the compiled core).

Same interface as the compiled module: ``distance`` returns the edit cost,
``align`` the backtraced op list as tuples (kind, raw_char, norm_char,
position).  Positions index into ``norm``; the scripts transform norm into
raw.  Ties during backtrace prefer match > transpose > substitute > delete
> insert.
"""

from __future__ import annotations

BACKEND = "python"


def distance(raw: str, norm: str) -> int:
    """Damerau-Levenshtein distance (unit costs, adjacent transposition)."""
    la, lb = len(raw), len(norm)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev2: list[int] = []
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        cur = [i] + [0] * lb
        ri = raw[i - 1]
        for j in range(1, lb + 1):
            cost = prev[j - 1] + (ri != norm[j - 1])
            if prev[j] + 1 < cost:
                cost = prev[j] + 1
            if cur[j - 1] + 1 < cost:
                cost = cur[j - 1] + 1
            if (
                i > 1
                and j > 1
                and ri == norm[j - 2]
                and raw[i - 2] == norm[j - 1]
                and prev2[j - 2] + 1 < cost
            ):
                cost = prev2[j - 2] + 1
            cur[j] = cost
        prev2, prev = prev, cur
    return prev[lb]


def align(raw: str, norm: str) -> list[tuple[str, str | None, str | None, int]]:
    """Minimal-cost edit script transforming norm into raw."""
    la, lb = len(raw), len(norm)
    d = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la + 1):
        d[i][0] = i
    for j in range(lb + 1):
        d[0][j] = j
    for i in range(1, la + 1):
        ri = raw[i - 1]
        row = d[i]
        above = d[i - 1]
        for j in range(1, lb + 1):
            cost = above[j - 1] + (ri != norm[j - 1])
            if above[j] + 1 < cost:
                cost = above[j] + 1
            if row[j - 1] + 1 < cost:
                cost = row[j - 1] + 1
            if (
                i > 1
                and j > 1
                and ri == norm[j - 2]
                and raw[i - 2] == norm[j - 1]
                and d[i - 2][j - 2] + 1 < cost
            ):
                cost = d[i - 2][j - 2] + 1
            row[j] = cost

    ops: list[tuple[str, str | None, str | None, int]] = []
    i, j = la, lb
    while i > 0 or j > 0:
        cur = d[i][j]
        if i > 0 and j > 0 and raw[i - 1] == norm[j - 1] and cur == d[i - 1][j - 1]:
            ops.append(("match", raw[i - 1], norm[j - 1], j - 1))
            i -= 1
            j -= 1
        elif (
            i > 1
            and j > 1
            and raw[i - 1] == norm[j - 2]
            and raw[i - 2] == norm[j - 1]
            and raw[i - 1] != norm[j - 1]
            and cur == d[i - 2][j - 2] + 1
        ):
            ops.append(("transpose", None, None, j - 2))
            i -= 2
            j -= 2
        elif i > 0 and j > 0 and cur == d[i - 1][j - 1] + 1:
            ops.append(("substitute", raw[i - 1], norm[j - 1], j - 1))
            i -= 1
            j -= 1
        elif j > 0 and cur == d[i][j - 1] + 1:
            ops.append(("delete", None, norm[j - 1], j - 1))
            j -= 1
        else:
            ops.append(("insert", raw[i - 1], None, j))
            i -= 1
    ops.reverse()
    return ops
