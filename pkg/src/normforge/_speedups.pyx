# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled Damerau-Levenshtein kernel.

Mirrors the pure-Python fallback in ``_align_py`` exactly, including the
backtrace tie-break order (match > transpose > substitute > delete >
insert).
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free

BACKEND = "compiled"


cdef inline Py_UCS4* _to_array(str s, Py_ssize_t n) except NULL:
    cdef Py_UCS4* buf = <Py_UCS4*> PyMem_Malloc(max(n, 1) * sizeof(Py_UCS4))
    cdef Py_ssize_t i
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = s[i]
    return buf


def distance(str raw, str norm):
    """Damerau-Levenshtein distance (unit costs, adjacent transposition)."""
    cdef Py_ssize_t la = len(raw), lb = len(norm)
    if la == 0:
        return lb
    if lb == 0:
        return la
    cdef Py_UCS4* a = _to_array(raw, la)
    cdef Py_UCS4* b = _to_array(norm, lb)
    cdef int* rows = <int*> PyMem_Malloc(3 * (lb + 1) * sizeof(int))
    if rows == NULL:
        PyMem_Free(a)
        PyMem_Free(b)
        raise MemoryError()
    cdef int* prev2
    cdef int* prev = rows
    cdef int* cur = rows + (lb + 1)
    cdef int* spare = rows + 2 * (lb + 1)
    cdef int* tmp
    cdef Py_ssize_t i, j
    cdef int cost, alt
    cdef Py_UCS4 ri
    try:
        prev2 = spare
        for j in range(lb + 1):
            prev[j] = <int> j
        for i in range(1, la + 1):
            cur[0] = <int> i
            ri = a[i - 1]
            for j in range(1, lb + 1):
                cost = prev[j - 1] + (ri != b[j - 1])
                alt = prev[j] + 1
                if alt < cost:
                    cost = alt
                alt = cur[j - 1] + 1
                if alt < cost:
                    cost = alt
                if i > 1 and j > 1 and ri == b[j - 2] and a[i - 2] == b[j - 1]:
                    alt = prev2[j - 2] + 1
                    if alt < cost:
                        cost = alt
                cur[j] = cost
            tmp = prev2
            prev2 = prev
            prev = cur
            cur = tmp
        return prev[lb]
    finally:
        PyMem_Free(rows)
        PyMem_Free(a)
        PyMem_Free(b)


def align(str raw, str norm):
    """Minimal-cost edit script transforming norm into raw."""
    cdef Py_ssize_t la = len(raw), lb = len(norm)
    cdef Py_ssize_t stride = lb + 1
    cdef int* d = <int*> PyMem_Malloc((la + 1) * stride * sizeof(int))
    if d == NULL:
        raise MemoryError()
    cdef Py_UCS4* a = NULL
    cdef Py_UCS4* b = NULL
    cdef Py_ssize_t i, j
    cdef int cost, alt, cur
    cdef Py_UCS4 ri
    cdef list ops = []
    try:
        a = _to_array(raw, la)
        b = _to_array(norm, lb)
        for i in range(la + 1):
            d[i * stride] = <int> i
        for j in range(lb + 1):
            d[j] = <int> j
        for i in range(1, la + 1):
            ri = a[i - 1]
            for j in range(1, lb + 1):
                cost = d[(i - 1) * stride + j - 1] + (ri != b[j - 1])
                alt = d[(i - 1) * stride + j] + 1
                if alt < cost:
                    cost = alt
                alt = d[i * stride + j - 1] + 1
                if alt < cost:
                    cost = alt
                if i > 1 and j > 1 and ri == b[j - 2] and a[i - 2] == b[j - 1]:
                    alt = d[(i - 2) * stride + j - 2] + 1
                    if alt < cost:
                        cost = alt
                d[i * stride + j] = cost

        i, j = la, lb
        while i > 0 or j > 0:
            cur = d[i * stride + j]
            if i > 0 and j > 0 and a[i - 1] == b[j - 1] and cur == d[(i - 1) * stride + j - 1]:
                ops.append(("match", raw[i - 1], norm[j - 1], j - 1))
                i -= 1
                j -= 1
            elif (
                i > 1
                and j > 1
                and a[i - 1] == b[j - 2]
                and a[i - 2] == b[j - 1]
                and a[i - 1] != b[j - 1]
                and cur == d[(i - 2) * stride + j - 2] + 1
            ):
                ops.append(("transpose", None, None, j - 2))
                i -= 2
                j -= 2
            elif i > 0 and j > 0 and cur == d[(i - 1) * stride + j - 1] + 1:
                ops.append(("substitute", raw[i - 1], norm[j - 1], j - 1))
                i -= 1
                j -= 1
            elif j > 0 and cur == d[i * stride + j - 1] + 1:
                ops.append(("delete", None, norm[j - 1], j - 1))
                j -= 1
            else:
                ops.append(("insert", raw[i - 1], None, j))
                i -= 1
        ops.reverse()
        return ops
    finally:
        if b != NULL:
            PyMem_Free(b)
        if a != NULL:
            PyMem_Free(a)
        PyMem_Free(d)
