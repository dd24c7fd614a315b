# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled point-counting kernel; same algorithm and signature as ``_count_py``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, uint64_t


class KernelBudgetExceeded(Exception):
    pass


cdef struct Ctx:
    int m
    int64_t p
    int A
    int B
    int64_t *XP          # (A+1) x (m+1)
    int64_t *YP          # (B+1) x (m+1)
    int nterms
    int *ta
    int *tb
    int64_t *tc
    int64_t c10
    int64_t c01
    int64_t inv10
    int64_t inv01
    int64_t shard
    uint64_t evals
    uint64_t budget
    uint64_t acc         # pending count, flushed into a Python int
    int over


cdef inline int64_t _residual(Ctx *C, int d) nogil:
    cdef int a, b, i, k, w = C.m + 1
    cdef int64_t p = C.p, s, total = 0
    cdef int64_t *X1 = C.XP + w
    cdef int64_t *Y1 = C.YP + w
    cdef int64_t *prev
    cdef int64_t *xa
    cdef int64_t *yb
    for a in range(2, C.A + 1):
        prev = C.XP + (a - 1) * w
        s = 0
        for i in range(1, d - a + 2):
            s = (s + X1[i] * prev[d - i]) % p
        C.XP[a * w + d] = s
    for b in range(2, C.B + 1):
        prev = C.YP + (b - 1) * w
        s = 0
        for i in range(1, d - b + 2):
            s = (s + Y1[i] * prev[d - i]) % p
        C.YP[b * w + d] = s
    for k in range(C.nterms):
        a = C.ta[k]
        b = C.tb[k]
        if a + b > d:
            continue
        xa = C.XP + a * w
        yb = C.YP + b * w
        if a == 0:
            s = yb[d]
        elif b == 0:
            s = xa[d]
        else:
            s = 0
            for i in range(a, d - b + 1):
                s = (s + xa[i] * yb[d - i]) % p
        total = (total + C.tc[k] * s) % p
    return total


cdef inline uint64_t _n_solutions(Ctx *C, int64_t r) nogil:
    if C.c01 or C.c10:
        return <uint64_t>C.p
    if r == 0:
        return <uint64_t>(C.p * C.p)
    return 0


cdef object _descend(Ctx *C, int d):
    """Returns the overflow part of the count (usually 0); the rest is in C.acc."""
    cdef int64_t r, x, y, p = C.p
    cdef int w = C.m + 1
    cdef uint64_t n
    cdef object big = 0
    C.evals += 1
    if C.evals > C.budget:
        C.over = 1
        return 0
    r = _residual(C, d)
    cdef bint filter_root = d == 1 and C.shard >= 0
    if d == C.m and not filter_root:
        n = _n_solutions(C, r)
        if C.acc > (<uint64_t>1 << 63):
            big += C.acc
            C.acc = 0
        C.acc += n
        return big
    if C.c01:
        for x in range(p):
            if filter_root and x != C.shard:
                continue
            y = ((p - (r + C.c10 * x) % p) % p) * C.inv01 % p
            big += _step(C, d, x, y)
            if C.over:
                return big
    elif C.c10:
        x = ((p - r) % p) * C.inv10 % p
        if not (filter_root and x != C.shard):
            for y in range(p):
                big += _step(C, d, x, y)
                if C.over:
                    return big
    elif r == 0:
        for x in range(p):
            if filter_root and x != C.shard:
                continue
            for y in range(p):
                big += _step(C, d, x, y)
                if C.over:
                    return big
    C.XP[w + d] = 0
    C.YP[w + d] = 0
    return big


cdef inline object _step(Ctx *C, int d, int64_t x, int64_t y):
    cdef int w = C.m + 1
    if d == C.m:
        C.acc += 1
        return 0
    C.XP[w + d] = x
    C.YP[w + d] = y
    return _descend(C, d + 1)


def count_points(terms, int m, p, budget, shard=-1):
    """Return ``(count, evaluations)``; see ``_count_py.count_points``."""
    cdef Ctx C
    cdef int k, w
    if m < 1:
        return 1, 0
    if p >= 2 ** 31:
        raise ValueError("compiled kernel needs p < 2^31")
    higher = []
    c10 = c01 = 0
    A = B = 1
    for a, b, c in terms:
        c %= p
        if not c:
            continue
        if (a, b) == (1, 0):
            c10 = c
        elif (a, b) == (0, 1):
            c01 = c
        else:
            higher.append((a, b, c))
            A, B = max(A, a), max(B, b)
    w = m + 1
    C.m = m
    C.p = p
    C.A = A
    C.B = B
    C.c10 = c10
    C.c01 = c01
    C.inv10 = pow(c10, -1, p) if c10 else 0
    C.inv01 = pow(c01, -1, p) if c01 else 0
    C.shard = shard
    C.evals = 0
    C.budget = min(budget, 2 ** 63)
    C.acc = 0
    C.over = 0
    C.nterms = len(higher)
    C.XP = <int64_t *>malloc((A + 1) * w * sizeof(int64_t))
    C.YP = <int64_t *>malloc((B + 1) * w * sizeof(int64_t))
    C.ta = <int *>malloc((C.nterms + 1) * sizeof(int))
    C.tb = <int *>malloc((C.nterms + 1) * sizeof(int))
    C.tc = <int64_t *>malloc((C.nterms + 1) * sizeof(int64_t))
    if not (C.XP and C.YP and C.ta and C.tb and C.tc):
        free(C.XP); free(C.YP); free(C.ta); free(C.tb); free(C.tc)
        raise MemoryError()
    try:
        for k in range((A + 1) * w):
            C.XP[k] = 0
        for k in range((B + 1) * w):
            C.YP[k] = 0
        C.XP[0] = 1
        C.YP[0] = 1
        for k, (a, b, c) in enumerate(higher):
            C.ta[k] = a
            C.tb[k] = b
            C.tc[k] = c
        big = _descend(&C, 1)
        if C.over:
            raise KernelBudgetExceeded(C.evals)
        return big + C.acc, C.evals
    finally:
        free(C.XP); free(C.YP); free(C.ta); free(C.tb); free(C.tc)
