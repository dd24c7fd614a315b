"""Pure-Python point-counting kernel (fallback for the compiled one).

Counts assignments of ``X[1..m], Y[1..m]`` in ``F_p`` with ``F^(1..m) = 0``
when ``X[0] = Y[0] = 0``.  The search fixes one order at a time.  Because both
series start at ``t^1``, ``F^(d) = c10*X[d] + c01*Y[d] + R_d`` where ``R_d``
only involves orders below ``d``, so the admissible ``(X[d], Y[d])`` form a
line, the whole plane or nothing.  Power tables ``XP[a][t] = [t^t] X^a`` are
filled in incrementally as the prefix grows.
"""


class KernelBudgetExceeded(Exception):
    pass


def count_points(terms, m, p, budget, shard=-1):
    """Return ``(count, evaluations)``.

    ``terms`` is a list of ``(a, b, c)`` with ``a + b >= 1`` and ``0 <= c < p``.
    ``shard >= 0`` restricts ``X[1]`` to that value.  ``evaluations`` counts
    computed ``R_d`` values; exceeding ``budget`` raises ``KernelBudgetExceeded``.
    """
    c10 = c01 = 0
    higher = []
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
    # only terms with a + b <= d contribute to F^(d)
    by_level = [[t for t in higher if t[0] + t[1] <= d] for d in range(m + 1)]
    XP = [[0] * (m + 1) for _ in range(A + 1)]
    YP = [[0] * (m + 1) for _ in range(B + 1)]
    XP[0][0] = YP[0][0] = 1
    inv01 = pow(c01, -1, p) if c01 else 0
    inv10 = pow(c10, -1, p) if c10 else 0
    state = {"evals": 0}

    def residual(d):
        state["evals"] += 1
        if state["evals"] > budget:
            raise KernelBudgetExceeded(state["evals"])
        for a in range(2, A + 1):
            prev, acc = XP[a - 1], 0
            X1 = XP[1]
            for i in range(1, d - a + 2):
                acc += X1[i] * prev[d - i]
            XP[a][d] = acc % p
        for b in range(2, B + 1):
            prev, acc = YP[b - 1], 0
            Y1 = YP[1]
            for i in range(1, d - b + 2):
                acc += Y1[i] * prev[d - i]
            YP[b][d] = acc % p
        total = 0
        for a, b, c in by_level[d]:
            xa, yb = XP[a], YP[b]
            if a == 0:
                total += c * yb[d]
            elif b == 0:
                total += c * xa[d]
            else:
                acc = 0
                for i in range(a, d - b + 1):
                    acc += xa[i] * yb[d - i]
                total += c * acc
        return total % p

    def solutions(r):
        if c01:
            for x in range(p):
                yield x, (-(r + c10 * x) * inv01) % p
        elif c10:
            x = (-r * inv10) % p
            for y in range(p):
                yield x, y
        elif r == 0:
            for x in range(p):
                for y in range(p):
                    yield x, y

    def n_solutions(r):
        if c01 or c10:
            return p
        return p * p if r == 0 else 0

    def descend(d):
        r = residual(d)
        if d == m and not (d == 1 and shard >= 0):
            return n_solutions(r)
        found = 0
        for x, y in solutions(r):
            if d == 1 and shard >= 0 and x != shard:
                continue
            if d == m:
                found += 1
                continue
            XP[1][d], YP[1][d] = x, y
            found += descend(d + 1)
        XP[1][d] = YP[1][d] = 0
        return found

    if m < 1:
        return 1, 0
    count = descend(1)
    return count, state["evals"]
