"""Pure-Python implementations of the hot kernels.

Semantics are identical to the compiled ``_ckernels`` module; the two are
cross-checked by the test-suite. Array arguments are numpy arrays
(``int64`` transition tables, ``float64`` probability matrices).
"""
from collections import deque

import numpy as np

NAME = "python"


def refine(trans, init):
    """Coarsest refinement of ``init`` that is closed under ``trans``.

    Class ids in the result are numbered by first occurrence in state order.
    """
    rows = trans.tolist()
    n = len(rows)
    m = len(rows[0]) if n else 0
    cls = _canonical(list(init))
    count = len(set(cls))
    while True:
        cur = cls
        for a in range(m):
            ids = {}
            nxt = []
            for q in range(n):
                key = (cur[q], cls[rows[q][a]])
                k = ids.get(key)
                if k is None:
                    k = ids[key] = len(ids)
                nxt.append(k)
            cur = nxt
        new_count = len(set(cur))
        cls = cur
        if new_count == count:
            return cls
        count = new_count


def _canonical(labels):
    ids = {}
    return [ids.setdefault(x, len(ids)) for x in labels]


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _hopcroft_karp(ta, tb, ia, ib, differ):
    na = len(ta)
    m = len(ta[0]) if na else 0
    if differ(ia, ib):
        return []
    parent = list(range(na + len(tb)))
    parent[na + ib] = ia
    # each entry: (state_a, state_b, index of parent entry, symbol)
    seen = [(ia, ib, -1, -1)]
    queue = deque([0])
    while queue:
        k = queue.popleft()
        p, h = seen[k][0], seen[k][1]
        for a in range(m):
            p2, h2 = ta[p][a], tb[h][a]
            r1, r2 = _find(parent, p2), _find(parent, na + h2)
            if r1 == r2:
                continue
            seen.append((p2, h2, k, a))
            if differ(p2, h2):
                return _path(seen, len(seen) - 1)
            parent[r2] = r1
            queue.append(len(seen) - 1)
    return None


def _path(seen, k):
    out = []
    while seen[k][2] >= 0:
        out.append(seen[k][3])
        k = seen[k][2]
    out.reverse()
    return out


def hk_labels(trans_a, trans_b, init_a, init_b, labels_a, labels_b):
    """Shortest-by-BFS word reaching a pair with different labels, or None."""
    la, lb = labels_a.tolist(), labels_b.tolist()
    return _hopcroft_karp(trans_a.tolist(), trans_b.tolist(), init_a, init_b,
                          lambda p, h: la[p] != lb[h])


def hk_tolerance(trans_a, trans_b, init_a, init_b, probs_a, probs_b, t):
    """As :func:`hk_labels`, but a pair differs when its L-inf gap exceeds t."""
    pa, pb = probs_a.tolist(), probs_b.tolist()

    def differ(p, h):
        return max(abs(x - y) for x, y in zip(pa[p], pb[h])) > t

    return _hopcroft_karp(trans_a.tolist(), trans_b.tolist(), init_a, init_b, differ)


def first_far_row(rows, ref, t):
    """Index of the first row of ``rows`` farther than t (L-inf) from all of ``ref``."""
    if len(rows) == 0:
        return -1
    if len(ref) == 0:
        return 0
    for i in range(len(rows)):
        gaps = np.abs(ref - rows[i]).max(axis=1)
        if not (gaps <= t).any():
            return i
    return -1


def first_inconsistency(rows, succ, t):
    """First (i, j, a, col) with rows i, j t-equal but succ[i, a], succ[j, a] not.

    ``rows`` is (r, k); ``succ`` is (r, m, k) holding the rows of the
    one-symbol continuations. Scan order: i < j, then symbol, then column.
    """
    r = len(rows)
    for i in range(r):
        close = np.abs(rows[i + 1:] - rows[i]).max(axis=1) <= t if i + 1 < r else []
        for off in np.flatnonzero(close):
            j = i + 1 + int(off)
            bad = np.abs(succ[i] - succ[j]) > t
            if bad.any():
                a, col = np.argwhere(bad)[0]
                return i, j, int(a), int(col)
    return None
