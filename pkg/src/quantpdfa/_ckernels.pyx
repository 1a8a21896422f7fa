# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot kernels. Mirrors ``_pykernels`` exactly."""
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from libc.math cimport fabs
cimport cython

from libc.stdint cimport int64_t

import numpy as np

NAME = "cython"


def refine(const int64_t[:, ::1] trans, init):
    cdef Py_ssize_t n = trans.shape[0]
    cdef Py_ssize_t m = trans.shape[1] if n else 0
    cdef Py_ssize_t q, a
    cdef vector[int64_t] cls = vector[int64_t](n)
    cdef vector[int64_t] cur = vector[int64_t](n)
    cdef vector[int64_t] nxt = vector[int64_t](n)
    cdef unordered_map[int64_t, int64_t] ids
    cdef unordered_map[int64_t, int64_t].iterator it
    cdef int64_t key, k, count, new_count

    labels = {}
    for q, x in enumerate(init):
        cls[q] = labels.setdefault(x, len(labels))
    count = len(labels)
    while True:
        cur = cls
        for a in range(m):
            ids.clear()
            for q in range(n):
                key = cur[q] * n + cls[trans[q, a]]
                it = ids.find(key)
                if it == ids.end():
                    k = ids.size()
                    ids[key] = k
                else:
                    k = cython.operator.dereference(it).second
                nxt[q] = k
            cur.swap(nxt)
        if m == 0:
            new_count = count
        else:
            new_count = ids.size()
        cls = cur
        if new_count == count:
            return [cls[q] for q in range(n)]
        count = new_count


cdef inline Py_ssize_t _find(vector[Py_ssize_t]& parent, Py_ssize_t x):
    cdef Py_ssize_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


cdef list _path(vector[Py_ssize_t]& up, vector[Py_ssize_t]& sym, Py_ssize_t k):
    out = []
    while up[k] >= 0:
        out.append(sym[k])
        k = up[k]
    out.reverse()
    return out


cdef object _hk(const int64_t[:, ::1] ta, const int64_t[:, ::1] tb,
                Py_ssize_t ia, Py_ssize_t ib,
                const int64_t[::1] la, const int64_t[::1] lb,
                const double[:, ::1] pa, const double[:, ::1] pb,
                double t, bint use_labels):
    cdef Py_ssize_t na = ta.shape[0], nb = tb.shape[0]
    cdef Py_ssize_t m = ta.shape[1]
    cdef Py_ssize_t k, head = 0, p, h, p2, h2, r1, r2, a
    cdef vector[Py_ssize_t] parent = vector[Py_ssize_t](na + nb)
    cdef vector[Py_ssize_t] sa, sb, up, sym

    if _differs(ia, ib, la, lb, pa, pb, t, use_labels):
        return []
    for k in range(na + nb):
        parent[k] = k
    parent[na + ib] = ia
    sa.push_back(ia); sb.push_back(ib); up.push_back(-1); sym.push_back(-1)
    while head < <Py_ssize_t>sa.size():
        k = head
        head += 1
        p = sa[k]
        h = sb[k]
        for a in range(m):
            p2 = ta[p, a]
            h2 = tb[h, a]
            r1 = _find(parent, p2)
            r2 = _find(parent, na + h2)
            if r1 == r2:
                continue
            sa.push_back(p2); sb.push_back(h2); up.push_back(k); sym.push_back(a)
            if _differs(p2, h2, la, lb, pa, pb, t, use_labels):
                return _path(up, sym, sa.size() - 1)
            parent[r2] = r1
    return None


cdef inline bint _differs(Py_ssize_t p, Py_ssize_t h,
                          const int64_t[::1] la, const int64_t[::1] lb,
                          const double[:, ::1] pa, const double[:, ::1] pb,
                          double t, bint use_labels):
    cdef Py_ssize_t c
    cdef double gap = 0.0, d
    if use_labels:
        return la[p] != lb[h]
    for c in range(pa.shape[1]):
        d = fabs(pa[p, c] - pb[h, c])
        if d > gap:
            gap = d
    return gap > t


_EMPTY_I = np.zeros(1, dtype=np.int64)
_EMPTY_F = np.zeros((1, 1), dtype=np.float64)


def hk_labels(trans_a, trans_b, Py_ssize_t init_a, Py_ssize_t init_b, labels_a, labels_b):
    return _hk(trans_a, trans_b, init_a, init_b,
               np.ascontiguousarray(labels_a, dtype=np.int64),
               np.ascontiguousarray(labels_b, dtype=np.int64),
               _EMPTY_F, _EMPTY_F, 0.0, True)


def hk_tolerance(trans_a, trans_b, Py_ssize_t init_a, Py_ssize_t init_b, probs_a, probs_b, double t):
    return _hk(trans_a, trans_b, init_a, init_b, _EMPTY_I, _EMPTY_I,
               np.ascontiguousarray(probs_a, dtype=np.float64),
               np.ascontiguousarray(probs_b, dtype=np.float64), t, False)


def first_far_row(rows_in, ref_in, double t):
    cdef const double[:, ::1] rows = np.ascontiguousarray(rows_in, dtype=np.float64)
    cdef const double[:, ::1] ref = np.ascontiguousarray(ref_in, dtype=np.float64)
    cdef Py_ssize_t i, j, c, k = rows.shape[1]
    cdef bint close
    if rows.shape[0] == 0:
        return -1
    if ref.shape[0] == 0:
        return 0
    for i in range(rows.shape[0]):
        for j in range(ref.shape[0]):
            close = True
            for c in range(k):
                if fabs(rows[i, c] - ref[j, c]) > t:
                    close = False
                    break
            if close:
                break
        if not close:
            return i
    return -1


def first_inconsistency(rows_in, succ_in, double t):
    cdef const double[:, ::1] rows = np.ascontiguousarray(rows_in, dtype=np.float64)
    cdef const double[:, :, ::1] succ = np.ascontiguousarray(succ_in, dtype=np.float64)
    cdef Py_ssize_t r = rows.shape[0], k = rows.shape[1], m = succ.shape[1]
    cdef Py_ssize_t i, j, a, c
    cdef bint close
    for i in range(r):
        for j in range(i + 1, r):
            close = True
            for c in range(k):
                if fabs(rows[i, c] - rows[j, c]) > t:
                    close = False
                    break
            if not close:
                continue
            for a in range(m):
                for c in range(k):
                    if fabs(succ[i, a, c] - succ[j, a, c]) > t:
                        return i, j, a, c
    return None
