# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled all-pairs box adjacency scan.

Must mirror ``_boxpairs_py.scan_pairs`` exactly; equivalence is enforced
by the test suite.
"""

from libc.math cimport fabs


cdef inline bint _pair_adjacent(
    double[:, ::1] mins, double[:, ::1] maxs,
    Py_ssize_t i, Py_ssize_t j, double eps, bint gamma,
) nogil:
    cdef Py_ssize_t k, m
    cdef bint hit, c1, c2, overlap
    cdef double d1, d2

    if gamma:
        hit = True
        for k in range(3):
            if not (maxs[i, k] >= mins[j, k] - eps and mins[i, k] <= maxs[j, k] + eps):
                hit = False
                break
        if hit:
            return True
        c1 = True
        c2 = True
        for k in range(3):
            if not (mins[i, k] <= mins[j, k] + eps and maxs[i, k] >= maxs[j, k] - eps):
                c1 = False
            if not (mins[j, k] <= mins[i, k] + eps and maxs[j, k] >= maxs[i, k] - eps):
                c2 = False
        if c1 or c2:
            return True

    for k in range(3):
        d1 = maxs[i, k] - mins[j, k]
        d2 = maxs[j, k] - mins[i, k]
        if fabs(d1) < eps or fabs(d2) < eps:
            overlap = True
            for m in range(3):
                if m == k:
                    continue
                if not (mins[i, m] < maxs[j, m] - eps and maxs[i, m] > mins[j, m] + eps):
                    overlap = False
                    break
            if overlap:
                return True
    return False


def scan_pairs(double[:, ::1] mins, double[:, ::1] maxs, double eps, bint gamma):
    cdef Py_ssize_t n = mins.shape[0]
    cdef Py_ssize_t i, j
    out: list = []
    for i in range(n):
        for j in range(i + 1, n):
            if _pair_adjacent(mins, maxs, i, j, eps, gamma):
                out.append(i)
                out.append(j)
    return out
