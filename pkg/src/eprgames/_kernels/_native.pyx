# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Every arithmetic expression here is mirrored operation-for-operation in
``_fallback`` so both backends produce bit-identical output from identical
inputs; change them together or the cross-backend tests will fail.
"""

import numpy as np


def mc_tally(const double[::1] u_setting_a, const double[::1] u_setting_b,
             const double[::1] u_outcome, double x, double y, const double[::1] p):
    """Tally repeated plays of a box into 16 cells.

    For run i the first setting is chosen iff u_setting < the profile weight,
    the outcome pair by inverse CDF over the chosen 4-entry block.  Returns
    int64 counts indexed like the box probabilities.
    """
    cdef Py_ssize_t n = u_setting_a.shape[0]
    out = np.zeros(16, dtype=np.int64)
    cdef long long[::1] c = out
    cdef Py_ssize_t i, base, j
    cdef double t, c0, c1, c2, c3
    for i in range(n):
        base = 0
        if u_setting_a[i] >= x:
            base += 8
        if u_setting_b[i] >= y:
            base += 4
        c0 = p[base]
        c1 = c0 + p[base + 1]
        c2 = c1 + p[base + 2]
        c3 = c2 + p[base + 3]
        t = u_outcome[i] * c3
        j = 0
        if t >= c0:
            j += 1
        if t >= c1:
            j += 1
        if t >= c2:
            j += 1
        c[base + j] += 1
    return out


def complete_free_batch(const double[:, ::1] free, double tol):
    """Fill the 8 dependent entries for each row of free entries.

    Returns (boxes, ok): boxes is (n, 16) float64, ok[i] is 1 iff every entry
    of row i lies in [-tol, 1 + tol].
    """
    cdef Py_ssize_t n = free.shape[0]
    boxes = np.empty((n, 16), dtype=np.float64)
    ok = np.zeros(n, dtype=np.uint8)
    cdef double[:, ::1] b = boxes
    cdef unsigned char[::1] okv = ok
    cdef Py_ssize_t i, k
    cdef double f0, f1, f2, f3, f4, f5, f6, f7
    cdef double lo = -tol, hi = 1.0 + tol
    cdef int good
    for i in range(n):
        f0 = free[i, 0]  # p1
        f1 = free[i, 1]  # p4
        f2 = free[i, 2]  # p5
        f3 = free[i, 3]  # p8
        f4 = free[i, 4]  # p9
        f5 = free[i, 5]  # p12
        f6 = free[i, 6]  # p14
        f7 = free[i, 7]  # p15
        b[i, 0] = f0
        b[i, 3] = f1
        b[i, 4] = f2
        b[i, 7] = f3
        b[i, 8] = f4
        b[i, 11] = f5
        b[i, 13] = f6
        b[i, 14] = f7
        b[i, 1] = ((((((((1.0 - f0) - f1) + f2) - f3) - f4) + f5) + f6) - f7) * 0.5   # p2
        b[i, 2] = ((((((((1.0 - f0) - f1) - f2) + f3) + f4) - f5) - f6) + f7) * 0.5   # p3
        b[i, 5] = ((((((((1.0 + f0) - f1) - f2) - f3) - f4) + f5) + f6) - f7) * 0.5   # p6
        b[i, 6] = ((((((((1.0 - f0) + f1) - f2) - f3) + f4) - f5) - f6) + f7) * 0.5   # p7
        b[i, 9] = ((((((((1.0 - f0) + f1) + f2) - f3) - f4) - f5) + f6) - f7) * 0.5   # p10
        b[i, 10] = ((((((((1.0 + f0) - f1) - f2) + f3) - f4) - f5) - f6) + f7) * 0.5  # p11
        b[i, 12] = ((((((((1.0 - f0) + f1) + f2) - f3) + f4) - f5) - f6) - f7) * 0.5  # p13
        b[i, 15] = ((((((((1.0 + f0) - f1) - f2) + f3) - f4) + f5) - f6) - f7) * 0.5  # p16
        good = 1
        for k in range(16):
            if b[i, k] < lo or b[i, k] > hi:
                good = 0
                break
        okv[i] = good
    return boxes, ok
