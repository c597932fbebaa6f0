"""Pure-numpy kernels, used when the compiled extension is unavailable.

Arithmetic mirrors ``_native`` operation for operation (same IEEE additions
in the same order), so both backends return bit-identical results.
"""

import numpy as np


def mc_tally(u_setting_a, u_setting_b, u_outcome, x, y, p):
    base = (u_setting_a >= x).astype(np.intp) * 8 + (u_setting_b >= y).astype(np.intp) * 4
    rows = p[base[:, None] + np.arange(4)]
    # cumsum adds left to right, matching the scalar chain in _native
    cum = np.cumsum(rows, axis=1)
    t = u_outcome * cum[:, 3]
    j = (t[:, None] >= cum[:, :3]).sum(axis=1)
    return np.bincount(base + j, minlength=16).astype(np.int64)


def complete_free_batch(free, tol):
    n = free.shape[0]
    f0, f1, f2, f3, f4, f5, f6, f7 = (free[:, k] for k in range(8))
    b = np.empty((n, 16), dtype=np.float64)
    b[:, 0] = f0
    b[:, 3] = f1
    b[:, 4] = f2
    b[:, 7] = f3
    b[:, 8] = f4
    b[:, 11] = f5
    b[:, 13] = f6
    b[:, 14] = f7
    b[:, 1] = ((((((((1.0 - f0) - f1) + f2) - f3) - f4) + f5) + f6) - f7) * 0.5   # p2
    b[:, 2] = ((((((((1.0 - f0) - f1) - f2) + f3) + f4) - f5) - f6) + f7) * 0.5   # p3
    b[:, 5] = ((((((((1.0 + f0) - f1) - f2) - f3) - f4) + f5) + f6) - f7) * 0.5   # p6
    b[:, 6] = ((((((((1.0 - f0) + f1) - f2) - f3) + f4) - f5) - f6) + f7) * 0.5   # p7
    b[:, 9] = ((((((((1.0 - f0) + f1) + f2) - f3) - f4) - f5) + f6) - f7) * 0.5   # p10
    b[:, 10] = ((((((((1.0 + f0) - f1) - f2) + f3) - f4) - f5) - f6) + f7) * 0.5  # p11
    b[:, 12] = ((((((((1.0 - f0) + f1) + f2) - f3) + f4) - f5) - f6) - f7) * 0.5  # p13
    b[:, 15] = ((((((((1.0 + f0) - f1) - f2) + f3) - f4) + f5) - f6) - f7) * 0.5  # p16
    ok = ((b >= -tol) & (b <= 1.0 + tol)).all(axis=1).astype(np.uint8)
    return b, ok
