"""Pure-Python twin of the compiled reduction kernels.

``math.fsum`` is exactly rounded, so this backend is at least as accurate as
the compiled Neumaier loop; the two agree to within a couple of ulps.
"""
import math

import numpy as np


def neumaier_sum(x):
    return math.fsum(np.asarray(x, dtype=np.float64).tolist())


def _magnitude(a):
    a = np.asarray(a, dtype=np.float64)
    if a.shape[0] == 1:
        return np.abs(a[0])
    return np.sqrt(np.einsum("ci,ci->i", a, a))


def magnitude_power_sum(a, p):
    a = np.asarray(a, dtype=np.float64)
    if a.shape[0] == 1:
        m = np.abs(a[0])
        v = m * m if p == 2.0 else (m if p == 1.0 else m**p)
    else:
        m2 = np.einsum("ci,ci->i", a, a)
        v = m2 if p == 2.0 else (np.sqrt(m2) if p == 1.0 else m2 ** (0.5 * p))
    return math.fsum(v.tolist())


def magnitude_max(a):
    a = np.asarray(a, dtype=np.float64)
    if a.shape[1] == 0:
        return 0.0
    return float(np.max(_magnitude(a)))
