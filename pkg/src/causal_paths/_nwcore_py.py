"""Pure numpy Gaussian-kernel sums, used when the compiled core is unavailable."""

import numpy as np

_CHUNK = 512


def kernel_sums(x, y, h, q):
    """Kernel sums needed by the Nadaraya-Watson estimate and its derivative.

    For each query point ``q[j]`` with ``K_i = exp(-((q[j] - x[i]) / h)**2 / 2)``
    returns the arrays

    * ``s0 = sum K_i``
    * ``s1 = sum K_i * y[i]``
    * ``ds0 = d s0 / d q = -sum K_i * (q[j] - x[i]) / h**2``
    * ``ds1 = d s1 / d q``
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    m = q.shape[0]
    out = np.empty((4, m))
    inv_h = 1.0 / h
    inv_h2 = inv_h * inv_h
    for start in range(0, m, _CHUNK):
        stop = min(start + _CHUNK, m)
        d = q[start:stop, None] - x[None, :]
        u = d * inv_h
        k = np.exp(-0.5 * u * u)
        kd = k * d
        out[0, start:stop] = k.sum(axis=1)
        out[1, start:stop] = k @ y
        out[2, start:stop] = -kd.sum(axis=1) * inv_h2
        out[3, start:stop] = -(kd @ y) * inv_h2
    return out[0], out[1], out[2], out[3]


def kernel_sums_self(x, y, h):
    """Same as ``kernel_sums(x, y, h, x)``."""
    return kernel_sums(x, y, h, x)
