"""Pure-Python (numpy) fallback for the CSR power-iteration kernel.

Accumulation order matches the compiled kernel (non-zeros visited row-major,
ascending column within a row), so both backends produce bit-identical
vectors.
"""

import numpy as np


def csr_vector_power(indptr, indices, data, v0, steps):
    """Return v0 @ P^steps where P is row-stochastic in CSR form."""
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    data = np.asarray(data, dtype=np.float64)
    m = len(indptr) - 1
    v = np.array(v0, dtype=np.float64, copy=True)
    if v.shape[0] != m:
        raise ValueError("vector length does not match matrix dimension")
    rows = np.repeat(np.arange(m, dtype=np.int64), np.diff(indptr))
    for _ in range(int(steps)):
        v = np.bincount(indices, weights=v[rows] * data, minlength=m)
    return v
