"""Compiled CSR power-iteration kernel (hot loop of the waiting-time computation)."""

import numpy as np


def csr_vector_power(indptr, indices, data, v0, long long steps):
    """Return v0 @ P^steps where P is row-stochastic in CSR form.

    One step scatters row i of P scaled by v[i] into the next vector,
    rows in ascending order, columns in ascending order within a row.
    """
    ip_np = np.ascontiguousarray(indptr, dtype=np.int64)
    ix_np = np.ascontiguousarray(indices, dtype=np.int64)
    dv_np = np.ascontiguousarray(data, dtype=np.float64)
    cdef long long[::1] ip = ip_np
    cdef long long[::1] ix = ix_np
    cdef double[::1] dv = dv_np
    cdef Py_ssize_t m = ip.shape[0] - 1

    cur_np = np.array(v0, dtype=np.float64, copy=True)
    if cur_np.shape[0] != m:
        raise ValueError("vector length does not match matrix dimension")
    nxt_np = np.zeros(m, dtype=np.float64)
    cdef double[::1] cur = cur_np
    cdef double[::1] nxt = nxt_np

    cdef double* pc = &cur[0] if m > 0 else NULL
    cdef double* pn = &nxt[0] if m > 0 else NULL
    cdef double* tmp
    cdef Py_ssize_t step, i, j
    cdef double vi

    with nogil:
        for step in range(steps):
            for j in range(m):
                pn[j] = 0.0
            for i in range(m):
                vi = pc[i]
                if vi != 0.0:
                    for j in range(ip[i], ip[i + 1]):
                        pn[ix[j]] += vi * dv[j]
            tmp = pc
            pc = pn
            pn = tmp

    if steps % 2 == 0:
        return cur_np
    return nxt_np
