# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-similarity kernel: sorted-adjacency merge intersection."""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def node_similarity_batch(cnp.int64_t[::1] indptr,
                          cnp.int32_t[::1] indices,
                          cnp.float64_t[::1] inv_log_deg,
                          cnp.int64_t[::1] u_pos,
                          cnp.int64_t[::1] v_pos):
    """Same contract as linkpred._kernels.pure.node_similarity_batch."""
    cdef Py_ssize_t n = u_pos.shape[0]
    out_arr = np.zeros((n, 3), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] out = out_arr
    cdef Py_ssize_t i
    cdef cnp.int64_t iu, iv, a, b, ae, be
    cdef cnp.int64_t du, dv, c, union_sz
    cdef cnp.int32_t xa, xb
    cdef double aa

    with nogil:
        for i in range(n):
            iu = u_pos[i]
            iv = v_pos[i]
            a = indptr[iu]
            ae = indptr[iu + 1]
            b = indptr[iv]
            be = indptr[iv + 1]
            du = ae - a
            dv = be - b
            c = 0
            aa = 0.0
            while a < ae and b < be:
                xa = indices[a]
                xb = indices[b]
                if xa < xb:
                    a += 1
                elif xb < xa:
                    b += 1
                else:
                    c += 1
                    aa += inv_log_deg[xa]
                    a += 1
                    b += 1
            union_sz = du + dv - c
            if union_sz > 0:
                out[i, 0] = c / <double> union_sz
            if du + dv > 0:
                out[i, 1] = 2.0 * c / <double> (du + dv)
            out[i, 2] = aa
    return out_arr
