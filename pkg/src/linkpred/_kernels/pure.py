"""Pure-Python/numpy fallback for the pair-similarity kernel.

Same contract as the compiled `_simcore` module; used when the extension is
not built or when LINKPRED_PURE_PYTHON is set.
"""
import numpy as np


def node_similarity_batch(indptr, indices, inv_log_deg, u_pos, v_pos):
    """Jaccard / Dice / inverse-log-weighted scores for node-position pairs.

    All inputs refer to a CSR adjacency over node positions: ``indices`` holds
    sorted neighbor positions, ``inv_log_deg[x]`` is 1/ln(degree(x)) with 0.0
    stored for degree < 2 (such nodes can never be common neighbors of two
    distinct nodes). Returns an (n, 3) float64 array with columns
    jaccard, dice, inverse-log-weighted.
    """
    n = len(u_pos)
    out = np.zeros((n, 3), dtype=np.float64)
    for i in range(n):
        iu = u_pos[i]
        iv = v_pos[i]
        a = indices[indptr[iu]:indptr[iu + 1]]
        b = indices[indptr[iv]:indptr[iv + 1]]
        common = np.intersect1d(a, b, assume_unique=True)
        c = common.size
        du = a.size
        dv = b.size
        union = du + dv - c
        if union > 0:
            out[i, 0] = c / union
        if du + dv > 0:
            out[i, 1] = 2.0 * c / (du + dv)
        if c:
            # cumsum is a left-to-right fold, bitwise-matching the compiled merge walk
            out[i, 2] = float(np.cumsum(inv_log_deg[common])[-1])
    return out
