"""Pure-numpy implementations of the per-iteration decoder kernels.

Segment operations use ``ufunc.reduceat`` over the flat edge arrays, which
reduces left-to-right within each row/column slice -- the same order as the
numba loops in ``_kernels_nb``, so both backends produce bit-identical
results.

Conventions: edges are stored in check-node order (row-major over the parity
check matrix).  ``ptr`` arrays are CSR-style offsets; ``vals`` arguments are
edge-ordered unless stated otherwise.
"""

import numpy as np

_BIG = np.iinfo(np.int64).max


def _row_index(ptr, n_edges):
    out = np.zeros(n_edges, dtype=np.int64)
    np.add.at(out, ptr[1:-1], 1)
    return np.cumsum(out)


def syndrome(chk_ptr, chk_vn, u):
    bits = u[chk_vn].astype(np.uint8)
    return np.bitwise_xor.reduceat(bits, chk_ptr[:-1])


def row_min(ptr, vals):
    return np.minimum.reduceat(vals, ptr[:-1])


def row_argmin_first(ptr, vals):
    """Position (flat edge index) of the first minimum in each row."""
    rmin = np.minimum.reduceat(vals, ptr[:-1])
    ridx = _row_index(ptr, len(vals))
    cand = np.where(vals == rmin[ridx], np.arange(len(vals)), _BIG)
    return np.minimum.reduceat(cand, ptr[:-1])


def row_argmax_first(ptr, vals):
    rmax = np.maximum.reduceat(vals, ptr[:-1])
    ridx = _row_index(ptr, len(vals))
    cand = np.where(vals == rmax[ridx], np.arange(len(vals)), _BIG)
    return np.minimum.reduceat(cand, ptr[:-1])


def row_excl_min(ptr, vals):
    """Per-edge minimum over the rest of the row (exclude-one min)."""
    first = row_argmin_first(ptr, vals)
    rmin = vals[first]
    masked = vals.copy()
    masked[first] = np.inf
    second = np.minimum.reduceat(masked, ptr[:-1])
    ridx = _row_index(ptr, len(vals))
    out = rmin[ridx]
    out[first] = second
    return out


def _segment_sum(ptr, vals):
    """Per-segment float sum, accumulated strictly left to right.

    ``ufunc.reduceat`` may reassociate float additions, so this pads the
    segments into a matrix and adds its columns in order; the rounding then
    matches a scalar loop that starts from 0.0 exactly.
    """
    lens = ptr[1:] - ptr[:-1]
    width = int(lens.max()) if len(lens) else 0
    idx = ptr[:-1, None] + np.arange(width)
    valid = idx < ptr[1:, None]
    padded = np.where(valid, vals[np.minimum(idx, len(vals) - 1)], 0.0)
    acc = np.zeros(len(lens), dtype=np.float64)
    for j in range(width):
        acc += padded[:, j]
    return acc


def accumulate_columns(var_ptr, var_eid, term_e):
    """Sum an edge-ordered term over each variable node's edges."""
    return _segment_sum(var_ptr, term_e[var_eid])


def update_weight_rows(chk_ptr, chk_vn, clipped, rows, r):
    """Recompute ``r`` (in place) on the listed rows from clipped -E values.

    ``clipped`` is the edge-ordered Omega(-E) array for the *whole* graph;
    rows outside ``rows`` keep their previous weights.
    """
    if len(rows) == 0:
        return
    full = row_excl_min(chk_ptr, clipped)
    for m in rows:
        lo, hi = chk_ptr[m], chk_ptr[m + 1]
        r[lo:hi] = full[lo:hi]


def ucn_counts(var_ptr, var_cn, s):
    return np.add.reduceat(s[var_cn].astype(np.int64), var_ptr[:-1])


def fs_counts(chk_ptr, chk_vn, E, s, N):
    """Flip-signal counts: each unsatisfied check signals its max-E neighbor."""
    lam_pos = row_argmax_first(chk_ptr, E[chk_vn])
    lam_vn = chk_vn[lam_pos]
    F = np.zeros(N, dtype=np.int64)
    np.add.at(F, lam_vn[s == 1], 1)
    return F


def fi_accumulate(chk_ptr, chk_vn, E, s, U, th0, th1, th2, with_pcn, N):
    """Flipping intensity: per-check integer messages to the max-E neighbor."""
    lam_pos = row_argmax_first(chk_ptr, E[chk_vn])
    lam_vn = chk_vn[lam_pos]
    mu = np.maximum.reduceat(U[chk_vn], chk_ptr[:-1])
    at_max = U[lam_vn] == mu
    contrib = np.where(s == 1, np.where(at_max, th0, th1), 0).astype(np.int64)
    if with_pcn:
        contrib = np.where((s == 0) & at_max, -th2, contrib)
    F = np.zeros(N, dtype=np.int64)
    np.add.at(F, lam_vn, contrib)
    return F


def nms_cn_update(chk_ptr, v2c, alpha):
    mag = np.abs(v2c)
    excl_min = row_excl_min(chk_ptr, mag)
    neg = (v2c < 0).astype(np.int64)
    negcount = np.add.reduceat(neg, chk_ptr[:-1])
    ridx = _row_index(chk_ptr, len(v2c))
    row_sign = 1.0 - 2.0 * (negcount[ridx] % 2)
    sign_e = np.where(v2c < 0, -1.0, 1.0)
    return alpha * excl_min * row_sign * sign_e


def nms_vn_update(var_ptr, var_eid, chk_vn, c2v, lch):
    total = lch + _segment_sum(var_ptr, c2v[var_eid])
    v2c = total[chk_vn] - c2v
    return total, v2c
