"""Numba implementations of the per-iteration decoder kernels.

Loop order matches the reduceat-based numpy fallback in ``_kernels_np`` so
that both backends give bit-identical outputs.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def syndrome(chk_ptr, chk_vn, u):
    M = len(chk_ptr) - 1
    s = np.zeros(M, dtype=np.uint8)
    for m in range(M):
        acc = np.uint8(0)
        for k in range(chk_ptr[m], chk_ptr[m + 1]):
            acc ^= u[chk_vn[k]]
        s[m] = acc
    return s


@njit(cache=True)
def row_min(ptr, vals):
    M = len(ptr) - 1
    out = np.empty(M, dtype=vals.dtype)
    for m in range(M):
        best = vals[ptr[m]]
        for k in range(ptr[m] + 1, ptr[m + 1]):
            if vals[k] < best:
                best = vals[k]
        out[m] = best
    return out


@njit(cache=True)
def row_argmin_first(ptr, vals):
    M = len(ptr) - 1
    out = np.empty(M, dtype=np.int64)
    for m in range(M):
        best = ptr[m]
        for k in range(ptr[m] + 1, ptr[m + 1]):
            if vals[k] < vals[best]:
                best = k
        out[m] = best
    return out


@njit(cache=True)
def row_argmax_first(ptr, vals):
    M = len(ptr) - 1
    out = np.empty(M, dtype=np.int64)
    for m in range(M):
        best = ptr[m]
        for k in range(ptr[m] + 1, ptr[m + 1]):
            if vals[k] > vals[best]:
                best = k
        out[m] = best
    return out


@njit(cache=True)
def _row_excl_min_into(ptr, vals, m, out):
    lo, hi = ptr[m], ptr[m + 1]
    if hi - lo == 1:
        out[lo] = np.inf
        return
    first = lo
    for k in range(lo + 1, hi):
        if vals[k] < vals[first]:
            first = k
    second = np.inf
    for k in range(lo, hi):
        if k != first and vals[k] < second:
            second = vals[k]
    for k in range(lo, hi):
        out[k] = second if k == first else vals[first]


@njit(cache=True)
def row_excl_min(ptr, vals):
    M = len(ptr) - 1
    out = np.empty(len(vals), dtype=np.float64)
    for m in range(M):
        _row_excl_min_into(ptr, vals, m, out)
    return out


@njit(cache=True)
def accumulate_columns(var_ptr, var_eid, term_e):
    N = len(var_ptr) - 1
    out = np.zeros(N, dtype=np.float64)
    for n in range(N):
        acc = 0.0
        for k in range(var_ptr[n], var_ptr[n + 1]):
            acc += term_e[var_eid[k]]
        out[n] = acc
    return out


@njit(cache=True)
def update_weight_rows(chk_ptr, chk_vn, clipped, rows, r):
    for i in range(len(rows)):
        _row_excl_min_into(chk_ptr, clipped, rows[i], r)


@njit(cache=True)
def ucn_counts(var_ptr, var_cn, s):
    N = len(var_ptr) - 1
    out = np.zeros(N, dtype=np.int64)
    for n in range(N):
        acc = 0
        for k in range(var_ptr[n], var_ptr[n + 1]):
            acc += s[var_cn[k]]
        out[n] = acc
    return out


@njit(cache=True)
def fs_counts(chk_ptr, chk_vn, E, s, N):
    M = len(chk_ptr) - 1
    F = np.zeros(N, dtype=np.int64)
    for m in range(M):
        if s[m] == 0:
            continue
        best = chk_ptr[m]
        for k in range(chk_ptr[m] + 1, chk_ptr[m + 1]):
            if E[chk_vn[k]] > E[chk_vn[best]]:
                best = k
        F[chk_vn[best]] += 1
    return F


@njit(cache=True)
def fi_accumulate(chk_ptr, chk_vn, E, s, U, th0, th1, th2, with_pcn, N):
    M = len(chk_ptr) - 1
    F = np.zeros(N, dtype=np.int64)
    for m in range(M):
        lo, hi = chk_ptr[m], chk_ptr[m + 1]
        best = lo
        for k in range(lo + 1, hi):
            if E[chk_vn[k]] > E[chk_vn[best]]:
                best = k
        mu = U[chk_vn[lo]]
        for k in range(lo + 1, hi):
            if U[chk_vn[k]] > mu:
                mu = U[chk_vn[k]]
        lam = chk_vn[best]
        at_max = U[lam] == mu
        if s[m] == 1:
            F[lam] += th0 if at_max else th1
        elif with_pcn and at_max:
            F[lam] -= th2
    return F


@njit(cache=True)
def nms_cn_update(chk_ptr, v2c, alpha):
    n_edges = len(v2c)
    mag = np.abs(v2c)
    out = np.empty(n_edges, dtype=np.float64)
    row_excl = np.empty(n_edges, dtype=np.float64)
    M = len(chk_ptr) - 1
    for m in range(M):
        _row_excl_min_into(chk_ptr, mag, m, row_excl)
        negs = 0
        for k in range(chk_ptr[m], chk_ptr[m + 1]):
            if v2c[k] < 0:
                negs += 1
        row_sign = 1.0 - 2.0 * (negs % 2)
        for k in range(chk_ptr[m], chk_ptr[m + 1]):
            sign_e = -1.0 if v2c[k] < 0 else 1.0
            out[k] = alpha * row_excl[k] * row_sign * sign_e
    return out


@njit(cache=True)
def nms_vn_update(var_ptr, var_eid, chk_vn, c2v, lch):
    N = len(var_ptr) - 1
    total = np.empty(N, dtype=np.float64)
    for n in range(N):
        acc = 0.0
        for k in range(var_ptr[n], var_ptr[n + 1]):
            acc += c2v[var_eid[k]]
        total[n] = lch[n] + acc
    v2c = np.empty(len(c2v), dtype=np.float64)
    for k in range(len(c2v)):
        v2c[k] = total[chk_vn[k]] - c2v[k]
    return total, v2c
