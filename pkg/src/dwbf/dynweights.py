"""Dynamic checksum weights: clipping, the weight recursion, and the
weight-updating schedules.

Weights r_mn are recomputed each iteration from the clipped, negated FF
values of the row's other VNs, but only for check nodes selected by the
active schedule; unselected rows carry their previous weights through.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels

SCHEDULES = ("fwus", "swus_a", "swus_b")

# provenance labels for update-set members
PROV_FULL = "full"
PROV_FLIP = "flip_adjacency"
PROV_INVERSION = "reliability_inversion"
PROV_EXPANSION = "b_expansion"


@dataclass
class UpdateSet:
    """Check nodes whose weights get recomputed this iteration."""

    cn_indices: np.ndarray
    provenance: dict = field(default_factory=dict)
    visited_cn_count: int = 0
    visited_vn_count: int = 0

    def __post_init__(self):
        self.cn_indices = np.asarray(self.cn_indices, dtype=np.int64)
        self.visited_cn_count = len(self.cn_indices)


def clip(x, eta):
    """Shifted rectifier: x - eta above the threshold, else 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.where(x >= eta, x - eta, 0.0)
    return out if out.ndim else float(out)


def _gather_segments(ptr, items, sel):
    """Concatenate items[ptr[i]:ptr[i+1]] for every i in sel."""
    sel = np.asarray(sel, dtype=np.int64)
    if len(sel) == 0:
        return np.empty(0, dtype=items.dtype)
    counts = ptr[sel + 1] - ptr[sel]
    total = int(counts.sum())
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return items[np.repeat(ptr[sel], counts) + offs]


def _cns_of_vns(graph, vns):
    return np.unique(_gather_segments(graph.var_ptr, graph.var_cn, vns))


def _vns_of_cns(graph, cns):
    return np.unique(_gather_segments(graph.chk_ptr, graph.chk_vn, cns))


def _finish(graph, members, provenance):
    members = np.asarray(members, dtype=np.int64)
    us = UpdateSet(cn_indices=members, provenance=provenance)
    if len(members):
        us.visited_vn_count = len(_vns_of_cns(graph, members))
    return us


def fwus(M):
    """Full schedule: every check node, every iteration."""
    members = np.arange(M, dtype=np.int64)
    return UpdateSet(cn_indices=members,
                     provenance={int(m): {PROV_FULL} for m in members},
                     visited_vn_count=0)


def inverted_vns(E_now, E_prev, eta):
    """VNs whose clipped reliability -E - eta strictly changed sign."""
    if E_prev is None:
        return np.empty(0, dtype=np.int64)
    rel_now = -np.asarray(E_now) - eta
    rel_prev = -np.asarray(E_prev) - eta
    return np.flatnonzero(rel_now * rel_prev < 0.0)


def swus_a(graph, flip_set, E_now, E_prev, eta, inverted=None,
           with_provenance=True):
    """Selective schedule A: checks adjacent to flipped bits, plus checks of
    VNs whose clipped reliability -E - eta changed sign since last iteration.

    ``E_prev`` may be None (first iteration): only flip adjacency applies.
    ``inverted`` lets the caller pass a precomputed inversion set.
    """
    flip_set = np.asarray(flip_set, dtype=np.int64)
    if inverted is None:
        inverted = inverted_vns(E_now, E_prev, eta)
    flip_cns = _cns_of_vns(graph, flip_set)
    inv_cns = _cns_of_vns(graph, inverted)
    members = np.union1d(flip_cns, inv_cns)
    provenance = {}
    if with_provenance:
        for m in flip_cns:
            provenance.setdefault(int(m), set()).add(PROV_FLIP)
        for m in inv_cns:
            provenance.setdefault(int(m), set()).add(PROV_INVERSION)
    return _finish(graph, members, provenance)


def swus_b(graph, ga_prev, ga_now, with_provenance=True):
    """Selective schedule B: schedule A's set expanded two hops around the
    previous iteration's schedule-A checks."""
    members = ga_now.cn_indices
    expansion = np.empty(0, dtype=np.int64)
    if ga_prev is not None and len(ga_prev) > 0:
        expansion = _cns_of_vns(graph, _vns_of_cns(graph, ga_prev))
        members = np.union1d(members, expansion)
    provenance = {}
    if with_provenance:
        provenance = {int(m): set(p) for m, p in ga_now.provenance.items()}
        for m in expansion:
            provenance.setdefault(int(m), set()).add(PROV_EXPANSION)
    return _finish(graph, members, provenance)


def update_weights(graph, E, update_set, eta, previous):
    """New edge-weight array: rows in the update set recomputed from the
    exclude-one min of clipped -E, other rows copied through unchanged."""
    r = np.array(previous, dtype=np.float64, copy=True)
    rows = np.asarray(update_set.cn_indices, dtype=np.int64)
    if len(rows):
        clipped = clip(-np.asarray(E, dtype=np.float64)[graph.chk_vn], eta)
        kernels.update_weight_rows(graph.chk_ptr, graph.chk_vn, clipped,
                                   rows, r)
    return r


def predicted_visits(dv, dc, M, N, schedule):
    """Cycle-free per-event visit counts (CNs to reweight, VNs to re-evaluate)
    for each schedule."""
    if schedule == "fwus":
        return M, N
    if schedule == "swus_a":
        return dv, min(dv * (dc - 1) + 1, N)
    if schedule == "swus_b":
        cn = min(dv * (dv - 1) * (dc - 1) + 2 * dv, M)
        vn = min(dv * (dv - 1) * (dc - 1) ** 2 + 2 * (dv * (dc - 1) + 1), N)
        return cn, vn
    raise ValueError(f"unknown schedule {schedule!r}")
