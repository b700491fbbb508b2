"""Flipping functions and static checksum-weight precomputations.

A flipping function value E_n is an (inverse) reliability metric of the
tentative decision for bit n: the larger E_n, the more likely the bit gets
flipped.  Static weight schemes (WBF/IMWBF/RRWBF) are computed once per
frame from the soft channel values; the dynamic scheme lives in
``dynweights``.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

PHI_KINDS = ("zero", "abs_y", "correlation")


class DegenerateWeightError(ValueError):
    """A reliability-ratio weight would divide by a (near-)zero |y|."""


@dataclass(frozen=True)
class StaticWeights:
    """Per-edge nonnegative checksum weights, indexed by flat edge id."""

    w: np.ndarray
    kind: str


def unit_weights(graph):
    return StaticWeights(w=np.ones(graph.num_edges), kind="unit")


def wbf_weights(graph, y):
    """Row-constant weights: the smallest |y| among the row's VNs."""
    absy = np.abs(np.asarray(y, dtype=np.float64))
    row_min = kernels.row_min(graph.chk_ptr, absy[graph.chk_vn])
    return StaticWeights(w=graph.sgn_repeat(row_min), kind="wbf")


def imwbf_weights(graph, y):
    """Exclude-one row minimum: the message to v_n ignores v_n's own |y|."""
    absy = np.abs(np.asarray(y, dtype=np.float64))
    w = kernels.row_excl_min(graph.chk_ptr, absy[graph.chk_vn])
    return StaticWeights(w=w, kind="imwbf")


def rrwbf_weights(graph, y, tiny=1e-30):
    """Reliability-ratio weights, normalized so sum(1/w) = 1 per row."""
    absy = np.abs(np.asarray(y, dtype=np.float64))
    absy_e = absy[graph.chk_vn]
    if np.any(absy_e < tiny):
        n = int(graph.chk_vn[np.argmax(absy_e < tiny)])
        raise DegenerateWeightError(
            f"|y[{n}]| below {tiny}: reliability-ratio weights undefined")
    row_sum = np.add.reduceat(absy_e, graph.chk_ptr[:-1])
    w = graph.sgn_repeat(row_sum) / absy_e
    return StaticWeights(w=w, kind="rrwbf")


def _checksum_sum(graph, w_e, s):
    """Per-VN sum of w_mn * (1 - 2 s_m) over the VN's checks."""
    term = w_e * graph.sgn_repeat(1.0 - 2.0 * s.astype(np.float64))
    return kernels.accumulate_columns(graph.var_ptr, graph.var_eid, term)


def _phi(phi_kind, u_hat, y):
    if phi_kind == "zero":
        return 0.0
    if phi_kind == "abs_y":
        return np.abs(y)
    if phi_kind == "correlation":
        return y * (1.0 - 2.0 * u_hat)
    raise ValueError(f"unknown phi_kind {phi_kind!r}")


def ff_gallager(graph, syndrome):
    """Sum-of-checksums FF: #unsatisfied minus #satisfied checks per VN."""
    U = kernels.ucn_counts(graph.var_ptr, graph.var_cn, syndrome.bits)
    return (2 * U - graph.col_degrees()).astype(np.float64)


def ff_general_static(graph, y, u_hat, syndrome, weights, alpha1,
                      phi_kind="zero"):
    """General weighted FF: -a1*phi(u_n, y_n) - sum_m w_mn (1 - 2 s_m)."""
    y = np.asarray(y, dtype=np.float64)
    if len(y) != graph.N or len(weights.w) != graph.num_edges:
        raise ValueError("dimension mismatch between graph, y, and weights")
    base = -alpha1 * _phi(phi_kind, np.asarray(u_hat), y)
    return base - _checksum_sum(graph, weights.w, syndrome.bits)


def ff_gdbf(graph, y, u_hat, syndrome, alpha3=1.0):
    """Damped gradient-descent FF; alpha3 = 1 is the undamped original."""
    if alpha3 <= 0:
        raise ValueError("alpha3 must be positive")
    y = np.asarray(y, dtype=np.float64)
    u_hat = np.asarray(u_hat)
    U = kernels.ucn_counts(graph.var_ptr, graph.var_cn, syndrome.bits)
    check_term = (graph.col_degrees() - 2 * U).astype(np.float64)
    return -y * (1.0 - 2.0 * u_hat) - alpha3 * check_term


def gdbf_objective(graph, y, u_hat, syndrome):
    """Objective whose coordinate descent the GDBF flip rule implements."""
    y = np.asarray(y, dtype=np.float64)
    u_hat = np.asarray(u_hat)
    corr = float(np.sum(y * (1.0 - 2.0 * u_hat)))
    return -corr - float(graph.M - 2 * syndrome.weight)


def ff_ngdbf(graph, y, u_hat, syndrome, w, noise_scale, sigma, rng):
    """Noisy GDBF FF: syndrome weight w plus a Gaussian perturbation.

    The perturbation standard deviation is noise_scale * sigma (the channel
    noise sigma); noise_scale = 0 recovers the damped GDBF FF with
    alpha3 = w.
    """
    if w <= 0:
        raise ValueError("syndrome weight w must be positive")
    if noise_scale < 0:
        raise ValueError("noise_scale must be nonnegative")
    E = ff_gdbf(graph, y, u_hat, syndrome, alpha3=w)
    if noise_scale > 0:
        E = E + rng.standard_normal(graph.N) * (noise_scale * sigma)
    return E
