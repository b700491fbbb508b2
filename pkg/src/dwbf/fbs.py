"""Flipped-bit selection rules, flipping intensity, and loop handling.

All argmax ties break to the lowest index so runs are reproducible.  Every
rule falls back to a nonempty set while the syndrome is nonzero, so the
decoder always makes progress.
"""

import hashlib
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels

FBS_KINDS = ("single", "m1", "m2", "pwbf", "threshold_adaptive")
FI_MODES = ("ucn_only", "with_pcn")

# fired_step labels
STEP_SINGLE = "single"
STEP_M1_1 = "m1_step1"
STEP_M1_2 = "m1_step2_fallback"
STEP_M2_2 = "m2_step2"
STEP_M2_3 = "m2_step3_fallback"
STEP_PWBF = "pwbf"
STEP_PWBF_FALLBACK = "pwbf_fallback"
STEP_ADAPTIVE = "threshold_adaptive"
STEP_LOOP_BREAK = "loop_break"


@dataclass
class FlipDecision:
    B: np.ndarray
    fired_step: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.B = np.asarray(self.B, dtype=np.int64)


@dataclass
class FIState:
    """Per-VN flipping intensity and the per-CN quantities feeding it."""

    U: np.ndarray        # UCN count per VN
    mu: np.ndarray       # per-CN max of U over the row
    lam: np.ndarray      # per-CN argmax of E over the row (lowest index)
    F: np.ndarray        # integer flipping intensity per VN
    T: np.ndarray        # VNs attaining the maximum intensity


def select_single(E):
    """Flip the unique most-unreliable bit (first maximum on ties)."""
    return FlipDecision(B=[int(np.argmax(E))], fired_step=STEP_SINGLE)


def adaptive_threshold(E, syndrome):
    """Syndrome-weight-adaptive threshold between max(E) and 0."""
    if syndrome.weight < 1:
        raise ValueError("adaptive threshold needs an unsatisfied check")
    e_star = float(np.max(E))
    M = len(syndrome.bits)
    return e_star - abs(e_star) * (1.0 - syndrome.weight / M)


def select_m1(E, delta):
    """Threshold rule with argmax fallback when no bit clears the bar."""
    B = np.flatnonzero(np.asarray(E) >= delta)
    if len(B):
        return FlipDecision(B=B, fired_step=STEP_M1_1)
    return FlipDecision(B=[int(np.argmax(E))], fired_step=STEP_M1_2)


def fs_counts(graph, E, syndrome):
    """Flip-signal counts: each unsatisfied check adds one to its max-E VN."""
    return kernels.fs_counts(graph.chk_ptr, graph.chk_vn,
                             np.asarray(E, dtype=np.float64),
                             syndrome.bits, graph.N)


def select_pwbf(F, delta_fs):
    """Flip bits whose flip-signal count clears the threshold."""
    if delta_fs < 1:
        raise ValueError("delta_fs must be >= 1")
    B = np.flatnonzero(np.asarray(F) >= delta_fs)
    if len(B):
        return FlipDecision(B=B, fired_step=STEP_PWBF)
    # empty-set guard: fall back to the strongest signal
    return FlipDecision(B=[int(np.argmax(F))], fired_step=STEP_PWBF_FALLBACK)


def flip_intensity(graph, E, syndrome, theta0, theta1, theta2,
                   mode="with_pcn"):
    """Integer flipping intensity accumulated from per-check messages.

    An unsatisfied check sends theta0 to its max-E neighbor if that VN also
    has the row's largest UCN count, theta1 otherwise.  In ``with_pcn``
    mode a satisfied check drags its max-E neighbor by theta2 when that VN
    has the row-max UCN count.
    """
    if not (theta0 > theta1 >= 0) or not (0 <= theta2 <= theta0):
        raise ValueError(
            "need theta0 > theta1 >= 0 and 0 <= theta2 <= theta0")
    if mode not in FI_MODES:
        raise ValueError(f"unknown FI mode {mode!r}")
    E = np.asarray(E, dtype=np.float64)
    s = syndrome.bits
    U = kernels.ucn_counts(graph.var_ptr, graph.var_cn, s)
    lam_pos = kernels.row_argmax_first(graph.chk_ptr, E[graph.chk_vn])
    lam = graph.chk_vn[lam_pos]
    mu = np.maximum.reduceat(U[graph.chk_vn], graph.chk_ptr[:-1])
    F = kernels.fi_accumulate(graph.chk_ptr, graph.chk_vn, E, s, U,
                              int(theta0), int(theta1), int(theta2),
                              mode == "with_pcn", graph.N)
    T = np.flatnonzero(F == F.max())
    return FIState(U=U, mu=mu, lam=np.asarray(lam), F=F, T=T)


def select_m2(fi, delta_fi):
    """Intensity threshold rule; fallback restricts the max-intensity tie
    set to its largest-UCN members."""
    B = np.flatnonzero(fi.F >= delta_fi)
    if len(B):
        return FlipDecision(B=B, fired_step=STEP_M2_2,
                            diagnostics={"F": fi.F})
    T = fi.T
    B = T[fi.U[T] == fi.U[T].max()]
    return FlipDecision(B=B, fired_step=STEP_M2_3,
                        diagnostics={"F": fi.F, "T": T})


def break_loop(U):
    """Loop escape: flip every VN tied at the maximum UCN count."""
    U = np.asarray(U)
    if U.max() < 1:
        raise ValueError("break_loop called with zero syndrome weight")
    return FlipDecision(B=np.flatnonzero(U == U.max()),
                        fired_step=STEP_LOOP_BREAK)


class LoopHistory:
    """Sliding window of tentative-word digests for loop detection."""

    def __init__(self, window=16):
        self.window = window
        self._digests = deque(maxlen=window)

    @staticmethod
    def _digest(u_hat):
        packed = np.packbits(np.asarray(u_hat, dtype=np.uint8))
        return hashlib.blake2b(packed.tobytes(), digest_size=16).digest()

    def clear(self):
        self._digests.clear()


def detect_loop(history, u_hat):
    """True iff this tentative word repeats within the window.

    On a hit the history is cleared (the breaker perturbs the state, so old
    digests are stale); on a miss the digest is appended, evicting the
    oldest once the window is full.
    """
    d = LoopHistory._digest(u_hat)
    if d in history._digests:
        history.clear()
        return True
    history._digests.append(d)
    return False
