"""Decoder engine: the generic bit-flipping loop, the dynamic-weight loop,
and the normalized min-sum reference decoder.

One decoder invocation owns all mutable state; the graph and config are
shared read-only, so thousands of frames can be decoded concurrently.

Operation counters follow the paper-style accounting used throughout this
package: threshold tests against zero are sign-bit checks and cost nothing,
clip-threshold tests are free for the same reason, and a scan that keeps
the (min, second-min) of a length-d row is charged 2d-3 comparisons.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

from . import channel, dynweights, fbs, flipfn, kernels

FF_KINDS = ("gallager", "wbf", "mwbf", "imwbf", "rrwbf", "gdbf", "ngdbf",
            "dwbf", "nms")


class ConfigError(ValueError):
    pass


@dataclass
class DecoderConfig:
    """Full decoder recipe: FF x FBS rule x schedule plus all scalars."""

    ff_kind: str = "dwbf"
    fbs_kind: str = "single"
    schedule: str = None          # dwbf only: fwus / swus_a / swus_b
    alpha1: float = 1.0           # static-FF channel term weight
    alpha2: float = 0.5           # dwbf damping (forgetting) factor
    alpha3: float = 1.0           # gdbf checksum damping
    eta: float = 0.0              # clipping threshold
    delta: float = 0.0            # m1 threshold
    delta_fs: int = 1             # pwbf flip-signal threshold
    delta_fi: int = 1             # m2 intensity threshold
    theta0: int = 3
    theta1: int = 2
    theta2: int = 1
    w: float = 1.0                # ngdbf syndrome weight
    noise_scale: float = 0.0      # ngdbf perturbation scale (times sigma)
    l_max: int = 50
    hard_decision: bool = False
    loop_breaker: bool = True
    loop_window: int = 16
    fi_mode: str = None           # None: auto by dc against the threshold
    fi_mode_dc_threshold: int = 16
    nms_factor: float = 0.75

    def validate(self, graph=None):
        if self.ff_kind not in FF_KINDS:
            raise ConfigError(f"unknown ff_kind {self.ff_kind!r}")
        if self.fbs_kind not in fbs.FBS_KINDS:
            raise ConfigError(f"unknown fbs_kind {self.fbs_kind!r}")
        if self.ff_kind == "dwbf":
            if self.schedule not in dynweights.SCHEDULES:
                raise ConfigError(
                    "dwbf decoding needs schedule in "
                    f"{dynweights.SCHEDULES}, got {self.schedule!r}")
            if not 0.0 < self.alpha2 < 1.0:
                raise ConfigError("alpha2 must lie in (0,1)")
        if self.l_max < 0:
            raise ConfigError("l_max must be >= 0")
        if self.fbs_kind == "m2":
            if not (self.theta0 > self.theta1 >= 0):
                raise ConfigError("need theta0 > theta1 >= 0")
            if not (0 <= self.theta2 <= self.theta0):
                raise ConfigError("need 0 <= theta2 <= theta0")
            dv = graph.dv if graph is not None else None
            if dv is not None:
                lo, hi = -dv * self.theta2, dv * self.theta0
                if not lo <= self.delta_fi <= hi:
                    raise ConfigError(
                        f"delta_fi must lie in [{lo},{hi}] for dv={dv}")
        if not 0.0 < self.nms_factor <= 1.0:
            raise ConfigError("nms_factor must lie in (0,1]")
        return self

    def resolved_fi_mode(self, graph):
        if self.fi_mode is not None:
            return self.fi_mode
        return "with_pcn" if graph.dc < self.fi_mode_dc_threshold \
            else "ucn_only"

    def to_dict(self):
        return asdict(self)


@dataclass
class DecodeOutcome:
    """Result of one frame decode, with per-iteration instrumentation.

    Per-iteration arrays are indexed by iteration number minus one and have
    length ``iterations_used``.
    """

    u_hat: np.ndarray
    converged: bool
    iterations_used: int
    flips_per_iter: np.ndarray        # N_FB
    ucn_per_iter: np.ndarray          # M_1
    m_wu: np.ndarray                  # visited CNs (weight updates)
    m_wu0: np.ndarray                 # visited CNs with satisfied checksum
    m_wu1: np.ndarray
    visited_vn: np.ndarray
    events: np.ndarray                # flips + reliability inversions
    s2_fired: np.ndarray              # m1 fallback indicator
    s3_fired: np.ndarray              # m2 fallback indicator
    int_add: np.ndarray
    real_add: np.ndarray
    int_cmp: np.ndarray
    real_cmp: np.ndarray
    real_cmp_wu: np.ndarray           # weight-update share of real_cmp
    loop_events: int = 0
    ff_trace: dict = field(default_factory=dict)

    @property
    def flips_total(self):
        return int(self.flips_per_iter.sum())


class _Tally:
    """Per-iteration operation counters."""

    __slots__ = ("int_add", "real_add", "int_cmp", "real_cmp", "real_cmp_wu")

    def __init__(self):
        self.int_add = 0
        self.real_add = 0
        self.int_cmp = 0
        self.real_cmp = 0
        self.real_cmp_wu = 0


class _Recorder:
    def __init__(self):
        self.rows = {k: [] for k in
                     ("flips", "ucn", "m_wu", "m_wu0", "m_wu1", "visited_vn",
                      "events", "s2", "s3", "int_add", "real_add", "int_cmp",
                      "real_cmp", "real_cmp_wu")}

    def push(self, *, flips, ucn, m_wu, m_wu0, m_wu1, visited_vn, events,
             s2, s3, t):
        r = self.rows
        r["flips"].append(flips)
        r["ucn"].append(ucn)
        r["m_wu"].append(m_wu)
        r["m_wu0"].append(m_wu0)
        r["m_wu1"].append(m_wu1)
        r["visited_vn"].append(visited_vn)
        r["events"].append(events)
        r["s2"].append(s2)
        r["s3"].append(s3)
        r["int_add"].append(t.int_add)
        r["real_add"].append(t.real_add)
        r["int_cmp"].append(t.int_cmp)
        r["real_cmp"].append(t.real_cmp)
        r["real_cmp_wu"].append(t.real_cmp_wu)

    def outcome(self, u_hat, converged, iterations, loop_events, ff_trace):
        r = self.rows
        arr = lambda k, dt: np.asarray(r[k], dtype=dt)
        return DecodeOutcome(
            u_hat=u_hat, converged=converged, iterations_used=iterations,
            flips_per_iter=arr("flips", np.int64),
            ucn_per_iter=arr("ucn", np.int64),
            m_wu=arr("m_wu", np.int64), m_wu0=arr("m_wu0", np.int64),
            m_wu1=arr("m_wu1", np.int64),
            visited_vn=arr("visited_vn", np.int64),
            events=arr("events", np.int64),
            s2_fired=arr("s2", bool), s3_fired=arr("s3", bool),
            int_add=arr("int_add", np.int64),
            real_add=arr("real_add", np.int64),
            int_cmp=arr("int_cmp", np.int64),
            real_cmp=arr("real_cmp", np.int64),
            real_cmp_wu=arr("real_cmp_wu", np.int64),
            loop_events=loop_events, ff_trace=ff_trace)


def _effective_channel(frame, config):
    if config.hard_decision:
        return 1.0 - 2.0 * frame.z.astype(np.float64)
    return np.asarray(frame.y, dtype=np.float64)


def _select(graph, config, E, syn, U, tally, fi_mode=None):
    """Dispatch the configured FBS rule and charge its operation costs."""
    N, M = graph.N, graph.M
    kind = config.fbs_kind
    if kind == "single":
        tally.real_cmp += N - 1
        return fbs.select_single(E), None
    if kind == "m1":
        if config.delta != 0.0:
            tally.real_cmp += N
        d = fbs.select_m1(E, config.delta)
        if d.fired_step == fbs.STEP_M1_2:
            tally.real_cmp += N - 1
        return d, None
    if kind == "threshold_adaptive":
        delta = fbs.adaptive_threshold(E, syn)
        tally.real_cmp += N - 1          # finding E*
        tally.real_cmp += N              # threshold scan
        d = fbs.select_m1(E, delta)
        d.fired_step = fbs.STEP_ADAPTIVE
        return d, None
    if kind == "pwbf":
        F = fbs.fs_counts(graph, E, syn)
        tally.real_cmp += syn.weight * (graph.dc - 1)
        tally.int_add += syn.weight
        tally.int_cmp += N
        d = fbs.select_pwbf(F, config.delta_fs)
        if d.fired_step == fbs.STEP_PWBF_FALLBACK:
            tally.int_cmp += N - 1
        return d, None
    if kind == "m2":
        mode = fi_mode or config.resolved_fi_mode(graph)
        fi = fbs.flip_intensity(graph, E, syn, config.theta0, config.theta1,
                                config.theta2, mode=mode)
        active = M if mode == "with_pcn" else syn.weight
        tally.real_cmp += active * (graph.dc - 1)
        tally.int_cmp += active * (graph.dc - 1)
        tally.int_add += active
        tally.int_cmp += N
        d = fbs.select_m2(fi, config.delta_fi)
        if d.fired_step == fbs.STEP_M2_3:
            tally.int_cmp += N
        return d, fi
    raise ConfigError(f"unknown fbs_kind {kind!r}")


def _maybe_break_loop(graph, config, history, u_hat, syn, tally):
    if not config.loop_breaker:
        return None
    if not fbs.detect_loop(history, u_hat):
        return None
    U = kernels.ucn_counts(graph.var_ptr, graph.var_cn, syn.bits)
    tally.int_cmp += graph.N - 1
    return fbs.break_loop(U)


def _static_weights(graph, config, y_eff):
    kind = config.ff_kind
    if kind in ("gallager", "gdbf", "ngdbf"):
        return None
    if kind == "wbf" or kind == "mwbf":
        return flipfn.wbf_weights(graph, y_eff)
    if kind == "imwbf":
        return flipfn.imwbf_weights(graph, y_eff)
    if kind == "rrwbf":
        return flipfn.rrwbf_weights(graph, y_eff)
    raise ConfigError(f"no static weights for ff_kind {kind!r}")


def _static_ff(graph, config, y_eff, u_hat, syn, weights, rng, sigma):
    kind = config.ff_kind
    if kind == "gallager":
        return flipfn.ff_gallager(graph, syn)
    if kind == "wbf" or kind == "rrwbf":
        return flipfn.ff_general_static(graph, y_eff, u_hat, syn, weights,
                                        config.alpha1, phi_kind="zero")
    if kind == "mwbf" or kind == "imwbf":
        return flipfn.ff_general_static(graph, y_eff, u_hat, syn, weights,
                                        config.alpha1, phi_kind="abs_y")
    if kind == "gdbf":
        return flipfn.ff_gdbf(graph, y_eff, u_hat, syn, config.alpha3)
    if kind == "ngdbf":
        if rng is None:
            raise ConfigError("ngdbf decoding needs an rng")
        return flipfn.ff_ngdbf(graph, y_eff, u_hat, syn, config.w,
                               config.noise_scale, sigma, rng)
    raise ConfigError(f"ff_kind {kind!r} is not a static-weight FF")


def decode_bf(graph, frame, config, rng=None, collect_ff=None):
    """Static-weight bit-flipping decoding (the generic four-step loop)."""
    config.validate(graph)
    if config.ff_kind in ("dwbf", "nms"):
        raise ConfigError("decode_bf handles the static-weight FFs only")
    y_eff = _effective_channel(frame, config)
    weights = _static_weights(graph, config, y_eff)
    u_hat = frame.z.astype(np.uint8).copy()
    history = fbs.LoopHistory(config.loop_window)
    rec = _Recorder()
    ff_trace = {}
    loop_events = 0
    l = 0
    converged = False
    while True:
        syn = kernels.syndrome(graph.chk_ptr, graph.chk_vn, u_hat)
        syn = _Syn(syn)
        if syn.weight == 0:
            converged = True
            break
        if l == config.l_max:
            break
        l += 1
        tally = _Tally()
        E = _static_ff(graph, config, y_eff, u_hat, syn, weights, rng,
                       frame.sigma)
        if collect_ff and l in collect_ff:
            ff_trace[l] = (E.copy(), u_hat.copy())
        decision = _maybe_break_loop(graph, config, history, u_hat, syn,
                                     tally)
        if decision is not None:
            loop_events += 1
        else:
            decision, _ = _select(graph, config, E, syn, None, tally)
        u_hat[decision.B] ^= 1
        rec.push(flips=len(decision.B), ucn=syn.weight, m_wu=0, m_wu0=0,
                 m_wu1=0, visited_vn=0, events=len(decision.B),
                 s2=decision.fired_step == fbs.STEP_M1_2,
                 s3=decision.fired_step == fbs.STEP_M2_3, t=tally)
    return rec.outcome(u_hat, converged, l, loop_events, ff_trace)


class _Syn:
    __slots__ = ("bits", "weight")

    def __init__(self, bits):
        self.bits = bits
        self.weight = int(bits.sum())


def _weight_update_costs(graph, config, update_set, flip_mask_edges, syn,
                         fi_mode, tally):
    """Charge the per-row weight-update comparison costs.

    M1/single rules pay the full (min, second-min) scan per row; the M2
    rule reuses the row argmax found during bit selection, except on
    satisfied rows in ucn_only mode where nothing was computed.
    """
    rows = update_set.cn_indices
    if len(rows) == 0:
        return
    lens = (graph.chk_ptr[rows + 1] - graph.chk_ptr[rows]).astype(np.int64)
    if config.fbs_kind == "m2":
        t_all = np.add.reduceat(flip_mask_edges, graph.chk_ptr[:-1])
        t = t_all[rows]
        if fi_mode == "ucn_only":
            ucn_rows = syn.bits[rows] == 1
            cost = np.where(ucn_rows, lens - 2 + t, 2 * lens - 3)
        else:
            cost = lens - 2 + t
        tally.real_cmp_wu += int(cost.sum())
    else:
        tally.real_cmp_wu += int((2 * lens - 3).sum())
    tally.real_cmp += tally.real_cmp_wu


def decode_dwbf(graph, frame, config, rng=None, collect_ff=None):
    """Dynamic-weight bit-flipping decoding.

    Weights start from the exclude-one row minima of |y| (all ones for
    hard-decision mode) and are recomputed each iteration on the rows the
    schedule selects, from the clipped negated FF values.
    """
    config.validate(graph)
    if config.ff_kind != "dwbf":
        raise ConfigError("decode_dwbf requires ff_kind='dwbf'")
    y_eff = _effective_channel(frame, config)
    if config.hard_decision:
        r = np.ones(graph.num_edges, dtype=np.float64)
    else:
        r = flipfn.imwbf_weights(graph, y_eff).w.copy()
    u_hat = frame.z.astype(np.uint8).copy()
    E = -y_eff * (1.0 - 2.0 * u_hat)       # E^(0)
    E_prev = E.copy()                      # snapshot for the inversion test
    ga_prev = None                         # previous schedule-A set
    fwus_set = dynweights.fwus(graph.M)
    fwus_set.visited_vn_count = graph.N
    fi_mode = config.resolved_fi_mode(graph)
    history = fbs.LoopHistory(config.loop_window)
    rec = _Recorder()
    ff_trace = {}
    loop_events = 0
    l = 0
    converged = False
    while True:
        syn = _Syn(kernels.syndrome(graph.chk_ptr, graph.chk_vn, u_hat))
        if syn.weight == 0:
            converged = True
            break
        if l == config.l_max:
            break
        l += 1
        tally = _Tally()
        # Step 2: FF from previous iteration's weights
        E = -y_eff * (1.0 - 2.0 * u_hat) \
            - config.alpha2 * flipfn._checksum_sum(graph, r, syn.bits)
        if collect_ff and l in collect_ff:
            ff_trace[l] = (E.copy(), u_hat.copy())
        # Step 3: select, flip, invert the flipped FF values
        decision = _maybe_break_loop(graph, config, history, u_hat, syn,
                                     tally)
        if decision is not None:
            loop_events += 1
        else:
            decision, _ = _select(graph, config, E, syn, None, tally,
                                  fi_mode=fi_mode)
        B = decision.B
        u_hat[B] ^= 1
        E[B] = -E[B]
        # Step 4: schedule selection and weight update
        inv = dynweights.inverted_vns(E, E_prev, config.eta)
        n_events = len(np.union1d(B, inv))
        if config.schedule == "fwus":
            update_set = fwus_set
        else:
            ga = dynweights.swus_a(graph, B, E, E_prev, config.eta,
                                   inverted=inv, with_provenance=False)
            if config.schedule == "swus_a":
                update_set = ga
            else:
                update_set = dynweights.swus_b(graph, ga_prev, ga,
                                               with_provenance=False)
            ga_prev = ga.cn_indices
        flip_mask_edges = np.zeros(graph.num_edges, dtype=np.int64)
        if len(B):
            fm = np.zeros(graph.N, dtype=np.int64)
            fm[B] = 1
            flip_mask_edges = fm[graph.chk_vn]
        _weight_update_costs(graph, config, update_set, flip_mask_edges,
                             syn, fi_mode, tally)
        r = dynweights.update_weights(graph, E, update_set, config.eta, r)
        E_prev = E.copy()
        rows = update_set.cn_indices
        m_wu0 = int(np.sum(syn.bits[rows] == 0)) if len(rows) else 0
        rec.push(flips=len(B), ucn=syn.weight, m_wu=len(rows), m_wu0=m_wu0,
                 m_wu1=len(rows) - m_wu0,
                 visited_vn=update_set.visited_vn_count, events=n_events,
                 s2=decision.fired_step == fbs.STEP_M1_2,
                 s3=decision.fired_step == fbs.STEP_M2_3, t=tally)
    return rec.outcome(u_hat, converged, l, loop_events, ff_trace)


def decode_nms(graph, frame, config, rng=None, collect_ff=None):
    """Normalized min-sum flooding decoder (soft-decision reference)."""
    config.validate(graph)
    lch = np.asarray(frame.y, dtype=np.float64)
    v2c = lch[graph.chk_vn].copy()
    u_hat = frame.z.astype(np.uint8).copy()
    rec = _Recorder()
    l = 0
    converged = False
    while True:
        syn = _Syn(kernels.syndrome(graph.chk_ptr, graph.chk_vn, u_hat))
        if syn.weight == 0:
            converged = True
            break
        if l == config.l_max:
            break
        l += 1
        tally = _Tally()
        c2v = kernels.nms_cn_update(graph.chk_ptr, v2c, config.nms_factor)
        total, v2c = kernels.nms_vn_update(graph.var_ptr, graph.var_eid,
                                           graph.chk_vn, c2v, lch)
        u_hat = (total < 0).astype(np.uint8)
        tally.real_add += graph.N * graph.dv
        tally.real_cmp += graph.M * (2 * graph.dc - 3)
        rec.push(flips=0, ucn=syn.weight, m_wu=0, m_wu0=0, m_wu1=0,
                 visited_vn=0, events=0, s2=False, s3=False, t=tally)
    return rec.outcome(u_hat, converged, l, 0, {})


def decode(graph, frame, config, rng=None, collect_ff=None):
    """Decode with the configured algorithm family."""
    if config.ff_kind == "dwbf":
        return decode_dwbf(graph, frame, config, rng, collect_ff)
    if config.ff_kind == "nms":
        return decode_nms(graph, frame, config, rng, collect_ff)
    return decode_bf(graph, frame, config, rng, collect_ff)
