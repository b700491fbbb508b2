"""Monte Carlo BER/FER simulation with deterministic parallelism.

Frames are decoded in fixed-size chunks (64 frames).  Frame i always uses
the counter-based substream keyed by (master_seed, i), and the stopping
rule looks only at the cumulative error count over chunks 0..k in index
order, so the reported numbers are byte-identical for any worker count.

The all-zero codeword is transmitted throughout; every decoder here is
symmetric under codeword translation, so this loses no generality.
"""

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import channel, engine

CHUNK = 64

CSV_COLUMNS = ("label", "ebn0_db", "frames", "bit_errors", "frame_errors",
               "ber", "fer", "fer_lo95", "fer_hi95", "avg_iterations",
               "avg_flips", "avg_visited_cn", "avg_visited_vn",
               "avg_events", "avg_int_add", "avg_real_add", "avg_int_cmp",
               "avg_real_cmp", "loop_events")


def wilson_interval(k, n, z=1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = (z / denom) * np.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    return float(max(0.0, center - half)), float(min(1.0, center + half))


@dataclass
class SimReport:
    """Aggregated statistics for one (config, Eb/N0) simulation point."""

    label: str
    ebn0_db: float
    sigma: float
    frames: int
    bit_errors: int
    frame_errors: int
    undetected_errors: int
    avg_iterations: float
    avg_flips: float
    avg_visited_cn: float
    avg_visited_vn: float
    avg_events: float
    avg_int_add: float
    avg_real_add: float
    avg_int_cmp: float
    avg_real_cmp: float
    loop_events: int
    n_bits: int
    m_wu_by_iter: np.ndarray = None       # summed visited CNs per iter index
    active_by_iter: np.ndarray = None     # frames still running at iter l

    @property
    def ber(self):
        return self.bit_errors / (self.frames * self.n_bits) \
            if self.frames else 0.0

    @property
    def fer(self):
        return self.frame_errors / self.frames if self.frames else 0.0

    def fer_interval(self):
        return wilson_interval(self.frame_errors, self.frames)

    def visited_cn_per_iter(self):
        """Average visited CNs per still-active frame, by iteration index."""
        act = np.maximum(self.active_by_iter, 1)
        return self.m_wu_by_iter / act

    def to_row(self):
        lo, hi = self.fer_interval()
        vals = {"label": self.label, "ebn0_db": self.ebn0_db,
                "frames": self.frames, "bit_errors": self.bit_errors,
                "frame_errors": self.frame_errors, "ber": self.ber,
                "fer": self.fer, "fer_lo95": lo, "fer_hi95": hi,
                "avg_iterations": self.avg_iterations,
                "avg_flips": self.avg_flips,
                "avg_visited_cn": self.avg_visited_cn,
                "avg_visited_vn": self.avg_visited_vn,
                "avg_events": self.avg_events,
                "avg_int_add": self.avg_int_add,
                "avg_real_add": self.avg_real_add,
                "avg_int_cmp": self.avg_int_cmp,
                "avg_real_cmp": self.avg_real_cmp,
                "loop_events": self.loop_events}
        return [_fmt(vals[c]) for c in CSV_COLUMNS]

    def to_dict(self):
        d = {c: v for c, v in zip(CSV_COLUMNS, self.to_row())}
        d["sigma"] = _fmt(self.sigma)
        return d


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


class _ChunkStats:
    """Aggregates accumulated over one chunk (and merged across chunks)."""

    FIELDS = ("frames", "bit_errors", "frame_errors", "undetected",
              "iterations", "flips", "visited_cn", "visited_vn", "events",
              "int_add", "real_add", "int_cmp", "real_cmp", "loop_events")

    def __init__(self, l_max):
        for f in self.FIELDS:
            setattr(self, f, 0)
        self.m_wu_by_iter = np.zeros(l_max, dtype=np.int64)
        self.active_by_iter = np.zeros(l_max, dtype=np.int64)

    def add_frame(self, out, n_bits):
        self.frames += 1
        be = int(out.u_hat.sum())
        self.bit_errors += be
        bad = be > 0 or not out.converged
        self.frame_errors += int(bad)
        self.undetected += int(out.converged and be > 0)
        li = out.iterations_used
        self.iterations += li
        self.flips += out.flips_total
        self.visited_cn += int(out.m_wu.sum())
        self.visited_vn += int(out.visited_vn.sum())
        self.events += int(out.events.sum())
        self.int_add += int(out.int_add.sum())
        self.real_add += int(out.real_add.sum())
        self.int_cmp += int(out.int_cmp.sum())
        self.real_cmp += int(out.real_cmp.sum())
        self.loop_events += out.loop_events
        if li:
            self.m_wu_by_iter[:li] += out.m_wu
            self.active_by_iter[:li] += 1

    def merge(self, other):
        for f in self.FIELDS:
            setattr(self, f, getattr(self, f) + getattr(other, f))
        self.m_wu_by_iter += other.m_wu_by_iter
        self.active_by_iter += other.active_by_iter


def _decode_chunk(graph, config, sigma, master_seed, chunk_index,
                  chunk_size=CHUNK):
    u = np.zeros(graph.N, dtype=np.uint8)
    stats = _ChunkStats(config.l_max)
    lo = chunk_index * chunk_size
    for i in range(lo, lo + chunk_size):
        fr = channel.transmit(u, sigma, channel.frame_rng(master_seed, i))
        rng = channel.frame_rng(master_seed ^ 0x9E3779B97F4A7C15, i)
        out = engine.decode(graph, fr, config, rng=rng)
        stats.add_frame(out, graph.N)
    return stats


def run_point(graph, config, ebn0_db, master_seed=0, max_frames=100_000,
              target_frame_errors=100, workers=1, label="",
              chunk_size=CHUNK, progress=None):
    """Simulate one (config, Eb/N0) point.

    Stops at the first chunk boundary where the cumulative frame-error
    count reaches ``target_frame_errors`` (or at ``max_frames``).  Results
    are identical for any ``workers`` value.
    """
    config.validate(graph)
    sigma = channel.ebn0_to_sigma(ebn0_db, graph.rate)
    n_chunks = max(1, -(-max_frames // chunk_size))
    total = _ChunkStats(config.l_max)

    def finished(k_done):
        return (total.frame_errors >= target_frame_errors
                or k_done >= n_chunks)

    if workers <= 1:
        k = 0
        while not finished(k):
            total.merge(_decode_chunk(graph, config, sigma, master_seed, k,
                                      chunk_size))
            k += 1
            if progress:
                progress(total)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            pending = {}
            submitted = 0
            k = 0
            while not finished(k):
                while submitted < min(k + 2 * workers, n_chunks):
                    pending[submitted] = ex.submit(
                        _decode_chunk, graph, config, sigma, master_seed,
                        submitted, chunk_size)
                    submitted += 1
                total.merge(pending.pop(k).result())
                k += 1
                if progress:
                    progress(total)
            for f in pending.values():
                f.cancel()
    fr = max(total.frames, 1)
    return SimReport(
        label=label, ebn0_db=float(ebn0_db), sigma=sigma,
        frames=total.frames, bit_errors=total.bit_errors,
        frame_errors=total.frame_errors, undetected_errors=total.undetected,
        avg_iterations=total.iterations / fr, avg_flips=total.flips / fr,
        avg_visited_cn=total.visited_cn / fr,
        avg_visited_vn=total.visited_vn / fr,
        avg_events=total.events / fr,
        avg_int_add=total.int_add / fr, avg_real_add=total.real_add / fr,
        avg_int_cmp=total.int_cmp / fr, avg_real_cmp=total.real_cmp / fr,
        loop_events=total.loop_events, n_bits=graph.N,
        m_wu_by_iter=total.m_wu_by_iter,
        active_by_iter=total.active_by_iter)


def run_sweep(graph, labeled_configs, ebn0_points, master_seed=0,
              max_frames=100_000, target_frame_errors=100, workers=1,
              progress=None):
    """Simulate a grid of configs x Eb/N0 points.

    All configs share the master seed, so at each Eb/N0 every decoder sees
    exactly the same noise realizations (common random numbers).
    """
    reports = []
    for label, config in labeled_configs:
        for snr in ebn0_points:
            rep = run_point(graph, config, snr, master_seed=master_seed,
                            max_frames=max_frames,
                            target_frame_errors=target_frame_errors,
                            workers=workers, label=label)
            reports.append(rep)
            if progress:
                progress(rep)
    return reports


@dataclass
class FFSeparation:
    """Mean FF statistics at selected iterations, split by bit hypothesis.

    ``correct`` aggregates -E_n over bits whose tentative decision matches
    the transmitted bit before the iteration's flip; ``erroneous`` over the
    rest.  Histograms use 200 bins over the pooled observed range.
    """

    iteration: int
    n_correct: int
    n_erroneous: int
    mean_correct: float
    mean_erroneous: float
    hist_edges: np.ndarray
    hist_correct: np.ndarray
    hist_erroneous: np.ndarray

    @property
    def separation(self):
        return self.mean_correct - self.mean_erroneous


def collect_ff_separation(graph, config, ebn0_db, iterations, frames=2000,
                          master_seed=0, bins=200):
    """Decode ``frames`` all-zero frames, recording pre-flip FF values at
    the requested iteration numbers."""
    config.validate(graph)
    sigma = channel.ebn0_to_sigma(ebn0_db, graph.rate)
    want = set(int(i) for i in iterations)
    u = np.zeros(graph.N, dtype=np.uint8)
    samples = {l: ([], []) for l in want}      # (correct, erroneous) lists
    for i in range(frames):
        fr = channel.transmit(u, sigma, channel.frame_rng(master_seed, i))
        rng = channel.frame_rng(master_seed ^ 0x9E3779B97F4A7C15, i)
        out = engine.decode(graph, fr, config, rng=rng, collect_ff=want)
        for l, (E, u_hat) in out.ff_trace.items():
            rel = -E
            err = u_hat == 1
            samples[l][0].append(rel[~err])
            samples[l][1].append(rel[err])
    results = {}
    for l in sorted(want):
        good = np.concatenate(samples[l][0]) if samples[l][0] \
            else np.empty(0)
        bad = np.concatenate(samples[l][1]) if samples[l][1] \
            else np.empty(0)
        pooled = np.concatenate([good, bad])
        if len(pooled):
            edges = np.histogram_bin_edges(pooled, bins=bins)
        else:
            edges = np.linspace(0.0, 1.0, bins + 1)
        results[l] = FFSeparation(
            iteration=l, n_correct=len(good), n_erroneous=len(bad),
            mean_correct=float(good.mean()) if len(good) else 0.0,
            mean_erroneous=float(bad.mean()) if len(bad) else 0.0,
            hist_edges=edges,
            hist_correct=np.histogram(good, bins=edges)[0],
            hist_erroneous=np.histogram(bad, bins=edges)[0])
    return results


def reports_to_csv(reports):
    """Frozen-column CSV text for a list of SimReports."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.to_row())
    return buf.getvalue()


def reports_to_json(reports):
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
