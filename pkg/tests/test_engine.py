import numpy as np
import pytest

from dwbf import channel, engine, fbs, tanner
from dwbf.channel import FrameSample

from conftest import random_graph


def _frame(g, y):
    z = channel.hard_decision(y)
    return FrameSample(u=np.zeros(g.N, np.uint8), x=np.ones(g.N), y=y, z=z,
                       sigma=1.0)


def run_ref(H, y, alpha2, eta, schedule, fbs_kind, delta, l_max,
            hard=False):
    """Independent dense reference for the dynamic-weight decoder."""
    M, N = H.shape
    z = (y < 0).astype(int)
    y_eff = y.copy() if not hard else 1.0 - 2.0 * z
    u = z.copy()
    rows = [list(np.flatnonzero(H[m])) for m in range(M)]
    cols = [list(np.flatnonzero(H[:, n])) for n in range(N)]
    r = {}
    for m in range(M):
        for n in rows[m]:
            if hard:
                r[m, n] = 1.0
            else:
                r[m, n] = min(abs(y_eff[q]) for q in rows[m] if q != n)
    E_prev = -y_eff * (1 - 2 * u)          # E^(0)
    ga_prev = None
    trace = []
    for l in range(l_max):
        s = H.dot(u) % 2
        if not s.any():
            return u, trace, True
        E = np.array([-y_eff[n] * (1 - 2 * u[n])
                      - alpha2 * sum(r[m, n] * (1 - 2 * s[m])
                                     for m in cols[n])
                      for n in range(N)])
        if fbs_kind == "single":
            B = [int(np.argmax(E))]
        else:
            B = list(np.flatnonzero(E >= delta))
            if not B:
                B = [int(np.argmax(E))]
        for n in B:
            u[n] ^= 1
            E[n] = -E[n]
        if schedule == "fwus":
            G = set(range(M))
        else:
            ga = set(m for n in B for m in cols[n])
            if E_prev is not None:
                for n in range(N):
                    if (-E[n] - eta) * (-E_prev[n] - eta) < 0:
                        ga |= set(cols[n])
            G = set(ga)
            if schedule == "swus_b" and ga_prev is not None:
                for m in ga_prev:
                    for n in rows[m]:
                        G |= set(cols[n])
            ga_prev = ga
        for m in G:
            for n in rows[m]:
                r[m, n] = min(max(-E[q] - eta, 0.0)
                              for q in rows[m] if q != n)
        E_prev = E.copy()
        trace.append((sorted(B), sorted(G)))
    s = H.dot(u) % 2
    return u, trace, not s.any()


class TestDWBFAgainstReference:
    @pytest.mark.parametrize("schedule", ["fwus", "swus_a", "swus_b"])
    @pytest.mark.parametrize("fbs_kind", ["single", "m1"])
    @pytest.mark.parametrize("hard", [False, True])
    def test_matches(self, schedule, fbs_kind, hard, code_3_6_120):
        g = code_3_6_120
        H = g.to_dense()
        for i in range(12):
            rng = channel.frame_rng(100, i)
            y = 1.0 + 0.8 * rng.standard_normal(g.N)
            cfg = engine.DecoderConfig(
                ff_kind="dwbf", fbs_kind=fbs_kind, schedule=schedule,
                alpha2=0.6, eta=0.1, delta=0.0, l_max=15,
                hard_decision=hard, loop_breaker=False)
            out = engine.decode_dwbf(g, _frame(g, y), cfg)
            u_ref, trace, conv = run_ref(H, y, 0.6, 0.1, schedule, fbs_kind,
                                         0.0, 15, hard=hard)
            assert np.array_equal(out.u_hat, u_ref)
            assert out.converged == conv
            assert out.iterations_used == len(trace)
            for it, (B, G) in enumerate(trace):
                assert out.flips_per_iter[it] == len(B)
                assert out.m_wu[it] == len(G)


class TestCounters:
    def test_m1_dwbf_real_cmp_identity(self, code_3_6_120):
        g = code_3_6_120
        cfg = engine.DecoderConfig(ff_kind="dwbf", fbs_kind="m1",
                                   schedule="swus_a", alpha2=0.7,
                                   delta=0.0, l_max=50)
        sig = channel.ebn0_to_sigma(4.0, g.rate)
        for i in range(50):
            fr = channel.transmit(np.zeros(g.N, np.uint8), sig,
                                  channel.frame_rng(1, i))
            out = engine.decode_dwbf(g, fr, cfg)
            expect = out.m_wu * (2 * g.dc - 3) \
                + out.s2_fired.astype(int) * (g.N - 1)
            assert np.array_equal(out.real_cmp, expect)

    def test_ucn_and_visited_bookkeeping(self, code_3_6_120):
        g = code_3_6_120
        cfg = engine.DecoderConfig(ff_kind="dwbf", fbs_kind="single",
                                   schedule="fwus", alpha2=0.5, l_max=20)
        fr = channel.transmit(np.zeros(g.N, np.uint8), 0.8,
                              channel.frame_rng(2, 0))
        out = engine.decode_dwbf(g, fr, cfg)
        assert np.all(out.m_wu == g.M)
        assert np.all(out.visited_vn == g.N)
        assert np.all(out.m_wu0 + out.m_wu1 == g.M)
        assert np.all(out.ucn_per_iter >= 1)

    def test_nms_counters(self, code_3_6_120):
        g = code_3_6_120
        cfg = engine.DecoderConfig(ff_kind="nms", l_max=30)
        fr = channel.transmit(np.zeros(g.N, np.uint8), 0.9,
                              channel.frame_rng(3, 1))
        out = engine.decode_nms(g, fr, cfg)
        assert np.all(out.real_add == g.N * g.dv)
        assert np.all(out.real_cmp == g.M * (2 * g.dc - 3))


class TestLoopBreaker:
    def make_fixture(self):
        H = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
        g = tanner.TannerGraph.from_dense(H)
        z = np.array([1, 0, 1], np.uint8)
        fr = FrameSample(u=np.zeros(3, np.uint8), x=np.ones(3),
                         y=1.0 - 2.0 * z, z=z, sigma=1.0)
        return g, fr

    def test_period_two_is_broken(self):
        g, fr = self.make_fixture()
        cfg = engine.DecoderConfig(ff_kind="gallager", fbs_kind="m1",
                                   delta=1.0, hard_decision=True, l_max=20,
                                   loop_window=4)
        out = engine.decode_bf(g, fr, cfg)
        assert out.converged
        assert out.loop_events == 1
        # post-break word differs from both loop states
        assert not np.array_equal(out.u_hat, [1, 0, 1])
        assert not np.array_equal(out.u_hat, [0, 1, 0])

    def test_without_breaker_oscillates(self):
        g, fr = self.make_fixture()
        cfg = engine.DecoderConfig(ff_kind="gallager", fbs_kind="m1",
                                   delta=1.0, hard_decision=True, l_max=20,
                                   loop_breaker=False)
        out = engine.decode_bf(g, fr, cfg)
        assert not out.converged
        assert out.iterations_used == 20


class TestTracing:
    def test_ff_trace_pre_flip(self, code_3_6_120):
        g = code_3_6_120
        cfg = engine.DecoderConfig(ff_kind="dwbf", fbs_kind="single",
                                   schedule="fwus", alpha2=0.5, l_max=20)
        fr = channel.transmit(np.zeros(g.N, np.uint8), 0.8,
                              channel.frame_rng(4, 2))
        out = engine.decode_dwbf(g, fr, cfg, collect_ff={1, 3})
        assert set(out.ff_trace) <= {1, 3}
        assert 1 in out.ff_trace
        E, u_hat = out.ff_trace[1]
        assert np.array_equal(u_hat, fr.z)  # iteration 1 sees the channel


class TestValidation:
    def test_alpha2_range(self, tiny_graph):
        for a2 in (0.0, 1.0, -0.5, 2.0):
            cfg = engine.DecoderConfig(ff_kind="dwbf", schedule="fwus",
                                       alpha2=a2)
            with pytest.raises(engine.ConfigError):
                cfg.validate(tiny_graph)

    def test_dwbf_needs_schedule(self, tiny_graph):
        with pytest.raises(engine.ConfigError):
            engine.DecoderConfig(ff_kind="dwbf").validate(tiny_graph)

    def test_unknown_kinds(self, tiny_graph):
        with pytest.raises(engine.ConfigError):
            engine.DecoderConfig(ff_kind="bogus").validate(tiny_graph)
        with pytest.raises(engine.ConfigError):
            engine.DecoderConfig(ff_kind="gdbf",
                                 fbs_kind="bogus").validate(tiny_graph)

    def test_delta_fi_bounds(self, tiny_graph):
        cfg = engine.DecoderConfig(ff_kind="gdbf", fbs_kind="m2",
                                   delta_fi=100)
        with pytest.raises(engine.ConfigError):
            cfg.validate(tiny_graph)

    def test_wrong_dispatch(self, tiny_graph):
        fr = _frame(tiny_graph, np.ones(tiny_graph.N))
        with pytest.raises(engine.ConfigError):
            engine.decode_bf(tiny_graph, fr,
                             engine.DecoderConfig(ff_kind="dwbf",
                                                  schedule="fwus"))
        with pytest.raises(engine.ConfigError):
            engine.decode_dwbf(tiny_graph, fr,
                               engine.DecoderConfig(ff_kind="gdbf"))
