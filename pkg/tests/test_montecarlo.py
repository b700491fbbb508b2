import numpy as np
import pytest

from dwbf import montecarlo, presets


class TestWilson:
    def test_known_values(self):
        # frozen against a standard statistics reference
        lo, hi = montecarlo.wilson_interval(10, 100)
        assert lo == pytest.approx(0.0552, abs=2e-4)
        assert hi == pytest.approx(0.1744, abs=2e-4)

    def test_degenerate(self):
        assert montecarlo.wilson_interval(0, 0) == (0.0, 1.0)
        lo, hi = montecarlo.wilson_interval(0, 50)
        assert lo == 0.0 and 0 < hi < 0.1
        lo, hi = montecarlo.wilson_interval(50, 50)
        assert hi == 1.0 and 0.9 < lo < 1.0

    def test_contains_point_estimate(self):
        for k, n in [(1, 7), (3, 9), (20, 21)]:
            lo, hi = montecarlo.wilson_interval(k, n)
            assert lo <= k / n <= hi


class TestRunPoint:
    def test_parallelism_invariance(self, code_3_6_120):
        cfg = presets.preset("m1-dwbf-a-code1", l_max=30)
        kw = dict(master_seed=5, max_frames=1024, target_frame_errors=20,
                  label="x")
        r1 = montecarlo.run_point(code_3_6_120, cfg, 4.0, workers=1, **kw)
        r8 = montecarlo.run_point(code_3_6_120, cfg, 4.0, workers=8, **kw)
        assert montecarlo.reports_to_csv([r1]) \
            == montecarlo.reports_to_csv([r8])
        assert np.array_equal(r1.m_wu_by_iter, r8.m_wu_by_iter)

    def test_error_budget_stops_on_chunk_boundary(self, code_3_6_120):
        cfg = presets.preset("imwbf-code1", l_max=20)
        r = montecarlo.run_point(code_3_6_120, cfg, 3.0, master_seed=1,
                                 max_frames=10_000, target_frame_errors=5)
        assert r.frame_errors >= 5
        assert r.frames % montecarlo.CHUNK == 0
        assert r.frames < 10_000

    def test_frame_budget(self, code_3_6_120):
        cfg = presets.preset("imwbf-code1", l_max=20)
        r = montecarlo.run_point(code_3_6_120, cfg, 6.0, master_seed=1,
                                 max_frames=128, target_frame_errors=10**9)
        assert r.frames == 128

    def test_common_random_numbers(self, code_3_6_120):
        # identical decoders in a sweep see identical noise
        cfg_a = presets.preset("imwbf-code1", l_max=20)
        cfg_b = presets.preset("imwbf-code1", l_max=20)
        reps = montecarlo.run_sweep(
            code_3_6_120, [("a", cfg_a), ("b", cfg_b)], [4.0],
            master_seed=9, max_frames=256, target_frame_errors=10**9)
        assert reps[0].bit_errors == reps[1].bit_errors
        assert reps[0].frame_errors == reps[1].frame_errors


class TestSeparation:
    def test_shapes_and_counts(self, code_3_6_120):
        cfg = presets.preset("s-dwbf-f-code1", l_max=10)
        seps = montecarlo.collect_ff_separation(
            code_3_6_120, cfg, 4.0, [1, 5], frames=50, master_seed=2)
        s1 = seps[1]
        assert len(s1.hist_edges) == 201
        assert s1.hist_correct.sum() == s1.n_correct
        assert s1.hist_erroneous.sum() == s1.n_erroneous
        # iteration 1 samples every frame with a nonzero syndrome
        assert s1.n_correct + s1.n_erroneous \
            <= 50 * code_3_6_120.N


class TestSerialization:
    def test_csv_header_frozen(self, code_3_6_120):
        cfg = presets.preset("imwbf-code1", l_max=5)
        r = montecarlo.run_point(code_3_6_120, cfg, 5.0, max_frames=64,
                                 target_frame_errors=10**9, label="im")
        text = montecarlo.reports_to_csv([r])
        assert text.splitlines()[0] == ",".join(montecarlo.CSV_COLUMNS)
        assert text.splitlines()[1].startswith("im,5,64,")

    def test_json_round(self, code_3_6_120):
        import json
        cfg = presets.preset("imwbf-code1", l_max=5)
        r = montecarlo.run_point(code_3_6_120, cfg, 5.0, max_frames=64,
                                 target_frame_errors=10**9, label="im")
        data = json.loads(montecarlo.reports_to_json([r]))
        assert data[0]["label"] == "im"
        assert float(data[0]["sigma"]) == pytest.approx(r.sigma)


class TestPresets:
    def test_code1_presets_valid(self, code_3_6_120):
        # code2 presets carry thresholds sized for the high-rate code, so
        # only construct them; code1 presets validate on a (3,6) graph
        for name in presets.preset_names():
            cfg = presets.preset(name)
            if name.endswith("code1"):
                cfg.validate(code_3_6_120)

    def test_overrides_and_unknown(self):
        cfg = presets.preset("imwbf-code1", l_max=7)
        assert cfg.l_max == 7
        with pytest.raises(KeyError):
            presets.preset("nope")
