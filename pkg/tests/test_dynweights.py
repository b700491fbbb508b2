import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dwbf import dynweights, tanner

from conftest import random_graph


class TestClip:
    def test_boundary_is_zero(self):
        for eta in (0.0, 0.3, 1.7):
            assert dynweights.clip(eta, eta) == 0.0

    def test_above_shifts_below_zeroes(self):
        assert dynweights.clip(2.0, 0.5) == 1.5
        assert dynweights.clip(0.49, 0.5) == 0.0
        assert dynweights.clip(-3.0, 0.0) == 0.0

    @given(st.floats(-10, 10), st.floats(0, 5))
    @settings(max_examples=100, deadline=None)
    def test_nonnegative_and_monotone(self, x, eta):
        v = dynweights.clip(x, eta)
        assert v >= 0.0
        assert dynweights.clip(x + 0.5, eta) >= v


class TestUpdateWeights:
    def test_single_row_example(self):
        # one check over three VNs with -E = (1.0, 0.5, 2.0), eta = 0:
        # each edge gets the min of the other two clipped reliabilities
        H = np.ones((1, 3), dtype=np.uint8)
        g = tanner.TannerGraph.from_dense(H)
        E = np.array([-1.0, -0.5, -2.0])
        us = dynweights.UpdateSet(cn_indices=[0])
        r = dynweights.update_weights(g, E, us, 0.0, np.zeros(3))
        assert np.array_equal(r, [0.5, 1.0, 0.5])

    def test_clipping_zeroes_unreliable(self):
        H = np.ones((1, 3), dtype=np.uint8)
        g = tanner.TannerGraph.from_dense(H)
        E = np.array([-1.0, -0.5, -2.0])
        us = dynweights.UpdateSet(cn_indices=[0])
        r = dynweights.update_weights(g, E, us, 0.6, np.zeros(3))
        # 0.5 clips to 0, so edges 0 and 2 see weight 0
        assert np.array_equal(r, [0.0, 0.4, 0.0])

    def test_quarantine_10000_rows(self):
        # rows outside the update set carry previous weights bit-exactly
        rng = np.random.default_rng(17)
        g = tanner.generate_regular(3000, 3, 6, seed=17, min_girth=4)
        assert g.M >= 1000
        prev = rng.random(g.num_edges)
        E = rng.standard_normal(g.N)
        checked = 0
        while checked < 10_000:
            rows = np.flatnonzero(rng.random(g.M) < 0.5).astype(np.int64)
            us = dynweights.UpdateSet(cn_indices=rows)
            r = dynweights.update_weights(g, E, us, 0.1, prev)
            outside = np.setdiff1d(np.arange(g.M), rows)
            for m in outside:
                lo, hi = g.chk_ptr[m], g.chk_ptr[m + 1]
                assert np.array_equal(r[lo:hi], prev[lo:hi])
            checked += len(outside)
            prev = r

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=20, deadline=None)
    def test_weights_nonnegative(self, seed):
        rng = np.random.default_rng(seed)
        g, _ = random_graph(rng)
        E = rng.standard_normal(g.N)
        us = dynweights.UpdateSet(cn_indices=np.arange(g.M))
        r = dynweights.update_weights(g, E, us, 0.0, np.zeros(g.num_edges))
        assert np.all(r >= 0.0)


class TestSchedules:
    def test_fwus_covers_all(self):
        us = dynweights.fwus(7)
        assert np.array_equal(us.cn_indices, np.arange(7))
        assert us.visited_cn_count == 7
        assert all(dynweights.PROV_FULL in p for p in us.provenance.values())

    def test_swus_a_flip_adjacency_only_first_iteration(self, tiny_graph):
        E = np.zeros(tiny_graph.N)
        us = dynweights.swus_a(tiny_graph, [2], E, None, 0.0)
        assert set(us.cn_indices) == {0, 1}
        assert us.provenance[0] == {dynweights.PROV_FLIP}

    def test_swus_a_inversion_members(self, tiny_graph):
        # VN 5 reliability flips sign between iterations, VN 0 flipped
        E_prev = np.array([0.1, -1.0, -1.0, -1.0, -1.0, -0.5])
        E_now = np.array([0.1, -1.0, -1.0, -1.0, -1.0, 0.5])
        us = dynweights.swus_a(tiny_graph, [0], E_now, E_prev, 0.0)
        flips = set(int(m) for m in tiny_graph.col_adj(0))
        invs = set(int(m) for m in tiny_graph.col_adj(5))
        assert set(int(m) for m in us.cn_indices) == flips | invs
        for m in invs - flips:
            assert us.provenance[m] == {dynweights.PROV_INVERSION}

    def test_swus_a_sign_test_is_strict(self, tiny_graph):
        # touching zero does not count as an inversion
        E_prev = np.zeros(tiny_graph.N)
        E_now = -np.ones(tiny_graph.N)
        us = dynweights.swus_a(tiny_graph, [], E_now, E_prev, 0.0)
        assert len(us.cn_indices) == 0

    def test_swus_b_expands_previous_a(self, tiny_graph):
        E = -np.ones(tiny_graph.N)
        ga_now = dynweights.swus_a(tiny_graph, [0], E, None, 0.0)
        gb = dynweights.swus_b(tiny_graph, np.array([0]), ga_now)
        # expansion: all checks of all VNs of check 0
        expand = set()
        for n in tiny_graph.row_adj(0):
            expand |= set(int(m) for m in tiny_graph.col_adj(int(n)))
        assert set(int(m) for m in gb.cn_indices) \
            == expand | set(int(m) for m in ga_now.cn_indices)

    def test_visited_vn_count(self, tiny_graph):
        us = dynweights.swus_a(tiny_graph, [0], -np.ones(tiny_graph.N),
                               None, 0.0)
        touched = set()
        for m in us.cn_indices:
            touched |= set(int(n) for n in tiny_graph.row_adj(int(m)))
        assert us.visited_vn_count == len(touched)


class TestPredictedVisits:
    def test_table_values_4_6(self):
        # cycle-free visit counts for a (4,6) code
        assert dynweights.predicted_visits(4, 6, 536, 804, "swus_a") \
            == (4, 21)
        assert dynweights.predicted_visits(4, 6, 536, 804, "swus_b") \
            == (68, 342)
        assert dynweights.predicted_visits(4, 6, 536, 804, "fwus") \
            == (536, 804)

    def test_caps_apply(self):
        cn, vn = dynweights.predicted_visits(4, 6, 10, 20, "swus_b")
        assert (cn, vn) == (10, 20)

    def test_unknown_schedule(self):
        with pytest.raises(ValueError):
            dynweights.predicted_visits(3, 6, 10, 20, "bogus")
