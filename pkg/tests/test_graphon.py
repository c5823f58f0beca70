import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spectral_ldp import constructions as cons
from spectral_ldp import core, graphon
from spectral_ldp.core import ValidationError, WeightedGraph
from spectral_ldp.graphon import StepGraphon

from conftest import random_graph


def sym(m, lo=0.0):
    return arrays(float, (m, m), elements=st.floats(lo, 1)).map(lambda a: (a + a.T) / 2)


class TestEmbed:
    def test_n2(self):
        g = WeightedGraph(np.array([[0, 0.4], [0.4, 0]]))
        np.testing.assert_array_equal(graphon.embed(g, 0.1).values, [[0, 0.4], [0.4, 0]])
        np.testing.assert_array_equal(graphon.embed(g, 0.1, "padded").values, [[0.1, 0.4], [0.4, 0.1]])

    @pytest.mark.parametrize("n", [2, 5, 10, 50])
    def test_padding_norm(self, rng, n):
        g = random_graph(n, rng)
        diff = graphon.embed(g, 0.3, "padded") - graphon.embed(g, 0.3, "hat")
        assert diff.opnorm() == pytest.approx(0.3 / n, abs=1e-12)

    def test_hat_restriction_identity(self, rng):
        g = random_graph(25, rng)
        assert 25 * graphon.embed(g, 0.2).shift(0.2).opnorm() == pytest.approx(core.centered_opnorm(g, 0.2), abs=1e-8)

    def test_bad_variant(self, triangle):
        with pytest.raises(ValidationError):
            graphon.embed(triangle, 0.2, "wide")


class TestCycleDensity:
    def test_constant(self):
        u = StepGraphon(np.full((4, 4), 0.3))
        assert graphon.signed_cycle_density(u, 6) == pytest.approx(0.3**6)

    def test_zero(self):
        assert graphon.signed_cycle_density(StepGraphon(np.zeros((3, 3))), 4) == 0

    def test_planted_clique_hat(self):
        g = cons.build_clique(30, 0.2, 0.5).graph
        a = core.centered_matrix(g, 0.2)
        val = graphon.signed_cycle_density(graphon.embed(g, 0.2).shift(0.2), 4)
        assert val == pytest.approx(np.trace(np.linalg.matrix_power(a, 4)) / 30**4, rel=1e-12)

    def test_planted_clique_padded(self):
        # padding the diagonal shifts the centered matrix by +pI
        g = cons.build_clique(30, 0.2, 0.5).graph
        a = core.centered_matrix(g, 0.2) + 0.2 * np.eye(30)
        val = graphon.signed_cycle_density(graphon.embed(g, 0.2, "padded").shift(0.2), 4)
        assert val == pytest.approx(np.trace(np.linalg.matrix_power(a, 4)) / 30**4, rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(sym(5, -1.0), st.sampled_from([2, 4, 6]))
    def test_eigen_matches_power(self, v, s):
        u = StepGraphon(v, signed=True)
        assert graphon.signed_cycle_density(u, s) == pytest.approx(graphon.signed_cycle_density(u, s, "power"),
                                                                   rel=1e-9, abs=1e-14)


class TestInequalities:
    def test_constant_equality(self):
        u = StepGraphon(np.full((3, 3), 0.4))
        assert graphon.opnorm_bound_check(u, 4) == pytest.approx((0.4**4, 0.4**4))
        assert graphon.holder_cycle_check(u, 4) == pytest.approx((0.4**4, 0.4**4))

    @settings(max_examples=80, deadline=None)
    @given(sym(6, -1.0), st.sampled_from([2, 4, 8]))
    def test_opnorm_bound(self, v, s):
        lhs, rhs = graphon.opnorm_bound_check(StepGraphon(v, signed=True), s)
        assert lhs <= rhs + 1e-10 * max(1, rhs)

    def test_hilbert_schmidt(self, rng):
        v = rng.uniform(-1, 1, (7, 7))
        u = StepGraphon((v + v.T) / 2, signed=True)
        assert u.opnorm() ** 2 <= u.integral(2) + 1e-15

    @settings(max_examples=80, deadline=None)
    @given(sym(6), st.sampled_from([4, 6, 8]))
    def test_holder(self, v, s):
        lhs, rhs = graphon.holder_cycle_check(StepGraphon(v), s)
        assert lhs <= rhs + 1e-10 * max(1, rhs)

    def test_holder_one_block(self):
        v = np.zeros((4, 4))
        v[0, 0] = 1
        lhs, rhs = graphon.holder_cycle_check(StepGraphon(v), 4)
        assert lhs == pytest.approx(rhs)

    def test_holder_rejects_signed(self):
        with pytest.raises(ValidationError):
            graphon.holder_cycle_check(StepGraphon(-np.ones((2, 2)) / 2, signed=True), 4)


class TestDegreeProfile:
    def test_constant_above(self):
        prof = graphon.degree_profile(StepGraphon(np.full((4, 4), 0.2)), 0.5, 1.0, 0.1)
        assert prof.B_mass == 0 and prof.theta_b == 0
        assert prof.eta_b == pytest.approx(0.2**2 / 0.1**2)

    def test_constant_below(self):
        prof = graphon.degree_profile(StepGraphon(np.full((4, 4), 0.2)), 0.1, 1.0, 0.1)
        assert prof.B_mass == 1 and prof.theta_b == 0 and prof.eta_b == 0

    def test_hub(self):
        c = cons.build_anticlique(50, 0.1, 0.5, z=3 / (50 * 0.01))
        u = graphon.embed(c.graph, 0.1).shift(0.1)
        u = StepGraphon(np.clip(u.values, 0, None))
        prof = graphon.degree_profile(u, 0.3, 0.5, 0.1, s=4)
        np.testing.assert_array_equal(np.flatnonzero(prof.high), [0, 1, 2])
        g = prof.gammas
        assert g["gamma1"] == pytest.approx(g["gamma2"])
        assert g["gamma1"] + g["gamma2"] + g["gamma3"] <= g["total"] + 1e-15

    def test_holder_bounds_on_gammas(self, rng):
        v = rng.random((10, 10)) * 0.3
        u = StepGraphon((v + v.T) / 2)
        d, p, s = 0.5, 0.2, 6
        for prof in graphon.scan_b(u, graphon.geometric_b_grid(0.05, 0.3, 8), d, p, s):
            scale = (d * p) ** 2
            assert prof.gammas["gamma1"] <= (prof.theta_b * scale) ** (s / 2) + 1e-15
            assert prof.gammas["gamma3"] <= (prof.eta_b * scale) ** (s / 2) + 1e-15

    def test_bad_b(self):
        with pytest.raises(ValidationError):
            graphon.degree_profile(StepGraphon(np.zeros((2, 2))), 0.0, 1.0, 0.1)


class TestConvexSplit:
    @pytest.mark.parametrize("s", [2, 4, 6, 8, 10, 12])
    def test_axis_minimiser(self, s):
        r = graphon.convex_min_split(s)
        assert r.value == pytest.approx(0.5, abs=1e-6)
        assert (r.x, r.y) == (0.0, 1.0)

    def test_s4_boundary(self):
        assert graphon.convex_min_split(4).y_axis_value == pytest.approx(2**-0.5)

    def test_s2_tie(self):
        r = graphon.convex_min_split(2)
        assert r.x_axis_value == pytest.approx(r.y_axis_value)


class TestApriori:
    def test_zero(self):
        rep = graphon.apriori_quantities(StepGraphon(np.zeros((3, 3))), 0.1, 1.0, 0.2)
        assert rep.mean_U == rep.mean_U2 == rep.B_mass == rep.low_degree_sq == rep.entropy_mean == 0

    def test_planted_clique_u2(self):
        n, p = 40, 0.1
        c = cons.build_clique(n, p, 1.0)
        u = graphon.embed(c.graph, p).shift(p)
        u = StepGraphon(np.clip(u.values, 0, None))
        rep = graphon.apriori_quantities(u, p, 1.0, 0.5)
        k = c.planted
        direct = k * (k - 1) * (1 - p) ** 2 / n**2
        assert rep.mean_U2 == pytest.approx(direct, rel=1e-12)
        assert rep.mean_U2 == pytest.approx((k / n) ** 2 * (1 - p) ** 2 - k * (1 - p) ** 2 / n**2, rel=1e-12)

    def test_upper_cap(self):
        with pytest.raises(ValidationError):
            graphon.apriori_quantities(StepGraphon(np.ones((2, 2))), 0.1, 1.0, 0.2)
