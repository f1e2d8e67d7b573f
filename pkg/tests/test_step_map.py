import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipgait import (
    ConstraintViolationError,
    GaitState,
    InvalidArgumentError,
    WalkerParams,
    apply_step,
    build_step_matrices,
    design_cycle,
    flow,
    is_controllable,
    open_loop_eigenvalues,
)


class TestBuildStepMatrices:
    def test_table1_entries(self, matrices):
        expected = np.array([[1.89196, 0.51305], [5.02783, 1.89196]])
        assert np.abs(matrices.A - expected).max() < 1e-4
        assert matrices.A[0, 0] == matrices.A[1, 1]
        assert tuple(matrices.B) == (-1.0, 0.0)

    def test_det_is_one(self, matrices):
        assert abs(np.linalg.det(matrices.A) - 1.0) < 1e-10

    def test_zero_duration_limit(self, params):
        M = build_step_matrices(params, 1e-12)
        assert np.abs(M.A - np.eye(2)).max() < 1e-9

    @pytest.mark.parametrize("T", [0.0, -0.1, float("nan")])
    def test_rejects_bad_duration(self, params, T):
        with pytest.raises(InvalidArgumentError):
            build_step_matrices(params, T)

    def test_matrices_are_read_only(self, matrices):
        with pytest.raises(ValueError):
            matrices.A[0, 0] = 2.0


class TestApplyStep:
    def test_fixed_point_is_preserved(self, matrices, cycle):
        out = apply_step(matrices, cycle.x_c, cycle.L_c)
        assert abs(out.x - cycle.x_c.x) < 1e-4
        assert abs(out.xdot - cycle.x_c.xdot) < 1e-4

    def test_rest_with_no_step(self, matrices):
        out = apply_step(matrices, GaitState(0.0, 0.0), 0.0)
        assert (out.x, out.xdot) == (0.0, 0.0)

    def test_equals_flow_then_reset(self, params):
        rng = np.random.default_rng(21)
        for _ in range(1000):
            T = float(rng.uniform(0.05, 1.0))
            L = float(rng.uniform(-0.5, 0.75))
            s0 = GaitState(*rng.uniform(-1.0, 2.0, size=2))
            M = build_step_matrices(params, T)
            via_map = apply_step(M, s0, L)
            end = flow(params, s0, T)
            assert abs(via_map.x - (end.x - L)) < 1e-12
            assert abs(via_map.xdot - end.xdot) < 1e-12


class TestDesignCycle:
    def test_table1_fixed_point(self, cycle):
        assert cycle.x_c.x == -0.25
        assert abs(cycle.x_c.xdot - 1.4092) < 1e-3
        assert round(cycle.x_c.xdot, 1) == 1.4  # Table value is the 1-decimal rounding
        assert cycle.x_c.xdot == pytest.approx(1.4092182353253533, abs=1e-12)

    def test_fixed_point_property_over_random_cycles(self, params):
        rng = np.random.default_rng(5)
        for _ in range(100):
            L_c = float(rng.uniform(0.05, params.L_max))
            T_c = float(rng.uniform(0.1, 1.2))
            cyc = design_cycle(params, L_c, T_c)
            M = build_step_matrices(params, T_c)
            nxt = apply_step(M, cyc.x_c, L_c)
            assert abs(nxt.x - cyc.x_c.x) < 1e-10
            assert abs(nxt.xdot - cyc.x_c.xdot) < 1e-10

    def test_cycle_is_velocity_symmetric_about_midstance(self, params, cycle):
        end = flow(params, cycle.x_c, cycle.T_c)
        assert abs(end.x - cycle.L_c / 2.0) < 1e-10
        assert abs(end.xdot - cycle.x_c.xdot) < 1e-10

    @pytest.mark.parametrize("L_c", [0.0, -0.2, 0.76, 0.9, float("nan")])
    def test_step_length_bound(self, params, L_c):
        with pytest.raises(ConstraintViolationError):
            design_cycle(params, L_c, 0.4)

    @pytest.mark.parametrize("T_c", [0.0, -0.4])
    def test_step_time_bound(self, params, T_c):
        with pytest.raises(InvalidArgumentError):
            design_cycle(params, 0.5, T_c)

    def test_max_length_is_allowed(self, params):
        cyc = design_cycle(params, params.L_max, 0.4)
        assert cyc.x_c.x == -params.L_max / 2.0


class TestOpenLoopEigenvalues:
    def test_table1_pair(self, matrices):
        hi, lo = open_loop_eigenvalues(matrices)
        assert abs(hi - 3.4980) < 1e-3
        assert abs(lo - 0.28588) < 1e-3
        assert abs(hi * lo - 1.0) < 1e-10

    def test_degenerate_short_step(self, params):
        hi, lo = open_loop_eigenvalues(build_step_matrices(params, 1e-12))
        assert abs(hi - 1.0) < 1e-9
        assert abs(lo - 1.0) < 1e-9

    def test_spectral_identities_and_instability(self, params):
        for T in np.linspace(0.05, 1.5, 30):
            M = build_step_matrices(params, float(T))
            hi, lo = open_loop_eigenvalues(M)
            assert abs(hi * lo - 1.0) < 1e-10
            assert abs((hi + lo) - 2.0 * math.cosh(params.omega * T)) < 1e-10
            assert hi > 1.0  # every cycle is open-loop unstable

    def test_closed_form_matches_paper_exponentials(self, params, cycle):
        hi, lo = open_loop_eigenvalues(build_step_matrices(params, cycle.T_c))
        wT = params.omega * cycle.T_c
        assert hi == pytest.approx(math.exp(wT), rel=1e-12)
        assert lo == pytest.approx(math.exp(-wT), rel=1e-12)


class TestControllability:
    def test_table1_certificate(self, matrices):
        verdict = is_controllable(matrices)
        assert verdict
        assert verdict.determinant == pytest.approx(5.02783, abs=1e-3)

    def test_short_step_certificate_is_tiny_but_positive(self, params):
        verdict = is_controllable(build_step_matrices(params, 1e-12))
        expected = params.omega**2 * 1e-12
        assert verdict.determinant == pytest.approx(expected, rel=1e-3)
        assert verdict.determinant > 0.0

    def test_long_step(self, params):
        assert is_controllable(build_step_matrices(params, 0.8))

    @settings(deadline=None)
    @given(T=st.floats(0.01, 2.0))
    def test_certificate_equals_a21(self, T):
        p = WalkerParams(h=1.2, g=9.81, m=60.0, L_max=0.8)
        M = build_step_matrices(p, T)
        assert is_controllable(M).determinant == pytest.approx(float(M.A[1, 0]), rel=1e-12)
