import math

import numpy as np
import pytest

from omsteer import (
    NumericalError,
    SqueezedField,
    UnphysicalInputError,
    ValidationError,
    build_diffusion,
    build_drift,
    log_negativity,
    physicality_margin,
    quadrature_variances,
    reduce_two_mode,
    solve_lyapunov,
    solve_steady_state,
    steering,
    two_mode_report,
)
from omsteer.measures import TwoModeCM
from conftest import random_stable_params
from oracles import integrate_covariance_rk4, tmsv_covariance


def _baseline_cov(params, field=None):
    ss = solve_steady_state(params)
    m = build_drift(params, ss)
    d = build_diffusion(params, field or SqueezedField(0.0, 0.0))
    return m, d, solve_lyapunov(m, d)


class TestLyapunov:
    def test_vacuum_equilibrium(self, baseline_params):
        # no couplings: each mode thermalizes with its own bath
        params = baseline_params.replace(J=0.0, E=0.0, m_th=4.0)
        _, _, v = _baseline_cov(params)
        assert np.allclose(v[:4, :4], 0.5 * np.eye(4), atol=1e-12)
        assert np.allclose(v[4:, 4:], 4.5 * np.eye(2), atol=1e-9)

    def test_residual_bound(self, baseline_params):
        m, d, v = _baseline_cov(baseline_params)
        resid = np.abs(m @ v + v @ m.T + d).max()
        assert resid <= 1e-10 * max(1.0, np.abs(d).max())
        assert np.allclose(v, v.T, atol=1e-12 * np.abs(v).max())

    def test_matches_time_integration_at_baseline(self, baseline_params):
        m, d, v = _baseline_cov(baseline_params)
        v_rk4 = integrate_covariance_rk4(m, d)
        assert np.abs(v - v_rk4).max() <= 1e-8

    def test_matches_time_integration_random(self):
        rng = np.random.default_rng(2024)
        for _ in range(5):
            params = random_stable_params(rng)
            field = SqueezedField(rng.uniform(0, 0.3), rng.uniform(0, 2 * math.pi))
            m, d, v = _baseline_cov(params, field)
            v_rk4 = integrate_covariance_rk4(m, d)
            assert np.abs(v - v_rk4).max() <= 1e-8

    def test_unstable_rejected(self, baseline_params):
        params = baseline_params.replace(Delta1=1.0, Delta2=1.0, E=1.5e5)
        ss = solve_steady_state(params)
        m = build_drift(params, ss)
        d = build_diffusion(params, SqueezedField(0.0, 0.0))
        with pytest.raises(NumericalError):
            solve_lyapunov(m, d)

    def test_marginal_system_raises_with_condition(self):
        # nearly marginal eigenvalue mixed into a dense basis so the LU
        # solve genuinely loses the residual bound
        rng = np.random.default_rng(0)
        q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
        m = q @ np.diag([-1e-14, -1.0, -1.0, -1.0, -1.0, -1.0]) @ q.T
        with pytest.raises(NumericalError, match="cond"):
            solve_lyapunov(m, np.eye(6))

    def test_physicality(self, baseline_params):
        _, _, v = _baseline_cov(baseline_params)
        assert physicality_margin(v) >= -1e-9


class TestReduction:
    def test_index_bookkeeping(self):
        v = np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        tm = reduce_two_mode(v, "a1", "b")
        assert np.allclose(np.diag(tm.v12), [1, 2, 5, 6])

    def test_order_swap(self, baseline_params):
        _, _, v = _baseline_cov(baseline_params)
        ab = reduce_two_mode(v, "a1", "b")
        ba = reduce_two_mode(v, "b", "a1")
        assert np.allclose(ab.v1, ba.v2)
        assert np.allclose(ab.v2, ba.v1)
        assert np.allclose(ab.vc, ba.vc.T)
        assert abs(np.linalg.det(ab.v12) - np.linalg.det(ba.v12)) <= 1e-12

    def test_validation(self):
        v = np.eye(6) / 2
        with pytest.raises(ValidationError):
            reduce_two_mode(v, "a1", "a1")
        with pytest.raises(ValidationError):
            reduce_two_mode(v, "a1", "c")


class TestLogNegativity:
    def test_vacuum_separable(self):
        tm = TwoModeCM(0.5 * np.eye(4), "a1", "b")
        res = log_negativity(tm)
        assert res.e_n == 0.0
        assert abs(res.eta_minus - 0.5) < 1e-14
        assert abs(res.sigma - 0.5) < 1e-14

    @pytest.mark.parametrize("s", [0.1, 0.5, 1.0])
    def test_tmsv_closed_form(self, s):
        tm = TwoModeCM(tmsv_covariance(s), "a1", "b")
        res = log_negativity(tm)
        assert abs(res.e_n - 2.0 * s) <= 1e-12
        assert abs(res.eta_minus - math.exp(-2.0 * s) / 2.0) <= 1e-12
        assert abs(res.sigma - math.cosh(4.0 * s) / 2.0) <= 1e-12
        assert abs(np.linalg.det(tm.v12) - 1.0 / 16.0) <= 1e-12

    def test_tmsv_reference_point(self):
        res = log_negativity(TwoModeCM(tmsv_covariance(0.5), "a1", "b"))
        assert abs(res.eta_minus - 0.183940) < 1e-6
        assert abs(res.e_n - 1.0) < 1e-12

    def test_unphysical_rejected(self):
        bad = TwoModeCM(np.diag([1.0, 1.0, 1.0, -1.0]), "a1", "b")
        with pytest.raises(UnphysicalInputError):
            log_negativity(bad)


class TestSteering:
    def test_vacuum_zero(self):
        tm = TwoModeCM(0.5 * np.eye(4), "a1", "b")
        assert steering(tm, "1->2") == 0.0
        assert steering(tm, "2->1") == 0.0

    @pytest.mark.parametrize("s", [0.1, 0.5, 1.0])
    def test_tmsv_closed_form(self, s):
        tm = TwoModeCM(tmsv_covariance(s), "a1", "b")
        expected = math.log(math.cosh(2.0 * s))
        assert abs(steering(tm, "1->2") - expected) <= 1e-12
        assert abs(steering(tm, "2->1") - expected) <= 1e-12

    def test_one_way_at_baseline(self, baseline_params):
        _, _, v = _baseline_cov(baseline_params)
        tm = reduce_two_mode(v, "a1", "b")
        assert steering(tm, "1->2") == 0.0
        assert abs(steering(tm, "2->1") - 0.114070) < 1e-5

    def test_bad_direction(self):
        tm = TwoModeCM(0.5 * np.eye(4), "a1", "b")
        with pytest.raises(ValidationError):
            steering(tm, "sideways")


class TestVariances:
    def test_vacuum(self):
        assert quadrature_variances(0.5 * np.eye(6), "a2") == (0.5, 0.5)

    def test_baseline_values(self, baseline_params):
        _, _, v = _baseline_cov(baseline_params)
        vx, vy = quadrature_variances(v, "a1")
        assert abs(vx - 0.530420) < 1e-5
        assert abs(vy - 0.758251) < 1e-5

    def test_increase_with_r_at_theta0(self, baseline_params):
        values = []
        for r in (0.0, 0.1, 0.2):
            _, _, v = _baseline_cov(baseline_params, SqueezedField(r, 0.0))
            values.append(quadrature_variances(v, "a1"))
        assert values[0][0] < values[1][0] < values[2][0]
        assert values[0][1] < values[1][1] < values[2][1]

    def test_theta_pi_dips_below_vacuum(self, baseline_params):
        _, _, v0 = _baseline_cov(baseline_params, SqueezedField(0.0, 0.0))
        base = quadrature_variances(v0, "a1")
        dipped = False
        for r in (0.02, 0.05, 0.08, 0.1):
            _, _, v = _baseline_cov(baseline_params, SqueezedField(r, math.pi))
            vx, vy = quadrature_variances(v, "a1")
            dipped = dipped or vx < base[0] or vy < base[1]
        assert dipped


class TestInvariants:
    def test_local_rotation_invariance(self, baseline_params):
        _, _, v = _baseline_cov(baseline_params)
        tm = reduce_two_mode(v, "a1", "b")
        base = (log_negativity(tm).e_n, steering(tm, "1->2"), steering(tm, "2->1"))
        for phi in (0.3, 1.2, 4.0):
            rot = np.array([[math.cos(phi), math.sin(phi)],
                            [-math.sin(phi), math.cos(phi)]])
            u = np.eye(4)
            u[:2, :2] = rot
            rotated = TwoModeCM(u @ tm.v12 @ u.T, "a1", "b")
            got = (log_negativity(rotated).e_n, steering(rotated, "1->2"),
                   steering(rotated, "2->1"))
            assert all(abs(a - b) <= 1e-10 for a, b in zip(base, got))

    def test_hierarchy_steering_implies_entanglement(self, baseline_params):
        for pump in np.linspace(2.5e5, 7e5, 10):
            _, _, v = _baseline_cov(baseline_params.replace(E=float(pump)))
            rep = two_mode_report(v, "a1", "b")
            if rep.g_1to2 > 0 or rep.g_2to1 > 0:
                assert rep.e_n > 0

    def test_report_raw_values(self, baseline_params):
        _, _, v = _baseline_cov(baseline_params)
        rep = two_mode_report(v, "a1", "b")
        assert rep.e_n == max(0.0, rep.raw_e_n)
        assert rep.g_1to2 == 0.0 and rep.raw_g_1to2 < 0.0
        assert rep.g_2to1 == rep.raw_g_2to1 > 0.0
        assert abs(rep.e_n - 0.354402) < 1e-5
        assert rep.stable
        assert (rep.var_x_1, rep.var_y_1) == quadrature_variances(v, "a1")

    def test_physicality_random(self):
        rng = np.random.default_rng(99)
        for _ in range(5):
            params = random_stable_params(rng)
            _, _, v = _baseline_cov(params, SqueezedField(0.2, 1.0))
            assert physicality_margin(v) >= -1e-9
