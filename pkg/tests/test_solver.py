import numpy as np
import pytest

import nekrasov as nk
from conftest import solved_field
from oracles import apply_operator_quadrature, inner_integral_quadrature


def field_of(n, func):
    return nk.AngleField.from_callable(func, n)


class TestInnerAccumulate:
    def test_zero_field(self):
        out = nk.inner_accumulate(nk.AngleField.zero(64))
        assert np.all(out == 0.0)

    def test_small_amplitude_formula(self):
        eps = 1e-3
        field = field_of(128, lambda t: eps * np.sin(t))
        out = nk.inner_accumulate(field)
        expected = eps * (1.0 - np.cos(field.grid.theta_closed))
        assert np.abs(out - expected).max() < 2.0 * eps**3

    def test_against_quadrature_oracle(self):
        field = field_of(128, lambda t: 0.4 * np.sin(t) - 0.07 * np.sin(2 * t))
        out = nk.inner_accumulate(field)
        for j in (0, 9, 60, 128):
            tau = field.grid.theta_closed[j]
            assert out[j] == pytest.approx(inner_integral_quadrature(field, tau),
                                           abs=1e-11)

    def test_even_in_tau(self):
        # the integrand is odd, so I(-tau) = I(tau); quadrature over the
        # odd extension is the independent check
        field = field_of(64, lambda t: 0.2 * np.sin(t) + 0.05 * np.sin(3 * t))
        out = nk.inner_accumulate(field)
        tau = field.grid.theta_closed[13]
        assert out[13] == pytest.approx(inner_integral_quadrature(field, -tau),
                                        abs=1e-11)

    def test_starts_at_zero(self):
        field = field_of(64, lambda t: 0.3 * np.sin(2 * t))
        assert nk.inner_accumulate(field)[0] == 0.0


class TestApplyNekrasov:
    def test_zero_is_fixed(self):
        out = nk.apply_nekrasov(nk.AngleField.zero(64), mu=5.0)
        assert np.all(out.values == 0.0)

    def test_quadrature_oracle(self):
        field = field_of(64, lambda t: 0.1 * np.sin(t) + 0.02 * np.sin(2 * t))
        mu = 3.5
        out = nk.apply_nekrasov(field, mu, spec=nk.KernelSpec(n_modes=31))
        check_at = [3, 20, 40, 60]
        oracle = apply_operator_quadrature(field, mu,
                                           field.grid.theta[check_at])
        assert np.abs(out.values[check_at] - oracle).max() < 1e-8

    def test_linearization_quadratic_remainder(self):
        # the Frechet derivative at zero is mu*B; the remainder is O(eps^2)
        # (the quadratic term feeds the sin 2theta response of the branch)
        mu = 3.5
        spec = nk.KernelSpec(n_modes=64)
        diffs = []
        for eps in (1e-2, 5e-3, 2.5e-3):
            field = field_of(128, lambda t: eps * np.sin(t))
            out = nk.apply_nekrasov(field, mu, spec)
            lin = mu * nk.apply_linearized(field.coefficients, spec)
            diffs.append(np.abs(out.coefficients - lin).max())
        assert 3.5 < diffs[0] / diffs[1] < 4.5
        assert 3.5 < diffs[1] / diffs[2] < 4.5

    def test_finite_depth_quadrature_oracle(self):
        # independent route: project g = sin Phi/(1 + mu I) on each sine
        # mode by fine trapezoid quadrature and apply the tanh/(3k) factors
        depth = 0.3
        mu = 6.0
        spec = nk.KernelSpec(depth_ratio=depth, n_modes=31)
        field = field_of(64, lambda t: 0.08 * np.sin(t) + 0.01 * np.sin(3 * t))
        out = nk.apply_nekrasov(field, mu, spec=spec)

        fine = field.resample(4096)
        g_fine = np.sin(fine.values) / (1.0 + mu * nk.inner_accumulate(fine)[1:-1])
        theta_f = fine.grid.theta
        modes = np.arange(1, 32)
        # g odd: the [-pi, pi] integral is twice the half-range one
        proj = 2.0 * np.trapezoid(np.sin(np.multiply.outer(modes, theta_f)) * g_fine,
                                  theta_f, axis=1)
        lam = np.tanh(2 * np.pi * modes * depth)
        coeffs = mu * lam / (3.0 * modes) * proj / np.pi
        oracle = np.zeros(63)
        oracle[:31] = coeffs
        assert np.abs(out.coefficients - oracle).max() < 1e-9

    def test_output_is_odd_sine_spectrum(self):
        field = field_of(64, lambda t: 0.2 * np.sin(t))
        out = nk.apply_nekrasov(field, 3.2)
        theta = np.array([0.4, 1.3])
        assert np.allclose(out(-theta), -out(theta), atol=1e-14)

    def test_breakdown_for_unphysical_field(self):
        # a negative angle near the crest drives 1 + mu*I through zero
        field = field_of(64, lambda t: -2.0 * np.sin(t))
        with pytest.raises(nk.BreakdownError):
            nk.apply_nekrasov(field, 50.0)


class TestSolve:
    def test_subcritical_goes_trivial(self):
        grid = nk.get_grid(256)
        init = nk.AngleField(grid, values=0.1 * np.sin(grid.theta))
        res = nk.solve(2.9, init, method="fixed_point", tol=1e-12)
        assert res.field.sup_norm() < 1e-10
        assert res.residual <= 1e-12

    def test_supercritical_leading_coefficient(self):
        mu = 3.05
        grid = nk.get_grid(256)
        init = nk.AngleField(grid, values=(mu - 3.0) / 9.0 * np.sin(grid.theta))
        res = nk.solve(mu, init, method="newton")
        b1 = res.field.coefficients[0]
        assert b1 == pytest.approx((mu - 3.0) / 9.0, rel=0.02)
        assert res.field.sup_norm() > 1e-4

    def test_unphysical_initial_fails(self):
        grid = nk.get_grid(128)
        init = nk.AngleField(grid, values=10.0 * np.sin(grid.theta))
        with pytest.raises((nk.DivergenceError, nk.BreakdownError)):
            nk.solve(3.05, init, method="fixed_point", max_iter=300)

    def test_converged_residual_on_doubled_grid(self, wave_35):
        doubled = wave_35.field.resample(1024)
        out = nk.apply_nekrasov(doubled, 3.5, spec=nk.KernelSpec(n_modes=256))
        assert np.abs(doubled.values - out.values).max() < 1e-10

    def test_methods_agree(self):
        mu = 3.3
        grid = nk.get_grid(256)
        init = nk.AngleField(grid, values=(mu - 3.0) / 9.0 * np.sin(grid.theta))
        newton = nk.solve(mu, init, method="newton")
        krylov = nk.solve(mu, init, method="newton_krylov")
        fixed = nk.solve(mu, init, method="fixed_point", tol=1e-11)
        assert np.abs(newton.field.values - krylov.field.values).max() < 1e-9
        assert np.abs(newton.field.values - fixed.field.values).max() < 1e-9

    def test_fd_jacobian_fallback(self):
        mu = 3.4
        grid = nk.get_grid(64)
        init = nk.AngleField(grid, values=0.04 * np.sin(grid.theta))
        analytic = nk.solve(mu, init, method="newton")
        fd = nk.solve(mu, init, method="newton", jacobian="fd")
        assert np.abs(analytic.field.values - fd.field.values).max() < 1e-10
        with pytest.raises(ValueError):
            nk.solve(mu, init, jacobian="sorcery")

    def test_analytic_jacobian_matches_finite_differences(self, wave_35):
        # derivative consistency at a genuinely nonlinear state
        from nekrasov.solver import get_operator
        field = wave_35.field.resample(64)
        op = get_operator(64, nk.KernelSpec(n_modes=32))
        analytic = op.jacobian_dense(field.values, 3.5)
        fd = op.jacobian_fd(field.values, 3.5)
        assert np.abs(analytic - fd).max() < 1e-7

    def test_grid_refinement_stability(self, wave_35):
        fine = solved_field(3.5, n=1024)
        resampled = wave_35.field.resample(1024)
        assert np.abs(fine.field.values - resampled.values).max() < 1e-10

    def test_validation(self):
        init = nk.AngleField.zero(32)
        with pytest.raises(ValueError):
            nk.solve(-1.0, init)
        with pytest.raises(ValueError):
            nk.solve(3.2, init, tol=-1e-12)
        with pytest.raises(ValueError):
            nk.solve(3.2, init, method="sorcery")


class TestSolveSystem:
    def test_trivial_fixed_point(self):
        grid = nk.get_grid(64)
        state = nk.SystemState(phi=nk.AngleField.zero(64), psi=np.ones(65))
        assert nk.system_residual(state, 4.0) == 0.0

    def test_psi_at_zero_is_one(self):
        state = nk.solve_system(3.2, tol=1e-11, n=256)
        assert state.psi[0] == 1.0

    @pytest.mark.parametrize("mu", [3.05, 3.2, 4.0, 5.0])
    def test_equivalence_with_single_equation(self, mu):
        # the residual-to-error map is conditioned by the distance to the
        # bifurcation point, so the comparison margin grows as mu drops to 3
        tol = 1e-12
        state = nk.solve_system(mu, tol=tol, max_iter=30000, n=512)
        single = solved_field(mu, n=512)
        margin = 10.0 * tol * max(1.0, 0.01 / (mu - 3.0))
        assert np.abs(state.phi.values - single.field.values).max() < 100 * margin

    def test_equivalence_at_3_2_within_1e8(self):
        state = nk.solve_system(3.2, tol=1e-11, n=512)
        single = solved_field(3.2, n=512)
        assert np.abs(state.phi.values - single.field.values).max() < 1e-8

    def test_closed_form_cross_check(self):
        mu = 3.2
        state = nk.solve_system(mu, tol=1e-11, n=256)
        denom = 1.0 + mu * nk.inner_accumulate(state.phi)
        assert np.abs(state.psi * denom - 1.0).max() < 1e-9

    def test_psi_positive(self):
        state = nk.solve_system(4.5, tol=1e-11, n=256)
        assert state.psi.min() > 0.0


class TestDiagnostics:
    def test_amplitude_bound_zero_field(self):
        rec = nk.check_amplitude_bound(nk.AngleField.zero(64), mu=3.0)
        assert rec.rhs == 3.0
        assert rec.m_sup == 0.0

    def test_amplitude_bound_at_pi_over_six(self):
        m = np.pi / 6.0
        field = nk.AngleField.from_callable(lambda t: m * np.sin(t), 256)
        rec = nk.check_amplitude_bound(field, mu=3.5)
        # direct arithmetic: 1 / (pi*M + sin(M)/(3M))
        expected = 1.0 / (np.pi * m + np.sin(m) / (3.0 * m))
        assert expected == pytest.approx(0.5093611, abs=1e-6)
        assert rec.rhs == pytest.approx(expected, rel=1e-9)

    def test_amplitude_bound_m_matches_oversampled_sup(self, wave_35):
        rec = nk.check_amplitude_bound(wave_35.field, mu=3.5)
        dense = wave_35.field.sup_norm(oversample=16)
        assert rec.m_sup == pytest.approx(dense, abs=1e-6)

    def test_asymmetry_zero_field(self):
        assert nk.crest_trough_asymmetry(nk.AngleField.zero(64)) == 0.0

    def test_asymmetry_sin_2theta(self):
        field = nk.AngleField.from_callable(lambda t: np.sin(2 * t), 256)
        assert nk.crest_trough_asymmetry(field) == pytest.approx(2.0, abs=1e-10)

    def test_asymmetry_positive_on_branch(self, wave_35):
        assert nk.crest_trough_asymmetry(wave_35.field) > 1e-3
