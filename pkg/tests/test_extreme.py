import math

import numpy as np
import pytest

import nekrasov as nk
from nekrasov.extreme import crest_jump, extreme_record_from_field
from nekrasov._graded import GradedCollocation, kernel_q


class TestGrantNumber:
    def test_value(self):
        assert nk.grant_number(1e-12) == pytest.approx(0.802679, abs=1e-6)

    def test_defining_equation(self):
        beta = nk.grant_number(1e-9)
        assert abs(math.sqrt(3) * (1 + beta) - math.tan(math.pi * beta / 2)) < 1e-5

    def test_bracket_sign_change(self):
        h = lambda b: (math.sqrt(3) * (1 + b) * math.cos(math.pi * b / 2)
                       - math.sin(math.pi * b / 2))
        assert h(0.0) > 0
        assert h(1.0 - 1e-9) < 0

    def test_validation(self):
        with pytest.raises(ValueError):
            nk.grant_number(-1e-6)


class TestConstantSolution:
    def test_deviation_small_at_default_truncation(self):
        rep = nk.verify_constant_solution((1.0,), 1e4)
        assert rep.max_deviation < 1e-3
        assert rep.max_deviation <= rep.tail_bound

    def test_deviation_shrinks_with_truncation(self):
        d3 = nk.verify_constant_solution((1.0,), 1e3).max_deviation
        d5 = nk.verify_constant_solution((1.0,), 1e5).max_deviation
        assert d5 < d3 / 50.0

    def test_scale_invariance(self):
        a = nk.verify_constant_solution((1.0,), 1e4).max_deviation
        b = nk.verify_constant_solution((2.0,), 2e4).max_deviation
        assert a == pytest.approx(b, rel=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            nk.verify_constant_solution((2000.0,), 1e4)


class TestGradedCollocation:
    def test_quadrature_weights_against_quad(self):
        # integrate a known bounded density: rho = 1 gives
        # Phi(theta) = Int_0^pi Q(theta, tau) dtau
        from scipy import integrate
        eng = GradedCollocation(n_nodes=120, grading=3.0)
        w = eng.weights
        rho = np.ones(eng.n + 1)
        got = w @ rho
        for idx in (20, 60, 100):
            theta = eng.tau[idx + 1]
            val, _ = integrate.quad(lambda t: kernel_q(np.array([theta]),
                                                       np.array([t]))[0],
                                    0.0, np.pi, points=[theta], limit=400)
            assert got[idx] == pytest.approx(val, abs=2e-9)

    def test_extreme_solution_properties(self, extreme_direct):
        sol = extreme_direct
        assert sol.residual < 1e-10
        assert np.all(sol.phi_samples >= 0.0)
        assert np.all(sol.phi_samples < np.pi / 3)
        assert np.abs(sol.phi_samples).max() > np.pi / 6 - 0.01

    def test_crest_limit(self, extreme_direct):
        est = nk.stokes_limit(extreme_direct)
        assert est == pytest.approx(np.pi / 6, abs=0.01)
        assert crest_jump(extreme_direct) == pytest.approx(np.pi / 3, abs=0.02)

    def test_resolution_consistency(self):
        # successive crest-limit estimates settle as the mesh refines
        estimates = []
        for n_nodes in (150, 300, 600):
            eng = GradedCollocation(n_nodes=n_nodes, grading=3.0)
            sol = eng.solve_extreme(tol=1e-10)
            rec = extreme_record_from_field(nk.AngleField.zero(64), np.inf)
            rec.theta_samples = sol.theta[1:-1]
            rec.phi_samples = sol.phi[1:-1]
            rec.strategy = "direct"
            estimates.append(nk.stokes_limit(rec, window=(1e-4, 0.2)))
        d1 = abs(estimates[1] - estimates[0])
        d2 = abs(estimates[2] - estimates[1])
        assert d2 < d1
        assert abs(estimates[-1] - np.pi / 6) < 2e-3


class TestFits:
    def test_synthetic_model_recovery(self):
        beta = nk.grant_number(1e-12)
        theta = np.geomspace(1e-5, 0.3, 300)
        phi = np.pi / 6 - theta**beta + theta**(2 * beta)
        rec = extreme_record_from_field(nk.AngleField.zero(64), np.inf)
        rec.theta_samples, rec.phi_samples, rec.strategy = theta, phi, "direct"
        fit = nk.fit_asymptotics(rec)
        assert fit.c1 == pytest.approx(-1.0, abs=1e-6)
        assert fit.c2 == pytest.approx(1.0, abs=1e-6)
        assert nk.stokes_limit(rec) == pytest.approx(np.pi / 6, abs=1e-7)

    def test_extreme_fit_signs(self, extreme_direct):
        fit = extreme_direct.grant_fit
        assert fit.c1 < 0
        assert fit.c2 > 0
        assert fit.beta1 == pytest.approx(0.802679, abs=1e-6)

    def test_smooth_field_extrapolates_to_zero(self, wave_35):
        rec = extreme_record_from_field(wave_35.field, 3.5)
        assert abs(nk.stokes_limit(rec)) < 0.02
        assert abs(crest_jump(rec)) < 0.04

    def test_window_validation(self, extreme_direct):
        with pytest.raises(ValueError):
            nk.fit_asymptotics(extreme_direct, window=(0.29, 0.3))


@pytest.fixture(scope="module")
def seq():
    return nk.solve_extreme(strategy="sequence",
                            mu_sequence=(30.0, 300.0, 3000.0, 30000.0))


class TestSequenceStrategy:
    def test_sup_norm_exceeds_pi_six(self, seq):
        assert seq.field.sup_norm() > np.pi / 6

    def test_sup_norms_increase_and_stay_bounded(self, seq):
        sups = [r["sup_norm"] for r in seq.per_mu]
        assert all(a < b for a, b in zip(sups, sups[1:]))
        assert sups[-1] < 0.5434

    def test_residuals(self, seq):
        assert all(r["residual"] < 1e-10 for r in seq.per_mu)

    def test_crest_angle(self, seq):
        assert seq.crest_angle_estimate == pytest.approx(np.pi / 6, abs=0.01)
        assert seq.grant_fit.c1 < 0
        assert seq.grant_fit.c2 > 0

    def test_strategies_agree_away_from_crest(self, seq, extreme_direct):
        theta = np.geomspace(0.05, 3.0, 300)
        direct_vals = np.interp(theta, extreme_direct.theta_samples,
                                extreme_direct.phi_samples)
        assert np.abs(seq.field(theta) - direct_vals).max() < 1e-3

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            nk.solve_extreme(strategy="levitation")

    def test_requires_deep_water(self):
        with pytest.raises(ValueError):
            nk.solve_extreme(spec=nk.KernelSpec(depth_ratio=0.5))


def test_cross_discretization_at_large_mu():
    # the uniform sine-spectral solver and the graded collocation engine
    # discretize the same equation in entirely different ways; at mu = 1000
    # they must agree including inside the crest layer
    from nekrasov.extreme import _solve_sequence
    result, _ = _solve_sequence(nk.DEEP, (1000.0,), 1e-12, 512, 1 << 15,
                                tail_threshold=1e-9)
    eng = GradedCollocation(n_nodes=700, grading=3.0)
    sol = eng.solve(1e-3, phi0=None, tol=1e-10)
    sup_diff = abs(np.abs(sol.phi[1:-1]).max() - result.field.sup_norm())
    assert sup_diff < 1e-4
    theta = np.geomspace(0.01, 3.0, 200)
    point_diff = np.abs(result.field(theta)
                        - np.interp(theta, sol.theta, sol.phi)).max()
    assert point_diff < 5e-5


class TestConvexity:
    def test_flat_profile(self):
        profile = nk.reconstruct_profile(nk.AngleField.zero(64), mu=3.0)
        report = nk.convexity_check(profile)
        assert report.convex
        assert report.max_violation == 0.0

    def test_near_extreme_profile_convex(self):
        branch = nk.trace_branch(3.05, 300.0, policy=nk.StepPolicy(ratio=1.6))
        point = branch.points[-1]
        assert point.mu == pytest.approx(300.0)
        profile = nk.reconstruct_profile(point.field, point.mu)
        report = nk.convexity_check(profile)
        assert report.convex, f"violation {report.max_violation} at {report.worst_x}"

    def test_cosine_profile_localizes_violations(self):
        # eta = cos(x) on the inter-crest interval: concave near the maxima,
        # convex near the trough
        theta = np.linspace(0.0, np.pi, 257)
        x = -theta  # crest at x = 0, trough at x = -pi, wavelength 2 pi
        eta = np.cos(x)
        profile = nk.WaveProfile(theta=theta, x=x, eta=eta,
                                 R=np.ones_like(x), q_over_q0=np.ones_like(x),
                                 wavelength=2 * np.pi, c=1.0, q0=1.0, g=1.0,
                                 mu=3.0, a_k=np.asarray([]))
        report = nk.convexity_check(profile, exclusion=0.01 * 2 * np.pi)
        assert not report.convex
        # violations cluster near the crests (|x| mod 2 pi close to 0)
        dist_to_crest = np.minimum(np.abs(report.violating_x),
                                   np.abs(report.violating_x + 2 * np.pi))
        assert dist_to_crest.max() < np.pi / 2 + 0.01
        # the trough neighbourhood is clean
        assert np.all(np.abs(report.violating_x + np.pi) > np.pi / 2 - 0.01)
