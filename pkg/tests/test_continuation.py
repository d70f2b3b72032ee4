import numpy as np
import pytest

import nekrasov as nk
from nekrasov.solver import get_operator


class TestTraceBranch:
    def test_validation(self):
        with pytest.raises(ValueError):
            nk.trace_branch(2.5, 5.0)
        with pytest.raises(ValueError):
            nk.trace_branch(3.5, 3.1)

    def test_initial_growth_matches_series(self):
        branch = nk.trace_branch(3.01, 3.5)
        norms = branch.sup_norms
        assert norms[0] == pytest.approx(0.0011, abs=2e-4)
        assert np.all(np.diff(norms) > 0)
        # sup_norm/(mu - 3) approaches the leading coefficient 1/9
        ratios = norms / (branch.mus - 3.0)
        assert ratios[0] == pytest.approx(1.0 / 9.0, rel=0.02)

    def test_residuals_within_tolerance(self, small_branch):
        for p in small_branch:
            assert p.residual <= small_branch.tol

    def test_doubled_grid_residual(self, small_branch):
        for p in small_branch.points[:: max(1, len(small_branch) // 5)]:
            doubled = p.field.resample(2 * p.field.n)
            op = get_operator(doubled.n, small_branch.spec.with_modes(p.field.n // 2))
            assert op.residual(doubled.values, p.mu) < 100 * small_branch.tol

    def test_positivity_and_upper_angle_bound(self, small_branch):
        for p in small_branch:
            assert p.field.values.min() > 0.0
            assert p.field.values.max() < np.pi / 3.0

    def test_wave_heights_positive_increasing(self, small_branch):
        h = np.array([p.wave_height for p in small_branch])
        assert np.all(h > 0)
        assert np.all(np.diff(h) > 0)

    def test_finite_depth_branch(self):
        spec = nk.KernelSpec(depth_ratio=0.5)
        mu1 = nk.characteristic_values(spec, 1)[0]
        branch = nk.trace_branch(mu1 + 0.01, mu1 + 1.0, spec=spec)
        assert len(branch) > 3
        for p in branch:
            assert p.residual <= branch.tol
            assert p.mu > mu1
            assert p.field.values.min() > 0.0

    def test_sup_norm_exceeds_pi_six_at_large_mu(self):
        # sup|Phi| crosses pi/6 near mu ~ 3.5e3 (resolved crest layer needed)
        policy = nk.StepPolicy(ratio=1.6)
        branch = nk.trace_branch(3.05, 6000.0, policy=policy)
        assert branch.sup_norms.max() > np.pi / 6.0


class TestConeMembership:
    def test_ratio_constant_field(self):
        # Phi = sin(theta/2): nonnegativity and the constant ratio hold;
        # the tail ordering fails for a field increasing toward theta = pi
        field = nk.AngleField.from_callable(lambda t: np.sin(0.5 * t), 256)
        report = nk.cone_membership(field)
        assert report.nonneg_ok
        assert report.ratio_monotone_ok
        assert not report.tail_ordering_ok

    def test_sin_2theta_fails_nonnegativity(self):
        field = nk.AngleField.from_callable(lambda t: np.sin(2 * t), 256)
        report = nk.cone_membership(field)
        assert not report.nonneg_ok
        assert report.max_violation == pytest.approx(1.0, abs=1e-3)

    def test_branch_solution_in_cone(self, small_branch):
        for p in small_branch:
            assert p.cone.all_ok
            assert p.cone.max_violation <= 1e-9

    def test_zero_field_in_cone(self):
        report = nk.cone_membership(nk.AngleField.zero(128))
        assert report.all_ok
        assert report.max_violation == 0.0


class TestScaledContinua:
    def test_identity(self, small_branch):
        p = small_branch.points[3]
        assert nk.scale_branch_point(p, 1) is p

    def test_two_fold_scaling(self, small_branch):
        p = next(q for q in small_branch if q.mu > 3.5)
        scaled = nk.scale_branch_point(p, 2)
        assert scaled.mu == pytest.approx(2 * p.mu)
        assert scaled.residual <= 10 * max(p.residual, 1e-12)
        coeffs = scaled.field.coefficients
        assert np.all(coeffs[0::2] == 0.0), "odd modes must be empty"
        assert coeffs[1] == pytest.approx(p.field.coefficients[0], rel=1e-13)

    def test_three_fold_scaling(self, small_branch):
        p = small_branch.points[2]
        scaled = nk.scale_branch_point(p, 3)
        assert scaled.mu == pytest.approx(3 * p.mu)
        assert scaled.residual <= 10 * max(p.residual, 1e-12)
        coeffs = scaled.field.coefficients
        keep = np.abs(coeffs) > 1e-14
        assert np.all((np.nonzero(keep)[0] + 1) % 3 == 0), "period must be 2 pi/3"

    def test_scaling_requires_deep_water(self, small_branch):
        with pytest.raises(ValueError):
            nk.scale_branch_point(small_branch.points[0], 2,
                                  spec=nk.KernelSpec(depth_ratio=0.5))

    def test_minimal_period(self, small_branch):
        p = small_branch.points[4]
        scaled = nk.scale_branch_point(p, 2)
        theta = np.linspace(0.2, 1.8, 7)
        assert np.allclose(scaled.field(theta + np.pi), scaled.field(theta),
                           atol=1e-12)


class TestBranchExtrema:
    def test_empty_branch(self):
        with pytest.raises(ValueError):
            nk.branch_extrema(nk.Branch(points=[], spec=nk.DEEP, tol=1e-12))

    def test_trivial_branch(self):
        zero = nk.AngleField.zero(64)
        pts = [nk.BranchPoint(mu=3.0 + i, field=zero, sup_norm=0.0,
                              wave_height=0.0, residual=0.0, n=64)
               for i in range(3)]
        ex = nk.branch_extrema(nk.Branch(points=pts, spec=nk.DEEP, tol=1e-12))
        assert ex.peak_sup_norm == 0.0

    def test_peak_location(self, small_branch):
        ex = nk.branch_extrema(small_branch)
        assert ex.peak_sup_norm == small_branch.sup_norms.max()
        assert ex.mu_at_peak == small_branch.points[-1].mu
        assert ex.monotone_increasing
