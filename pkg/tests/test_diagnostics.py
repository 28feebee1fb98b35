import math

import numpy as np
import pytest

from bvortex.diagnostics import (gamma_expansion_check, total_energy,
                                 transition_set, truncated_u0_energy,
                                 u0_expansion_fit, vortex_vs_minimizer)
from bvortex.errors import BVortexError, CapabilityError, GeometryError
from bvortex.geometry import DomainSpec
from bvortex.layer import solve_layer
from bvortex.nonlinearity import builtin_nonlinearity
from bvortex.renorm import find_local_minima, renorm_w_conformal
from bvortex import spectral
from bvortex.solver import boundary_field, initial_guess, newton_solve

CUBIC = builtin_nonlinearity("cubic")
DISK = DomainSpec.unit_disk()
SQUARE = DomainSpec.regular_polygon_disk(4, 0.995)
FOUR_OVER_PI = 4 / math.pi


@pytest.fixture(scope="module")
def cubic_profile():
    return solve_layer(CUBIC, X=100.0, n=512)


@pytest.fixture(scope="module")
def square_record(cubic_profile):
    guess = initial_guess(SQUARE, math.pi / 4, 5 * math.pi / 4, 0.1, CUBIC,
                          cubic_profile, n_modes=512)
    return newton_solve(guess, CUBIC, 0.1)


class TestTotalEnergy:
    def test_constant_one_is_free(self):
        fld = boundary_field(DISK, 64, values=np.ones(64))
        e = total_energy(fld, CUBIC, 0.3)
        assert e == {"dirichlet": 0.0, "potential": 0.0, "total": 0.0}

    def test_cos_theta_dirichlet(self):
        th = spectral.uniform_nodes(64)
        fld = boundary_field(DISK, 64, values=np.cos(th))
        e = total_energy(fld, CUBIC, 1.0)
        assert e["dirichlet"] == pytest.approx(math.pi / 2, abs=1e-12)
        # cross-check against area quadrature of |grad(r cos theta)|^2 / 2 = pi/2
        assert e["dirichlet"] == pytest.approx(0.5 * math.pi * 1.0**2, abs=1e-12)

    def test_dirichlet_additive_over_disjoint_bands(self):
        th = spectral.uniform_nodes(128)
        u = 0.5 * np.cos(2 * th)
        v = 0.25 * np.sin(7 * th)
        e = lambda vals: total_energy(boundary_field(DISK, 128, values=vals),
                                      CUBIC, 1.0)["dirichlet"]
        assert e(u + v) == pytest.approx(e(u) + e(v), abs=1e-12)

    def test_total_is_sum(self, square_record):
        e = square_record.energy
        assert e["total"] == pytest.approx(e["dirichlet"] + e["potential"], abs=1e-12)


class TestTruncatedU0Energy:
    def test_disk_antipodal_intercept(self):
        rho = 0.01
        val = truncated_u0_energy(DISK, 0.0, math.pi, rho)
        assert abs(val - FOUR_OVER_PI * math.log(1 / rho)
                   - FOUR_OVER_PI * math.log(2)) <= 0.05

    def test_slope_fit(self):
        fit = u0_expansion_fit(DISK, 0.0, math.pi, [0.02, 0.01, 0.005])
        assert abs(fit.fitted_slope - FOUR_OVER_PI) <= 0.01 * FOUR_OVER_PI
        assert abs(fit.intercept_gap) <= 0.05

    def test_swap_symmetry(self):
        a = truncated_u0_energy(DISK, 1.0, 2.5, 0.01)
        b = truncated_u0_energy(DISK, 2.5, 1.0, 0.01)
        assert a == pytest.approx(b, abs=1e-10)

    def test_cauchy_in_rho(self):
        # E(rho) - (4/pi) log(1/rho) settles at O(rho)
        rhos = [0.04, 0.02, 0.01, 0.005]
        ys = [truncated_u0_energy(DISK, 0.5, 2.0, r) - FOUR_OVER_PI * math.log(1 / r)
              for r in rhos]
        spreads = [abs(a - b) for a, b in zip(ys, ys[1:])]
        assert spreads[0] > spreads[1] > spreads[2]
        assert spreads[-1] < 0.6 * 0.01  # C * rho with a moderate constant

    def test_polygon_model_supported(self):
        val = truncated_u0_energy(SQUARE, math.pi / 4, 5 * math.pi / 4, 0.01)
        W = renorm_w_conformal(SQUARE, math.pi / 4, 5 * math.pi / 4)
        assert abs(val - FOUR_OVER_PI * math.log(100) - W) <= 0.05

    def test_overlap_rejected(self):
        with pytest.raises(GeometryError):
            truncated_u0_energy(DISK, 0.0, 0.02, 0.05)

    def test_unsupported_domain(self):
        with pytest.raises(CapabilityError):
            truncated_u0_energy(DomainSpec.rectangle(1, 1), 0.1, 0.5, 0.01)


class TestGammaExpansion:
    def test_requires_four_records(self, square_record):
        with pytest.raises(BVortexError):
            gamma_expansion_check([square_record] * 3, 0.0, 0.0)

    def test_requires_decreasing_eps(self, square_record):
        with pytest.raises(BVortexError):
            gamma_expansion_check([square_record] * 4, 0.0, 0.0)

    def test_disk_branch_slope(self, cubic_profile):
        # the expansion concerns energy, not stability: the unstable disk
        # branch still fits the leading slope (corrected fit; slope only)
        records = []
        rec = None
        for eps in (0.2, 0.1, 0.05, 0.025):
            if rec is None:
                guess = initial_guess(DISK, 0.0, math.pi, eps, CUBIC,
                                      cubic_profile, n_modes=1024)
            else:
                from bvortex.solver import BoundaryField
                guess = BoundaryField(values=np.clip(rec.trace.values, -1, 1),
                                      weight=rec.trace.weight)
            rec = newton_solve(guess, CUBIC, eps)
            records.append(rec)
        fit = gamma_expansion_check(records, 0.0, 0.0)
        assert abs(fit.fitted_slope_corrected - FOUR_OVER_PI) <= 0.03 * FOUR_OVER_PI


class TestVortexVsMinimizer:
    def test_square_model_match(self, square_record):
        minima = find_local_minima(SQUARE, grid_n=96)
        report = vortex_vs_minimizer(square_record, minima)
        assert not report["mismatch"] and not report["no_target"]
        assert max(report["distances"]) <= 0.05 * 2 * math.pi

    def test_disk_no_target(self, cubic_profile):
        guess = initial_guess(DISK, 0.0, math.pi, 0.1, CUBIC, cubic_profile,
                              n_modes=512)
        rec = newton_solve(guess, CUBIC, 0.1)
        report = vortex_vs_minimizer(rec, [])
        assert report["no_target"] and report["distances"] == []

    def test_wrong_count_is_report_not_exception(self, square_record):
        fld = boundary_field(DISK, 64, values=np.ones(64))
        rec = newton_solve(fld, CUBIC, 0.5)
        report = vortex_vs_minimizer(rec, [])
        assert report["mismatch"] and report["count"] == 0

    def test_distances_decrease_along_branch(self, cubic_profile):
        minima = find_local_minima(SQUARE, grid_n=96)
        dists = []
        for eps in (0.2, 0.1, 0.05):
            guess = initial_guess(SQUARE, math.pi / 4, 5 * math.pi / 4, eps, CUBIC,
                                  cubic_profile, n_modes=512)
            rec = newton_solve(guess, CUBIC, eps)
            dists.append(max(vortex_vs_minimizer(rec, minima)["distances"]))
        assert dists[0] >= dists[1] >= dists[2]


class TestTransitionSet:
    def test_constant_trace_empty(self):
        assert transition_set(np.ones(64), CUBIC.t_star) == []

    def test_square_model_two_intervals(self, square_record):
        intervals = transition_set(square_record.trace, CUBIC.t_star)
        assert len(intervals) == 2

    def test_widths_shrink_linearly(self, cubic_profile):
        widths = []
        for eps in (0.2, 0.1, 0.05):
            guess = initial_guess(SQUARE, math.pi / 4, 5 * math.pi / 4, eps, CUBIC,
                                  cubic_profile, n_modes=1024)
            rec = newton_solve(guess, CUBIC, eps)
            ivs = transition_set(rec.trace, CUBIC.t_star)
            widths.append(np.mean([e - s for s, e in ivs]))
        for w_big, w_small in zip(widths, widths[1:]):
            assert 1.5 <= w_big / w_small <= 2.5

    def test_vortices_inside_intervals(self, square_record):
        intervals = transition_set(square_record.trace, CUBIC.t_star)
        for v in square_record.vortices:
            hits = sum(1 for s, e in intervals
                       if s <= v <= e or s <= v + 2 * math.pi <= e)
            assert hits == 1

    def test_wrapping_interval(self):
        th = spectral.uniform_nodes(128)
        vals = np.cos(th)  # |u| <= t_star in two bands symmetric about pi/2, 3pi/2
        ivs = transition_set(vals, 0.5)
        assert len(ivs) == 2
        widths = [e - s for s, e in ivs]
        assert all(abs(w - (2 * math.pi / 3 - math.pi / 3)) < 0.05 for w in widths)
