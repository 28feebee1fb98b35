import math

import numpy as np
import pytest

from bvortex.errors import BVortexError, ConvergenceError, GeometryError
from bvortex.geometry import DomainSpec
from bvortex.layer import solve_layer
from bvortex.nonlinearity import builtin_nonlinearity
from bvortex import spectral
from bvortex.solver import (BoundaryField, boundary_field, continuation,
                            dtn_apply, extract_vortices, initial_guess,
                            jacobian, newton_solve, residual,
                            stability_spectrum, trace_energy)

CUBIC = builtin_nonlinearity("cubic")
DISK = DomainSpec.unit_disk()
SQUARE = DomainSpec.regular_polygon_disk(4, 0.995)


@pytest.fixture(scope="module")
def cubic_profile():
    return solve_layer(CUBIC, X=100.0, n=512)


class TestDtn:
    def test_constant_annihilated(self):
        fld = boundary_field(DISK, 64, values=np.full(64, 0.8))
        assert np.max(np.abs(dtn_apply(fld))) < 1e-13

    def test_multiplier(self):
        th = spectral.uniform_nodes(128)
        fld = boundary_field(DISK, 128, values=np.cos(3 * th))
        assert np.max(np.abs(dtn_apply(fld) - 3 * np.cos(3 * th))) < 1e-12

    def test_nonnegative_form(self):
        rng = np.random.default_rng(13)
        u = rng.standard_normal(128)
        assert np.dot(spectral.apply_multiplier(u), u) >= -1e-12


class TestResidual:
    @pytest.mark.parametrize("c", [1.0, -1.0, 0.0])
    def test_constant_zeros_of_reaction(self, c):
        fld = boundary_field(SQUARE, 128, values=np.full(128, c))
        assert np.max(np.abs(residual(fld, CUBIC, 0.3))) < 1e-12

    def test_jacobian_matches_finite_differences(self):
        rng = np.random.default_rng(14)
        th = spectral.uniform_nodes(256)
        fld = boundary_field(SQUARE, 256, values=0.4 * np.sin(th) + 0.1 * np.cos(3 * th))
        J = jacobian(fld, CUBIC, 0.2)
        for _ in range(3):
            d = rng.standard_normal(256)
            d /= np.linalg.norm(d)
            h = 1e-6
            rp = residual(BoundaryField(fld.values + h * d, fld.weight), CUBIC, 0.2)
            rm = residual(BoundaryField(fld.values - h * d, fld.weight), CUBIC, 0.2)
            fd = (rp - rm) / (2 * h)
            assert np.linalg.norm(fd - J @ d) / np.linalg.norm(J @ d) <= 1e-6

    def test_eps_validation(self):
        fld = boundary_field(DISK, 64)
        with pytest.raises(BVortexError):
            residual(fld, CUBIC, -0.1)


class TestNewtonSolve:
    def test_basin_of_positive_well(self):
        # f > 0 on (t_star, 1) drives the constant mode up to 1
        for eps in (1.0, 0.2):
            fld = boundary_field(DISK, 64, values=np.full(64, 0.9))
            rec = newton_solve(fld, CUBIC, eps)
            assert np.max(np.abs(rec.trace.values - 1.0)) < 1e-9
            assert rec.stable

    def test_zero_solution_unstable(self):
        fld = boundary_field(DISK, 64, values=np.zeros(64))
        rec = newton_solve(fld, CUBIC, 1.0)
        assert rec.residual_norm < 1e-12
        assert rec.spectrum_head[0] == pytest.approx(-1.0, abs=1e-10)
        assert not rec.stable

    def test_square_model_two_vortices(self, cubic_profile):
        guess = initial_guess(SQUARE, math.pi / 4, 5 * math.pi / 4, 0.1, CUBIC,
                              cubic_profile, n_modes=512)
        rec = newton_solve(guess, CUBIC, 0.1)
        assert rec.stable
        assert len(rec.vortices) == 2
        for v, t in zip(sorted(rec.vortices), (math.pi / 4, 5 * math.pi / 4)):
            assert abs(v - t) < 0.02
        assert np.max(np.abs(rec.trace.values)) <= 1.0 + 1e-9

    def test_disk_nonconstant_unstable(self, cubic_profile):
        guess = initial_guess(DISK, 0.0, math.pi, 0.1, CUBIC, cubic_profile,
                              n_modes=512)
        rec = newton_solve(guess, CUBIC, 0.1)
        assert np.max(rec.trace.values) - np.min(rec.trace.values) > 0.5
        assert rec.lambda_min < 0 and not rec.stable

    def test_initial_range_enforced(self):
        fld = boundary_field(DISK, 64, values=np.full(64, 1.5))
        with pytest.raises(BVortexError):
            newton_solve(fld, CUBIC, 0.5)

    def test_energy_nonincreasing_on_minimizing_run(self):
        # descent toward the constant minimizer with SPD linearization
        fld = boundary_field(DISK, 64, values=np.full(64, 0.9))
        u = fld.values.copy()
        energies = [trace_energy(BoundaryField(u, fld.weight), CUBIC, 0.5)["total"]]
        for _ in range(8):
            f2 = BoundaryField(u, fld.weight)
            r = residual(f2, CUBIC, 0.5)
            if np.max(np.abs(r)) < 1e-12:
                break
            step = np.linalg.solve(jacobian(f2, CUBIC, 0.5), -r)
            u = np.clip(u + step, -1.2, 1.2)
            energies.append(trace_energy(BoundaryField(u, fld.weight), CUBIC, 0.5)["total"])
        assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))


class TestStabilitySpectrum:
    def test_constant_one_block(self):
        fld = boundary_field(DISK, 64, values=np.ones(64))
        for eps in (1.0, 0.5, 0.1):
            lam = stability_spectrum(fld, CUBIC, eps, k=3)
            assert lam[0] == pytest.approx(2.0 / eps, abs=1e-9)

    def test_zero_block_structure(self):
        # u = 0 on the disk at eps=1: eigenvalues |k| - 1
        fld = boundary_field(DISK, 64, values=np.zeros(64))
        lam = stability_spectrum(fld, CUBIC, 1.0, k=4)
        assert np.allclose(lam, [-1.0, 0.0, 0.0, 1.0], atol=1e-9)

    def test_mode_resolution_stability(self, cubic_profile):
        lams = []
        for n in (1024, 2048):
            guess = initial_guess(SQUARE, math.pi / 4, 5 * math.pi / 4, 0.1, CUBIC,
                                  cubic_profile, n_modes=n)
            lams.append(newton_solve(guess, CUBIC, 0.1).lambda_min)
        assert abs(lams[0] - lams[1]) <= 1e-4


class TestInitialGuess:
    def test_plus_minus_one_away_from_jumps(self, cubic_profile):
        g = initial_guess(DISK, 0.0, math.pi, 0.1, CUBIC, cubic_profile, n_modes=256)
        th = g.thetas
        far = (np.abs(np.sin(th)) > 0.9)  # far from both jump angles
        assert np.all(np.abs(np.abs(g.values[far]) - 1.0) < 1e-12)

    def test_centered_at_jump(self, cubic_profile):
        g = initial_guess(DISK, 0.0, math.pi, 0.05, CUBIC, cubic_profile, n_modes=512)
        v0 = spectral.trig_interpolate(g.values, 0.0, 0.0)
        assert abs(v0) < 5e-3

    def test_l2_convergence_to_step(self, cubic_profile):
        th = spectral.uniform_nodes(512)
        chi = np.where((th % (2 * math.pi)) < math.pi, -1.0, 1.0)
        dists = []
        for eps in (0.2, 0.1, 0.05):
            g = initial_guess(DISK, 0.0, math.pi, eps, CUBIC, cubic_profile, n_modes=512)
            dists.append(math.sqrt(2 * math.pi / 512 * np.sum((g.values - chi) ** 2)))
        assert dists[0] > dists[1] > dists[2]

    def test_orientation(self, cubic_profile):
        # chi is -1 on the counterclockwise arc from p to q
        g = initial_guess(DISK, 0.0, math.pi, 0.1, CUBIC, cubic_profile, n_modes=256)
        th = g.thetas
        assert np.all(g.values[(th > 0.5) & (th < math.pi - 0.5)] < 0)
        assert np.all(g.values[(th > math.pi + 0.5) & (th < 2 * math.pi - 0.5)] > 0)

    def test_overlapping_windows_rejected(self, cubic_profile):
        with pytest.raises(GeometryError):
            initial_guess(DISK, 0.0, 0.05, 0.01, CUBIC, cubic_profile,
                          n_modes=256, window=0.1)

    def test_values_in_range(self, cubic_profile):
        g = initial_guess(SQUARE, math.pi / 4, 5 * math.pi / 4, 0.2, CUBIC,
                          cubic_profile, n_modes=256)
        assert np.all(np.abs(g.values) <= 1.0)


class TestContinuation:
    def test_constant_branch_always_stable(self):
        fld = boundary_field(DISK, 64, values=np.ones(64))
        seed = newton_solve(fld, CUBIC, 0.5)
        branch = continuation(CUBIC, seed, 0.5, 0.02, 8)
        assert len(branch.records) == 8
        assert branch.flips == []
        for rec in branch.records:
            assert rec.stable
            # eigenvalue lower bound 2 min(weight) / eps for the constant
            assert rec.lambda_min >= 2.0 * np.min(rec.trace.weight) / rec.eps - 1e-9

    def test_square_branch_vortices_persist(self, cubic_profile):
        guess = initial_guess(SQUARE, math.pi / 4, 5 * math.pi / 4, 0.25, CUBIC,
                              cubic_profile, n_modes=512)
        seed = newton_solve(guess, CUBIC, 0.25)
        branch = continuation(CUBIC, seed, 0.25, 0.05, 6)
        for rec in branch.records:
            assert rec.stable and len(rec.vortices) == 2
            for v in rec.vortices:
                assert min(abs(v - math.pi / 4), abs(v - 5 * math.pi / 4)) < 0.05

    def test_seed_mismatch_rejected(self):
        fld = boundary_field(DISK, 64, values=np.ones(64))
        seed = newton_solve(fld, CUBIC, 0.5)
        with pytest.raises(BVortexError):
            continuation(CUBIC, seed, 0.4, 0.1, 4)


class TestVortexExtraction:
    def test_no_vortices_for_constants(self):
        assert extract_vortices(np.ones(32)) == []

    def test_two_crossings(self):
        th = spectral.uniform_nodes(256)
        vs = extract_vortices(np.sin(th + 0.3))
        assert len(vs) == 2
        assert min(abs(v - ((-0.3) % (2 * math.pi))) for v in vs) < 1e-2

    def test_interpolation_accuracy(self):
        th = spectral.uniform_nodes(512)
        vs = extract_vortices(np.tanh(5 * np.sin(th - 1.234)))
        assert any(abs(v - 1.234) < 1e-3 for v in vs)


class TestConformalCovariance:
    def test_disk_with_scaled_weight(self, cubic_profile):
        # constant weight c at eps equals unit weight at eps / c
        n, c, eps = 256, 0.65, 0.1
        g = initial_guess(DISK, 0.0, math.pi, eps / c, CUBIC, cubic_profile, n_modes=n)
        direct = newton_solve(g, CUBIC, eps / c)
        scaled = newton_solve(BoundaryField(values=g.values, weight=np.full(n, c)),
                              CUBIC, eps)
        assert np.max(np.abs(direct.trace.values - scaled.trace.values)) <= 1e-6
