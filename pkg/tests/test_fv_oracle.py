import math

import numpy as np
import pytest

from pathwave import (CFLViolation, Grid1D, InitialData, MediumProfile,
                      UnresolvedDelta, interface_coefficients, self_convergence,
                      solve)


def homogeneous(z=1.0, c=1.0):
    return MediumProfile(1.0, z, z, c, c)


class TestHomogeneousTransport:
    def test_gaussian_translates(self):
        """In a uniform medium right-going data just advects at speed c."""
        prof = homogeneous(c=2.0)
        data = InitialData.gaussian(0.1, center=-1.0)
        t = 0.8
        field = solve(prof, data, t, Grid1D.from_profile(prof, t, cells=4000),
                      limiter="mc")
        want = np.asarray(data.eval(field.x - 2.0 * t))
        assert float(np.max(np.abs(field.p - want))) < 0.02 * data.max_abs

    def test_step_front_within_one_cell(self):
        prof = homogeneous()
        t = 0.7
        grid = Grid1D.from_profile(prof, t, cells=2000)
        field = solve(prof, InitialData.step(), t, grid)
        # front = last location where p > 1/2
        front = field.x[field.p > 0.5][-1]
        assert abs(front - t) <= 1.5 * grid.dx

    def test_max_norm_nonincreasing(self):
        prof = homogeneous()
        data = InitialData.gaussian(0.1, center=-1.0)
        peak0 = float(data.max_abs)
        field = solve(prof, data, 1.0,
                      Grid1D.from_profile(prof, 1.0, cells=1500))
        assert float(np.max(np.abs(field.p))) <= peak0 + 1e-12


class TestSharpInterface:
    def test_middle_states(self):
        """A step hitting a single impedance jump produces the interface
        transmission and reflection coefficients as plateau values."""
        z_r = 4.0
        prof = MediumProfile(0.0, 1.0, z_r, 1.0, 1.0)
        ct, cr = interface_coefficients(1.0, z_r)
        t = 0.8
        grid = Grid1D.from_profile(prof, t, cells=4000)
        field = solve(prof, InitialData.step(), t, grid)
        trans = field.p[(field.x > 0.2 * t) & (field.x < 0.8 * t)]
        refl = field.p[(field.x > -0.8 * t) & (field.x < -0.2 * t)]
        assert float(np.max(np.abs(trans - ct))) < 0.01 * ct
        assert float(np.max(np.abs(refl - (1.0 + cr)))) < 0.01 * (1.0 + cr)


class TestHistories:
    def test_transmitted_history_jump(self, example1_profile, example1_tt):
        t_final = 3.0 * example1_tt.t_plus
        grid = Grid1D.from_profile(example1_profile, t_final, cells=6000)
        field = solve(example1_profile, InitialData.step(), t_final, grid)
        times, vals = field.transmitted_history(example1_profile)
        assert np.all(np.diff(times) > 0.0)
        tp = example1_tt.t_plus
        cg = example1_profile.green_coefficient()
        before = vals[times < tp - 0.05]
        after = vals[(times > tp + 0.05) & (times < 1.3 * tp)]
        assert float(np.max(np.abs(before))) < 0.02
        assert float(np.mean(after)) == pytest.approx(cg, rel=0.02)

    def test_reflected_history_starts_at_zero(self, example1_profile):
        t_final = 1.0
        grid = Grid1D.from_profile(example1_profile, t_final, cells=4000)
        field = solve(example1_profile, InitialData.step(), t_final, grid)
        incident = lambda x, t: np.where(x - example1_profile.c_left * t <= 0.0,
                                         1.0, 0.0)
        times, vals = field.reflected_history(example1_profile, incident)
        early = vals[times < 0.0]
        assert early.size and float(np.max(np.abs(early))) < 1e-10


class TestGreenLaw:
    def test_amplitude_growth(self):
        """Smooth impedance growth amplifies the transmitted pulse by
        sqrt(Z_+ / Z_-) when the phase just stretches."""
        prof = MediumProfile(1.0, 1.0, 3.0, 1.0, 1.0)
        data = InitialData.gaussian(0.05, center=-0.5)
        t = 2.5
        grid = Grid1D.from_profile(prof, t, cells=16000)
        field = solve(prof, data, t, grid, limiter="mc")
        peak = float(np.max(field.p[field.x > 1.0]))
        cg = prof.green_coefficient()
        assert peak == pytest.approx(cg * data.max_abs, rel=0.05)


class TestSelfConvergence:
    def test_smooth_first_order(self, example1_profile):
        data = InitialData.gaussian(0.1, center=-0.8)
        order = self_convergence(example1_profile, data, 0.8, levels=3)
        assert 0.6 < order < 1.4

    def test_limiter_improves_order(self, example1_profile):
        data = InitialData.gaussian(0.1, center=-0.8)
        o1 = self_convergence(example1_profile, data, 0.8, levels=3)
        o2 = self_convergence(example1_profile, data, 0.8, levels=3,
                              limiter="mc")
        assert o2 > o1 + 0.3

    def test_step_fractional_order(self, example1_profile):
        order = self_convergence(example1_profile, InitialData.step(), 0.8,
                                 levels=3)
        assert 0.3 < order < 1.2

    def test_zero_data_exact(self, example1_profile):
        zero = InitialData("general",
                           p0=lambda x: np.zeros_like(np.asarray(x)),
                           support=(-1.0, 0.0), max_abs=0.0)
        assert self_convergence(example1_profile, zero, 0.5, levels=3,
                                base_cells=100) == math.inf

    def test_too_few_levels(self, example1_profile):
        with pytest.raises(ValueError):
            self_convergence(example1_profile, InitialData.step(), 0.5,
                             levels=2)


class TestValidation:
    def test_cfl_out_of_range(self):
        prof = homogeneous()
        with pytest.raises(CFLViolation):
            Grid1D.from_profile(prof, 1.0, cells=100, cfl=1.5)

    def test_unresolved_delta(self):
        prof = homogeneous()
        grid = Grid1D.from_profile(prof, 1.0, cells=100)
        with pytest.raises(UnresolvedDelta):
            solve(prof, InitialData.delta(), 1.0, grid,
                  delta_width=grid.dx)

    def test_unknown_limiter(self):
        prof = homogeneous()
        with pytest.raises(ValueError):
            solve(prof, InitialData.step(), 0.5,
                  Grid1D.from_profile(prof, 0.5, cells=100), limiter="vanleer")

    def test_tiny_grid_rejected(self):
        with pytest.raises(ValueError):
            Grid1D(0.0, 1.0, 5, np.ones(5), np.ones(5))
