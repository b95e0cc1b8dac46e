import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pathwave import (MediumProfile, NonPositiveSpeed, ReflectionSequence,
                      Tabulated, build_travel_time, frontier_point,
                      origin_reflected, origin_transmitted, path_travel_time)


class TestBuildTravelTime:
    def test_crossing_time_closed_form(self, example1_tt):
        # c: 2 -> 1 over unit width gives t_+ = log 2
        assert example1_tt.t_plus == pytest.approx(math.log(2.0), abs=1e-14)

    def test_unit_speed(self, unit_speed_tt):
        assert unit_speed_tt.t_plus == pytest.approx(1.0, abs=1e-14)
        assert unit_speed_tt.X(0.4) == pytest.approx(0.4, abs=1e-14)

    def test_constant_speed_two(self):
        prof = MediumProfile(1.0, 1.0, 3.0, 2.0, 2.0)
        tt = build_travel_time(prof)
        assert tt.t_plus == pytest.approx(0.5, abs=1e-14)

    def test_forward_inverse_roundtrip(self, example1_tt):
        xs = np.linspace(0.0, 1.0, 101)
        assert np.max(np.abs(example1_tt.X(example1_tt.tau(xs)) - xs)) < 1e-10

    def test_clamped_extension(self, example1_tt):
        assert example1_tt.X(-0.5) == 0.0
        assert example1_tt.X(10.0) == 1.0

    def test_monotone_forward(self, example1_tt):
        ts = np.linspace(0.0, example1_tt.t_plus, 200)
        assert np.all(np.diff(example1_tt.X(ts)) > 0.0)

    def test_numeric_map_matches_closed_form(self):
        """Tabulated c sampled from the linear profile agrees with the
        exponential closed form to the certified proxy tolerance."""
        xs = np.linspace(0.0, 1.0, 257)
        cs = 2.0 - xs  # c linear 2 -> 1
        prof = MediumProfile(1.0, 0.5, 1.0, 2.0, 1.0,
                             interior=Tabulated(tuple(xs),
                                                tuple(0.5 + 0.5 * xs),
                                                tuple(cs)))
        tt_num = build_travel_time(prof)
        tt_exact = build_travel_time(MediumProfile(1.0, 0.5, 1.0, 2.0, 1.0))
        assert tt_num.t_plus == pytest.approx(tt_exact.t_plus, abs=1e-9)
        ts = np.linspace(0.0, tt_exact.t_plus, 73)
        assert np.max(np.abs(tt_num.X(ts) - tt_exact.X(ts))) < 1e-8

    def test_nonpositive_speed_rejected(self):
        with pytest.raises(NonPositiveSpeed):
            MediumProfile(1.0, 1.0, 2.0, 1.0, 0.0)
        with pytest.raises(NonPositiveSpeed):
            xs = np.linspace(0.0, 1.0, 9)
            build_travel_time(MediumProfile(
                1.0, 1.0, 2.0, 1.0, 1.0,
                interior=Tabulated(tuple(xs), tuple(1.0 + xs),
                                   tuple(1.0 - 1.5 * xs))))

    def test_zero_width_region(self):
        tt = build_travel_time(MediumProfile(0.0, 1.0, 2.0, 1.0, 1.0))
        assert tt.t_plus == 0.0
        assert tt.X(0.3) == 0.0


class TestReflectionSequence:
    def test_valid_down_up(self):
        seq = ReflectionSequence((0.6, 0.2, 0.9))
        assert len(seq) == 3

    def test_rising_even_step_rejected(self):
        with pytest.raises(ValueError):
            ReflectionSequence((0.4, 0.6))

    def test_falling_odd_step_rejected(self):
        with pytest.raises(ValueError):
            ReflectionSequence((0.6, 0.2, 0.1))


class TestPathTravelTime:
    def test_empty_sequence(self, unit_speed_tt):
        assert path_travel_time(unit_speed_tt, ReflectionSequence(())) == 0.0

    def test_two_point_unit_speed(self, unit_speed_tt):
        seq = ReflectionSequence((0.6, 0.2))
        assert path_travel_time(unit_speed_tt, seq) == pytest.approx(0.8)

    def test_single_point_is_round_trip(self, unit_speed_tt):
        for x in (0.1, 0.5, 0.9):
            seq = ReflectionSequence((x,))
            assert path_travel_time(unit_speed_tt, seq) == pytest.approx(
                2.0 * unit_speed_tt.tau(x), abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=5))
    def test_monotone_in_turning_points(self, raw, unit_speed_tt):
        """Travel time rises with odd-indexed points, falls with even."""
        pts = []
        lo, hi = 0.0, 1.0
        for j, u in enumerate(raw, start=1):
            prev = pts[-1] if pts else 0.0
            pts.append(prev + u * (1.0 - prev) if j % 2 == 1 else prev * u)
        seq = ReflectionSequence(tuple(pts))
        base = path_travel_time(unit_speed_tt, seq)
        for j in range(len(pts)):
            eps = 1e-6
            bumped = list(pts)
            bumped[j] = min(1.0, max(0.0, bumped[j] + eps))
            try:
                pert = path_travel_time(unit_speed_tt,
                                        ReflectionSequence(tuple(bumped)))
            except ValueError:
                continue  # bump broke the alternating ordering
            if j % 2 == 0:  # odd 1-based index
                assert pert >= base - 1e-12
            else:
                assert pert <= base + 1e-12


class TestOrigins:
    def test_reflected_at_turnaround(self, unit_speed_tt):
        seq = ReflectionSequence((1.0,))
        assert origin_reflected(unit_speed_tt, seq, 0.0, 2.0) == pytest.approx(
            0.0, abs=1e-14)

    def test_reflected_arithmetic(self, unit_speed_tt):
        seq = ReflectionSequence((0.5,))
        assert origin_reflected(unit_speed_tt, seq, 0.0, 2.0) == pytest.approx(-1.0)
        assert origin_reflected(unit_speed_tt, seq, 0.0, 1.0) == pytest.approx(0.0)

    def test_reflected_requires_odd(self, unit_speed_tt):
        with pytest.raises(ValueError):
            origin_reflected(unit_speed_tt, ReflectionSequence((0.5, 0.2)),
                             0.0, 1.0)

    def test_transmitted_direct_crossing(self, unit_speed_tt):
        seq = ReflectionSequence(())
        assert origin_transmitted(unit_speed_tt, seq, 1.0, 1.0) == pytest.approx(0.0)
        assert origin_transmitted(unit_speed_tt, seq, 1.0, 3.0) == pytest.approx(-2.0)

    def test_transmitted_two_reflections(self, unit_speed_tt):
        seq = ReflectionSequence((0.8, 0.3))
        assert origin_transmitted(unit_speed_tt, seq, 1.0, 3.0) == pytest.approx(-1.0)

    def test_transmitted_requires_even(self, unit_speed_tt):
        with pytest.raises(ValueError):
            origin_transmitted(unit_speed_tt, ReflectionSequence((0.5,)),
                               1.0, 1.0)


class TestFrontierPoint:
    def test_clamped_low(self, unit_speed_tt):
        assert frontier_point(unit_speed_tt, -0.3) == 0.0

    def test_clamped_high(self, unit_speed_tt):
        assert frontier_point(unit_speed_tt, 5.0) == 1.0

    def test_interior(self, unit_speed_tt):
        assert frontier_point(unit_speed_tt, 1.0) == pytest.approx(0.5)
