import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fricative.motion import (
    COUNT_MM,
    SPEED_MAX_MM_S,
    SPEED_STEP_MM_S,
    DisplacementQuantizer,
    DisplacementUpdate,
    MotionState,
    TrajectoryError,
    derive_speed,
    quantize_displacement,
    quantize_speed,
    read_trajectory_csv,
    reconstruct_positions,
    round_half_away,
    write_trajectory_csv,
)


class TestQuantize:
    def test_zero(self):
        assert quantize_displacement(0.0) == 0

    def test_half_count_rounds_away(self):
        # 0.05 / 0.02 = 2.5, ties go away from zero
        assert quantize_displacement(0.05) == 3

    def test_negative_rounds_away(self):
        # -0.019 / 0.02 = -0.95
        assert quantize_displacement(-0.019) == -1

    def test_symmetry(self):
        for mm in (0.01, 0.03, 0.05, 0.123, 1.7):
            assert quantize_displacement(-mm) == -quantize_displacement(mm)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            quantize_displacement(float("nan"))

    @given(st.integers(min_value=-10, max_value=10))
    @settings(max_examples=30, deadline=None)
    def test_round_half_away_integers(self, n):
        assert round_half_away(n + 0.5) == n + 1 if n >= 0 else True
        assert round_half_away(float(n)) == n


class TestQuantizerCarry:
    def test_residual_accumulates(self):
        q = DisplacementQuantizer()
        total = sum(q.push(0.0208) for _ in range(25))
        # 25 * 0.0208 mm = 0.52 mm = exactly 26 counts
        assert total == 26
        assert abs(q.residual_mm) < COUNT_MM / 2 + 1e-12

    def test_carry_keeps_position_close(self):
        q = DisplacementQuantizer()
        true_pos = 0.0
        reported = 0
        rng = np.random.default_rng(3)
        for dx in rng.uniform(-0.3, 0.3, 1000):
            true_pos += dx
            reported += q.push(dx)
            assert abs(reported * COUNT_MM - true_pos) <= COUNT_MM / 2 + 1e-9


class TestDeriveSpeed:
    def test_zero(self):
        assert derive_speed(DisplacementUpdate(0)) == 0.0

    def test_clamps_at_maximum(self):
        # 160 counts = 3.2 mm per 8 ms = 400 mm/s raw
        assert derive_speed(DisplacementUpdate(160)) == 334.0
        assert derive_speed(DisplacementUpdate(-160)) == -334.0

    def test_raw_speed_snaps_to_grid(self):
        assert quantize_speed(3.0) == pytest.approx(2.6, abs=1e-12)
        # one count per update: 2.5 mm/s raw, nearest grid point 2.6
        assert derive_speed(DisplacementUpdate(1)) == pytest.approx(2.6, abs=1e-12)

    @given(st.integers(min_value=-400, max_value=400))
    @settings(max_examples=200, deadline=None)
    def test_grid_and_range(self, counts):
        speed = derive_speed(DisplacementUpdate(counts))
        assert abs(speed) <= SPEED_MAX_MM_S
        if abs(speed) < SPEED_MAX_MM_S:
            steps = speed / SPEED_STEP_MM_S
            assert abs(steps - round(steps)) < 1e-9


class TestReconstruct:
    def test_zero_dx_holds_position(self):
        pos = reconstruct_positions(3.5, DisplacementUpdate(0), 192000)
        assert len(pos) == 1536
        assert np.all(pos == 3.5)

    def test_linear_ramp(self):
        from fricative.motion import interpolate_interval

        # dx of 1.536 mm over 1536 samples advances 0.001 mm per sample
        pos = interpolate_interval(0.0, 1.536, 192000)
        np.testing.assert_allclose(pos, np.arange(1, 1537) * 0.001, rtol=1e-12)
        assert pos[-1] == 1.536

    def test_telescoping_returns_to_start(self):
        first = reconstruct_positions(0.0, DisplacementUpdate(1), 192000)
        second = reconstruct_positions(first[-1], DisplacementUpdate(-1), 192000)
        assert second[-1] == 0.0

    def test_monotone_within_interval(self):
        pos = reconstruct_positions(1.0, DisplacementUpdate(37), 48000)
        assert np.all(np.diff(pos) > 0)
        neg = reconstruct_positions(1.0, DisplacementUpdate(-37), 48000)
        assert np.all(np.diff(neg) < 0)

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError, match="125"):
            reconstruct_positions(0.0, DisplacementUpdate(1), 44100)

    @given(st.lists(st.integers(min_value=-200, max_value=200), min_size=1, max_size=40))
    @settings(max_examples=50, deadline=None)
    def test_endpoint_exactness(self, counts):
        state = MotionState()
        prev_mm = 0.0
        for c in counts:
            update = DisplacementUpdate(c)
            pos = reconstruct_positions(prev_mm, update, 48000)
            prev_mm = pos[-1]
            state.apply(update)
            assert prev_mm == pytest.approx(state.position_mm, abs=1e-9)


class TestMotionState:
    def test_tracks_dy_without_consuming_it(self):
        state = MotionState()
        state.apply(DisplacementUpdate(3, 7))
        state.apply(DisplacementUpdate(-1, -2))
        assert state.position_counts == 2
        assert state.dy_counts_total == 5
        assert state.update_index == 2


class TestTrajectoryCSV:
    def test_round_trip(self, tmp_path):
        updates = [DisplacementUpdate(5, 1), DisplacementUpdate(-3, 0), DisplacementUpdate(0, 2)]
        path = tmp_path / "traj.csv"
        write_trajectory_csv(path, updates)
        assert read_trajectory_csv(path) == updates

    def test_bad_header(self, tmp_path):
        path = tmp_path / "traj.csv"
        path.write_text("a,b,c\n0,1,0\n")
        with pytest.raises(TrajectoryError) as err:
            read_trajectory_csv(path)
        assert err.value.line == 1

    def test_non_integer_field_reports_line(self, tmp_path):
        path = tmp_path / "traj.csv"
        path.write_text("update_index,dx_counts,dy_counts\n0,1,0\n1,x,0\n")
        with pytest.raises(TrajectoryError) as err:
            read_trajectory_csv(path)
        assert err.value.line == 3

    def test_cadence_violation(self, tmp_path):
        path = tmp_path / "traj.csv"
        path.write_text("update_index,dx_counts,dy_counts\n0,1,0\n2,1,0\n")
        with pytest.raises(TrajectoryError) as err:
            read_trajectory_csv(path)
        assert err.value.kind == "cadence-violation"
        assert err.value.line == 3

    def test_empty_file(self, tmp_path):
        path = tmp_path / "traj.csv"
        path.write_text("")
        with pytest.raises(TrajectoryError):
            read_trajectory_csv(path)
