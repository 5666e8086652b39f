import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.signal import find_peaks

from fricative.friction import (
    FORCE_CEIL_N,
    FORCE_FLOOR_N,
    MAP_MAX_N,
    DelayLine,
    EnvelopeFollower,
    align_streams,
    audio_delay_samples,
    clamp_device,
    envelope_window,
    force_map,
    window_avg,
)


def brute_force_envelope(x: np.ndarray, n: int) -> np.ndarray:
    """Independent recomputation of the windowed mean at every index."""
    return np.convolve(np.abs(x), np.ones(n), mode="full")[: len(x)] / n


class TestEnvelope:
    def test_window_lengths(self):
        assert envelope_window(192000) == 192
        assert envelope_window(48000) == 48

    def test_all_zero(self):
        state = EnvelopeFollower(192000)
        assert window_avg(state, 0.0) == 0.0

    def test_full_scale_reaches_one(self):
        state = EnvelopeFollower(192000)
        out = state.process(np.ones(192))
        assert out[-1] == 1.0

    def test_sine_approaches_mean_abs(self):
        # Mean of |sin| over a period is 2/pi; one full cycle inside the
        # 1 ms window makes the ripple small. Numeric quadrature oracle:
        t = np.linspace(0.0, 1.0, 100001)
        quad = np.trapezoid(np.abs(np.sin(2 * np.pi * t)), t)
        assert quad == pytest.approx(2 / math.pi, abs=1e-6)

        rate = 192000
        state = EnvelopeFollower(rate)
        t = np.arange(rate // 10) / rate
        out = state.process(np.sin(2 * np.pi * 2000.0 * t))
        steady = out[envelope_window(rate):]
        assert np.max(np.abs(steady - 2 / math.pi)) < 0.01

    def test_chunking_invariance(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(-1, 1, 3000)
        whole = EnvelopeFollower(192000).process(x)
        chunked = EnvelopeFollower(192000)
        parts = [chunked.process(c) for c in np.array_split(x, [7, 8, 200, 1999])]
        np.testing.assert_array_equal(np.concatenate(parts), whole)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(17)
        x = rng.uniform(-1, 1, 5000)
        n = envelope_window(192000)
        got = EnvelopeFollower(192000).process(x)
        expected = brute_force_envelope(x, n)
        assert np.max(np.abs(got - expected)) <= 1e-9

    def test_push_equals_process(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(-1, 1, 300)
        state_a = EnvelopeFollower(48000)
        state_b = EnvelopeFollower(48000)
        pushed = np.array([state_a.push(v) for v in x])
        np.testing.assert_array_equal(pushed, state_b.process(x))

    def test_no_drift_over_a_million_samples(self):
        # every window is summed fresh, so a long streaming run stays on
        # the recomputed value
        rng = np.random.default_rng(41)
        x = rng.uniform(-1, 1, 1_000_000)
        n = envelope_window(192000)
        state = EnvelopeFollower(192000)
        chunks = [state.process(c) for c in np.array_split(x, 650)]
        got = np.concatenate(chunks)
        expected = brute_force_envelope(x, n)
        assert np.max(np.abs(got - expected)) <= 1e-9


class TestForceMap:
    def test_full_scale_is_half_newton(self):
        assert force_map(1.0) == pytest.approx(0.5, abs=1e-9)

    def test_silence_is_baseline(self):
        assert force_map(0.0) == 0.14

    def test_at_or_below_floor_is_baseline_exactly(self):
        assert force_map(10.0 ** -1.5) == 0.14
        assert force_map(0.01) == 0.14

    def test_derived_midpoint(self):
        # -15 dB is the middle of the clipped range: 0.14 + 0.18 = 0.32
        assert force_map(10.0 ** -0.75) == pytest.approx(0.32, abs=1e-9)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            force_map(-0.1)

    def test_vectorized(self):
        a = np.array([0.0, 10.0 ** -1.5, 10.0 ** -0.75, 1.0])
        out = force_map(a)
        np.testing.assert_allclose(out, [0.14, 0.14, 0.32, 0.5], atol=1e-9)

    def test_configurable_span(self):
        assert force_map(1.0, floor_n=0.14, ceil_n=1.4) == pytest.approx(1.4, abs=1e-12)

    @given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=100, deadline=None)
    def test_nondecreasing(self, a, b):
        lo, hi = sorted((a, b))
        assert force_map(lo) <= force_map(hi)

    def test_strictly_increasing_above_floor(self):
        a = np.linspace(10.0 ** -1.5 + 1e-9, 1.0, 1000)
        out = force_map(a)
        assert np.all(np.diff(out) > 0)

    def test_image_within_device_span(self):
        a = np.linspace(0.0, 1.0, 10000)
        out = force_map(a)
        assert np.all(out >= FORCE_FLOOR_N)
        assert np.all(out <= MAP_MAX_N)


class TestClampDevice:
    def test_in_range_passes(self):
        assert clamp_device(0.32) == 0.32

    def test_ceiling(self):
        assert clamp_device(2.0) == FORCE_CEIL_N

    def test_floor(self):
        assert clamp_device(0.0) == FORCE_FLOOR_N


class TestAlignStreams:
    @pytest.mark.parametrize("rate, delay", [(192000, 192), (48000, 48)])
    def test_impulse_shift(self, rate, delay):
        assert audio_delay_samples(rate) == delay
        audio = np.zeros(rate // 10)
        audio[1000] = 1.0
        friction = np.full(len(audio), FORCE_FLOOR_N)
        delayed, out_fric = align_streams(audio, friction, rate)
        assert len(delayed) == len(audio)
        assert delayed[1000 + delay] == 1.0
        assert np.count_nonzero(delayed) == 1
        assert out_fric is friction

    def test_silence_passes_through(self):
        audio = np.zeros(1000)
        friction = np.full(1000, FORCE_FLOOR_N)
        delayed, fric = align_streams(audio, friction, 192000)
        assert np.all(delayed == 0.0)
        assert np.all(fric == FORCE_FLOOR_N)

    def test_streaming_delay_matches_one_shot(self):
        rng = np.random.default_rng(9)
        audio = rng.uniform(-1, 1, 4000)
        one_shot, _ = align_streams(audio, np.zeros(4000), 48000)
        line = DelayLine(audio_delay_samples(48000))
        chunked = np.concatenate([line.process(c) for c in np.array_split(audio, [384, 768, 3000])])
        np.testing.assert_array_equal(chunked, one_shot)


class TestRectificationDoubling:
    def test_two_force_peaks_per_signal_cycle(self):
        # 10 Hz full-scale sine for 2 s: |sin| peaks twice per cycle and
        # the 1 ms window barely smooths it, so the force stream carries
        # 2 * 20 local maxima. Near the zero crossings the envelope dips
        # under the -30 dB clip, flattening the valleys at 0.14 N.
        rate = 48000
        t = np.arange(2 * rate) / rate
        audio = np.sin(2 * np.pi * 10.0 * t)
        friction = force_map(EnvelopeFollower(rate).process(audio))
        warm = envelope_window(rate)
        peaks, _ = find_peaks(friction[warm:], prominence=1e-3)
        assert len(peaks) == 40

    def test_high_frequency_flattening(self):
        rate = 192000
        t = np.arange(rate // 4) / rate
        audio = np.sin(2 * np.pi * 2000.0 * t)
        friction = force_map(EnvelopeFollower(rate).process(audio))
        steady = friction[envelope_window(rate):]
        assert np.max(np.abs(steady - 0.4529)) < 0.01
