"""Audio-to-friction conversion: envelope, loudness map, stream alignment.

Friction is a direct extension of the sonic output. Per output sample,
the mean absolute amplitude over the most recent millisecond is mapped
through a clipped decibel-to-Newton line so that friction roughly tracks
perceived loudness rather than raw amplitude. Because the audio path is
about 1 ms faster than the tactile path on the real device, the audio
stream is delayed by 1.0 ms while friction stays put.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

FORCE_FLOOR_N = 0.14
FORCE_CEIL_N = 1.4
MAP_MAX_N = 0.5
DB_FLOOR = -30.0
WINDOW_S = 0.001
AUDIO_DELAY_S = 0.001

# Amplitude at the dB clip floor; anything at or below maps to the
# baseline force without touching the logarithm.
_FLOOR_AMPLITUDE = 10.0 ** (DB_FLOOR / 20.0)


def envelope_window(engine_rate: int) -> int:
    """Window length n for 1 ms of engine-rate samples (192 at 192 kHz)."""
    n = round(WINDOW_S * engine_rate)
    if n < 1:
        raise ValueError(f"engine rate {engine_rate} too low for a 1 ms window")
    return n


def audio_delay_samples(engine_rate: int) -> int:
    return round(AUDIO_DELAY_S * engine_rate)


class EnvelopeFollower:
    """Running mean of |amplitude| over the most recent millisecond.

    Each output value is the freshly-computed sum of exactly its own
    window, so results do not depend on how the input is chunked and
    there is no drift to resum away. The window is zero-filled at
    session start (silence before t = 0).
    """

    def __init__(self, engine_rate: int):
        self.n = envelope_window(engine_rate)
        self._tail = np.zeros(self.n - 1, dtype=np.float64)

    def process(self, block: np.ndarray) -> np.ndarray:
        """Envelope values for one block, one output per input sample."""
        block = np.asarray(block, dtype=np.float64)
        if block.size == 0:
            return np.zeros(0, dtype=np.float64)
        ext = np.concatenate([self._tail, np.abs(block)])
        if self.n > 1:
            self._tail = ext[-(self.n - 1):].copy()
            windows = sliding_window_view(ext, self.n)
            sums = windows.sum(axis=1)
        else:
            sums = ext
        return sums / self.n

    def push(self, sample: float) -> float:
        """Single-sample form of the window average."""
        return float(self.process(np.array([sample]))[0])


def window_avg(state: EnvelopeFollower, new_sample: float) -> float:
    return state.push(new_sample)


def force_map(a_mu, floor_n: float = FORCE_FLOOR_N, ceil_n: float = MAP_MAX_N):
    """Map envelope amplitude to force: [-30, 0] dB -> [floor_n, ceil_n].

    0 dB corresponds to full-scale amplitude (a_ref = 1). Input at or
    below the -30 dB floor (including exact silence) returns floor_n
    directly. Scalar in, scalar out; array in, array out.
    """
    a = np.asarray(a_mu, dtype=np.float64)
    scalar = a.ndim == 0
    a = np.atleast_1d(a)
    if np.any(a < 0.0):
        raise ValueError("envelope amplitude must be non-negative")
    span = ceil_n - floor_n
    safe = np.where(a > _FLOOR_AMPLITUDE, a, 1.0)
    level_db = 20.0 * np.log10(safe)
    mapped = floor_n + (np.minimum(level_db, 0.0) - DB_FLOOR) / -DB_FLOOR * span
    out = np.where(a > _FLOOR_AMPLITUDE, mapped, floor_n)
    return float(out[0]) if scalar else out


def clamp_device(force_n: float) -> float:
    """Hard device limits; guards any mapping wider than the 0.5 N span."""
    return min(FORCE_CEIL_N, max(FORCE_FLOOR_N, force_n))


class DelayLine:
    """Fixed sample delay, zero-initialized; pure reordering, no math."""

    def __init__(self, delay_samples: int):
        if delay_samples < 0:
            raise ValueError(f"delay must be >= 0, got {delay_samples}")
        self.delay = delay_samples
        self._held = np.zeros(delay_samples, dtype=np.float64)

    def process(self, block: np.ndarray) -> np.ndarray:
        block = np.asarray(block, dtype=np.float64)
        ext = np.concatenate([self._held, block])
        out = ext[: len(block)]
        self._held = ext[len(block):].copy()
        return out


def align_streams(audio: np.ndarray, friction: np.ndarray, engine_rate: int):
    """Delay audio by 1.0 ms; friction (from the undelayed audio) stays.

    Output audio keeps the input length: zero-padded at the start, the
    final delay-worth of samples dropped off the end.
    """
    audio = np.asarray(audio, dtype=np.float64)
    d = audio_delay_samples(engine_rate)
    if d == 0 or len(audio) == 0:
        return audio.copy(), friction
    delayed = np.concatenate([np.zeros(min(d, len(audio))), audio[:-d]])
    return delayed, friction
