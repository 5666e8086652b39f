"""1D signal fragments and sample-accurate cubic readout.

A :class:`SignalBuffer` holds the amplitude series that gets spread out
over the surface. It is a spatial series, not a timed one: no sample
rate attaches to it. Readout happens at arbitrary fractional indices via
uniform Catmull-Rom interpolation, which passes exactly through the
stored samples and is the usual choice for wavetable-style playback.

Outside the index range [0, length-1] the readout is defined to be
silent (exactly 0.0), matching the behaviour of the physical surface
outside the mapped fragment.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.io import wavfile

MIN_CUBIC_LENGTH = 4

# RIFF rate written into signal-fragment WAVs; carries no meaning (the
# buffer is spatial) and is ignored on read.
PLACEHOLDER_WAV_RATE = 48000


def _validate_samples(samples: np.ndarray) -> np.ndarray:
    if samples.ndim != 1:
        raise ValueError(f"signal must be one-dimensional, got shape {samples.shape}")
    if len(samples) < MIN_CUBIC_LENGTH:
        raise ValueError(
            f"signal needs at least {MIN_CUBIC_LENGTH} samples for cubic readout, got {len(samples)}"
        )
    if not np.all(np.isfinite(samples)):
        raise ValueError("signal contains non-finite samples")
    if samples.min() < -1.0 or samples.max() > 1.0:
        raise ValueError("signal samples must lie in [-1.0, +1.0]")
    return samples


@dataclass(frozen=True)
class SignalBuffer:
    """Immutable 1D amplitude series in [-1, +1].

    ``_padded`` caches the buffer extended by one virtual zero in front
    and two behind, which completes the 4-point Catmull-Rom stencil at
    the edges without branching.
    """

    samples: np.ndarray
    _padded: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        samples = np.ascontiguousarray(self.samples, dtype=np.float64)
        _validate_samples(samples)
        samples.flags.writeable = False
        padded = np.concatenate([[0.0], samples, [0.0, 0.0]])
        padded.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "_padded", padded)

    @property
    def length(self) -> int:
        return len(self.samples)

    def __len__(self) -> int:
        return len(self.samples)


def generate_sine_fragment(cycles: int, samples_per_cycle: int, amplitude: float) -> SignalBuffer:
    """Sinusoid fragment: ``cycles`` repetitions, ``samples_per_cycle`` each.

    sample[k] = amplitude * sin(2*pi * k / samples_per_cycle)
    """
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    if samples_per_cycle < MIN_CUBIC_LENGTH:
        raise ValueError(f"samples_per_cycle must be >= {MIN_CUBIC_LENGTH}, got {samples_per_cycle}")
    if not 0.0 < amplitude <= 1.0:
        raise ValueError(f"amplitude must be in (0, 1], got {amplitude}")
    k = np.arange(samples_per_cycle, dtype=np.float64)
    cycle = amplitude * np.sin(2.0 * math.pi * k / samples_per_cycle)
    # One cycle tiled: bit-exact periodicity, and truer to the ideal
    # values than evaluating sin at ever larger arguments.
    return SignalBuffer(np.tile(cycle, cycles))


def read_cubic(buffer: SignalBuffer, index):
    """Catmull-Rom readout of ``buffer`` at fractional ``index``.

    Accepts a scalar or an ndarray of indices. Indices outside
    [0, length-1] read as exactly 0.0; integer indices return the stored
    sample exactly. Interpolated values may overshoot [-1, 1] between
    knots; clamping is the caller's job at the final output stage.
    """
    idx = np.asarray(index, dtype=np.float64)
    scalar = idx.ndim == 0
    idx = np.atleast_1d(idx)
    out = np.zeros(idx.shape, dtype=np.float64)
    inside = (idx >= 0.0) & (idx <= buffer.length - 1)
    if inside.any():
        x = idx[inside]
        base = np.floor(x).astype(np.intp)
        t = x - base
        pad = buffer._padded
        p0 = pad[base]
        p1 = pad[base + 1]
        p2 = pad[base + 2]
        p3 = pad[base + 3]
        t2 = t * t
        out[inside] = 0.5 * (
            2.0 * p1
            + (p2 - p0) * t
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
            + (3.0 * (p1 - p2) + p3 - p0) * t2 * t
        )
    return float(out[0]) if scalar else out


def load_signal(path) -> SignalBuffer:
    """Load a fragment from a float32 mono WAV or a raw f32-LE file.

    Dispatches on the RIFF magic so uploads and CLI arguments need no
    explicit format flag.
    """
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == b"RIFF":
        return load_wav(path)
    return load_raw_f32(path)


def load_wav(path) -> SignalBuffer:
    _, data = wavfile.read(path)
    if data.ndim != 1:
        raise ValueError(f"signal WAV must be mono, got {data.shape[1]} channels")
    if data.dtype != np.float32:
        raise ValueError(f"signal WAV must be 32-bit float, got dtype {data.dtype}")
    return SignalBuffer(data.astype(np.float64))


def load_raw_f32(path) -> SignalBuffer:
    data = np.fromfile(path, dtype="<f4")
    return SignalBuffer(data.astype(np.float64))


def signal_from_bytes(payload: bytes) -> SignalBuffer:
    """Decode an uploaded fragment (WAV or raw f32-LE) from memory."""
    if payload[:4] == b"RIFF":
        _, data = wavfile.read(io.BytesIO(payload))
        if data.ndim != 1:
            raise ValueError(f"signal WAV must be mono, got {data.shape[1]} channels")
        if data.dtype != np.float32:
            raise ValueError(f"signal WAV must be 32-bit float, got dtype {data.dtype}")
    else:
        data = np.frombuffer(payload, dtype="<f4")
    return SignalBuffer(data.astype(np.float64))


def write_wav(path, samples: np.ndarray, rate: int) -> None:
    wavfile.write(path, rate, np.asarray(samples, dtype=np.float32))


def write_raw_f32(path, samples: np.ndarray) -> None:
    np.asarray(samples, dtype="<f4").tofile(path)
