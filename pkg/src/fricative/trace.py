"""Time-aligned recordings of a rendered session and their file forms.

A trace keeps the full-rate streams (post-delay audio, friction command)
plus 125 Hz per-update telemetry. On disk that becomes four sidecar
files: the audio WAV and raw-f32 friction at full rate (peak-count style
checks must never run on decimated data), a 1 kHz CSV decimated by
averaging for plotting, and a JSON metadata file.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .signal import write_raw_f32, write_wav

TRACE_ROW_RATE_HZ = 1000


@dataclass
class Trace:
    engine_rate: int
    audio: np.ndarray          # post-delay stream, what the listener hears
    friction: np.ndarray       # command stream, undelayed
    positions: np.ndarray      # engine-rate reconstructed positions (mm)
    update_t_s: np.ndarray     # one row per 8 ms update, t of interval start
    update_position_mm: np.ndarray
    update_speed_mm_s: np.ndarray
    update_dy_counts: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.audio) != len(self.friction):
            raise ValueError("audio and friction streams must have equal length")


def _trace_block(engine_rate: int) -> int:
    if engine_rate % TRACE_ROW_RATE_HZ != 0:
        raise ValueError(
            f"engine rate must be a multiple of {TRACE_ROW_RATE_HZ} Hz for 1 kHz trace rows, got {engine_rate}"
        )
    return engine_rate // TRACE_ROW_RATE_HZ


def trace_rows(trace: Trace):
    """Decimate to 1 kHz rows: (t_s, position_mm, speed_mm_s, audio_rms_1ms, friction_N).

    Friction decimates by averaging (not sampling); audio reduces to its
    RMS per block; position samples the block end; speed holds the
    update's quantized value.
    """
    block = _trace_block(trace.engine_rate)
    rows_per_update = trace.engine_rate // 125 // block
    n_rows = len(trace.audio) // block
    t_s = np.arange(n_rows) / TRACE_ROW_RATE_HZ
    audio_blocks = trace.audio[: n_rows * block].reshape(n_rows, block)
    friction_blocks = trace.friction[: n_rows * block].reshape(n_rows, block)
    position = trace.positions[block - 1 :: block][:n_rows]
    speed = np.repeat(trace.update_speed_mm_s, rows_per_update)[:n_rows]
    audio_rms = np.sqrt(np.mean(audio_blocks * audio_blocks, axis=1))
    friction_mean = np.mean(friction_blocks, axis=1)
    return t_s, position, speed, audio_rms, friction_mean


def write_trace_csv(path, trace: Trace) -> None:
    columns = trace_rows(trace)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_s", "position_mm", "speed_mm_s", "audio_rms_1ms", "friction_N"])
        for row in zip(*columns):
            writer.writerow([repr(float(v)) for v in row])


def read_trace_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                data[name].append(float(value))
    return {name: np.array(values) for name, values in data.items()}


def write_outputs(trace: Trace, out_prefix: str) -> dict[str, str]:
    """Write the four sidecar files for one rendered trace."""
    _trace_block(trace.engine_rate)  # fail before touching any file
    paths = {
        "audio": f"{out_prefix}.audio.wav",
        "friction": f"{out_prefix}.friction.f32",
        "trace": f"{out_prefix}.trace.csv",
        "meta": f"{out_prefix}.meta.json",
    }
    write_wav(paths["audio"], trace.audio, trace.engine_rate)
    write_raw_f32(paths["friction"], trace.friction)
    write_trace_csv(paths["trace"], trace)
    meta = dict(trace.meta)
    meta.setdefault("engine_rate", trace.engine_rate)
    meta.setdefault("version", __version__)
    meta["files"] = {k: v for k, v in paths.items() if k != "meta"}
    with open(paths["meta"], "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths
