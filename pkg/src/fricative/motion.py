"""Displacement input conditioning and trajectory reconstruction.

The device reports displacement in integer counts of 0.02 mm at a fixed
125 Hz cadence. Position is accumulated in integer counts (bit
reproducible over arbitrarily long sessions) and converted to mm at the
boundary. The speed telemetry lives on its own 2.6 mm/s grid, clamped to
+-334 mm/s; the displacement and speed grids are independently specified
and do not mesh (2.5 vs 2.6 mm/s per count), which is kept as-is.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

COUNT_MM = 0.02
UPDATE_RATE_HZ = 125
UPDATE_INTERVAL_S = 0.008
SPEED_STEP_MM_S = 2.6
SPEED_MAX_MM_S = 334.0


class TrajectoryError(ValueError):
    """Malformed trajectory input; carries the offending 1-based line."""

    def __init__(self, message: str, line: int | None = None, kind: str = "malformed-trajectory"):
        self.line = line
        self.kind = kind
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class DisplacementUpdate:
    """One 8 ms displacement report. dy is carried but never mapped."""

    dx_counts: int
    dy_counts: int = 0

    @property
    def dx_mm(self) -> float:
        return self.dx_counts * COUNT_MM

    @property
    def dy_mm(self) -> float:
        return self.dy_counts * COUNT_MM


@dataclass
class MotionState:
    """Running input-side state of one session pipeline (single writer)."""

    position_counts: int = 0
    dy_counts_total: int = 0
    update_index: int = 0
    speed_mm_s: float = 0.0

    @property
    def position_mm(self) -> float:
        return self.position_counts * COUNT_MM

    def apply(self, update: DisplacementUpdate) -> None:
        self.position_counts += update.dx_counts
        self.dy_counts_total += update.dy_counts
        self.update_index += 1
        self.speed_mm_s = derive_speed(update)


def round_half_away(x: float) -> int:
    """Round to nearest integer, ties away from zero."""
    if x >= 0.0:
        return int(math.floor(x + 0.5))
    return int(math.ceil(x - 0.5))


def quantize_displacement(raw_dx_mm: float) -> int:
    """Quantize a displacement to integer 0.02 mm counts.

    The sub-count residual is the caller's to carry forward (see
    :class:`DisplacementQuantizer` and the closed-loop simulator).
    """
    if not math.isfinite(raw_dx_mm):
        raise ValueError(f"displacement must be finite, got {raw_dx_mm}")
    return round_half_away(raw_dx_mm / COUNT_MM)


class DisplacementQuantizer:
    """Count quantizer that carries the sub-count residual between calls."""

    def __init__(self):
        self.residual_mm = 0.0

    def push(self, raw_dx_mm: float) -> int:
        counts = quantize_displacement(self.residual_mm + raw_dx_mm)
        self.residual_mm = self.residual_mm + raw_dx_mm - counts * COUNT_MM
        return counts


def quantize_speed(raw_mm_s: float) -> float:
    """Snap a raw speed to the 2.6 mm/s grid, clamped to +-334 mm/s.

    Saturated output is exactly +-334.0, which is not itself a 2.6
    multiple; the source constants disagree and both are kept.
    """
    stepped = round_half_away(raw_mm_s / SPEED_STEP_MM_S) * SPEED_STEP_MM_S
    return min(SPEED_MAX_MM_S, max(-SPEED_MAX_MM_S, stepped))


def derive_speed(update: DisplacementUpdate) -> float:
    """Speed telemetry for one update: dx over the 8 ms interval, gridded."""
    return quantize_speed(update.dx_mm / UPDATE_INTERVAL_S)


def samples_per_update(engine_rate: int) -> int:
    if engine_rate <= 0 or engine_rate % UPDATE_RATE_HZ != 0:
        raise ValueError(f"engine rate must be a positive multiple of {UPDATE_RATE_HZ} Hz, got {engine_rate}")
    return engine_rate // UPDATE_RATE_HZ


def interpolate_interval(prev_position_mm: float, dx_mm: float, engine_rate: int) -> np.ndarray:
    """Linearly interpolate one update interval at engine rate.

    Returns K = engine_rate/125 samples; sample j (1-based) sits at
    prev + dx * j/K, so the final sample lands on prev + dx exactly.
    """
    k = samples_per_update(engine_rate)
    ramp = np.arange(1, k + 1, dtype=np.float64) / k
    return prev_position_mm + dx_mm * ramp


def reconstruct_positions(prev_position_mm: float, update: DisplacementUpdate, engine_rate: int) -> np.ndarray:
    return interpolate_interval(prev_position_mm, update.dx_mm, engine_rate)


def read_trajectory_csv(path) -> list[DisplacementUpdate]:
    """Read `update_index,dx_counts,dy_counts` rows, one per 8 ms.

    Row 0 is t = 0; update_index must run 0, 1, 2, ... without gaps
    (anything else is a cadence violation).
    """
    updates: list[DisplacementUpdate] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TrajectoryError("empty trajectory file", line=1) from None
        expected = ["update_index", "dx_counts", "dy_counts"]
        if [h.strip() for h in header] != expected:
            raise TrajectoryError(f"header must be {','.join(expected)}", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise TrajectoryError(f"expected 3 fields, got {len(row)}", line=line_no)
            try:
                index, dx, dy = (int(field.strip()) for field in row)
            except ValueError:
                raise TrajectoryError(f"non-integer field in {row!r}", line=line_no) from None
            if index != len(updates):
                raise TrajectoryError(
                    f"update_index {index} breaks the 125 Hz cadence (expected {len(updates)})",
                    line=line_no,
                    kind="cadence-violation",
                )
            updates.append(DisplacementUpdate(dx, dy))
    return updates


def write_trajectory_csv(path, updates: list[DisplacementUpdate]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["update_index", "dx_counts", "dy_counts"])
        for i, update in enumerate(updates):
            writer.writerow([i, update.dx_counts, update.dy_counts])
