"""Spatial mapping of the signal buffer onto the surface.

samples_per_mm is the zoom parameter: high densities compress the whole
fragment into a few millimetres (readout reaches audio rates during
movement), low densities stretch single cycles into tactile features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import SignalBuffer, read_cubic


@dataclass(frozen=True)
class SpatialMapping:
    """Buffer-index density over the surface; origin is index 0."""

    samples_per_mm: float
    origin_mm: float = 0.0

    def __post_init__(self):
        if not self.samples_per_mm > 0:
            raise ValueError(f"samples_per_mm must be > 0, got {self.samples_per_mm}")

    def fragment_width_mm(self, buffer: SignalBuffer) -> float:
        return buffer.length / self.samples_per_mm


@dataclass(frozen=True)
class MappingPreset:
    id: int
    samples_per_mm: float


# The three pilot presets (4000 / 500 / 8 samples per mm).
PRESETS = {
    1: MappingPreset(1, 4000.0),
    2: MappingPreset(2, 500.0),
    3: MappingPreset(3, 8.0),
}


def preset_mapping(preset_id: int) -> SpatialMapping:
    try:
        preset = PRESETS[preset_id]
    except KeyError:
        raise ValueError(f"unknown mapping preset {preset_id}, have {sorted(PRESETS)}") from None
    return SpatialMapping(preset.samples_per_mm)


def position_to_index(position_mm, mapping: SpatialMapping):
    """Surface position -> fractional buffer index (scalar or array)."""
    return (position_mm - mapping.origin_mm) * mapping.samples_per_mm


def render_audio(positions: np.ndarray, mapping: SpatialMapping, buffer: SignalBuffer) -> np.ndarray:
    """Read the buffer along a position vector; clamp to full scale.

    Interpolation overshoot must not exceed full scale on the wire, so
    the clamp lives here, after readout and before anything downstream.
    """
    index = position_to_index(np.asarray(positions, dtype=np.float64), mapping)
    return np.clip(read_cubic(buffer, index), -1.0, 1.0)
