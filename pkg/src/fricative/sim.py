"""Physics stand-in for the magnet-on-surface puck.

Integrates the freely movable object under an applied finger force and
the commanded kinetic friction, then feeds the resulting displacement
back through the rendering pipeline, so friction output shapes movement
input exactly as on the real device. Coulomb model with stiction: at
rest the puck stays put until the applied force beats the friction
command; a velocity zero-crossing inside a step clamps to zero rather
than reversing.
"""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass

import numpy as np

from .friction import FORCE_CEIL_N, FORCE_FLOOR_N
from .mapping import SpatialMapping
from .motion import UPDATE_INTERVAL_S, DisplacementQuantizer, DisplacementUpdate
from .pipeline import RenderPipeline
from .signal import SignalBuffer
from .trace import Trace

MM_PER_M = 1000.0


@dataclass(frozen=True)
class PuckState:
    position_mm: float = 0.0
    velocity_mm_s: float = 0.0
    time_s: float = 0.0


@dataclass(frozen=True)
class SimConfig:
    """Dynamics parameters for the stand-in puck; chosen, not measured."""

    mass_kg: float = 0.1
    step_s: float = 0.001
    stiction_ratio: float = 1.0  # static threshold = ratio * kinetic command

    def __post_init__(self):
        if self.mass_kg <= 0:
            raise ValueError(f"mass must be positive, got {self.mass_kg}")
        substeps = UPDATE_INTERVAL_S / self.step_s
        if abs(substeps - round(substeps)) > 1e-9:
            raise ValueError(f"step_s {self.step_s} must divide the 8 ms update interval exactly")

    @property
    def substeps_per_update(self) -> int:
        return round(UPDATE_INTERVAL_S / self.step_s)


def puck_step(state: PuckState, f_app_n: float, f_fric_n: float, cfg: SimConfig) -> PuckState:
    """One semi-implicit Euler step under applied force and friction.

    Accelerations work out in mm/s^2 via 1 N on 0.1 kg = 1e4 mm/s^2.
    """
    if not FORCE_FLOOR_N <= f_fric_n <= FORCE_CEIL_N:
        raise ValueError(f"friction command {f_fric_n} outside device range [{FORCE_FLOOR_N}, {FORCE_CEIL_N}]")
    v = state.velocity_mm_s
    t_next = state.time_s + cfg.step_s
    if v == 0.0 and abs(f_app_n) <= cfg.stiction_ratio * f_fric_n:
        return PuckState(state.position_mm, 0.0, t_next)
    v_eff_sign = math.copysign(1.0, v) if v != 0.0 else math.copysign(1.0, f_app_n)
    accel = (f_app_n - v_eff_sign * f_fric_n) / cfg.mass_kg * MM_PER_M
    v_next = v + accel * cfg.step_s
    if v != 0.0 and v_next != 0.0 and math.copysign(1.0, v_next) != math.copysign(1.0, v):
        v_next = 0.0
    return PuckState(state.position_mm + v_next * cfg.step_s, v_next, t_next)


class ForceProfile:
    """Applied-force schedule with step interpolation (hold until next)."""

    def __init__(self, points: list[tuple[float, float]]):
        if not points:
            raise ValueError("force profile needs at least one point")
        times = [t for t, _ in points]
        if times != sorted(times):
            raise ValueError("force profile times must be non-decreasing")
        self.times = times
        self.forces = [f for _, f in points]

    @classmethod
    def constant(cls, force_n: float) -> "ForceProfile":
        return cls([(0.0, force_n)])

    def value_at(self, t_s: float) -> float:
        i = bisect.bisect_right(self.times, t_s) - 1
        return self.forces[max(i, 0)]


def read_force_profile_csv(path) -> ForceProfile:
    """Read `t_s,F_app_N` rows; each value holds until the next row."""
    points: list[tuple[float, float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t_s", "F_app_N"]:
            raise ValueError("force profile header must be t_s,F_app_N")
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ValueError(f"force profile line {line_no}: expected 2 fields, got {len(row)}")
            try:
                points.append((float(row[0]), float(row[1])))
            except ValueError:
                raise ValueError(f"force profile line {line_no}: non-numeric field in {row!r}") from None
    return ForceProfile(points)


def run_closed_loop(
    profile: ForceProfile,
    buffer: SignalBuffer,
    mapping: SpatialMapping,
    sim: SimConfig,
    friction_enabled: bool,
    duration_s: float,
    engine_rate: int = 192000,
    start_position_mm: float = 0.0,
    baseline_force_n: float = FORCE_FLOOR_N,
) -> Trace:
    """Integrate the puck against the live pipeline for ``duration_s``.

    Each 8 ms frame integrates with the friction command held from the
    previous frame's end (one frame of transport delay), quantizes the
    net displacement to counts with sub-count carry, runs the update
    through the pipeline, and records everything.
    """
    start_counts = round(start_position_mm / 0.02)
    pipeline = RenderPipeline(
        buffer,
        mapping,
        engine_rate=engine_rate,
        friction_enabled=friction_enabled,
        baseline_force_n=baseline_force_n,
        start_position_counts=start_counts,
    )
    quantizer = DisplacementQuantizer()
    # the puck and the reported position agree exactly at session start;
    # the quantizer then carries only per-frame sub-count residuals
    state = PuckState(position_mm=start_counts * 0.02)
    applied_fric = baseline_force_n
    n_frames = round(duration_s / UPDATE_INTERVAL_S)

    audio, friction, positions = [], [], []
    t_s, position_mm, speed, dy = [], [], [], []
    for _ in range(n_frames):
        frame_start_mm = state.position_mm
        for _ in range(sim.substeps_per_update):
            state = puck_step(state, profile.value_at(state.time_s), applied_fric, sim)
        counts = quantizer.push(state.position_mm - frame_start_mm)
        result = pipeline.step(DisplacementUpdate(counts, 0))
        applied_fric = float(result.friction[-1])
        audio.append(result.audio)
        friction.append(result.friction)
        positions.append(result.positions)
        t_s.append(result.t_s)
        position_mm.append(result.position_mm)
        speed.append(result.speed_mm_s)
        dy.append(0)

    meta = {
        "kind": "closed-loop-simulation",
        "friction_enabled": friction_enabled,
        "mass_kg": sim.mass_kg,
        "step_s": sim.step_s,
        "stiction_ratio": sim.stiction_ratio,
        "start_position_mm": start_position_mm,
        "duration_s": duration_s,
        "samples_per_mm": mapping.samples_per_mm,
        "origin_mm": mapping.origin_mm,
    }
    return Trace(
        engine_rate=engine_rate,
        audio=np.concatenate(audio) if audio else np.zeros(0),
        friction=np.concatenate(friction) if friction else np.zeros(0),
        positions=np.concatenate(positions) if positions else np.zeros(0),
        update_t_s=np.array(t_s),
        update_position_mm=np.array(position_mm),
        update_speed_mm_s=np.array(speed),
        update_dy_counts=np.array(dy, dtype=np.int64),
        meta=meta,
    )


def traversal_time_s(trace: Trace, target_mm: float) -> float | None:
    """First per-update time at which position reaches target_mm."""
    for t, x in zip(trace.update_t_s, trace.update_position_mm):
        if x >= target_mm:
            return float(t)
    return None
