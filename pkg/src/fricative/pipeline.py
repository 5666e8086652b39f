"""The per-update rendering pipeline shared by every front end.

Offline rendering, the live streaming service and the closed-loop
simulator all step this one class, one 8 ms displacement update at a
time. That single code path (identical block boundaries, identical
arithmetic) is what makes their output streams bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .friction import (
    FORCE_FLOOR_N,
    DelayLine,
    EnvelopeFollower,
    audio_delay_samples,
    force_map,
)
from .mapping import SpatialMapping, render_audio
from .motion import (
    UPDATE_INTERVAL_S,
    DisplacementUpdate,
    MotionState,
    reconstruct_positions,
    samples_per_update,
)
from .signal import SignalBuffer
from .trace import Trace


@dataclass
class StepResult:
    """Streams and telemetry for one 8 ms update."""

    update_index: int
    t_s: float
    position_mm: float       # count-exact position after the update
    speed_mm_s: float
    audio: np.ndarray        # post-delay, engine rate, K samples
    friction: np.ndarray     # command stream, engine rate, K samples
    positions: np.ndarray    # reconstructed engine-rate positions


class RenderPipeline:
    """Sequential session state: displacement counts in, streams out."""

    def __init__(
        self,
        buffer: SignalBuffer,
        mapping: SpatialMapping,
        engine_rate: int = 192000,
        friction_enabled: bool = True,
        baseline_force_n: float = FORCE_FLOOR_N,
        start_position_counts: int = 0,
    ):
        self.buffer = buffer
        self.mapping = mapping
        self.engine_rate = engine_rate
        self.friction_enabled = friction_enabled
        self.baseline_force_n = baseline_force_n
        self.samples_per_update = samples_per_update(engine_rate)
        self.motion = MotionState(position_counts=start_position_counts)
        self._envelope = EnvelopeFollower(engine_rate)
        self._delay = DelayLine(audio_delay_samples(engine_rate))

    def step(self, update: DisplacementUpdate) -> StepResult:
        index = self.motion.update_index
        prev_mm = self.motion.position_mm
        positions = reconstruct_positions(prev_mm, update, self.engine_rate)
        raw_audio = render_audio(positions, self.mapping, self.buffer)
        if self.friction_enabled:
            friction = force_map(self._envelope.process(raw_audio))
        else:
            friction = np.full(self.samples_per_update, self.baseline_force_n)
        audio = self._delay.process(raw_audio)
        self.motion.apply(update)
        return StepResult(
            update_index=index,
            t_s=index * UPDATE_INTERVAL_S,
            position_mm=self.motion.position_mm,
            speed_mm_s=self.motion.speed_mm_s,
            audio=audio,
            friction=friction,
            positions=positions,
        )


def run_updates(pipeline: RenderPipeline, updates, meta: dict | None = None) -> Trace:
    """Drive a pipeline over a whole update sequence and collect a trace."""
    audio, friction, positions = [], [], []
    t_s, position_mm, speed, dy = [], [], [], []
    for update in updates:
        result = pipeline.step(update)
        audio.append(result.audio)
        friction.append(result.friction)
        positions.append(result.positions)
        t_s.append(result.t_s)
        position_mm.append(result.position_mm)
        speed.append(result.speed_mm_s)
        dy.append(update.dy_counts)
    return Trace(
        engine_rate=pipeline.engine_rate,
        audio=np.concatenate(audio) if audio else np.zeros(0),
        friction=np.concatenate(friction) if friction else np.zeros(0),
        positions=np.concatenate(positions) if positions else np.zeros(0),
        update_t_s=np.array(t_s),
        update_position_mm=np.array(position_mm),
        update_speed_mm_s=np.array(speed),
        update_dy_counts=np.array(dy, dtype=np.int64),
        meta=meta or {},
    )
