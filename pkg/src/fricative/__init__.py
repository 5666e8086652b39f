"""fricative: friction + sound.

Engine for kinetic surface friction rendering of spatially mapped 1D
signals: displacement input conditioning, cubic buffer readout to audio,
a loudness-matched audio-to-friction map, a closed-loop puck simulator,
an offline rendering CLI and a live streaming service.
"""

__version__ = "0.1.0"

from .friction import (
    FORCE_CEIL_N,
    FORCE_FLOOR_N,
    MAP_MAX_N,
    DelayLine,
    EnvelopeFollower,
    align_streams,
    clamp_device,
    force_map,
    window_avg,
)
from .mapping import PRESETS, MappingPreset, SpatialMapping, position_to_index, preset_mapping, render_audio
from .motion import (
    COUNT_MM,
    DisplacementQuantizer,
    DisplacementUpdate,
    MotionState,
    derive_speed,
    quantize_displacement,
    reconstruct_positions,
)
from .pipeline import RenderPipeline, StepResult, run_updates
from .signal import SignalBuffer, generate_sine_fragment, load_signal, read_cubic
from .sim import ForceProfile, PuckState, SimConfig, puck_step, run_closed_loop
from .trace import Trace

__all__ = [
    "__version__",
    "FORCE_CEIL_N",
    "FORCE_FLOOR_N",
    "MAP_MAX_N",
    "COUNT_MM",
    "PRESETS",
    "DelayLine",
    "DisplacementQuantizer",
    "DisplacementUpdate",
    "EnvelopeFollower",
    "ForceProfile",
    "MappingPreset",
    "MotionState",
    "PuckState",
    "RenderPipeline",
    "SignalBuffer",
    "SimConfig",
    "SpatialMapping",
    "StepResult",
    "Trace",
    "align_streams",
    "clamp_device",
    "derive_speed",
    "force_map",
    "generate_sine_fragment",
    "load_signal",
    "position_to_index",
    "preset_mapping",
    "puck_step",
    "quantize_displacement",
    "read_cubic",
    "reconstruct_positions",
    "render_audio",
    "run_closed_loop",
    "run_updates",
    "window_avg",
]
