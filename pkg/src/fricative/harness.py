"""Offline front door: pilot materials, mapping table checks, rendering.

Everything here is file-in/file-out and free of randomness, so repeated
invocations are byte-identical.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .friction import FORCE_FLOOR_N
from .mapping import PRESETS, SpatialMapping, preset_mapping
from .motion import SPEED_MAX_MM_S, SPEED_STEP_MM_S, read_trajectory_csv
from .pipeline import RenderPipeline, run_updates
from .signal import (
    PLACEHOLDER_WAV_RATE,
    SignalBuffer,
    generate_sine_fragment,
    load_signal,
    write_wav,
)
from .trace import Trace, write_outputs

PILOT_CYCLES = 240
PILOT_SAMPLES_PER_CYCLE = 100
PILOT_LENGTH = PILOT_CYCLES * PILOT_SAMPLES_PER_CYCLE

# Published characterization of the three pilot mappings, at the
# precision the table displays: cycle width (mm), fragment width (mm),
# audio frequency range (Hz) over the explorable speed range.
TABLE1_EXPECTED = {
    1: {"cycle_width_mm": 0.025, "fragment_width_mm": 6.0, "f_min_hz": 104.0, "f_max_hz": 13360.0},
    2: {"cycle_width_mm": 0.2, "fragment_width_mm": 48.0, "f_min_hz": 13.0, "f_max_hz": 1670.0},
    3: {"cycle_width_mm": 12.5, "fragment_width_mm": 3000.0, "f_min_hz": 0.2, "f_max_hz": 26.7},
}


@dataclass(frozen=True)
class Table1Row:
    preset_id: int
    samples_per_mm: float
    cycle_width_mm: float
    fragment_width_mm: float
    f_min_hz: float
    f_max_hz: float
    matches: bool


def _displayed(value: float, reference: float) -> float:
    """Round ``value`` to the number of decimals ``reference`` displays."""
    text = repr(reference)
    decimals = len(text.split(".")[1]) if "." in text else 0
    return round(value, decimals)


def table1_row(preset_id: int) -> Table1Row:
    preset = PRESETS[preset_id]
    spm = preset.samples_per_mm
    cycle_width = PILOT_SAMPLES_PER_CYCLE / spm
    fragment_width = PILOT_LENGTH / spm
    f_min = SPEED_STEP_MM_S * spm / PILOT_SAMPLES_PER_CYCLE
    f_max = SPEED_MAX_MM_S * spm / PILOT_SAMPLES_PER_CYCLE
    expected = TABLE1_EXPECTED[preset_id]
    matches = (
        _displayed(cycle_width, expected["cycle_width_mm"]) == expected["cycle_width_mm"]
        and _displayed(fragment_width, expected["fragment_width_mm"]) == expected["fragment_width_mm"]
        and _displayed(f_min, expected["f_min_hz"]) == expected["f_min_hz"]
        and _displayed(f_max, expected["f_max_hz"]) == expected["f_max_hz"]
    )
    return Table1Row(preset_id, spm, cycle_width, fragment_width, f_min, f_max, matches)


def table1_report() -> list[Table1Row]:
    """Recompute every mapping characterization from first principles.

    cycle width = samples_per_cycle / samples_per_mm, fragment width =
    length / samples_per_mm, frequency = speed * samples_per_mm /
    samples_per_cycle at the slowest and fastest reportable speeds.
    """
    return [table1_row(pid) for pid in sorted(PRESETS)]


def format_table1(rows: list[Table1Row]) -> str:
    lines = ["mapping  samples/mm  cycle_width_mm  fragment_width_mm  freq_range_hz          check"]
    for row in rows:
        expected = TABLE1_EXPECTED[row.preset_id]
        freq = f"{_displayed(row.f_min_hz, expected['f_min_hz'])} - {_displayed(row.f_max_hz, expected['f_max_hz'])}"
        lines.append(
            f"{row.preset_id:<7}  {row.samples_per_mm:<10g}  "
            f"{_displayed(row.cycle_width_mm, expected['cycle_width_mm']):<14g}  "
            f"{_displayed(row.fragment_width_mm, expected['fragment_width_mm']):<17g}  "
            f"{freq:<21}  {'ok' if row.matches else 'MISMATCH'}"
        )
    return "\n".join(lines)


def pilot_signal():
    """The canonical pilot fragment, quantized to float32 amplitudes.

    Sessions on the built-in pilot and renders of pilot_signal.wav must
    see bit-identical buffers, and the file format is float32.
    """
    ideal = generate_sine_fragment(PILOT_CYCLES, PILOT_SAMPLES_PER_CYCLE, 1.0)
    return SignalBuffer(ideal.samples.astype(np.float32).astype(np.float64))


def render_offline(
    signal_path,
    trajectory_path,
    mapping: SpatialMapping,
    friction_enabled: bool,
    out_prefix: str,
    engine_rate: int = 192000,
    baseline_force_n: float = FORCE_FLOOR_N,
) -> tuple[Trace, dict[str, str]]:
    """Render a recorded trajectory against a signal file to trace files."""
    buffer = load_signal(signal_path)
    updates = read_trajectory_csv(trajectory_path)
    pipeline = RenderPipeline(
        buffer,
        mapping,
        engine_rate=engine_rate,
        friction_enabled=friction_enabled,
        baseline_force_n=baseline_force_n,
    )
    meta = {
        "kind": "offline-render",
        "signal": {"path": str(signal_path), "length": buffer.length},
        "trajectory": {"path": str(trajectory_path), "updates": len(updates)},
        "samples_per_mm": mapping.samples_per_mm,
        "origin_mm": mapping.origin_mm,
        "friction_enabled": friction_enabled,
    }
    trace = run_updates(pipeline, updates, meta=meta)
    paths = write_outputs(trace, out_prefix)
    return trace, paths


def make_pilot_materials(out_dir) -> list[str]:
    """Write the pilot signal, the three presets, and six run configs."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    signal_path = os.path.join(out_dir, "pilot_signal.wav")
    write_wav(signal_path, pilot_signal().samples, PLACEHOLDER_WAV_RATE)
    written.append(signal_path)

    for pid in sorted(PRESETS):
        row = table1_row(pid)
        preset_path = os.path.join(out_dir, f"mapping{pid}.json")
        with open(preset_path, "w") as fh:
            json.dump(
                {
                    "preset": pid,
                    "samples_per_mm": row.samples_per_mm,
                    "cycle_width_mm": row.cycle_width_mm,
                    "fragment_width_mm": row.fragment_width_mm,
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
        written.append(preset_path)

    # 3 mappings x friction {off, on}: each mapping is explored twice.
    for pid in sorted(PRESETS):
        for friction_enabled in (False, True):
            tag = "on" if friction_enabled else "off"
            cond_path = os.path.join(out_dir, f"condition_m{pid}_friction_{tag}.json")
            with open(cond_path, "w") as fh:
                json.dump(
                    {
                        "signal": "pilot_signal.wav",
                        "preset": pid,
                        "samples_per_mm": PRESETS[pid].samples_per_mm,
                        "friction_enabled": friction_enabled,
                        "engine_rate": 192000,
                        "version": __version__,
                    },
                    fh,
                    indent=2,
                    sort_keys=True,
                )
                fh.write("\n")
            written.append(cond_path)
    return written


def mapping_from_args(preset: int | None, samples_per_mm: float | None, origin_mm: float = 0.0) -> SpatialMapping:
    if preset is not None and samples_per_mm is not None:
        raise ValueError("give either a preset or samples_per_mm, not both")
    if preset is not None:
        base = preset_mapping(preset)
        return SpatialMapping(base.samples_per_mm, origin_mm)
    if samples_per_mm is not None:
        return SpatialMapping(samples_per_mm, origin_mm)
    raise ValueError("a mapping preset or samples_per_mm is required")
