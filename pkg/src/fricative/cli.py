"""Command-line front door.

Subcommands: table1, pilot, render, simulate, serve. All offline paths
are deterministic; identical invocations produce byte-identical files.
On failure a single machine-readable line `error: <kind>: <detail>`
goes to stderr and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    format_table1,
    make_pilot_materials,
    mapping_from_args,
    render_offline,
    table1_report,
)
from .motion import TrajectoryError


def _add_mapping_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mapping", type=int, choices=(1, 2, 3), help="pilot mapping preset")
    parser.add_argument("--samples-per-mm", type=float, help="custom mapping density")
    parser.add_argument("--origin-mm", type=float, default=0.0, help="surface position of buffer index 0")


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rate", type=int, default=192000, help="engine rate in Hz (default 192000)")
    parser.add_argument("--out", required=True, help="output file prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fricative", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("table1", help="recompute and check the pilot mapping characterization")

    pilot = sub.add_parser("pilot", help="write the pilot signal, presets and run configs")
    pilot.add_argument("--out-dir", default="pilot_materials", help="output directory")

    render = sub.add_parser("render", help="render a trajectory against a signal file")
    render.add_argument("--signal", required=True, help="signal fragment (float32 mono WAV or raw f32-LE)")
    render.add_argument("--trajectory", required=True, help="trajectory CSV (update_index,dx_counts,dy_counts)")
    render.add_argument("--friction", dest="friction", action="store_true", default=True)
    render.add_argument("--no-friction", dest="friction", action="store_false")
    _add_mapping_args(render)
    _add_common_args(render)

    simulate = sub.add_parser("simulate", help="closed-loop puck simulation against a force profile")
    simulate.add_argument("--signal", required=True)
    simulate.add_argument("--profile", required=True, help="force profile CSV (t_s,F_app_N)")
    simulate.add_argument("--duration", type=float, required=True, help="run duration in seconds")
    simulate.add_argument("--start-mm", type=float, default=0.0, help="puck start position")
    simulate.add_argument("--mass", type=float, default=0.1, help="puck mass in kg")
    simulate.add_argument("--step", type=float, default=0.001, help="integration step in seconds")
    simulate.add_argument("--friction", dest="friction", action="store_true", default=True)
    simulate.add_argument("--no-friction", dest="friction", action="store_false")
    _add_mapping_args(simulate)
    _add_common_args(simulate)

    serve = sub.add_parser("serve", help="start the live streaming service")
    serve.add_argument("--host", default=None, help="bind address (or FRICATIVE_HOST)")
    serve.add_argument("--port", type=int, default=None, help="bind port (or FRICATIVE_PORT)")

    return parser


def _cmd_table1(_args) -> int:
    rows = table1_report()
    print(format_table1(rows))
    return 0 if all(row.matches for row in rows) else 1


def _cmd_pilot(args) -> int:
    for path in make_pilot_materials(args.out_dir):
        print(path)
    return 0


def _cmd_render(args) -> int:
    mapping = mapping_from_args(args.mapping, args.samples_per_mm, args.origin_mm)
    _, paths = render_offline(
        args.signal,
        args.trajectory,
        mapping,
        friction_enabled=args.friction,
        out_prefix=args.out,
        engine_rate=args.rate,
    )
    for path in paths.values():
        print(path)
    return 0


def _cmd_simulate(args) -> int:
    from .sim import SimConfig, read_force_profile_csv, run_closed_loop
    from .signal import load_signal
    from .trace import write_outputs

    mapping = mapping_from_args(args.mapping, args.samples_per_mm, args.origin_mm)
    buffer = load_signal(args.signal)
    profile = read_force_profile_csv(args.profile)
    trace = run_closed_loop(
        profile,
        buffer,
        mapping,
        SimConfig(mass_kg=args.mass, step_s=args.step),
        friction_enabled=args.friction,
        duration_s=args.duration,
        engine_rate=args.rate,
        start_position_mm=args.start_mm,
    )
    trace.meta["signal"] = {"path": str(args.signal), "length": buffer.length}
    for path in write_outputs(trace, args.out).values():
        print(path)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "table1": _cmd_table1,
    "pilot": _cmd_pilot,
    "render": _cmd_render,
    "simulate": _cmd_simulate,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: file-not-found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except TrajectoryError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: invalid-argument: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
