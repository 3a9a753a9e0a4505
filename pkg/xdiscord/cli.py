"""Command-line entry point.

    python -m xdiscord compute  --r 0 --s 0 --c 1,-1,1
    python -m xdiscord oracle   --r 0.3 --s 0.15 --c=0.894427,-0.447214,0.5
    python -m xdiscord dynamics --r 0.3 --s 0.15 --c=0.894427,-0.447214,0.5 --events
    python -m xdiscord surface  --r 0.3 --s 0.3 --level 0.03 --output a.obj
    python -m xdiscord geometry --c=0.5,0.25,0.25

Exit status: 0 on success, 1 for a non-physical state, 2 for argument errors.
"""
import argparse
import io
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from .channels import (
    Target,
    apply_phase_flip,
    detect_events,
    p_of_time,
    sweep_dynamics,
    sweep_time,
)
from .config import config
from .correlations import correlation_report, is_separable, quantum_discord
from .errors import DomainError, NonPhysicalStateError, ParameterBoundsError, XDiscordError
from .level_surface import (
    GridSpec,
    Measure,
    extract_isosurface,
    mesh_components,
    region_predicates,
    sample_field,
)
from .logger import log_info, setup_logger
from .measurement_oracle import discord_oracle
from .serialization import to_json, to_plain, write_grid_csv, write_obj, write_trajectory_csv
from .state_core import XStateParams, validate_physical

SUBCOMMANDS = ("compute", "oracle", "dynamics", "surface", "geometry")
FORMATS = {
    "compute": ("json",),
    "oracle": ("json",),
    "dynamics": ("csv", "json"),
    "surface": ("obj", "csv", "json"),
    "geometry": ("json",),
}
OPTION_NAMES = (
    "r", "s", "c", "p", "gamma", "t", "t_max", "grid_n", "refine_depth", "samples",
    "level", "tol", "output", "format", "targets", "measure", "grid_csv", "events",
)

# a triple such as -0.5,-0.5,-0.5 does not look like a negative number to argparse
NEGATIVE_TRIPLE = re.compile(r"^-\.?\d")

EXIT_OK = 0
EXIT_NONPHYSICAL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Invalid combination of options."""


@dataclass
class RunConfig:
    subcommand: str
    params: Optional[XStateParams] = None
    correlations: Optional[Tuple[float, float, float]] = None
    output_path: Optional[str] = None
    format: Optional[str] = None
    grid_n: Optional[int] = None
    refine_depth: Optional[int] = None
    n_samples: Optional[int] = None
    level: Optional[float] = None
    tol: Optional[float] = None
    p: Optional[float] = None
    gamma: Optional[float] = None
    t: Optional[float] = None
    t_max: Optional[float] = None
    targets: Target = Target.BOTH
    measure: Measure = Measure.DISCORD
    grid_csv_path: Optional[str] = None
    events: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        self.format = self.format or FORMATS[self.subcommand][0]
        if self.format not in FORMATS[self.subcommand]:
            raise UsageError(
                f"{self.subcommand} supports --format {', '.join(FORMATS[self.subcommand])}, got {self.format!r}"
            )
        if self.subcommand == "geometry":
            if self.correlations is None:
                raise UsageError("geometry requires --c")
        elif self.params is None and self.subcommand != "surface":
            raise UsageError(f"{self.subcommand} requires --c (and optionally --r, --s)")
        if self.subcommand == "surface" and (self.level is None or self.level <= 0):
            raise UsageError("surface requires a positive --level")
        if self.p is not None and (self.gamma is not None or self.t is not None):
            raise UsageError("give either --p or --gamma/--t, not both")
        if (self.gamma is None) != (self.t is None) and self.subcommand != "dynamics":
            raise UsageError("--gamma and --t must be given together")


def _triple(text) -> Tuple[float, float, float]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    try:
        values = tuple(float(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}") from None
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option values (flags take precedence)")
    common.add_argument("--r", type=float, help="z Bloch component of A")
    common.add_argument("--s", type=float, help="z Bloch component of B")
    common.add_argument("--c", type=_triple, help="correlations c1,c2,c3")
    common.add_argument("--p", type=float, help="phase-flip strength applied before computing")
    common.add_argument("--gamma", type=float, help="phase damping rate")
    common.add_argument("--t", type=float, help="time, p = 1 - exp(-gamma t)")
    common.add_argument("--t-max", dest="t_max", type=float, help="end time of a time-domain dynamics sweep")
    common.add_argument("--grid-n", dest="grid_n", type=int, help="oracle grid or surface grid points per axis")
    common.add_argument("--refine-depth", dest="refine_depth", type=int, help="oracle refinement rounds")
    common.add_argument("--samples", type=int, help="dynamics sweep samples")
    common.add_argument("--level", type=float, help="surface level")
    common.add_argument("--tol", type=float, help="bisection tolerance in p (dynamics) or region tolerance (geometry)")
    common.add_argument("--targets", choices=[t.value for t in Target], help="dephased qubits")
    common.add_argument("--measure", choices=[m.value for m in Measure], help="surface measure")
    common.add_argument("--grid-csv", dest="grid_csv", help="also write raw surface grid samples to this CSV")
    common.add_argument("--events", action="store_true", default=None, help="dynamics: emit the event report")
    common.add_argument("--output", help="output path (default: standard output)")
    common.add_argument("--format", help="output format")
    common.add_argument("--log-level", dest="log_level", default=None, help="logging level")

    parser = argparse.ArgumentParser(
        prog="xdiscord",
        description="Entanglement, classical correlation and quantum discord of two-qubit X states.",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    subparsers.add_parser("compute", parents=[common], help="correlation report for one state")
    subparsers.add_parser("oracle", parents=[common], help="brute-force measurement optimization")
    subparsers.add_parser("dynamics", parents=[common], help="phase-flip sweep and critical points")
    subparsers.add_parser("surface", parents=[common], help="constant-measure level surface")
    subparsers.add_parser("geometry", parents=[common], help="tetrahedron / octahedron membership")
    return parser


def _load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config file {path}: {e}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return {key.replace("-", "_"): value for key, value in data.items()}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge flags over the optional JSON config file."""
    options = _load_config_file(args.config) if args.config else {}
    unknown = set(options) - set(OPTION_NAMES) - {"log_level"}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for name in OPTION_NAMES:
        value = getattr(args, name, None)
        if value is not None:
            options[name] = value

    correlations = None
    if options.get("c") is not None:
        try:
            correlations = _triple(options["c"])
        except argparse.ArgumentTypeError as e:
            raise UsageError(str(e)) from None

    params = None
    if args.subcommand == "surface" and correlations is None:
        # the surface spans c1, c2, c3 itself
        correlations = (0.0, 0.0, 0.0)
    if correlations is not None and args.subcommand != "geometry":
        params = XStateParams(float(options.get("r", 0.0)), float(options.get("s", 0.0)), *correlations)

    try:
        targets = Target(options.get("targets", Target.BOTH.value))
        measure = Measure(options.get("measure", Measure.DISCORD.value))
    except ValueError as e:
        raise UsageError(str(e)) from None

    return RunConfig(
        subcommand=args.subcommand,
        params=params,
        correlations=correlations,
        output_path=options.get("output"),
        format=options.get("format"),
        grid_n=options.get("grid_n"),
        refine_depth=options.get("refine_depth"),
        n_samples=options.get("samples"),
        level=options.get("level"),
        tol=options.get("tol"),
        p=options.get("p"),
        gamma=options.get("gamma"),
        t=options.get("t"),
        t_max=options.get("t_max"),
        targets=targets,
        measure=measure,
        grid_csv_path=options.get("grid_csv"),
        events=bool(options.get("events", False)),
    )


def _channel_applied(cfg: RunConfig) -> Tuple[XStateParams, Optional[float]]:
    p = cfg.p
    if cfg.gamma is not None and cfg.t is not None:
        p = p_of_time(cfg.gamma, cfg.t)
    if p is None:
        return cfg.params, None
    return apply_phase_flip(cfg.params, p, cfg.targets), p


def _compute(cfg: RunConfig) -> str:
    params, p = _channel_applied(cfg)
    report = correlation_report(params)
    payload = {"params": params}
    if p is not None:
        payload["channel"] = {"kind": "phase_flip", "p": p, "targets": cfg.targets}
    payload.update(to_plain(report))
    return to_json(payload)


def _oracle(cfg: RunConfig) -> str:
    params, _ = _channel_applied(cfg)
    result = discord_oracle(params, cfg.grid_n, cfg.refine_depth)
    payload = {"params": params}
    payload.update(to_plain(result))
    payload["analytic_discord"] = quantum_discord(params)
    return to_json(payload)


def _dynamics(cfg: RunConfig) -> str:
    if cfg.events:
        report = detect_events(cfg.params, cfg.targets, cfg.tol, cfg.n_samples)
        return to_json({"params": cfg.params, "targets": cfg.targets, "events": report})

    if cfg.gamma is not None:
        if cfg.t_max is None:
            raise UsageError("a time-domain sweep needs --gamma and --t-max")
        trajectory = sweep_time(cfg.params, cfg.gamma, cfg.t_max, cfg.n_samples, cfg.targets)
    else:
        trajectory = sweep_dynamics(cfg.params, cfg.n_samples, cfg.targets)

    if cfg.format == "json":
        return to_json(trajectory)
    buffer = io.StringIO()
    write_trajectory_csv(trajectory, buffer)
    return buffer.getvalue()


def _surface(cfg: RunConfig) -> str:
    spec = GridSpec(cfg.grid_n or config.surface_grid_n, cfg.params.r, cfg.params.s)
    field_ = sample_field(spec, cfg.measure)

    if cfg.grid_csv_path:
        with open(cfg.grid_csv_path, "w", encoding="utf-8", newline="") as handle:
            write_grid_csv(field_, handle)
        log_info("Grid samples written", path=cfg.grid_csv_path)

    buffer = io.StringIO()
    if cfg.format == "csv":
        write_grid_csv(field_, buffer)
        return buffer.getvalue()

    mesh = extract_isosurface(field_, cfg.level)
    components = mesh_components(mesh)
    log_info("Surface components", components=components)
    if cfg.format == "json":
        return to_json({
            "r": spec.r,
            "s": spec.s,
            "level": cfg.level,
            "measure": mesh.measure,
            "grid_n": spec.n,
            "vertices": len(mesh.vertices),
            "triangles": len(mesh.triangles),
            "boundary_cells": mesh.boundary_cells,
            "components": components,
        })
    write_obj(mesh, buffer)
    return buffer.getvalue()


def _geometry(cfg: RunConfig) -> str:
    c1, c2, c3 = cfg.correlations
    membership = region_predicates(c1, c2, c3, cfg.tol)
    payload = {"c": [c1, c2, c3]}
    payload.update(membership._asdict())
    payload["separable"] = None
    if membership.in_tetrahedron and max(abs(c1), abs(c2), abs(c3)) <= 1.0:
        state = XStateParams.bell_diagonal(c1, c2, c3)
        if validate_physical(state):
            payload["separable"] = is_separable(state)
    return to_json(payload)


HANDLERS = {
    "compute": _compute,
    "oracle": _oracle,
    "dynamics": _dynamics,
    "surface": _surface,
    "geometry": _geometry,
}


def _emit(text: str, output_path: Optional[str]):
    if output_path:
        Path(output_path).write_text(text, encoding="utf-8")
        log_info("Output written", path=output_path)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def run(cfg: RunConfig) -> int:
    """Execute one subcommand and return the exit status."""
    try:
        text = HANDLERS[cfg.subcommand](cfg)
    except NonPhysicalStateError as e:
        print(f"error: non-physical state: {e}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    except (ParameterBoundsError, DomainError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except XDiscordError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    _emit(text, cfg.output_path)
    return EXIT_OK


def attach_negative_triples(argv: List[str]) -> List[str]:
    """Rewrite ``--c -0.5,...`` as ``--c=-0.5,...`` before argparse sees it."""
    joined = []
    k = 0
    while k < len(argv):
        token = argv[k]
        if token == "--c" and k + 1 < len(argv) and NEGATIVE_TRIPLE.match(argv[k + 1]):
            joined.append(f"--c={argv[k + 1]}")
            k += 2
            continue
        joined.append(token)
        k += 1
    return joined


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(attach_negative_triples(sys.argv[1:] if argv is None else list(argv)))
    setup_logger(level=args.log_level or config.log_level, stream=sys.stderr)

    try:
        cfg = config_from_args(args)
    except (ParameterBoundsError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
