"""Command-line front end for container inspection, validation, round
trips, event generation, and kernel benchmarking.

Exit codes are a stable contract: 0 ok, 1 I/O, 2 format, 3
validation/layout, 4 round-trip (or differential) mismatch.

The kernels module is imported lazily inside the commands that need it so
that pure container plumbing (inspect/validate/roundtrip) never pays the
JIT-toolchain import cost.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

from .buffers import from_buffers, read_container, to_buffers, write_container
from .errors import (
    FormatError,
    MismatchError,
    MissingBufferError,
    ParseError,
    RagbufError,
    SchemaError,
    SizeError,
    UnsupportedLayoutError,
    ValidationError,
)
from .forms import emit_form
from .layout import to_list

EXIT_OK = 0
EXIT_IO = 1
EXIT_FORMAT = 2
EXIT_VALIDATION = 3
EXIT_MISMATCH = 4

_FORMAT_ERRORS = (FormatError, ParseError, SchemaError, UnsupportedLayoutError)
_VALIDATION_ERRORS = (ValidationError, SizeError, MissingBufferError)


@dataclass
class Report:
    """One run's outcome; serialized as a single JSON object under --json."""

    command: str
    status: str = "ok"
    metrics: dict[str, float] = dataclass_field(default_factory=dict)
    diagnostics: list[str] = dataclass_field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "status": self.status,
                "metrics": self.metrics,
                "diagnostics": self.diagnostics,
            }
        )


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, _FORMAT_ERRORS):
        return EXIT_FORMAT
    if isinstance(exc, _VALIDATION_ERRORS):
        return EXIT_VALIDATION
    if isinstance(exc, MismatchError):
        return EXIT_MISMATCH
    return EXIT_IO


def cmd_inspect(args) -> Report:
    container = read_container(args.path)
    report = Report("inspect")
    form_json = emit_form(container.form)
    report.diagnostics.append(f"form: {form_json}")
    report.metrics["length"] = container.length
    names = container.buffers.names()
    report.metrics["n_buffers"] = len(names)
    report.metrics["total_bytes"] = container.buffers.total_bytes()
    for name in names:
        size = container.buffers.nbytes(name)
        report.metrics[f"bytes.{name}"] = size
        report.diagnostics.append(f"buffer {name}: {size} B")
    return report


def cmd_validate(args) -> Report:
    container = read_container(args.path)
    node = from_buffers(container.form, container.length, container.buffers)
    report = Report("validate")
    report.metrics["length"] = node.length
    report.diagnostics.append("layout valid")
    return report


def cmd_roundtrip(args) -> Report:
    src = Path(args.path).resolve()
    dst = Path(args.out).resolve()
    if src == dst:
        raise FormatError(f"output directory equals input: {dst}")
    container = read_container(args.path)
    node = from_buffers(container.form, container.length, container.buffers)
    rebuilt = to_buffers(node)
    if to_list(rebuilt.to_node()) != to_list(node):
        raise MismatchError("round trip changed the materialized values")
    bytes_copied = container.buffers.copy_counter + rebuilt.buffers.copy_counter
    if bytes_copied != 0:
        raise MismatchError(f"round trip duplicated {bytes_copied} bytes")
    write_container(rebuilt, args.out)
    report = Report("roundtrip")
    report.metrics["length"] = node.length
    report.metrics["bytes_copied"] = bytes_copied
    report.diagnostics.append(f"wrote {args.out}")
    return report


def _load_event_batch(args):
    from . import kernels

    if args.gen is not None:
        return kernels.gen_events(args.gen, args.seed)
    container = read_container(args.path)
    return from_buffers(container.form, container.length, container.buffers)


def cmd_dimuon(args) -> Report:
    from . import kernels

    events = _load_event_batch(args)
    err = kernels.check_event_batch(events)
    if err is not None:
        raise err
    report = Report("dimuon")
    masses = kernels.invariant_mass(events)
    report.metrics["n_events"] = events.length
    report.metrics["n_selected"] = masses.length
    report.diagnostics.append(f"backend: {kernels.active_backend()}")

    if args.bench:
        kernels.invariant_mass(events)  # warm-up: JIT compile outside the clock
        t0 = time.perf_counter()
        columnar = kernels.invariant_mass(events)
        t_columnar = time.perf_counter() - t0
        t0 = time.perf_counter()
        rowwise = kernels.invariant_mass_rowwise(events)
        t_rowwise = time.perf_counter() - t0
        if columnar.length != rowwise.length:
            raise MismatchError(
                f"columnar selected {columnar.length}, row-wise {rowwise.length}"
            )
        a = columnar.data
        b = rowwise.data
        max_rel = float(abs(a - b).max() / abs(b).max()) if a.shape[0] else 0.0
        if max_rel > 1e-12:
            raise MismatchError(f"columnar/row-wise differ by {max_rel:.3e} relative")
        report.metrics["columnar_seconds"] = t_columnar
        report.metrics["rowwise_seconds"] = t_rowwise
        report.metrics["rowwise_over_columnar"] = (
            t_rowwise / t_columnar if t_columnar > 0 else 0.0
        )
        report.metrics["max_rel_diff"] = max_rel

    if args.out:
        write_container(to_buffers(masses), args.out)
        report.diagnostics.append(f"wrote {args.out}")
    return report


def cmd_sum(args) -> Report:
    from . import kernels

    container = read_container(args.path)
    node = from_buffers(container.form, container.length, container.buffers)
    total = kernels.path_length(node)
    report = Report("sum")
    report.metrics["sum"] = total
    report.metrics["length"] = node.length
    report.diagnostics.append(f"sum: {total}")
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ragbuf",
        description="Inspect, validate, round-trip, and benchmark ragged-array buffer containers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="emit one JSON report object")
        p.set_defaults(func=func)
        return p

    p = add("inspect", cmd_inspect, "print form, length, and buffer sizes")
    p.add_argument("path", help="container directory")

    p = add("validate", cmd_validate, "decode the container and check layout invariants")
    p.add_argument("path", help="container directory")

    p = add("roundtrip", cmd_roundtrip, "read, reassemble, and rewrite a container")
    p.add_argument("path", help="input container directory")
    p.add_argument("--out", required=True, help="output container directory")

    p = add("dimuon", cmd_dimuon, "select dimuon invariant masses from an event batch")
    p.add_argument("path", nargs="?", help="event-batch container directory")
    p.add_argument("--gen", type=int, metavar="N", help="generate N synthetic events instead")
    p.add_argument("--seed", type=int, default=0, help="generator seed (with --gen)")
    p.add_argument("--out", help="write selected masses as a container")
    p.add_argument("--bench", action="store_true", help="time columnar vs row-wise")

    p = add("sum", cmd_sum, "ragged sum over a list-offset float64 container")
    p.add_argument("path", help="container directory")

    return parser


def _emit(report: Report, json_mode: bool, stream) -> None:
    if json_mode:
        print(report.to_json(), file=stream)
        return
    for line in report.diagnostics:
        print(line, file=stream)
    for name, value in report.metrics.items():
        print(f"{name}: {value}", file=stream)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "dimuon" and (args.path is None) == (args.gen is None):
        parser.error("dimuon needs a container path or --gen N, not both")
    try:
        report = args.func(args)
    except (RagbufError, OSError) as exc:
        code = _exit_code(exc)
        report = Report(args.command, status="error", diagnostics=[str(exc)])
        _emit(report, args.json, sys.stderr)
        return code
    _emit(report, args.json, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
