"""Command-line entry points.

Four subcommands:

    sim         replay an event script against a scenario, write the transcript
    experiment  run a synthetic cohort and write the full report
    stats       run one analysis over a CSV matrix and write the result
    serve       start the live session service

``sim``, ``experiment``, and ``stats`` call the core directly and write
canonical JSON (sorted keys, two-space indent, trailing newline), so the
same inputs always produce the same output bytes.  ``serve`` wraps the
HTTP service; the default port comes from ``GLOVESIM_PORT``.

Script grammar for ``sim``, one statement per line:

    tick <dt_ms>
    read <uid_hex> [latency_ms]
    button
    input <label...>

Blank lines and ``#`` comments are ignored.  Parse errors cite the line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any

from .device import ButtonDown, DeviceConfig, Event, RecordingInput, TagRead, Tick, run_script
from .experiments import ExperimentSpec, report_to_json_bytes, run_experiment, write_report
from .metrics import (
    cronbach_alpha,
    cv,
    paired_t_test,
    read_matrix_csv,
    result_to_dict,
    rm_anova_gg,
)
from .scene import load_scene
from .tagdb import TagDatabase, TagUid, make_clip
from .transcript import entry_to_wire, summary

DEFAULT_PORT = 8741
PORT_ENV_VAR = "GLOVESIM_PORT"


class ScriptError(ValueError):
    pass


def parse_script(text: str) -> list[Event]:
    """Parse the event-script grammar; errors carry 1-based line numbers."""
    events: list[Event] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if op == "tick":
                events.append(Tick(int(rest)))
            elif op == "read":
                parts = rest.split()
                if len(parts) not in (1, 2):
                    raise ValueError("read takes a uid and an optional latency")
                latency = float(parts[1]) if len(parts) == 2 else 0.0
                events.append(TagRead(TagUid.from_hex(parts[0]), latency_ms=latency))
            elif op == "button":
                if rest:
                    raise ValueError("button takes no arguments")
                events.append(ButtonDown())
            elif op == "input":
                if not rest:
                    raise ValueError("input needs a label")
                events.append(RecordingInput(label=rest))
            else:
                raise ValueError(f"unknown statement '{op}'")
        except (ValueError, TypeError) as exc:
            raise ScriptError(f"line {lineno}: {exc}") from None
    return events


def _canonical_json_bytes(doc: Any) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def cmd_sim(args: argparse.Namespace) -> int:
    scene = load_scene(args.scenario)
    events = parse_script(Path(args.script).read_text(encoding="utf-8"))
    db = TagDatabase()
    for uid, label in scene.labels_by_uid().items():
        db.bind(uid, make_clip(label, duration_ms=1000))
    transcript, _ = run_script(events, DeviceConfig(), db)
    doc = {
        "summary": summary(transcript),
        "entries": [entry_to_wire(e) for e in transcript.entries],
    }
    Path(args.out).write_bytes(_canonical_json_bytes(doc))
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    spec = ExperimentSpec(
        test_id=args.test,
        n_participants=args.n,
        seed=args.seed,
        scene_seed=args.scene_seed,
    )
    report = run_experiment(spec)
    if args.out == "-":
        sys.stdout.buffer.write(report_to_json_bytes(report))
    else:
        write_report(report, args.out)
    return 0


_ANALYSES = ("ttest", "anova", "alpha", "cv")


def cmd_stats(args: argparse.Namespace) -> int:
    header, matrix = read_matrix_csv(args.csv)
    columns = [list(col) for col in zip(*matrix)] if matrix else []
    if args.analysis == "ttest":
        if len(header) != 2:
            raise ValueError(f"ttest needs exactly 2 columns, got {len(header)}")
        result = paired_t_test(columns[0], columns[1])
    elif args.analysis == "anova":
        result = rm_anova_gg(matrix)
    elif args.analysis == "alpha":
        result = cronbach_alpha(matrix)
    else:
        if len(header) != 1:
            raise ValueError(f"cv needs exactly 1 column, got {len(header)}")
        result = cv(columns[0])
    doc = {
        "analysis": args.analysis,
        "columns": header,
        "n_rows": len(matrix),
        "result": result_to_dict(result),
    }
    blob = _canonical_json_bytes(doc)
    if args.out == "-":
        sys.stdout.buffer.write(blob)
    else:
        Path(args.out).write_bytes(blob)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def _default_port() -> int:
    raw = os.environ.get(PORT_ENV_VAR, "")
    try:
        return int(raw) if raw else DEFAULT_PORT
    except ValueError:
        return DEFAULT_PORT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glovesim", description="assistive-glove simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("sim", help="replay an event script against a scenario")
    p_sim.add_argument("--scenario", required=True, help="scene JSON file")
    p_sim.add_argument("--script", required=True, help="event script file")
    p_sim.add_argument("--out", required=True, help="transcript JSON output path")
    p_sim.set_defaults(func=cmd_sim)

    p_exp = sub.add_parser("experiment", help="run a synthetic cohort")
    p_exp.add_argument("--test", type=int, required=True, choices=(1, 2, 3, 4))
    p_exp.add_argument("--n", type=int, default=17, help="cohort size")
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--scene-seed", type=int, default=0, dest="scene_seed")
    p_exp.add_argument("--out", required=True, help="report JSON path, or - for stdout")
    p_exp.set_defaults(func=cmd_experiment)

    p_stats = sub.add_parser("stats", help="analyze a CSV matrix")
    p_stats.add_argument("--csv", required=True, help="input CSV (header + rows)")
    p_stats.add_argument("--analysis", required=True, choices=_ANALYSES)
    p_stats.add_argument("--out", required=True, help="result JSON path, or - for stdout")
    p_stats.set_defaults(func=cmd_stats)

    p_serve = sub.add_parser("serve", help="start the session service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=_default_port())
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
