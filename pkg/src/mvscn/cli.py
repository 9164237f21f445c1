"""Command-line front end: ``mvscn run|sweep|plot|demo``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from mvscn.codec import Retrieval, activation_to_message, format_message, local_decode, parse_message
from mvscn.core import NetworkConfig, new_network
from mvscn.decoding import Arch, decode
from mvscn.experiment import AXES, run_experiment, with_axis
from mvscn.learning import store
from mvscn.plot import render_svg
from mvscn.presets import PRESETS, Job, preset_jobs
from mvscn.results import (
    ConfigError, format_csv, load_config, parse_config_text, read_csv, result_row,
    spec_from_mapping, write_text_atomic,
)


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        write_text_atomic(output, text)


def _progress(enabled: bool):
    if not enabled:
        return None

    def report(done, total):
        print(f"\r  trials {done}/{total}", end="" if done < total else "\n", file=sys.stderr)

    return report


def _apply_overrides(spec, args):
    changes = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    return replace(spec, **changes) if changes else spec


def _parse_values(text: str, axis: str) -> list:
    text = text.strip()
    if ".." in text and "," not in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    vals = [v.strip() for v in text.split(",") if v.strip()]
    if not vals:
        raise ConfigError("empty value list")
    if axis in ("w_max", "iterations"):
        return [int(v) for v in vals]
    return [float(v) for v in vals]


def _run_jobs(jobs: list[Job], args) -> list[dict]:
    rows = []
    for job in jobs:
        specs = [with_axis(_apply_overrides(job.spec, args), job.axis, v) for v in job.values]
        for spec in specs:
            res = run_experiment(spec, threads=args.threads, progress=_progress(args.progress))
            rows.append(result_row(res))
    return rows


def cmd_run(args) -> int:
    kv = load_config(args.config)
    for item in args.set or []:
        kv.update(parse_config_text(item.replace(",", "\n")))
    spec = _apply_overrides(spec_from_mapping(kv), args)
    res = run_experiment(spec, threads=args.threads, progress=_progress(args.progress))
    _emit(format_csv([result_row(res)]), args.output)
    return 0


def cmd_sweep(args) -> int:
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(f"unknown preset {args.preset!r}; expected one of {', '.join(PRESETS)}")
        jobs = preset_jobs(args.preset, trials=args.trials, seed=args.seed or 0)
    else:
        if not args.config or not args.axis or not args.values:
            raise ConfigError("sweep needs CONFIG, --axis and --values (or --preset)")
        if args.axis not in AXES:
            raise ConfigError(f"unknown axis {args.axis!r}; expected one of {', '.join(AXES)}")
        spec = spec_from_mapping(load_config(args.config))
        jobs = [Job(spec, args.axis, tuple(_parse_values(args.values, args.axis)))]
    rows = _run_jobs(jobs, args)
    _emit(format_csv(rows), args.output)
    return 0


def cmd_plot(args) -> int:
    rows = read_csv(args.csv)
    series = [s for s in (args.series or "").split(",") if s]
    svg = render_svg(rows, args.x, series, y_col=args.y, title=args.title)
    _emit(svg, args.output)
    return 0


def _read_lines(path):
    return [ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
            if ln.strip() and not ln.lstrip().startswith("#")]


def cmd_demo(args) -> int:
    stored = _read_lines(args.store_file)
    queries = _read_lines(args.query_file)
    if not stored:
        raise ConfigError("store file holds no messages")
    c = len(stored[0].split())
    cfg = NetworkConfig(c=c, l=args.l, w_max=args.w_max)
    net = new_network(cfg)
    for line in stored:
        pm = parse_message(line, cfg)
        if pm.erased_positions():
            raise ConfigError(f"stored message may not contain erasures: {line!r}")
        store(net, pm.entries)
    arch = Arch.parse(args.arch)
    for line in queries:
        pm = parse_message(line, cfg)
        res = decode(net, local_decode(pm, cfg), arch, args.iterations)
        out = activation_to_message(res.final, cfg)
        shown = out.value if isinstance(out, Retrieval) else format_message(out)
        print(f"{format_message(pm)} -> {shown}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mvscn", description="Multiple-valued sparse clustered network experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, default=None, help="master seed override")
        sp.add_argument("--trials", type=int, default=None, help="trials per point (default: >= 1e5 queries)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for trials")
        sp.add_argument("--progress", action="store_true", help="print a progress line on stderr")

    r = sub.add_parser("run", help="run one experiment from a config file")
    r.add_argument("config")
    r.add_argument("--set", action="append", metavar="KEY=VALUE", help="override config keys")
    common(r)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="sweep one parameter, or regenerate a figure preset")
    s.add_argument("config", nargs="?")
    s.add_argument("--axis", help=f"one of {', '.join(AXES)}")
    s.add_argument("--values", help="comma list (0.1,0.2) or integer range (1..8)")
    s.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
    common(s)
    s.set_defaults(func=cmd_sweep)

    pl = sub.add_parser("plot", help="render a result CSV as an SVG line chart")
    pl.add_argument("csv")
    pl.add_argument("--x", required=True, help="x column")
    pl.add_argument("--series", default="", help="comma-separated columns identifying a series")
    pl.add_argument("--y", default="mer", help="y column (log axis when mer)")
    pl.add_argument("--title", default=None)
    pl.add_argument("--output", "-o", default=None)
    pl.set_defaults(func=cmd_plot)

    d = sub.add_parser("demo", help="store messages from a file and decode queries")
    d.add_argument("store_file")
    d.add_argument("query_file")
    d.add_argument("--l", type=int, default=16, help="nodes per cluster")
    d.add_argument("--w-max", type=int, default=3)
    d.add_argument("--arch", default="II")
    d.add_argument("--iterations", type=int, default=4)
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as e:
        print(f"mvscn {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
