"""Command-line front end: one subcommand per scenario kind plus ``run``.

Exit codes: 0 on success, 2 for configuration errors, 1 for runtime
failures. The output directory comes from --out-dir, the EDGEGAME_OUT_DIR
environment variable, or ``./out``, in that order of precedence.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .experiments import (
    SCHEMAS,
    ConfigError,
    ScenarioSpec,
    parse_config,
    run_scenario,
    summary_line,
    validate_params,
)

DEFAULT_OUT_DIR = "out"


def _add_kind_parser(subparsers, kind: str) -> None:
    command = kind.replace("_", "-")
    aliases = [kind] if command != kind else []
    sub = subparsers.add_parser(command, aliases=aliases, help=f"run one '{kind}' scenario")
    sub.add_argument("--name", default=kind, help="scenario name (file stem)")
    sub.add_argument("--seed", type=int, default=None, help="master seed")
    sub.add_argument("--out-dir", default=None, help="output directory")
    for key in SCHEMAS[kind]:
        sub.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None, metavar="V")
    sub.set_defaults(kind=kind)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgegame",
        description="Two-community edge-formation game simulator and analysis runner.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for kind in SCHEMAS:
        _add_kind_parser(subparsers, kind)
    run_p = subparsers.add_parser("run", help="run every scenario in a config file")
    run_p.add_argument("config", help="path to the scenario config file")
    run_p.add_argument("--seed", type=int, default=None, help="override every scenario's seed")
    run_p.add_argument("--out-dir", default=None, help="output directory")
    run_p.add_argument("--threads", type=int, default=1, help="parallel scenario workers")
    run_p.set_defaults(command="run")
    return parser


def _out_dir(flag_value: str | None) -> str:
    if flag_value:
        return flag_value
    return os.environ.get("EDGEGAME_OUT_DIR", DEFAULT_OUT_DIR)


def _spec_from_args(args: argparse.Namespace) -> ScenarioSpec:
    raw = {}
    for key in SCHEMAS[args.kind]:
        value = getattr(args, key)
        if value is not None:
            raw[key] = str(value)
    if args.seed is not None:
        raw["seed"] = str(args.seed)
    params = validate_params(args.kind, raw)
    params.pop("out", None)
    return ScenarioSpec(name=args.name, kind=args.kind, params=params)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _run_config(args)
        spec = _spec_from_args(args)
        summary = run_scenario(spec, _out_dir(args.out_dir))
        print(summary_line(summary))
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _run_config(args: argparse.Namespace) -> int:
    path = Path(args.config)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    specs = parse_config(text)
    if args.seed is not None:
        specs = [
            ScenarioSpec(s.name, s.kind, {**s.params, "seed": args.seed}, s.output_path)
            for s in specs
        ]
    out_dir = _out_dir(args.out_dir)
    if args.threads > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            summaries = list(pool.map(lambda s: run_scenario(s, out_dir), specs))
    else:
        summaries = [run_scenario(spec, out_dir) for spec in specs]
    for summary in summaries:
        print(summary_line(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
