"""Scenario definitions, config parsing, and batch execution.

A plain-text config holds one ``[scenario <name>]`` section per run with
``key = value`` lines. The schema is closed: unknown keys, bad types, and
missing required keys are hard errors that name the offending line. Each
scenario writes a data CSV plus a JSON summary into the output directory;
re-running a scenario with the same spec reproduces the files bit for bit
(the one exception is the benchmark's wall-time column).
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .dynamics import (
    Protocol,
    ProtocolConfig,
    SemiMarkovChain,
    TraceRecord,
    format_float,
    run_protocol,
    verify_myopic_optimality,
    write_trace_csv,
)
from .blockmodel import StrategyPair, block_matrix, sample_snapshot
from .game import iterated_dominance, nash_equilibrium
from .opinion import OpinionConfig, run_opinion, tail_mean_segregation, write_opinion_csv
from .recommender import RecommenderConfig, run_recommender
from .seeding import child_seed, substream


class ConfigError(Exception):
    """Raised for any malformed scenario configuration."""


# --- schema ---------------------------------------------------------------

_REQUIRED = object()


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(","))


def _parse_matrix(text: str) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(x) for x in row.split(",")) for row in text.split(";"))


_PARSERS: dict[str, Callable[[str], object]] = {
    "int": int,
    "float": float,
    "bool": _parse_bool,
    "str": str.strip,
    "floats": _parse_floats,
    "ints": _parse_ints,
    "matrix": _parse_matrix,
}

_COMMON_KEYS: dict[str, tuple[str, object]] = {
    "seed": ("int", 0),
    "out": ("str", None),
}

# Per-kind keys: name -> (type, default). Defaults for protocol2 are the
# headline desk-scale setting (n=20, horizon=20, c=0.8).
SCHEMAS: dict[str, dict[str, tuple[str, object]]] = {
    "nash": {"c": ("float", 0.8)},
    "protocol1": {"n": ("int", 20), "horizon": ("int", 20)},
    "protocol2": {"n": ("int", 20), "horizon": ("int", 20), "c": ("float", 0.8)},
    "protocol3": {
        "n": ("int", 20),
        "horizon": ("int", 1000),
        "c_states": ("floats", (0.6, 0.8, 1.0)),
        "transition": ("matrix", None),
        "holding_time": ("int", 100),
        "initial_state": ("int", 0),
    },
    "sweep_c": {
        "n": ("int", 20),
        "horizon": ("int", 20),
        "c_grid": ("floats", (0.6, 0.7, 0.8, 0.9, 1.0)),
        "seeds": ("int", 50),
    },
    "opinion": {
        "n_agents": ("int", 100),
        "radius": ("float", 0.175),
        "learning_rate": ("float", 0.05),
        "exploration": ("float", 0.1),
        "c": ("float", 0.9),
        "with_recommender": ("bool", True),
        "horizon": ("int", 20000),
        "record_every": ("int", 100),
    },
    "bench": {
        "sizes": ("ints", (100, 200, 400, 800)),
        "p": ("float", 0.75),
        "repeats": ("int", 3),
        "c": ("float", 0.8),
    },
    "verify_myopic": {
        "c_states": ("floats", (0.6, 0.9)),
        "transition": ("matrix", ((0.5, 0.5), (0.5, 0.5))),
        "holding_time": ("int", 1),
        "initial_state": ("int", 0),
        "gamma": ("float", 0.9),
        "grid": ("int", 201),
        "horizon": ("int", 50),
    },
}


@dataclass(frozen=True)
class ScenarioSpec:
    """A named, fully-typed scenario ready to run."""

    name: str
    kind: str
    params: dict
    output_path: str | None = None


@dataclass
class RunSummary:
    """What a scenario produced, with an independent equilibrium reference.

    ``reference_p`` always comes from ``nash_equilibrium``, never from the
    trace; ``max_deviation`` is the largest distance of either strategy
    from the per-step reference over the trace tail (t > horizon/2).
    ``wall_time_s`` is kept out of the on-disk summary so files stay
    reproducible.
    """

    scenario: str
    kind: str
    seed: int
    final_p_r: float | None = None
    final_p_b: float | None = None
    final_segregation: float | None = None
    reference_p: float | None = None
    max_deviation: float | None = None
    wall_time_s: float = 0.0
    extras: dict = field(default_factory=dict)
    files: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        def round9(x):
            return None if x is None else float(format_float(x))

        payload = {
            "scenario": self.scenario,
            "kind": self.kind,
            "seed": self.seed,
            "final_p_r": round9(self.final_p_r),
            "final_p_b": round9(self.final_p_b),
            "final_segregation": round9(self.final_segregation),
            "reference_p": round9(self.reference_p),
            "max_deviation": round9(self.max_deviation),
            "extras": self.extras,
            "files": sorted(self.files),
        }
        return payload


def validate_params(kind: str, raw: dict[str, str], lines: dict[str, int] | None = None) -> dict:
    """Type-check raw string params against the schema for ``kind``."""
    if kind not in SCHEMAS:
        raise ConfigError(f"unknown scenario kind {kind!r}; known: {sorted(SCHEMAS)}")
    schema = dict(_COMMON_KEYS)
    schema.update(SCHEMAS[kind])
    lines = lines or {}
    params: dict = {}
    for key, text in raw.items():
        where = f" (line {lines[key]})" if key in lines else ""
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} for kind {kind!r}{where}")
        type_name, _ = schema[key]
        try:
            params[key] = _PARSERS[type_name](text)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}{where}") from None
    for key, (_, default) in schema.items():
        if key in params:
            continue
        if default is _REQUIRED:
            raise ConfigError(f"missing required key {key!r} for kind {kind!r}")
        params[key] = default
    return params


def parse_config(text: str) -> list[ScenarioSpec]:
    """Parse a scenario file into validated specs.

    Sections start with ``[scenario <name>]``; lines are ``key = value``;
    blank lines and ``#`` comments are ignored. Every error names the line
    it came from.
    """
    specs: list[ScenarioSpec] = []
    seen_names: set[str] = set()
    name = None
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    section_line = 0

    def finish():
        if name is None:
            return
        if "kind" not in raw:
            raise ConfigError(f"scenario {name!r} (line {section_line}) is missing 'kind'")
        kind = raw.pop("kind").strip()
        lines.pop("kind", None)
        if kind not in SCHEMAS:
            raise ConfigError(
                f"unknown scenario kind {kind!r} in scenario {name!r} (line {section_line})"
            )
        params = validate_params(kind, raw, lines)
        out = params.pop("out")
        specs.append(ScenarioSpec(name=name, kind=kind, params=params, output_path=out))

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("["):
            if not (stripped.endswith("]") and stripped[1:-1].startswith("scenario ")):
                raise ConfigError(f"bad section header on line {lineno}: {stripped!r}")
            finish()
            name = stripped[1:-1][len("scenario "):].strip()
            if not name:
                raise ConfigError(f"empty scenario name on line {lineno}")
            if name in seen_names:
                raise ConfigError(f"duplicate scenario name {name!r} on line {lineno}")
            seen_names.add(name)
            raw, lines, section_line = {}, {}, lineno
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value' on line {lineno}: {stripped!r}")
        if name is None:
            raise ConfigError(f"line {lineno} appears before any [scenario ...] header")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in raw:
            raise ConfigError(f"duplicate key {key!r} on line {lineno}")
        raw[key] = value.strip()
        lines[key] = lineno
    finish()
    return specs


# --- execution --------------------------------------------------------------


def _uniform_matrix(k: int) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(1.0 / k for _ in range(k)) for _ in range(k))


def build_chain(params: dict) -> SemiMarkovChain:
    states = params["c_states"]
    transition = params["transition"]
    if transition is None:
        transition = _uniform_matrix(len(states))
    try:
        return SemiMarkovChain(
            states=states,
            transition=transition,
            holding_time=params["holding_time"],
            initial_state=params["initial_state"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _trace_deviation(records: list[TraceRecord], reference_of_c) -> float:
    tail = [r for r in records if r.t > records[-1].t // 2]
    dev = 0.0
    for r in tail:
        ref = reference_of_c(r)
        dev = max(dev, abs(r.p_r - ref), abs(r.p_b - ref))
    return dev


def _write_rows(path: Path, header: tuple[str, ...], rows: list[list]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def run_scenario(spec: ScenarioSpec, out_dir: str | Path = ".") -> RunSummary:
    """Execute one scenario and write its data CSV and JSON summary."""
    t0 = time.perf_counter()
    base = Path(spec.output_path) if spec.output_path else Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)
    seed = spec.params.get("seed", 0)
    summary = RunSummary(scenario=spec.name, kind=spec.kind, seed=seed)
    csv_path = base / f"{spec.name}.csv"

    if spec.kind == "nash":
        result = nash_equilibrium(spec.params["c"])
        summary.final_p_r = result.strategy.p_r
        summary.final_p_b = result.strategy.p_b
        summary.reference_p = result.strategy.p_r
        summary.max_deviation = 0.0
        summary.extras = {"regime": result.regime.value, "c": spec.params["c"]}
        rows: list[list] = []
        if result.regime.value == "integration":
            for it, (lo, hi) in enumerate(iterated_dominance(spec.params["c"], 60), start=1):
                rows.append([it, format_float(lo), format_float(hi)])
        else:
            rows.append([1, format_float(1.0), format_float(1.0)])
        _write_rows(csv_path, ("iteration", "b_low", "b_high"), rows)
        summary.files.append(csv_path.name)

    elif spec.kind in ("protocol1", "protocol2", "protocol3"):
        cfg = _protocol_config(spec.kind, spec.params, seed)
        records = run_protocol(cfg)
        with csv_path.open("w", encoding="utf-8", newline="") as fp:
            write_trace_csv(records, fp)
        summary.files.append(csv_path.name)
        last = records[-1]
        summary.final_p_r = last.p_r
        summary.final_p_b = last.p_b
        summary.final_segregation = last.segregation
        if spec.kind == "protocol1":
            summary.reference_p = 1.0
            summary.max_deviation = _trace_deviation(records, lambda r: 1.0)
        elif spec.kind == "protocol2":
            ref = nash_equilibrium(spec.params["c"]).strategy.p_r
            summary.reference_p = ref
            summary.max_deviation = _trace_deviation(records, lambda r: ref)
        else:
            summary.reference_p = nash_equilibrium(last.acceptance_probability).strategy.p_r
            summary.max_deviation = _trace_deviation(
                records, lambda r: nash_equilibrium(r.acceptance_probability).strategy.p_r
            )

    elif spec.kind == "sweep_c":
        rows = []
        tails = {}
        for c_idx, c in enumerate(spec.params["c_grid"]):
            per_seed = []
            for rep in range(spec.params["seeds"]):
                run_seed = child_seed(seed, "sweep", c_idx, rep)
                cfg = ProtocolConfig(
                    protocol=Protocol.P2,
                    n_per_community=spec.params["n"],
                    horizon=spec.params["horizon"],
                    recommender=RecommenderConfig(c),
                    seed=run_seed,
                )
                records = run_protocol(cfg)
                tail = [r.segregation for r in records if r.t > records[-1].t // 2]
                per_seed.append(float(np.mean(tail)))
            tails[c] = float(np.mean(per_seed))
            ref = nash_equilibrium(c).strategy.p_r
            rows.append([format_float(c), format_float(tails[c]), format_float(ref)])
        _write_rows(csv_path, ("c", "mean_tail_segregation", "nash_p"), rows)
        summary.files.append(csv_path.name)
        summary.extras = {"mean_tail_segregation": {format_float(c): v for c, v in tails.items()}}

    elif spec.kind == "opinion":
        cfg = OpinionConfig(
            n_agents=spec.params["n_agents"],
            radius=spec.params["radius"],
            learning_rate=spec.params["learning_rate"],
            exploration=spec.params["exploration"],
            acceptance=spec.params["c"],
            with_recommender=spec.params["with_recommender"],
            horizon=spec.params["horizon"],
            record_every=spec.params["record_every"],
            seed=seed,
        )
        records = run_opinion(cfg)
        with csv_path.open("w", encoding="utf-8", newline="") as fp:
            write_opinion_csv(records, fp)
        summary.files.append(csv_path.name)
        summary.final_segregation = records[-1].segregation
        summary.extras = {
            "tail_mean_segregation": tail_mean_segregation(records),
            "with_recommender": cfg.with_recommender,
        }

    elif spec.kind == "bench":
        sizes = list(spec.params["sizes"])
        pair = StrategyPair(spec.params["p"], spec.params["p"])
        rec_cfg = RecommenderConfig(spec.params["c"])
        graphs = {}
        outcomes = {}
        for n in sizes:
            graphs[n] = sample_snapshot(block_matrix(pair, n), n, substream(seed, "bench", n))
            # warmup pass doubles as the deterministic outcome record
            outcomes[n] = run_recommender(graphs[n], rec_cfg, substream(seed, "bench", n, "pass"))
        # rounds are interleaved across sizes and the per-size minimum kept,
        # so machine-load swings cannot distort one size's ratio
        seconds = {n: float("inf") for n in sizes}
        for _ in range(spec.params["repeats"]):
            for n in sizes:
                pass_rng = substream(seed, "bench", n, "pass")
                start = time.perf_counter()
                run_recommender(graphs[n], rec_cfg, pass_rng)
                seconds[n] = min(seconds[n], time.perf_counter() - start)
        rows = [
            [n, format_float(seconds[n]), len(outcomes[n].recommended), len(outcomes[n].accepted)]
            for n in sizes
        ]
        _write_rows(csv_path, ("n", "seconds", "recommended", "accepted"), rows)
        summary.files.append(csv_path.name)
        ratios = [seconds[b] / seconds[a] for a, b in zip(sizes, sizes[1:])]
        summary.extras = {"ratios": [float(format_float(r)) for r in ratios]}

    elif spec.kind == "verify_myopic":
        chain = build_chain(spec.params)
        report = verify_myopic_optimality(
            chain, spec.params["gamma"], spec.params["grid"], spec.params["horizon"]
        )
        rows = [
            [idx, format_float(c), format_float(a)]
            for idx, (c, a) in enumerate(zip(chain.states, report.myopic_actions))
        ]
        _write_rows(csv_path, ("state", "c", "myopic_action"), rows)
        summary.files.append(csv_path.name)
        summary.extras = {
            "myopic_value": float(format_float(report.myopic_value)),
            "dp_value": float(format_float(report.dp_value)),
            "gap": float(format_float(report.gap)),
        }

    else:  # pragma: no cover - guarded by validate_params
        raise ConfigError(f"unknown scenario kind {spec.kind!r}")

    summary.wall_time_s = time.perf_counter() - t0
    summary_path = base / f"{spec.name}.summary.json"
    with summary_path.open("w", encoding="utf-8") as fp:
        json.dump(summary.to_json_dict(), fp, indent=2, sort_keys=True)
        fp.write("\n")
    summary.files.append(summary_path.name)
    return summary


def _protocol_config(kind: str, params: dict, seed: int) -> ProtocolConfig:
    if kind == "protocol1":
        return ProtocolConfig(
            protocol=Protocol.P1,
            n_per_community=params["n"],
            horizon=params["horizon"],
            seed=seed,
        )
    if kind == "protocol2":
        return ProtocolConfig(
            protocol=Protocol.P2,
            n_per_community=params["n"],
            horizon=params["horizon"],
            recommender=RecommenderConfig(params["c"]),
            seed=seed,
        )
    return ProtocolConfig(
        protocol=Protocol.P3,
        n_per_community=params["n"],
        horizon=params["horizon"],
        chain=build_chain(params),
        seed=seed,
    )


def summary_line(summary: RunSummary) -> str:
    parts = [f"scenario={summary.scenario}", f"kind={summary.kind}", f"seed={summary.seed}"]
    if summary.final_p_r is not None:
        parts.append(f"p=({format_float(summary.final_p_r)}, {format_float(summary.final_p_b)})")
    if summary.final_segregation is not None:
        parts.append(f"segregation={format_float(summary.final_segregation)}")
    if summary.reference_p is not None:
        parts.append(f"reference={format_float(summary.reference_p)}")
    if summary.max_deviation is not None:
        parts.append(f"max_dev={format_float(summary.max_deviation)}")
    parts.append(f"wall={summary.wall_time_s:.3f}s")
    return "  ".join(parts)
