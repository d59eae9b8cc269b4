"""Command-line entry point: ``compute``, ``decompose`` and ``degrade``.

Exit codes: 0 success, 2 configuration error, 3 input-format error,
4 unsupported operation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections.abc import Callable
from dataclasses import dataclass, field

from .decomposition import DECOMPOSABLE, decompose
from .degradation import generate_series
from .errors import ClusteringError, UnsupportedDecompositionError
from .fileio import parse_clustering_file, parse_features_file
from .measures_classic import (
    MeasureScore,
    accuracy,
    k_measure,
    nmi,
    rand_index,
    van_dongen,
    v_similarity,
)
from .splitmerge import sh_measure, smse_measure

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_UNSUPPORTED = 4

MEASURES: dict[str, Callable[..., MeasureScore]] = {
    "rand": lambda a, b, k, f: rand_index(a, b),
    "vandongen": lambda a, b, k, f: van_dongen(a, b),
    "accuracy": lambda a, b, k, f: accuracy(a, b),
    "nmi": lambda a, b, k, f: nmi(a, b),
    "v": lambda a, b, k, f: v_similarity(a, b),
    "k": lambda a, b, k, f: k_measure(a, b, k),
    "sh": lambda a, b, k, f: sh_measure(a, b),
    "smse": lambda a, b, k, f: smse_measure(a, b, f),
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    truth_path: str
    predicted_paths: list[str] = field(default_factory=list)
    features_path: str | None = None
    measures: list[str] = field(default_factory=list)
    k: int | None = None
    seed: int = 0
    output_format: str = "tsv"

    def validate(self) -> None:
        if not self.measures:
            raise ConfigError("no measures given")
        allowed = set(DECOMPOSABLE) | {"nmi"} if self.command == "decompose" else set(MEASURES)
        unknown = [m for m in self.measures if m not in allowed]
        if unknown:
            raise ConfigError(f"unknown measure(s): {', '.join(unknown)}")
        if "k" in self.measures and self.k is None:
            raise ConfigError("measure 'k' requires --k")
        if "smse" in self.measures and self.features_path is None:
            raise ConfigError("measure 'smse' requires --features")
        if self.command in ("compute", "decompose") and not self.predicted_paths:
            raise ConfigError(f"{self.command} requires at least one --pred")
        if self.output_format not in ("tsv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")


def fmt(value: float) -> str:
    return "nan" if value is None or math.isnan(value) else f"{value:.12g}"


def _score_row(name, truth, pred, config, features) -> tuple[float, list[str]]:
    try:
        score = MEASURES[name](truth, pred, config.k, features)
    except ClusteringError as exc:
        return math.nan, [f"error:{exc}"]
    return score.value, list(score.flags)


def run_compute(config: RunConfig) -> list[dict]:
    truth = parse_clustering_file(config.truth_path)
    features = parse_features_file(config.features_path) if config.features_path else None
    rows = []
    for path in config.predicted_paths:
        pred = parse_clustering_file(path)
        for name in config.measures:
            value, flags = _score_row(name, truth, pred, config, features)
            rows.append({"predicted": path, "measure": name, "value": value, "flags": flags})
    return rows


def run_degrade(config: RunConfig) -> list[dict]:
    truth = parse_clustering_file(config.truth_path)
    features = parse_features_file(config.features_path) if config.features_path else None
    series = generate_series(truth, config.seed)
    ops = ["truth"] + [op for op, _ in series.steps]
    rows = []
    for step, (op, clustering) in enumerate(zip(ops, series.clusterings)):
        for name in config.measures:
            value, flags = _score_row(name, truth, clustering, config, features)
            rows.append({"step": step, "op": op, "measure": name, "value": value, "flags": flags})
    return rows


def run_decompose(config: RunConfig) -> list[dict]:
    truth = parse_clustering_file(config.truth_path)
    rows = []
    for path in config.predicted_paths:
        pred = parse_clustering_file(path)
        for name in config.measures:
            report = decompose(name, truth, pred, config.k)
            base = {"predicted": path, "measure": name}
            for i, term in enumerate(report.components, 1):
                rows.append(base | {"kind": "component", "index": i, "size": len(term.join_cluster),
                                    "weight": term.weight, "value": term.score})
            for kind in ("offset", "recomposed", "direct", "residual"):
                rows.append(base | {"kind": kind, "index": None, "size": None, "weight": None,
                                    "value": getattr(report, kind)})
    return rows


_COLUMNS = {
    "compute": ("predicted", "measure", "value", "flags"),
    "degrade": ("step", "op", "measure", "value"),
    "decompose": ("predicted", "measure", "kind", "index", "size", "weight", "value"),
}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt(value)
    if isinstance(value, list):
        return ",".join(value) if value else "-"
    return str(value)


def render(command: str, rows: list[dict], output_format: str) -> str:
    if output_format == "json":
        clean = [
            {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()}
            for row in rows
        ]
        return json.dumps(clean, indent=2) + "\n"
    cols = _COLUMNS[command]
    lines = ["\t".join(cols)]
    lines += ["\t".join(_cell(row.get(c)) for c in cols) for row in rows]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clustcompare", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("compute", "score predicted clusterings against a true clustering"),
        ("decompose", "per-component decomposition of decomposable measures"),
        ("degrade", "score a split-then-merge degradation series of the truth"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--truth", required=True, help="true clustering file")
        if name != "degrade":
            p.add_argument("--pred", nargs="+", default=[], help="predicted clustering file(s)")
        p.add_argument("--features", help="CSV feature matrix, one row per point")
        p.add_argument("--measures", required=True,
                       help="comma-separated ids: " + ",".join(MEASURES))
        p.add_argument("--k", type=int, help="cluster bound for measure 'k'")
        p.add_argument("--seed", type=int, default=0, help="seed for the random merge partner (degrade)")
        p.add_argument("--format", choices=("tsv", "json"), default="tsv", help="output format (default tsv)")
        p.add_argument("--out", help="output path (default stdout)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        truth_path=args.truth,
        predicted_paths=getattr(args, "pred", []),
        features_path=args.features,
        measures=[m.strip() for m in args.measures.split(",") if m.strip()],
        k=args.k,
        seed=args.seed,
        output_format=args.format,
    )
    runners = {"compute": run_compute, "decompose": run_decompose, "degrade": run_degrade}
    try:
        config.validate()
        rows = runners[config.command](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnsupportedDecompositionError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ClusteringError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(config.command, rows, config.output_format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
