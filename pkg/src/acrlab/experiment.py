"""Experiment configs, batch orchestration, and the CSV file formats.

Config documents are flat JSON objects::

    {
      "objective": "sphere2d",
      "strategy.kind": ["adaptive_norm", "invariant"],
      "strategy.sigma": 1.0,
      "x0": [10, 10],
      "generations": 500,
      "runs": 100,
      "seed": 0,
      "checkpoints": [1, 101, 201, 301, 401],
      "out": "results/sphere"
    }

Only ``objective`` and ``strategy.kind`` are required.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .engine import (
    AdaptiveCoordinate, AdaptiveNorm, EaConfig, InvariantSigma,
    MutationStrategy, run_batch,
)
from .metrics import acr_series, error_series, log_error_series, ratio_series
from .objectives import ObjectiveError, ObjectiveSpec, get_objective
from .rng import derive_seeds

SERIES_HEADER = ("t", "e_t", "R_t", "ratio", "log10_e")
VERIFY_HEADER = ("check_id", "status", "value", "bound", "ci")
DEFAULT_CHECKPOINTS = (1, 101, 201, 301, 401)

_KNOWN_KEYS = {
    "objective", "strategy.kind", "strategy.sigma", "strategy.scale", "x0", "generations",
    "runs", "seed", "checkpoints", "out", "workers",
}
_STRATEGY_KINDS = ("invariant", "adaptive_norm", "adaptive_coordinate")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class SchemaError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def format_float(v: float) -> str:
    """17 significant digits, lowercase exponent; NaN renders as an empty field."""
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return f"{float(v):.16e}"


@dataclass(frozen=True)
class ExperimentConfig:
    objective: ObjectiveSpec
    strategies: tuple[MutationStrategy, ...]
    x0: tuple[float, ...]
    generations: int = 500
    runs: int = 100
    seed: int = 0
    checkpoints: tuple[int, ...] = DEFAULT_CHECKPOINTS
    out: Path = field(default_factory=lambda: Path("results"))
    workers: int = 1

    def ea_config(self, strategy: MutationStrategy) -> EaConfig:
        return EaConfig(self.objective, strategy, self.x0, self.generations)


def _int(doc, key, default, minimum):
    v = doc.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(key, f"expected an integer, got {v!r}")
    if v < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {v}")
    return v


def _strategy(kind: str, doc) -> MutationStrategy:
    try:
        if kind == "invariant":
            sigma = doc.get("strategy.sigma", 1.0)
            values = np.atleast_1d(np.asarray(sigma, dtype=float))
            if np.any(~(values > 0)):
                raise ConfigError("strategy.sigma", f"sigma must be positive, got {sigma!r}")
            return InvariantSigma(tuple(values))
        if kind == "adaptive_norm":
            scale = doc.get("strategy.scale", 1.0)
            if not isinstance(scale, (int, float)) or not scale > 0:
                raise ConfigError("strategy.scale", f"scale must be positive, got {scale!r}")
            return AdaptiveNorm(float(scale))
        if kind == "adaptive_coordinate":
            return AdaptiveCoordinate()
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("strategy.sigma", str(exc)) from None
    raise ConfigError("strategy.kind", f"unknown strategy {kind!r} (known: {', '.join(_STRATEGY_KINDS)})")


def parse_config(doc: dict[str, Any]) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "expected a JSON object")
    for key in doc:
        if key not in _KNOWN_KEYS:
            raise ConfigError(key, "unknown key")
    for key in ("objective", "strategy.kind"):
        if key not in doc:
            raise ConfigError(key, "missing required key")
    try:
        objective = get_objective(doc["objective"])
    except ObjectiveError as exc:
        raise ConfigError("objective", str(exc)) from None
    kinds = doc["strategy.kind"]
    kinds = [kinds] if isinstance(kinds, str) else list(kinds)
    if not kinds:
        raise ConfigError("strategy.kind", "needs at least one strategy")
    strategies = tuple(_strategy(k, doc) for k in kinds)
    x0 = doc.get("x0", [10.0] * objective.dimension)
    try:
        x0 = tuple(float(v) for v in np.atleast_1d(np.asarray(x0, dtype=float)))
    except (TypeError, ValueError):
        raise ConfigError("x0", f"expected numbers, got {x0!r}") from None
    if len(x0) != objective.dimension or not all(map(math.isfinite, x0)):
        raise ConfigError("x0", f"needs {objective.dimension} finite coordinates")
    generations = _int(doc, "generations", 500, 1)
    runs = _int(doc, "runs", 100, 1)
    seed = _int(doc, "seed", 0, 0)
    workers = _int(doc, "workers", 1, 1)
    if "checkpoints" in doc:
        cps = doc["checkpoints"]
        if not isinstance(cps, list) or not all(isinstance(c, int) and not isinstance(c, bool)
                                                for c in cps):
            raise ConfigError("checkpoints", "expected a list of integers")
        if not cps:
            raise ConfigError("checkpoints", "needs at least one generation")
        if any(c < 1 or c > generations for c in cps):
            raise ConfigError("checkpoints", f"every checkpoint must lie in [1, {generations}]")
        if sorted(set(cps)) != cps:
            raise ConfigError("checkpoints", "must be strictly increasing")
        checkpoints = tuple(cps)
    else:
        checkpoints = tuple(c for c in DEFAULT_CHECKPOINTS if c <= generations) or (generations,)
    out = doc.get("out", "results")
    if not isinstance(out, str) or not out:
        raise ConfigError("out", "expected a path string")
    return ExperimentConfig(objective, strategies, x0, generations, runs, seed, checkpoints,
                            Path(out), workers)


def load_config(document: str) -> ExperimentConfig:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ConfigError("<document>", f"invalid JSON: {exc}") from None
    return parse_config(doc)


@dataclass(frozen=True)
class StrategySeries:
    strategy: str
    e: np.ndarray
    R: np.ndarray
    ratio: np.ndarray
    log10_e: np.ndarray

    def rows(self):
        for t in range(self.e.shape[0]):
            yield (str(t), format_float(self.e[t]), format_float(self.R[t]),
                   format_float(self.ratio[t]), format_float(self.log10_e[t]))


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    series: tuple[StrategySeries, ...]
    series_paths: tuple[Path, ...]
    checkpoint_path: Path

    def checkpoint_table(self) -> dict[str, tuple[float, ...]]:
        return {s.strategy: tuple(float(s.R[t]) for t in self.config.checkpoints)
                for s in self.series}


def compute_series(config: ExperimentConfig, strategy: MutationStrategy) -> StrategySeries:
    seeds = derive_seeds(config.seed, config.runs)
    trajectories = run_batch(config.ea_config(strategy), seeds, workers=config.workers)
    errors = error_series(trajectories, config.objective.f_star)
    return StrategySeries(strategy.name, errors.e, acr_series(errors).R, ratio_series(errors),
                          log_error_series(errors))


def series_csv(series: StrategySeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SERIES_HEADER)
    w.writerows(series.rows())
    return buf.getvalue()


def checkpoint_csv(config: ExperimentConfig, series: Sequence[StrategySeries]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["objective", "strategy"] + [f"t{t}" for t in config.checkpoints])
    for s in series:
        w.writerow([config.objective.id.value, s.strategy]
                   + [format_float(s.R[t]) for t in config.checkpoints])
    return buf.getvalue()


def series_filename(config: ExperimentConfig, strategy: str) -> str:
    return f"series_{config.objective.id.value}_{strategy}.csv"


def run_experiment(config: ExperimentConfig, out: Path | None = None) -> ExperimentResult:
    out = Path(out) if out is not None else config.out
    series = tuple(compute_series(config, s) for s in config.strategies)
    names = [s.strategy for s in series]
    if len(set(names)) != len(names):
        raise ConfigError("strategy.kind", "each strategy may appear once")
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for s in series:
        p = out / series_filename(config, s.strategy)
        p.write_text(series_csv(s))
        paths.append(p)
    cp = out / "checkpoints.csv"
    cp.write_text(checkpoint_csv(config, series))
    return ExperimentResult(config, series, tuple(paths), cp)


def _parse_float(path, line, text):
    if text == "":
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise SchemaError(path, line, f"not a number: {text!r}") from None


def read_series_csv(path) -> dict[str, np.ndarray]:
    """Parse a series file back into columns; NaN marks undefined fields."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(path, 1, "empty file")
    if tuple(rows[0]) != SERIES_HEADER:
        raise SchemaError(path, 1, f"expected header {','.join(SERIES_HEADER)}")
    if len(rows) < 2:
        raise SchemaError(path, 2, "series has no data rows")
    cols = {k: [] for k in SERIES_HEADER}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(SERIES_HEADER):
            raise SchemaError(path, i, f"expected {len(SERIES_HEADER)} fields, got {len(row)}")
        try:
            t = int(row[0])
        except ValueError:
            raise SchemaError(path, i, f"bad generation index {row[0]!r}") from None
        if t != i - 2:
            raise SchemaError(path, i, f"generation {t} out of sequence")
        cols["t"].append(t)
        for k, v in zip(SERIES_HEADER[1:], row[1:]):
            cols[k].append(_parse_float(path, i, v))
    return {k: np.array(v) for k, v in cols.items()}


def read_checkpoint_csv(path) -> list[dict[str, Any]]:
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["objective", "strategy"]:
        raise SchemaError(path, 1, "expected header objective,strategy,t...")
    cps = []
    for name in rows[0][2:]:
        if not (name.startswith("t") and name[1:].isdigit()):
            raise SchemaError(path, 1, f"bad checkpoint column {name!r}")
        cps.append(int(name[1:]))
    out = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(rows[0]):
            raise SchemaError(path, i, "field count does not match header")
        out.append({"objective": row[0], "strategy": row[1],
                    "R": {t: _parse_float(path, i, v) for t, v in zip(cps, row[2:])}})
    return out


def verification_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VERIFY_HEADER)
    for r in results:
        w.writerow([r.check_id, r.status, format_float(r.value), format_float(r.bound), r.ci])
    return buf.getvalue()


_PLOT_TEMPLATE = '''\
"""Render R_t, e_t/e_(t-1) and log10 e_t panels from acrlab series CSVs."""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

SERIES = {series!r}
OUTPUT = {output!r}
PANELS = (("R_t", "R_t"), ("ratio", "e_t / e_(t-1)"), ("log10_e", "log10 e_t"))


def load(path):
    cols = {{"t": [], "R_t": [], "ratio": [], "log10_e": []}}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for key in cols:
                text = row[key]
                cols[key].append(float(text) if text != "" else float("nan"))
    return cols


def main(output=OUTPUT):
    fig, axes = plt.subplots(len(PANELS), 1, figsize=(7, 9), sharex=True)
    for label, path in SERIES:
        cols = load(path)
        for ax, (column, title) in zip(axes, PANELS):
            ax.plot(cols["t"], cols[column], label=label, linewidth=1)
            ax.set_ylabel(title)
    axes[-1].set_xlabel("generation t")
    for ax in axes:
        ax.legend()
    fig.tight_layout()
    fig.savefig(output, dpi=120)


if __name__ == "__main__":
    main(*sys.argv[1:2])
'''


def _series_label(path: Path) -> str:
    stem = path.stem
    return stem[len("series_"):] if stem.startswith("series_") else stem


def emit_plot_script(series_paths: Sequence, out_path=None) -> Path:
    """Write a standalone matplotlib script overlaying every given series."""
    paths = [Path(p) for p in series_paths]
    if not paths:
        raise SchemaError("<none>", 0, "no series files given")
    for p in paths:
        read_series_csv(p)
    out_path = Path(out_path) if out_path is not None else paths[0].with_name("plot_series.py")
    series = [(_series_label(p), str(p.resolve())) for p in paths]
    png = str(out_path.with_suffix(".png").resolve())
    out_path.write_text(_PLOT_TEMPLATE.format(series=series, output=png))
    return out_path
