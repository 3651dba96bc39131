"""Scaling benchmark harness: timed sweeps and exponent/slope fitting.

Rows are emitted per (scenario, engine, n, repeat) with wall time measured
around circuit execution only. Cells that exceed an engine's capacity
become NA rows instead of aborting the sweep.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

from .circuit import emit_builtin, execute, make_engine
from .state import CapacityError

CSV_COLUMNS = ("scenario", "engine", "n", "repeat", "wall_seconds", "map_size")

SCENARIOS = ("ghz", "superpos", "entangled_registers", "superpos_measure")

# Floor for derived (subtracted) timings, which must stay positive.
_MIN_SECONDS = 1e-12


@dataclass(frozen=True)
class BenchRecord:
    scenario: str
    engine: str
    n: int
    repeat: int
    wall_seconds: float | None
    map_size: int | None
    seed: int = 0

    def csv_row(self) -> list[str]:
        wall = "NA" if self.wall_seconds is None else repr(self.wall_seconds)
        size = "NA" if self.map_size is None else str(self.map_size)
        return [self.scenario, self.engine, str(self.n), str(self.repeat), wall, size]


def _timed_run(circuit, engine_kind: str, seed: int) -> tuple[float, int | None]:
    """Execute a prepared circuit on a fresh engine; returns (seconds, map size)."""
    engine = make_engine(engine_kind, circuit.n, seed)
    instructions = circuit.instructions
    defs = circuit.gate_defs
    start = time.perf_counter()
    for instruction in instructions:
        execute(engine, instruction, defs)
    elapsed = time.perf_counter() - start
    size = engine.map_size if engine_kind == "bitwise" else None
    return elapsed, size


def sweep(
    scenario: str,
    ns: Sequence[int],
    engine_kinds: Sequence[str] = ("bitwise",),
    repeats: int = 5,
    seed: int = 1,
) -> Iterator[BenchRecord]:
    """Yield one record per (engine, n, repeat) cell, plus derived rows.

    For superpos_measure each cell also yields a 'measure_only' row whose
    wall time is the full run minus a separate state-preparation run, the
    subtraction methodology used for measurement-cost scaling.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; pick one of {SCENARIOS}")
    for engine_kind in engine_kinds:
        for n in ns:
            circuit = prep = None
            try:
                circuit = emit_builtin(scenario, n)
                prep = emit_builtin("superpos", n) if scenario == "superpos_measure" else None
                # Untimed warmup: the first execution of a cell pays one-off
                # interpreter and allocator costs that would distort repeat 0.
                _timed_run(circuit, engine_kind, seed)
            except (ValueError, CapacityError):
                circuit = None
            for repeat in range(repeats):
                cell_seed = seed + repeat if seed != 0 else 0
                if circuit is None:
                    yield BenchRecord(scenario, engine_kind, n, repeat, None, None, cell_seed)
                    continue
                wall, size = _timed_run(circuit, engine_kind, cell_seed)
                yield BenchRecord(scenario, engine_kind, n, repeat, wall, size, cell_seed)
                if prep is not None:
                    prep_wall, _ = _timed_run(prep, engine_kind, cell_seed)
                    yield BenchRecord(
                        "measure_only",
                        engine_kind,
                        n,
                        repeat,
                        max(wall - prep_wall, _MIN_SECONDS),
                        size,
                        cell_seed,
                    )


def write_csv(records: Iterable[BenchRecord], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.csv_row())


def read_csv(source: TextIO) -> list[BenchRecord]:
    reader = csv.DictReader(source)
    records = []
    for row in reader:
        wall = None if row["wall_seconds"] == "NA" else float(row["wall_seconds"])
        size = None if row["map_size"] == "NA" else int(row["map_size"])
        records.append(
            BenchRecord(row["scenario"], row["engine"], int(row["n"]), int(row["repeat"]), wall, size)
        )
    return records


@dataclass(frozen=True)
class ScalingFit:
    """Per-series fit: time vs n (linear regime) and log2(time) vs n (exponential)."""

    scenario: str
    engine: str
    points: int
    linear_slope: float
    log2_slope: float
    classification: str


def _least_squares(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """Slope and normalized residual (1 - R^2) of the best-fit line."""
    m = len(xs)
    mean_x = sum(xs) / m
    mean_y = sum(ys) / m
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    syy = sum((y - mean_y) ** 2 for y in ys)
    slope = sxy / sxx
    if syy == 0.0:
        return slope, 0.0
    sse = syy - sxy * sxy / sxx
    return slope, max(sse / syy, 0.0)


def fit_scaling(records: Iterable[BenchRecord]) -> list[ScalingFit]:
    """Classify each (scenario, engine) series as linear-like or exponential-like.

    Repeats collapse to their minimum per n (wall-clock noise is one-sided,
    so the floor is the low-variance estimate); the series needs at least
    four distinct sizes. The fit with the lower normalized residual wins;
    ties go to linear.
    """
    series: dict[tuple[str, str], dict[int, list[float]]] = {}
    for record in records:
        if record.wall_seconds is None:
            continue
        cell = series.setdefault((record.scenario, record.engine), {}).setdefault(record.n, [])
        cell.append(record.wall_seconds)

    fits = []
    for (scenario, engine), by_n in sorted(series.items()):
        if len(by_n) < 4:
            raise ValueError(
                f"series ({scenario}, {engine}) has {len(by_n)} sizes; need at least 4"
            )
        ns = sorted(by_n)
        xs = [float(n) for n in ns]
        floors = [min(by_n[n]) for n in ns]
        linear_slope, linear_resid = _least_squares(xs, floors)
        log2_slope, log2_resid = _least_squares(
            xs, [math.log2(max(t, _MIN_SECONDS)) for t in floors]
        )
        classification = "exponential-like" if log2_resid < linear_resid else "linear-like"
        fits.append(
            ScalingFit(scenario, engine, len(ns), linear_slope, log2_slope, classification)
        )
    return fits
