"""Reliability and timing experiments for the generator.

A plan crosses measures with target values; every cell is generated
``replicates`` times with seeds derived from the base seed, each output is
re-measured, and the cell's RMSE against its target is reported.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .exceptions import InvalidInputError, InvalidParameterError
from .generator import GeneratorConfig, generate
from .scagnostics import MEASURE_NAMES, Measure

__all__ = [
    "CSV_FIELDS",
    "ExperimentPlan",
    "ReplicateRecord",
    "CellSummary",
    "ExperimentReport",
    "rmse",
    "derive_seed",
    "run_reliability",
    "run_timing",
]

CSV_FIELDS = ("measure", "target", "replicate", "achieved", "rmse_cell", "elapsed_ms", "seed")


def rmse(achieved: Sequence[float], target: float) -> float:
    """Root mean squared deviation of replicate values from ``target``."""
    xs = list(achieved)
    if not xs:
        raise InvalidInputError("rmse needs at least one value")
    return math.sqrt(math.fsum((a - target) ** 2 for a in xs) / len(xs))


def derive_seed(base_seed: int, measure: str, target: float, replicate: int,
                n_init: int | None = None) -> int:
    """Stable 63-bit seed for one replicate (BLAKE2b of the cell key)."""
    key = f"{int(base_seed)}|{measure}|{float(target)!r}|{int(replicate)}"
    if n_init is not None:
        key += f"|{int(n_init)}"
    digest = hashlib.blake2b(key.encode("ascii"), digest_size=8).digest()
    return int.from_bytes(digest, "big") & (2**63 - 1)


@dataclass(frozen=True)
class ExperimentPlan:
    measures: tuple = MEASURE_NAMES
    values: tuple = (0.0, 0.5, 1.0)
    replicates: int = 20
    config: GeneratorConfig = field(default_factory=GeneratorConfig)
    base_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "measures", tuple(Measure.parse(m).value for m in self.measures))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.measures:
            raise InvalidParameterError("plan needs at least one measure")
        if not self.values or any(not 0.0 <= v <= 1.0 for v in self.values):
            raise InvalidParameterError(f"target values must lie in [0, 1], got {self.values!r}")
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise InvalidParameterError(f"replicates must be a positive integer, got {self.replicates!r}")


@dataclass(frozen=True)
class ReplicateRecord:
    measure: str
    target: float
    replicate: int
    seed: int
    n_init: int
    achieved: float | None
    elapsed_ms: float | None
    final_loss: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class CellSummary:
    measure: str
    target: float
    n_init: int
    rmse: float | None
    mean_elapsed_ms: float | None
    sd_elapsed_ms: float | None
    n_replicates: int
    complete: bool


@dataclass
class ExperimentReport:
    records: list[ReplicateRecord]
    kind: str = "reliability"

    def _groups(self):
        groups: dict[tuple, list[ReplicateRecord]] = {}
        for r in self.records:
            groups.setdefault((r.measure, r.target, r.n_init), []).append(r)
        return groups

    @property
    def cells(self) -> list[CellSummary]:
        out = []
        for (m, t, n0), recs in self._groups().items():
            ok = [r for r in recs if r.error is None]
            times = [r.elapsed_ms for r in ok]
            out.append(CellSummary(
                measure=m,
                target=t,
                n_init=n0,
                rmse=rmse([r.achieved for r in ok], t) if ok else None,
                mean_elapsed_ms=statistics.fmean(times) if times else None,
                sd_elapsed_ms=statistics.stdev(times) if len(times) > 1 else (0.0 if times else None),
                n_replicates=len(recs),
                complete=len(ok) == len(recs),
            ))
        return out

    def cell(self, measure: str, target: float, n_init: int | None = None) -> CellSummary:
        for c in self.cells:
            if c.measure == measure and c.target == target and (n_init is None or c.n_init == n_init):
                return c
        raise KeyError((measure, target, n_init))

    def grand_mean_rmse(self) -> float:
        vals = [c.rmse for c in self.cells if c.rmse is not None]
        return statistics.fmean(vals)

    def median_elapsed_ms(self) -> float:
        return statistics.median(r.elapsed_ms for r in self.records if r.error is None)

    def rows(self) -> list[dict]:
        """Flat rows with the report columns (plus ``n_init`` for timing reports)."""
        cell_rmse = {(c.measure, c.target, c.n_init): c.rmse for c in self.cells}
        rows = []
        for r in self.records:
            row = {
                "measure": r.measure,
                "target": r.target,
                "replicate": r.replicate,
                "achieved": r.achieved,
                "rmse_cell": cell_rmse[(r.measure, r.target, r.n_init)],
                "elapsed_ms": r.elapsed_ms,
                "seed": r.seed,
            }
            if self.kind == "timing":
                row["n_init"] = r.n_init
            rows.append(row)
        return rows

    @property
    def fields(self) -> tuple:
        return CSV_FIELDS + (("n_init",) if self.kind == "timing" else ())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.fields)
        for row in self.rows():
            w.writerow(["" if row[k] is None else (repr(row[k]) if isinstance(row[k], float) else row[k])
                        for k in self.fields])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.rows(), indent=1) + "\n"


def _run_one(task) -> ReplicateRecord:
    measure, target, rep, seed, config = task
    cfg = replace(config, seed=seed)
    try:
        t0 = time.perf_counter()
        res = generate({measure: target}, cfg)
        elapsed = (time.perf_counter() - t0) * 1e3
    except Exception as exc:  # recorded per replicate, never fatal
        return ReplicateRecord(measure, target, rep, seed, cfg.n_init, None, None,
                               error=f"{type(exc).__name__}: {exc}")
    return ReplicateRecord(measure, target, rep, seed, cfg.n_init, res.achieved[measure], elapsed,
                           final_loss=res.final_loss)


def _execute(tasks: list, workers: int) -> list[ReplicateRecord]:
    if workers <= 1 or len(tasks) <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, tasks))


def run_reliability(plan: ExperimentPlan = ExperimentPlan(), workers: int = 1) -> ExperimentReport:
    """Generate every (measure, value) cell ``plan.replicates`` times and score it."""
    tasks = [
        (m, v, r, derive_seed(plan.base_seed, m, v, r), plan.config)
        for m in plan.measures
        for v in plan.values
        for r in range(plan.replicates)
    ]
    return ExperimentReport(records=_execute(tasks, workers), kind="reliability")


def run_timing(plan: ExperimentPlan, init_point_grid: Iterable[int]) -> ExperimentReport:
    """Wall-clock generation time per (measure, value, n_init) cell.

    Replicates run one at a time so that timings do not contend.
    """
    grid = [int(n) for n in init_point_grid]
    if not grid:
        raise InvalidParameterError("init_point_grid must be nonempty")
    tasks = []
    for n0 in grid:
        cfg = replace(plan.config, n_init=n0)
        for m in plan.measures:
            for v in plan.values:
                for r in range(plan.replicates):
                    tasks.append((m, v, r, derive_seed(plan.base_seed, m, v, r, n_init=n0), cfg))
    return ExperimentReport(records=_execute(tasks, workers=1), kind="timing")
