"""Inverse scagnostics: arrange points until their measures match targets.

Points are placed in epochs. Each epoch optimizes the coordinates of a
fresh batch of ``n_init`` points while every point placed by earlier epochs
stays fixed, minimizing the mean absolute gap between the measures of the
combined set and the targets. The optimum of one epoch, jittered with
Gaussian noise, seeds the next.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .exceptions import InsufficientPointsError, InvalidInputError, InvalidParameterError
from .optimizer import GsaParams, ObjectiveSpec, gsa_minimize
from .scagnostics import (
    DEFAULT_OPTIONS,
    MEASURE_NAMES,
    Measure,
    ScagnosticOptions,
    ScagnosticVector,
    _compute_prepared,
    compute_all,
    prepare_points,
)

__all__ = [
    "TargetSpec",
    "GeneratorConfig",
    "GenerationResult",
    "loss",
    "epoch_sizes",
    "generate",
    "clone_targets",
]

MIN_POINTS = 3


class TargetSpec(Mapping):
    """Target values for between one and nine measures.

    Behaves as a read-only mapping from canonical (lowercase) measure name to
    target value, iterated in canonical measure order.
    """

    def __init__(self, entries: Mapping | Iterable = (), **kwargs):
        items = dict(entries)
        items.update(kwargs)
        parsed: dict[str, float] = {}
        for name, value in items.items():
            key = Measure.parse(name).value
            if key in parsed:
                raise InvalidInputError(f"measure {key!r} given more than once")
            v = float(value)
            if not 0.0 <= v <= 1.0:
                raise InvalidInputError(f"target for {key} must lie in [0, 1], got {value!r}")
            parsed[key] = v
        if not parsed:
            raise InvalidInputError("at least one target measure is required")
        self._entries = {k: parsed[k] for k in MEASURE_NAMES if k in parsed}

    def __getitem__(self, name):
        return self._entries[Measure.parse(name).value]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"TargetSpec({self._entries!r})"

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self.items()) == {Measure.parse(k).value: v for k, v in other.items()}
        return NotImplemented

    __hash__ = None

    @property
    def names(self) -> frozenset:
        return frozenset(self._entries)


@dataclass(frozen=True)
class GeneratorConfig:
    """Settings for :func:`generate`.

    n_total : total number of points to produce
    n_init : points added (and optimized) per epoch
    sigma2 : variance of the Gaussian jitter applied between epochs
    """

    n_total: int = 50
    n_init: int = 5
    sigma2: float = 0.1
    gsa: GsaParams = field(default_factory=GsaParams)
    seed: int = 0
    options: ScagnosticOptions = DEFAULT_OPTIONS

    def __post_init__(self):
        if int(self.n_total) != self.n_total or self.n_total < 1:
            raise InvalidParameterError(f"n_total must be a positive integer, got {self.n_total!r}")
        if int(self.n_init) != self.n_init or not 1 <= self.n_init <= self.n_total:
            raise InvalidParameterError(
                f"n_init must be an integer in [1, n_total={self.n_total}], got {self.n_init!r}"
            )
        if not (self.sigma2 >= 0 and math.isfinite(self.sigma2)):
            raise InvalidParameterError(f"sigma2 must be a finite non-negative number, got {self.sigma2!r}")

    @property
    def n_epochs(self) -> int:
        return len(epoch_sizes(self.n_total, self.n_init))


@dataclass
class GenerationResult:
    points: np.ndarray
    achieved: ScagnosticVector
    final_loss: float
    per_epoch_losses: list[float]
    elapsed: float
    epoch_sizes: list[int] = field(default_factory=list)
    iterations: list[int] = field(default_factory=list)
    # loss at each epoch's starting values, before annealing
    start_losses: list[float] = field(default_factory=list)


def epoch_sizes(n_total: int, n_init: int) -> list[int]:
    """Number of new points placed in each epoch.

    Chunks of ``n_init``, the last one possibly smaller; leading chunks are
    merged until the first epoch has at least three points to measure.
    """
    if n_total < MIN_POINTS:
        raise InsufficientPointsError(n_total, MIN_POINTS, "generation")
    sizes = [n_init] * (n_total // n_init)
    if n_total % n_init:
        sizes.append(n_total % n_init)
    while sizes[0] < MIN_POINTS:
        sizes[0:2] = [sizes[0] + sizes[1]]
    return sizes


def _gap(values: Mapping[str, float], targets: Mapping[str, float]) -> float:
    total = 0.0
    for k, v in targets.items():
        total += abs(values[k] - v)
    return total / len(targets)


def loss(fixed, batch, targets: Mapping, options: ScagnosticOptions = DEFAULT_OPTIONS) -> float:
    """Mean absolute gap between the measures of ``fixed + batch`` and ``targets``."""
    if not isinstance(targets, TargetSpec):
        targets = TargetSpec(targets)
    b = np.asarray(batch, dtype=np.float64).reshape(-1, 2)
    f = np.asarray(fixed, dtype=np.float64).reshape(-1, 2) if fixed is not None else b[:0]
    pts = np.concatenate([f, b]) if f.shape[0] else b
    if pts.shape[0] < MIN_POINTS:
        raise InsufficientPointsError(pts.shape[0], MIN_POINTS, "loss")
    values, _ = _compute_prepared(prepare_points(pts, options), targets.names, options)
    return _gap(values, targets)


def _batch_objective(fixed: np.ndarray, size: int, targets: TargetSpec, options: ScagnosticOptions):
    """Objective over ``[x_1..x_b, y_1..y_b]`` with ``fixed`` prepended."""
    n_fixed = fixed.shape[0]
    buf = np.empty((n_fixed + size, 2), dtype=np.float64)
    buf[:n_fixed] = fixed
    wanted = targets.names

    def evaluate(v: np.ndarray) -> float:
        buf[n_fixed:, 0] = v[:size]
        buf[n_fixed:, 1] = v[size:]
        values, _ = _compute_prepared(prepare_points(buf, options), wanted, options)
        return _gap(values, targets)

    return ObjectiveSpec.box(evaluate, 2 * size, 0.0, 1.0)


def _to_vector(batch: np.ndarray) -> np.ndarray:
    return np.concatenate([batch[:, 0], batch[:, 1]])


def _to_points(v: np.ndarray) -> np.ndarray:
    b = v.shape[0] // 2
    return np.column_stack([v[:b], v[b:]])


def generate(targets, config: GeneratorConfig = GeneratorConfig(),
             callback: Callable[[int, float], None] | None = None) -> GenerationResult:
    """Produce ``config.n_total`` points in [0, 1]^2 whose measures approach ``targets``.

    ``callback(epoch, loss)`` is invoked after each epoch from the calling
    thread. Infeasible target combinations are not detected; the best effort
    is returned with its loss.
    """
    if not isinstance(targets, TargetSpec):
        targets = TargetSpec(targets)
    sizes = epoch_sizes(config.n_total, config.n_init)
    # independent streams for the start/jitter draws and each epoch's annealer
    seq = np.random.SeedSequence(config.seed)
    draw_seq, *epoch_seqs = seq.spawn(1 + len(sizes))
    rng = np.random.default_rng(draw_seq)
    sd = math.sqrt(config.sigma2)

    start = time.perf_counter()
    placed = np.empty((0, 2), dtype=np.float64)
    starting = rng.random((sizes[0], 2))
    losses: list[float] = []
    start_losses: list[float] = []
    iterations: list[int] = []
    for epoch, size in enumerate(sizes):
        if starting.shape[0] < size:
            extra = rng.random((size - starting.shape[0], 2))
            starting = np.concatenate([starting, extra])
        x0 = _to_vector(starting[:size])
        objective = _batch_objective(placed, size, targets, config.options)
        result = gsa_minimize(objective, x0, config.gsa, seed=np.random.default_rng(epoch_seqs[epoch]))
        best = _to_points(result.best_x)
        placed = np.concatenate([placed, best])
        losses.append(result.best_energy)
        start_losses.append(result.initial_energy)
        iterations.append(result.iterations_used)
        if callback is not None:
            callback(epoch, result.best_energy)
        starting = np.clip(best + sd * rng.standard_normal(best.shape), 0.0, 1.0)
    elapsed = time.perf_counter() - start

    achieved = compute_all(placed, config.options)
    return GenerationResult(
        points=placed,
        achieved=achieved,
        final_loss=loss(None, placed, targets, config.options),
        per_epoch_losses=losses,
        elapsed=elapsed,
        epoch_sizes=sizes,
        iterations=iterations,
        start_losses=start_losses,
    )


def clone_targets(reference, measures: Iterable | None = None,
                  options: ScagnosticOptions = DEFAULT_OPTIONS) -> TargetSpec:
    """Targets equal to the measures of ``reference`` (all nine by default)."""
    p = np.asarray(reference, dtype=np.float64)
    if p.ndim == 2 and p.shape[0] < MIN_POINTS:
        raise InsufficientPointsError(p.shape[0], MIN_POINTS, "clone_targets")
    values = compute_all(p, options).as_dict()
    names = MEASURE_NAMES if measures is None else [Measure.parse(m).value for m in measures]
    return TargetSpec({k: values[k] for k in names})
