"""Generalized simulated annealing (Tsallis statistics) over a box.

The search draws jumps from the heavy-tailed Tsallis visiting distribution,
whose width shrinks with the visiting temperature

    T_v(t) = t0 * (2**(q_v - 1) - 1) / ((1 + t)**(q_v - 1) - 1),

and accepts uphill moves with the generalized Metropolis probability

    P = 1 / (1 + (q_a - 1) * dE / T_a) ** (1 / (q_a - 1)),

evaluated at the acceptance temperature ``T_a(t) = T_v(t) / t``. When the
base of the power is not positive the move is rejected.

Each iteration makes one jump of the whole vector followed by a jump of a
single coordinate; the coordinate cycles with the iteration index. Proposals
that leave the box are reflected back into it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import InvalidInputError, InvalidParameterError, ObjectiveError

__all__ = [
    "GsaParams",
    "ObjectiveSpec",
    "GsaResult",
    "visiting_temperature",
    "acceptance_temperature",
    "acceptance_probability",
    "VisitingDistribution",
    "visiting_step",
    "reflect",
    "gsa_minimize",
]

# Jumps are capped before reflection; beyond this the landing point is
# effectively uniform over the box anyway.
TAIL_LIMIT = 1e8


@dataclass(frozen=True)
class GsaParams:
    """Hyperparameters; defaults are those of the R ``GenSA`` package."""

    q_v: float = 2.62
    q_a: float = -5.0
    t0: float = 5230.0
    max_iter: int = 5000
    stop_threshold: float = 1e-4

    def __post_init__(self):
        if not 1.0 < self.q_v < 3.0:
            raise InvalidParameterError(f"q_v must lie in (1, 3), got {self.q_v!r}")
        if not self.t0 > 0:
            raise InvalidParameterError(f"t0 must be positive, got {self.t0!r}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidParameterError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if not math.isfinite(self.q_a):
            raise InvalidParameterError(f"q_a must be finite, got {self.q_a!r}")


@dataclass
class ObjectiveSpec:
    """A box-bounded objective ``evaluate: R^dimension -> R``."""

    evaluate: Callable[[np.ndarray], float]
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=np.float64))
        self.upper = np.atleast_1d(np.asarray(self.upper, dtype=np.float64))
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise InvalidInputError("lower and upper bounds must be 1-D arrays of equal length")
        if not np.all(self.lower < self.upper):
            raise InvalidInputError("every lower bound must be below its upper bound")

    @classmethod
    def box(cls, evaluate, dimension: int, lower: float = 0.0, upper: float = 1.0) -> "ObjectiveSpec":
        return cls(evaluate, np.full(dimension, lower), np.full(dimension, upper))

    @property
    def dimension(self) -> int:
        return int(self.lower.shape[0])


@dataclass
class GsaResult:
    best_x: np.ndarray
    best_energy: float
    iterations_used: int
    n_evaluations: int
    initial_energy: float
    # rows of (visiting temperature, current energy, best energy) per iteration
    trace: np.ndarray | None = field(default=None, repr=False)


def visiting_temperature(t, params: GsaParams = GsaParams()) -> float:
    """Visiting temperature at iteration ``t >= 1``."""
    q = params.q_v
    if not q > 1.0:
        raise InvalidParameterError(f"q_v must exceed 1, got {q!r}")
    if t < 1:
        raise InvalidParameterError(f"iteration index must be >= 1, got {t!r}")
    return params.t0 * math.expm1((q - 1.0) * math.log(2.0)) / math.expm1((q - 1.0) * math.log1p(t))


def acceptance_temperature(t, params: GsaParams = GsaParams()) -> float:
    return visiting_temperature(t, params) / t


def acceptance_probability(delta_e: float, t_a: float, q_a: float) -> float:
    """Generalized Metropolis acceptance probability of an energy change."""
    if not t_a > 0:
        raise InvalidParameterError(f"acceptance temperature must be positive, got {t_a!r}")
    if delta_e <= 0.0:
        return 1.0
    if q_a == 1.0:
        return math.exp(-delta_e / t_a)
    base = 1.0 + (q_a - 1.0) * delta_e / t_a
    if base <= 0.0:
        return 0.0
    return min(1.0, math.exp(-math.log(base) / (q_a - 1.0)))


class VisitingDistribution:
    """Sampler for one-dimensional Tsallis visiting jumps.

    Uses the Tsallis-Stariolo construction: a Gaussian numerator scaled by a
    temperature-dependent width, divided by a power of an independent
    Gaussian's magnitude. All constants are handled in log space so that
    ``q_v`` near 1 does not overflow.
    """

    def __init__(self, q_v: float):
        if not 1.0 < q_v < 3.0:
            raise InvalidParameterError(f"q_v must lie in (1, 3), got {q_v!r}")
        q = q_v
        self.q_v = q
        self._power = (q - 1.0) / (3.0 - q)
        f5 = 1.0 / (q - 1.0) - 0.5
        d1 = 2.0 - f5
        u = math.pi * (1.0 - f5)
        # pi(1-f5)/sin(pi(1-f5)) / Gamma(2-f5) is positive for 1 < q < 3
        self._log_f6 = math.log(abs(u / math.sin(u))) - math.lgamma(d1)
        self._log_f4_const = (
            0.5 * math.log(math.pi)
            + (4.0 - q) * math.log(q - 1.0)
            - (2.0 - q) * math.log(2.0) / (q - 1.0)
            - math.log(3.0 - q)
        )

    def log_width(self, temperature: float) -> float:
        log_f4 = self._log_f4_const + math.log(temperature) / (self.q_v - 1.0)
        return -self._power * (self._log_f6 - log_f4)

    def sample(self, temperature: float, size: int, rng: np.random.Generator) -> np.ndarray:
        width = math.exp(min(self.log_width(temperature), 700.0))
        num = width * rng.standard_normal(size)
        den = np.abs(rng.standard_normal(size)) ** self._power
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            step = num / den
        step = np.where(np.isfinite(step), step, np.copysign(TAIL_LIMIT, num))
        return np.clip(step, -TAIL_LIMIT, TAIL_LIMIT)


def reflect(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Fold coordinates back into ``[lower, upper]`` by mirror reflection."""
    span = upper - lower
    y = np.mod(x - lower, 2.0 * span)
    y = np.where(y > span, 2.0 * span - y, y)
    return np.clip(lower + y, lower, upper)


def visiting_step(x, t, params: GsaParams, rng: np.random.Generator, lower=None, upper=None,
                  coordinate: int | None = None, distribution: VisitingDistribution | None = None):
    """Propose a jump from ``x`` at iteration ``t``.

    Jumps every coordinate, or only ``coordinate`` when given. Bounds default
    to the unit box.
    """
    x = np.asarray(x, dtype=np.float64)
    lower = np.zeros_like(x) if lower is None else np.asarray(lower, dtype=np.float64)
    upper = np.ones_like(x) if upper is None else np.asarray(upper, dtype=np.float64)
    dist = distribution if distribution is not None else VisitingDistribution(params.q_v)
    temperature = visiting_temperature(t, params)
    if coordinate is None:
        return reflect(x + dist.sample(temperature, x.shape[0], rng), lower, upper)
    out = x.copy()
    k = coordinate
    out[k] = reflect(x[k:k + 1] + dist.sample(temperature, 1, rng), lower[k:k + 1], upper[k:k + 1])[0]
    return out


def _make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gsa_minimize(objective: ObjectiveSpec, x0: Sequence[float], params: GsaParams = GsaParams(),
                 seed=0, record_trace: bool = False) -> GsaResult:
    """Minimize ``objective`` from ``x0`` with generalized simulated annealing.

    Stops after ``params.max_iter`` iterations or as soon as the best energy
    reaches ``params.stop_threshold``. The returned best energy never exceeds
    the energy of ``x0``.

    Raises
    ------
    ObjectiveError
        If the objective returns a non-finite value.
    """
    lower, upper = objective.lower, objective.upper
    x = np.array(x0, dtype=np.float64)
    if x.shape != lower.shape:
        raise InvalidInputError(f"x0 has shape {x.shape}, expected {lower.shape}")
    if np.any(x < lower) or np.any(x > upper):
        raise InvalidInputError("x0 lies outside the bounds")
    rng = _make_rng(seed)
    dist = VisitingDistribution(params.q_v)
    dim = x.shape[0]

    def energy(v):
        e = float(objective.evaluate(v))
        if not math.isfinite(e):
            raise ObjectiveError(v, e)
        return e

    e_cur = energy(x)
    e0 = e_cur
    best_x, best_e = x.copy(), e_cur
    n_eval = 1
    trace = [] if record_trace else None
    it = 0
    q_a = params.q_a
    stop = params.stop_threshold
    span = upper - lower

    while best_e > stop and it < params.max_iter:
        it += 1
        temp_v = visiting_temperature(it, params)
        temp_a = temp_v / it
        w = math.exp(min(dist.log_width(temp_v), 700.0))
        k = (it - 1) % dim
        for single in (False, True):
            # inlined visiting_step: same draws, fewer Python calls
            size = 1 if single else dim
            num = w * rng.standard_normal(size)
            den = np.abs(rng.standard_normal(size)) ** dist._power
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                step = num / den
            step = np.clip(np.where(np.isfinite(step), step, np.copysign(TAIL_LIMIT, num)),
                           -TAIL_LIMIT, TAIL_LIMIT)
            if single:
                cand = x.copy()
                y = (x[k] + step[0] - lower[k]) % (2.0 * span[k])
                if y > span[k]:
                    y = 2.0 * span[k] - y
                cand[k] = min(max(lower[k] + y, lower[k]), upper[k])
            else:
                cand = reflect(x + step, lower, upper)
            e_new = energy(cand)
            n_eval += 1
            if e_new < e_cur:
                accept = True
            else:
                p = acceptance_probability(e_new - e_cur, temp_a, q_a)
                accept = p > 0.0 and rng.random() < p
            if accept:
                x, e_cur = cand, e_new
                if e_cur < best_e:
                    best_x, best_e = x.copy(), e_cur
                    if best_e <= stop:
                        break
        if trace is not None:
            trace.append((temp_v, e_cur, best_e))

    return GsaResult(
        best_x=best_x,
        best_energy=best_e,
        iterations_used=it,
        n_evaluations=n_eval,
        initial_energy=e0,
        trace=np.array(trace, dtype=np.float64).reshape(-1, 3) if trace is not None else None,
    )
