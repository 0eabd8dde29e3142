"""Seeded synthetic generators for the three temporal benchmarks.

Every generator is a pure function of (T, seed, params). Inputs are delivered
already normalized to [0, 1] so the encoder contract is uniform across tasks.
Undefined early targets are stored as NaN and flagged via ``valid_from``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DataError
from .sim import RandomStream

log = logging.getLogger(__name__)

TASK_KINDS = ("stm", "parity", "narma10")

NARMA_MAX_REDRAWS = 50
NARMA_DIVERGENCE_BOUND = 10.0


@dataclass(frozen=True)
class TimeSeries:
    inputs: np.ndarray  # length T, values in [0, 1]
    targets: np.ndarray  # length T, NaN before valid_from
    valid_from: int

    def __post_init__(self):
        if len(self.inputs) != len(self.targets):
            raise DataError("inputs and targets must have equal length")
        if not 0 <= self.valid_from <= len(self.targets):
            raise DataError("valid_from out of range")


@dataclass(frozen=True)
class TaskSpec:
    kind: str
    T: int = 600
    seed: int | None = None  # None = derive from the experiment master seed
    delay: int = 2  # stm only
    window: int = 2  # parity only

    def __post_init__(self):
        if self.kind not in TASK_KINDS:
            raise ConfigurationError(f"unknown task kind {self.kind!r}")
        if self.T < 1:
            raise ConfigurationError("T must be positive")
        if self.delay < 1:
            raise ConfigurationError("delay must be >= 1")
        if self.window < 2:
            raise ConfigurationError("window must be >= 2")


def generate(spec: TaskSpec) -> TimeSeries:
    if spec.seed is None:
        raise ConfigurationError("task seed unresolved; fill it or go through resolve_seeds")
    if spec.kind == "stm":
        return gen_stm(spec.T, spec.seed, spec.delay)
    if spec.kind == "parity":
        return gen_parity(spec.T, spec.seed, spec.window)
    return gen_narma10(spec.T, spec.seed)


def gen_stm(T: int, seed: int, delay: int = 2) -> TimeSeries:
    """Memory reconstruction: y_t = u_{t-delay}, u ~ Uniform[0, 1]."""
    if delay < 1:
        raise ConfigurationError("delay must be >= 1")
    if delay >= T:
        raise ConfigurationError(f"delay {delay} must be < T={T}")
    rng = RandomStream(seed)
    u = rng.uniform(0.0, 1.0, size=T)
    y = np.full(T, np.nan)
    y[delay:] = u[:-delay]
    return TimeSeries(inputs=u, targets=y, valid_from=delay)


def gen_parity(T: int, seed: int, window: int = 2) -> TimeSeries:
    """Temporal XOR: y_t = u_{t-w+1} ^ ... ^ u_t over i.i.d. fair bits."""
    if window < 2:
        raise ConfigurationError("window must be >= 2")
    if window > T:
        raise ConfigurationError(f"window {window} must be <= T={T}")
    rng = RandomStream(seed)
    u = rng.integers(0, 2, size=T).astype(np.float64)
    bits = u.astype(np.int64)
    y = np.full(T, np.nan)
    for t in range(window - 1, T):
        acc = 0
        for b in bits[t - window + 1 : t + 1]:
            acc ^= int(b)
        y[t] = float(acc)
    return TimeSeries(inputs=u, targets=y, valid_from=window - 1)


def narma10_recurrence(u: np.ndarray) -> np.ndarray:
    """Run the tenth-order recurrence over raw inputs u (in [0, 0.5]).

    Returns y of length T+1 with y[0..10] = 0; the recurrence starts at t=10
    so the first computed value is y[11] (= 0.1 when u is identically zero).
    Iteration stops once |y| crosses the divergence bound; callers reject
    such series, so the tail past that point is never consumed.
    """
    T = len(u)
    y = np.zeros(T + 1)
    for t in range(10, T):
        y[t + 1] = (
            0.3 * y[t]
            + 0.05 * y[t] * np.sum(y[t - 9 : t + 1])
            + 1.5 * u[t - 9] * u[t]
            + 0.1
        )
        if abs(y[t + 1]) > NARMA_DIVERGENCE_BOUND:
            break
    return y


def gen_narma10(T: int, seed: int) -> TimeSeries:
    """Tenth-order NARMA one-step-ahead forecasting.

    The target at step t is y_{t+1}. Raw inputs u ~ Uniform[0, 0.5] drive the
    recurrence; the stored inputs are u/0.5 so they live in [0, 1]. Seeds whose
    series diverges (|y| > 10) are replaced by seed+1, logged.
    """
    if T < 30:
        raise ConfigurationError(f"narma10 needs T >= 30, got {T}")
    current = seed
    for _ in range(NARMA_MAX_REDRAWS):
        u = RandomStream(current).uniform(0.0, 0.5, size=T)
        y = narma10_recurrence(u)
        if np.max(np.abs(y)) <= NARMA_DIVERGENCE_BOUND:
            targets = y[1:].copy()
            targets[:10] = np.nan
            return TimeSeries(inputs=u / 0.5, targets=targets, valid_from=10)
        log.warning("narma10 series diverged for seed %d; substituting seed %d", current, current + 1)
        current += 1
    raise DataError(f"narma10 diverged for {NARMA_MAX_REDRAWS} consecutive seeds from {seed}")


def series_to_csv(series: TimeSeries) -> str:
    """CSV export with columns t,u,y,defined (17 significant digits)."""
    lines = ["t,u,y,defined"]
    for t in range(len(series.inputs)):
        defined = int(t >= series.valid_from)
        lines.append(
            f"{t},{series.inputs[t]:.17g},{series.targets[t]:.17g},{defined}"
        )
    return "\n".join(lines) + "\n"
