"""Temporal drivers: recurrent and windowed evolution, the train/test
protocol, the STM delay sweep, and the qubit-width theory scan.

Seed derivation: one master seed yields labelled child seeds for
{data, reservoir, encoder-interleave, shots} (see sim.RandomStream), so a
single integer reproduces a whole run. Sweeps and scans derive per-replicate
sub-masters with labels ``replicate-<r>``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .encoding import EncoderCircuit, EncoderSpec, build_encoder, encode_input
from .errors import ConfigurationError, DataError
from .readout import (
    DEFAULT_ALPHA,
    accuracy,
    fit_ridge,
    mse,
    predict,
    r2_score,
)
from .reservoir import (
    ReservoirCircuit,
    ReservoirSpec,
    apply_reservoir,
    build_reservoir,
    topology_edges,
)
from .sim import (
    PauliString,
    RandomStream,
    StateVector,
    estimate_expectations,
    expectation,
    new_zero_state,
    sample_counts,
)
from .tasks import TaskSpec, TimeSeries, generate

MODE_KINDS = ("recurrent", "reupload_k")
BACKEND_KINDS = ("ideal", "shots")
FULL_WINDOW = "full"  # reupload window covering the entire input prefix


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ObservableSpec:
    """Which Pauli-Z products are measured.

    ``zz`` is None (no pair observables), "edges" (the reservoir topology's
    edge pairs), "all_pairs", or an explicit tuple of (i, j) pairs.
    """

    local_z: bool = True
    zz: str | tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if isinstance(self.zz, str) and self.zz not in ("edges", "all_pairs"):
            raise ConfigurationError(f"zz must be 'edges', 'all_pairs' or pairs, got {self.zz!r}")
        if isinstance(self.zz, (list, tuple)) and not isinstance(self.zz, str):
            pairs = tuple((int(i), int(j)) for i, j in self.zz)
            if any(i == j for i, j in pairs):
                raise ConfigurationError("zz pairs must join distinct qubits")
            object.__setattr__(self, "zz", pairs)


@dataclass(frozen=True)
class ModeSpec:
    kind: str = "recurrent"
    k: int | str = 1  # window length in reupload_k mode; FULL_WINDOW = whole prefix

    def __post_init__(self):
        if self.kind not in MODE_KINDS:
            raise ConfigurationError(f"unknown mode {self.kind!r}")
        if self.k != FULL_WINDOW and (not isinstance(self.k, int) or self.k < 1):
            raise ConfigurationError(f"window k must be an integer >= 1 or '{FULL_WINDOW}'")


@dataclass(frozen=True)
class BackendSpec:
    kind: str = "ideal"
    shots: int = 1024
    shot_seed: int | None = None

    def __post_init__(self):
        if self.kind not in BACKEND_KINDS:
            raise ConfigurationError(f"unknown backend {self.kind!r}")
        if self.shots < 1:
            raise ConfigurationError("shots must be >= 1")


@dataclass(frozen=True)
class ProtocolSpec:
    washout: int = 50
    train_fraction: float = 0.7

    def __post_init__(self):
        if self.washout < 0:
            raise ConfigurationError("washout must be >= 0")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigurationError("train_fraction must be in (0, 1)")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one run; defaults mirror the reference setup
    (4 qubits, depth 3, ring topology, angle encoding, local Z, ideal
    backend, washout 50, alpha 1e-2)."""

    task: TaskSpec
    reservoir: ReservoirSpec = ReservoirSpec(n_qubits=4)
    encoder: EncoderSpec = EncoderSpec(n_qubits=4)
    observables: ObservableSpec = ObservableSpec()
    mode: ModeSpec = ModeSpec()
    backend: BackendSpec = BackendSpec()
    protocol: ProtocolSpec = ProtocolSpec()
    alpha: float = DEFAULT_ALPHA
    alpha_grid: tuple[float, ...] | None = None
    master_seed: int = 42

    def __post_init__(self):
        if self.encoder.n_qubits != self.reservoir.n_qubits:
            raise ConfigurationError(
                f"encoder width {self.encoder.n_qubits} != reservoir width "
                f"{self.reservoir.n_qubits}"
            )
        if self.alpha < 0:
            raise ConfigurationError("alpha must be >= 0")


def resolve_seeds(config: ExperimentConfig) -> ExperimentConfig:
    """Fill every unset seed from the master seed's labelled children."""
    master = RandomStream(config.master_seed)
    task = config.task
    if task.seed is None:
        task = replace(task, seed=master.child_seed("data"))
    reservoir = config.reservoir
    if reservoir.seed is None:
        reservoir = replace(reservoir, seed=master.child_seed("reservoir"))
    encoder = config.encoder
    if encoder.interleave_seed is None:
        encoder = replace(encoder, interleave_seed=master.child_seed("encoder-interleave"))
    backend = config.backend
    if backend.shot_seed is None:
        backend = replace(backend, shot_seed=master.child_seed("shots"))
    return replace(config, task=task, reservoir=reservoir, encoder=encoder, backend=backend)


def build_observables(
    obs: ObservableSpec, n_qubits: int, topology: str
) -> tuple[PauliString, ...]:
    out: list[PauliString] = []
    if obs.local_z:
        out.extend(PauliString((q,)) for q in range(n_qubits))
    if obs.zz is not None:
        if obs.zz == "edges":
            pairs = topology_edges(topology, n_qubits)
        elif obs.zz == "all_pairs":
            pairs = tuple((i, j) for i in range(n_qubits) for j in range(i + 1, n_qubits))
        else:
            pairs = obs.zz
        for i, j in pairs:
            if i >= n_qubits or j >= n_qubits:
                raise ConfigurationError(f"zz pair ({i}, {j}) out of range for N={n_qubits}")
            out.append(PauliString((i, j)))
    if not out:
        raise ConfigurationError("no observables configured")
    return tuple(out)


# --------------------------------------------------------------------------
# Evolution
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FeatureMatrix:
    """T_eff x M matrix of measured expectations with row timestamps."""

    values: np.ndarray
    t_index: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.values.ndim != 2:
            raise DataError("feature matrix must be 2-d")
        if self.values.shape[0] != self.t_index.shape[0]:
            raise DataError("row count must match timestamp count")
        if self.values.shape[1] != len(self.labels):
            raise DataError("column count must match label count")
        if not np.all(np.isfinite(self.values)):
            raise DataError("non-finite feature values")


def step(
    state: StateVector,
    u,
    encoder: EncoderCircuit,
    reservoir: ReservoirCircuit,
) -> StateVector:
    """One reservoir time step: encode the input, then apply the fixed
    reservoir (encoder first, matching the operator order of the channel)."""
    encode_input(encoder, u, state)
    apply_reservoir(reservoir, state)
    return state


def _measure_ideal(state: StateVector, observables) -> list[float]:
    return [expectation(state, obs) for obs in observables]


def run_recurrent(series: TimeSeries, config: ExperimentConfig) -> FeatureMatrix:
    """Evolve one persistent state through the whole series, reading exact
    expectations after every step; rows before max(washout, valid_from) are
    dropped. Ideal backend only."""
    cfg = resolve_seeds(config)
    if cfg.backend.kind != "ideal":
        raise ConfigurationError(
            "recurrent mode requires the ideal backend: sampling collapses the "
            "state, so expectations cannot be read non-destructively mid-run; "
            "use mode reupload_k for shots execution"
        )
    encoder = build_encoder(cfg.encoder)
    reservoir = build_reservoir(cfg.reservoir)
    observables = build_observables(cfg.observables, cfg.reservoir.n_qubits, cfg.reservoir.topology)
    keep_from = max(cfg.protocol.washout, series.valid_from)

    state = new_zero_state(cfg.reservoir.n_qubits)
    rows: list[list[float]] = []
    ts: list[int] = []
    for t in range(len(series.inputs)):
        step(state, series.inputs[t], encoder, reservoir)
        if t >= keep_from:
            rows.append(_measure_ideal(state, observables))
            ts.append(t)
    values = np.array(rows, dtype=np.float64).reshape(len(rows), len(observables))
    return FeatureMatrix(values, np.array(ts, dtype=np.int64), tuple(o.label for o in observables))


def run_windowed(series: TimeSeries, config: ExperimentConfig) -> FeatureMatrix:
    """reupload_k evolution: each row rebuilds a fresh state from the last k
    inputs (or the whole prefix when k == "full"). The shots backend samples
    one count table per row and estimates every observable from it."""
    cfg = resolve_seeds(config)
    k = cfg.mode.k
    encoder = build_encoder(cfg.encoder)
    reservoir = build_reservoir(cfg.reservoir)
    observables = build_observables(cfg.observables, cfg.reservoir.n_qubits, cfg.reservoir.topology)

    T = len(series.inputs)
    first_full = 0 if k == FULL_WINDOW else k - 1
    keep_from = max(cfg.protocol.washout, series.valid_from, first_full)
    if keep_from >= T:
        raise ConfigurationError(
            f"no usable rows: series length {T} leaves no step >= {keep_from} "
            f"(washout={cfg.protocol.washout}, window k={k})"
        )

    shot_stream = RandomStream(cfg.backend.shot_seed) if cfg.backend.kind == "shots" else None
    rows: list = []
    ts: list[int] = []
    for t in range(keep_from, T):
        state = new_zero_state(cfg.reservoir.n_qubits)
        start = 0 if k == FULL_WINDOW else t - k + 1
        for s in range(start, t + 1):
            step(state, series.inputs[s], encoder, reservoir)
        if shot_stream is None:
            rows.append(_measure_ideal(state, observables))
        else:
            counts = sample_counts(state, cfg.backend.shots, shot_stream)
            rows.append(estimate_expectations(counts, cfg.backend.shots, observables))
        ts.append(t)
    values = np.array(rows, dtype=np.float64).reshape(len(rows), len(observables))
    return FeatureMatrix(values, np.array(ts, dtype=np.int64), tuple(o.label for o in observables))


def raw_window_features(series: TimeSeries, k: int, t_index) -> np.ndarray:
    """Classical baseline features: the last k raw inputs at each row."""
    if k < 1:
        raise ConfigurationError("window k must be >= 1")
    rows = []
    for t in t_index:
        if t < k - 1:
            raise ConfigurationError(f"row t={t} has no {k}-step window")
        rows.append(series.inputs[t - k + 1 : t + 1])
    return np.array(rows, dtype=np.float64).reshape(len(rows), k)


# --------------------------------------------------------------------------
# The case protocol
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RunResult:
    config: ExperimentConfig  # seed-resolved echo of the run
    features: FeatureMatrix
    targets: np.ndarray
    predictions: np.ndarray
    split_at: int  # first test row (train rows are [0, split_at))
    metrics: dict
    model: object
    alpha_sweep: tuple | None = None


def task_metric(kind: str):
    """(metric name, scorer) used for a task's headline numbers."""
    if kind == "parity":
        return "accuracy", accuracy
    return "r2", r2_score


def _validate_lengths(cfg: ExperimentConfig):
    spec = cfg.task
    horizon = max(spec.delay, spec.window, 10)
    if spec.T <= cfg.protocol.washout + horizon:
        raise ConfigurationError(
            f"T={spec.T} too short: needs more than washout {cfg.protocol.washout} "
            f"+ dependency horizon {horizon}"
        )


def run_case(config: ExperimentConfig) -> RunResult:
    """The full protocol: generate the series, evolve, split contiguously
    into train-then-test, fit the ridge readout, score both segments."""
    cfg = resolve_seeds(config)
    _validate_lengths(cfg)
    series = generate(cfg.task)

    if cfg.mode.kind == "recurrent":
        features = run_recurrent(series, cfg)
    else:
        features = run_windowed(series, cfg)

    t_eff = features.values.shape[0]
    n_train = int(np.floor(cfg.protocol.train_fraction * t_eff))
    if n_train < 1 or n_train >= t_eff:
        raise ConfigurationError(
            f"empty train or test segment: T_eff={t_eff}, train rows={n_train}"
        )

    targets = series.targets[features.t_index]
    X_train, X_test = features.values[:n_train], features.values[n_train:]
    y_train, y_test = targets[:n_train], targets[n_train:]

    model = fit_ridge(X_train, y_train, alpha=cfg.alpha)
    pred = predict(model, features.values)

    name, scorer = task_metric(cfg.task.kind)
    metrics = {
        f"train_{name}": scorer(pred[:n_train], y_train),
        f"test_{name}": scorer(pred[n_train:], y_test),
        "train_mse": mse(pred[:n_train], y_train),
        "test_mse": mse(pred[n_train:], y_test),
    }

    sweep = None
    if cfg.alpha_grid:
        sweep_rows = []
        for a in cfg.alpha_grid:
            m = fit_ridge(X_train, y_train, alpha=a)
            p = predict(m, features.values)
            sweep_rows.append(
                (float(a), scorer(p[:n_train], y_train), scorer(p[n_train:], y_test))
            )
        sweep = tuple(sweep_rows)

    return RunResult(
        config=cfg,
        features=features,
        targets=targets,
        predictions=pred,
        split_at=n_train,
        metrics=metrics,
        model=model,
        alpha_sweep=sweep,
    )


# --------------------------------------------------------------------------
# Sweeps and the theory scan
# --------------------------------------------------------------------------


def confidence_term(m: int, delta: float) -> float:
    """sqrt(ln(1/delta) / (2m)): the sample-size term of the risk bound."""
    if m < 1:
        raise ConfigurationError("m must be >= 1")
    if not 0.0 < delta < 1.0:
        raise ConfigurationError("delta must be in (0, 1)")
    return float(np.sqrt(np.log(1.0 / delta) / (2.0 * m)))


@dataclass(frozen=True)
class ScanRow:
    n_qubits: int
    train_score: float
    test_score: float
    gap: float
    confidence_term: float
    m: int
    delta: float


def _case_scores(cfg: ExperimentConfig) -> tuple[float, float, int]:
    res = run_case(cfg)
    name, _ = task_metric(cfg.task.kind)
    return (
        float(res.metrics[f"train_{name}"]),
        float(res.metrics[f"test_{name}"]),
        len(res.targets) - res.split_at,
    )


def _worker_count() -> int:
    raw = os.environ.get("QRCLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(f"QRCLAB_THREADS must be an integer, got {raw!r}")
    if n == 0:
        return os.cpu_count() or 1
    return max(n, 1)


def _map_cases(configs):
    workers = _worker_count()
    if workers <= 1 or len(configs) <= 1:
        return [_case_scores(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_case_scores, configs))


def _replicate_config(config: ExperimentConfig, r: int, n_qubits: int | None = None) -> ExperimentConfig:
    """Per-replicate seed derivation. Data is shared across widths within a
    replicate so the scan compares reservoirs on identical series."""
    rep = RandomStream(config.master_seed).child(f"replicate-{r}")
    suffix = "" if n_qubits is None else f"-n{n_qubits}"
    task = replace(config.task, seed=rep.child_seed("data"))
    reservoir = replace(
        config.reservoir,
        n_qubits=n_qubits or config.reservoir.n_qubits,
        seed=rep.child_seed(f"reservoir{suffix}"),
    )
    encoder = replace(
        config.encoder,
        n_qubits=n_qubits or config.encoder.n_qubits,
        interleave_seed=rep.child_seed(f"encoder-interleave{suffix}"),
    )
    backend = replace(config.backend, shot_seed=rep.child_seed(f"shots{suffix}"))
    return replace(
        config,
        task=task,
        reservoir=reservoir,
        encoder=encoder,
        backend=backend,
        master_seed=rep.seed,
    )


def stm_delay_sweep(
    config: ExperimentConfig, delays, replicates: int = 10
) -> list[tuple[int, float]]:
    """Mean test R^2 per delay, averaged over replicate seeds; reservoir and
    encoder seeds are shared across delays within each replicate."""
    delays = [int(d) for d in delays]
    if not delays:
        raise ConfigurationError("delays must be non-empty")
    if any(d < 1 for d in delays):
        raise ConfigurationError("delays must be >= 1")
    if replicates < 1:
        raise ConfigurationError("replicates must be >= 1")

    cells = []
    for r in range(replicates):
        base = _replicate_config(config, r)
        for d in delays:
            cells.append(replace(base, task=replace(base.task, kind="stm", delay=d)))
    scores = _map_cases(cells)

    out = []
    for i, d in enumerate(delays):
        vals = [scores[r * len(delays) + i][1] for r in range(replicates)]
        out.append((d, float(np.mean(vals))))
    return out


def theory_scan(
    config: ExperimentConfig, qubit_list, delta: float, replicates: int = 10
) -> list[ScanRow]:
    """Replicate-averaged train/test scores per reservoir width, with the
    risk bound's sample-size confidence term."""
    qubits = [int(n) for n in qubit_list]
    if not qubits:
        raise ConfigurationError("qubit list must be non-empty")
    if any(b <= a for a, b in zip(qubits, qubits[1:])):
        raise ConfigurationError("qubit list must be strictly ascending")
    if not 0.0 < delta < 1.0:
        raise ConfigurationError("delta must be in (0, 1)")
    if replicates < 1:
        raise ConfigurationError("replicates must be >= 1")

    cells = []
    for n in qubits:
        for r in range(replicates):
            cells.append(_replicate_config(config, r, n_qubits=n))
    scores = _map_cases(cells)

    rows = []
    for i, n in enumerate(qubits):
        block = scores[i * replicates : (i + 1) * replicates]
        m_values = {m for _, _, m in block}
        if len(m_values) != 1:
            raise ConfigurationError(f"inconsistent test sample counts across replicates: {m_values}")
        m = m_values.pop()
        train = float(np.mean([b[0] for b in block]))
        test = float(np.mean([b[1] for b in block]))
        rows.append(
            ScanRow(
                n_qubits=n,
                train_score=train,
                test_score=test,
                gap=train - test,
                confidence_term=confidence_term(m, delta),
                m=m,
                delta=delta,
            )
        )
    return rows


# --------------------------------------------------------------------------
# Artifact rendering (CSV)
# --------------------------------------------------------------------------


def features_csv(features: FeatureMatrix) -> str:
    header = "t," + ",".join(features.labels)
    lines = [header]
    for i, t in enumerate(features.t_index):
        vals = ",".join(f"{v:.17g}" for v in features.values[i])
        lines.append(f"{int(t)},{vals}")
    return "\n".join(lines) + "\n"


def predictions_csv(result: RunResult) -> str:
    lines = ["t,target,prediction,split"]
    for i, t in enumerate(result.features.t_index):
        split = "train" if i < result.split_at else "test"
        lines.append(
            f"{int(t)},{result.targets[i]:.17g},{result.predictions[i]:.17g},{split}"
        )
    return "\n".join(lines) + "\n"


def scan_csv(rows) -> str:
    lines = ["n_qubits,train_score,test_score,gap,confidence_term"]
    for row in rows:
        lines.append(
            f"{row.n_qubits},{row.train_score:.17g},{row.test_score:.17g},"
            f"{row.gap:.17g},{row.confidence_term:.17g}"
        )
    return "\n".join(lines) + "\n"
