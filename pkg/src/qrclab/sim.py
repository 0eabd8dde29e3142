"""Dense statevector simulator: gate kernels, Pauli-Z expectations, shot sampling.

Conventions (frozen; tests depend on them):

* Qubit 0 is the least significant bit of the basis index, so basis state
  ``|q_{n-1} ... q_1 q_0>`` has index ``sum(q_i * 2**i)``.
* ``RY(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]``
* ``RZ(theta) = diag(exp(-i*theta/2), exp(+i*theta/2))``
* Controlled variants rotate the target only on the control=1 subspace.

All arithmetic is double-precision complex. Norm drift is asserted by
callers/tests, never silently repaired here.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DataError

MAX_QUBITS = 24  # 2**24 complex128 amplitudes = 256 MB; desk-scale ceiling

GATE_KINDS = ("RY", "RZ", "CRY", "CRZ")


# --------------------------------------------------------------------------
# Seeded randomness
# --------------------------------------------------------------------------


class RandomStream:
    """A seeded PCG64 stream with labelled, hash-derived child streams.

    Child derivation is ``sha256(f"{seed}/{label}")``, first 8 bytes taken
    little-endian as the child seed. It depends only on the parent *seed*
    (not on how many values were drawn), so the derivation tree is stable
    no matter the draw order. Same seed + same draw sequence gives identical
    outputs on every platform numpy supports.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def child(self, label: str) -> "RandomStream":
        digest = hashlib.sha256(f"{self.seed}/{label}".encode("utf-8")).digest()
        return RandomStream(int.from_bytes(digest[:8], "little"))

    def child_seed(self, label: str) -> int:
        return self.child(label).seed

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._gen.uniform(low, high, size)

    def integers(self, low: int, high: int, size=None):
        return self._gen.integers(low, high, size)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed})"


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GateOp:
    """One elementary unitary: a rotation or controlled rotation.

    ``control`` must be present exactly for the controlled kinds and must
    differ from ``target``; index-vs-state validation happens at apply time.
    """

    kind: str
    angle: float
    target: int
    control: int | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ConfigurationError(f"unknown gate kind {self.kind!r}")
        controlled = self.kind.startswith("C")
        if controlled and self.control is None:
            raise ConfigurationError(f"{self.kind} requires a control qubit")
        if not controlled and self.control is not None:
            raise ConfigurationError(f"{self.kind} takes no control qubit")
        if self.control is not None and self.control == self.target:
            raise ConfigurationError("control and target must differ")
        if self.target < 0 or (self.control is not None and self.control < 0):
            raise ConfigurationError("qubit indices must be non-negative")
        if not np.isfinite(self.angle):
            raise ConfigurationError(f"gate angle must be finite, got {self.angle}")


@dataclass(frozen=True)
class PauliString:
    """A product of Pauli-Z factors on one or two distinct qubits."""

    qubits: tuple[int, ...]

    def __post_init__(self):
        qs = tuple(int(q) for q in self.qubits)
        if not 1 <= len(qs) <= 2:
            raise ConfigurationError("PauliString supports 1 or 2 Z factors")
        if len(set(qs)) != len(qs):
            raise ConfigurationError("PauliString qubits must be distinct")
        if any(q < 0 for q in qs):
            raise ConfigurationError("qubit indices must be non-negative")
        object.__setattr__(self, "qubits", tuple(sorted(qs)))

    @property
    def label(self) -> str:
        return "".join(f"Z{q}" for q in self.qubits)


class StateVector:
    """An n-qubit pure state as a dense array of 2**n complex amplitudes."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ConfigurationError(
                f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}"
            )
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.shape != (2**n_qubits,):
            raise ConfigurationError(
                f"expected {2**n_qubits} amplitudes, got shape {amps.shape}"
            )
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 1e-8:
            raise DataError(f"state norm**2 deviates from 1 by {abs(norm_sq - 1.0):.3e}")
        self.n_qubits = n_qubits
        self.amplitudes = amps

    def norm_error(self) -> float:
        """|sum |a_i|**2 - 1|; callers assert this, it is never auto-repaired."""
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)

    def copy(self) -> "StateVector":
        out = object.__new__(StateVector)
        out.n_qubits = self.n_qubits
        out.amplitudes = self.amplitudes.copy()
        return out

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


# --------------------------------------------------------------------------
# Operations
# --------------------------------------------------------------------------


def new_zero_state(n_qubits: int) -> StateVector:
    """Return |0...0> on ``n_qubits`` qubits."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(
            f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}"
        )
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


@lru_cache(maxsize=8192)
def _rotation_matrix(kind: str, angle: float) -> np.ndarray:
    # cached: fixed reservoir/encoder gates recur at every time step
    half = 0.5 * angle
    if kind in ("RY", "CRY"):
        c, s = np.cos(half), np.sin(half)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    # RZ / CRZ
    return np.array(
        [[np.exp(-1j * half), 0.0], [0.0, np.exp(1j * half)]], dtype=np.complex128
    )


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Apply one gate in place on the designated amplitude pairs.

    Qubit q lives on axis (n-1-q) of the amplitudes reshaped to [2]*n.
    """
    n = state.n_qubits
    if gate.target >= n or (gate.control is not None and gate.control >= n):
        raise ConfigurationError(
            f"gate {gate.kind} indices out of range for {n}-qubit state"
        )
    mat = _rotation_matrix(gate.kind, gate.angle)
    psi = state.amplitudes.reshape([2] * n)

    sel0: list = [slice(None)] * n
    sel1: list = [slice(None)] * n
    t_ax = n - 1 - gate.target
    sel0[t_ax] = 0
    sel1[t_ax] = 1
    if gate.control is not None:
        c_ax = n - 1 - gate.control
        sel0[c_ax] = 1
        sel1[c_ax] = 1
    i0, i1 = tuple(sel0), tuple(sel1)

    a0 = psi[i0]
    a1 = psi[i1]
    new0 = mat[0, 0] * a0 + mat[0, 1] * a1
    new1 = mat[1, 0] * a0 + mat[1, 1] * a1
    psi[i0] = new0
    psi[i1] = new1
    return state


def apply_circuit(state: StateVector, gates) -> StateVector:
    for gate in gates:
        apply_gate(state, gate)
    return state


def expectation(state: StateVector, obs: PauliString) -> float:
    """Exact <psi|O|psi> for a Z-product observable; non-destructive.

    Equals sum_i sign(i) |a_i|**2 where sign flips with each factor qubit
    whose bit is 1.
    """
    n = state.n_qubits
    if any(q >= n for q in obs.qubits):
        raise ConfigurationError(f"observable {obs.label} out of range for n={n}")
    probs = np.abs(state.amplitudes) ** 2
    p = probs.reshape([2] * n)
    axes = tuple(n - 1 - q for q in obs.qubits)
    p = np.moveaxis(p, axes, tuple(range(len(axes))))
    if len(axes) == 1:
        val = p[0].sum() - p[1].sum()
    else:
        val = p[0, 0].sum() + p[1, 1].sum() - p[0, 1].sum() - p[1, 0].sum()
    return float(val)


def sample_counts(state: StateVector, shots: int, rng: RandomStream) -> dict[int, int]:
    """Draw ``shots`` i.i.d. basis indices from |a_i|**2 via inverse CDF.

    Returns a basis-index -> count map whose values sum to ``shots``.
    """
    if shots < 1:
        raise ConfigurationError(f"shots must be >= 1, got {shots}")
    probs = np.abs(state.amplitudes) ** 2
    cdf = np.cumsum(probs)
    cdf[-1] = max(cdf[-1], 1.0)  # guard the last bin against rounding
    draws = rng.uniform(0.0, 1.0, size=shots)
    indices = np.searchsorted(cdf, draws, side="right")
    values, counts = np.unique(indices, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def _sign_for_index(index: int, obs: PauliString) -> int:
    parity = 0
    for q in obs.qubits:
        parity ^= (index >> q) & 1
    return 1 - 2 * parity


def estimate_expectations(
    counts: dict[int, int], shots: int, obs_list
) -> np.ndarray:
    """Estimate each observable from one joint Z-basis count table."""
    if not counts:
        raise DataError("empty count table")
    total = sum(counts.values())
    if total != shots:
        raise DataError(f"counts sum to {total}, expected shots={shots}")
    out = np.empty(len(obs_list), dtype=np.float64)
    for k, obs in enumerate(obs_list):
        acc = 0
        for index, c in counts.items():
            acc += _sign_for_index(index, obs) * c
        out[k] = acc / shots
    return out
