"""Quantum state representations: sparse hashmap, dense vector, density matrix.

The sparse form stores only basis keys with nonzero amplitude, so its memory
and per-gate cost track the amount of superposition rather than the register
size. The dense forms are capped by default (see `dense_cap`) because their
storage is exponential in the qubit count.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

# Amplitudes at or below this modulus are treated as the paper's exact zeros
# and dropped from sparse maps.
PRUNE_EPS = 1e-12

NORM_TOL = 1e-9

DENSE_CAP_DEFAULT = 24
DENSITY_CAP_DEFAULT = 12

MAX_QUBITS = 64


class CapacityError(Exception):
    """A dense representation would exceed its configured qubit cap."""


class NormalizationError(Exception):
    """Internal invariant violation: a state's norm drifted beyond tolerance."""


def dense_cap() -> int:
    """Qubit cap for dense vectors; override with SPARSIM_DENSE_CAP."""
    raw = os.environ.get("SPARSIM_DENSE_CAP")
    return int(raw) if raw else DENSE_CAP_DEFAULT


def density_cap() -> int:
    """Qubit cap for density matrices: half the headroom of the vector cap."""
    raw = os.environ.get("SPARSIM_DENSE_CAP")
    return int(raw) // 2 if raw else DENSITY_CAP_DEFAULT


@dataclass
class SparseState:
    """Pure state as a map from basis key to complex amplitude."""

    n: int
    amplitudes: dict[int, complex]

    @property
    def map_size(self) -> int:
        return len(self.amplitudes)

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.amplitudes.values())

    def copy(self) -> "SparseState":
        return SparseState(self.n, dict(self.amplitudes))


@dataclass
class DenseState:
    """Pure state as a length-2^n complex vector."""

    n: int
    amplitudes: np.ndarray

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amplitudes.copy())


@dataclass
class DensityMatrix:
    """Mixed state as a 2^n x 2^n Hermitian trace-1 matrix."""

    n: int
    rho: np.ndarray

    def trace(self) -> complex:
        return complex(np.trace(self.rho))

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.n, self.rho.copy())


@dataclass
class MeasurementRecord:
    """Most recent measurement outcome per qubit; None means unmeasured."""

    bits: list[int | None]

    @classmethod
    def empty(cls, n: int) -> "MeasurementRecord":
        return cls([None] * n)

    def set(self, q: int, outcome: int) -> None:
        self.bits[q] = outcome

    def to_string(self) -> str:
        """Qubit-0-first string; '-' marks unmeasured qubits."""
        return "".join("-" if b is None else str(b) for b in self.bits)

    def any_measured(self) -> bool:
        return any(b is not None for b in self.bits)


def init_sparse(n: int) -> SparseState:
    """All-zeros start state |0...0> as a one-key map."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"register size {n} outside supported range [1, {MAX_QUBITS}]")
    return SparseState(n, {0: 1.0 + 0.0j})


def init_dense(n: int) -> DenseState:
    if not 1 <= n <= dense_cap():
        raise CapacityError(f"dense vector for n={n} exceeds cap of {dense_cap()} qubits")
    vec = np.zeros(1 << n, dtype=np.complex128)
    vec[0] = 1.0
    return DenseState(n, vec)


def init_density(n: int) -> DensityMatrix:
    if not 1 <= n <= density_cap():
        raise CapacityError(f"density matrix for n={n} exceeds cap of {density_cap()} qubits")
    rho = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    rho[0, 0] = 1.0
    return DensityMatrix(n, rho)


def prune(s: SparseState) -> SparseState:
    """Drop stored amplitudes with modulus at or below the zero threshold."""
    kept = {k: a for k, a in s.amplitudes.items() if abs(a) > PRUNE_EPS}
    return SparseState(s.n, kept)


def sparse_to_dense(s: SparseState) -> DenseState:
    if s.n > dense_cap():
        raise CapacityError(f"2^{s.n} entries exceed the dense cap of {dense_cap()} qubits")
    vec = np.zeros(1 << s.n, dtype=np.complex128)
    for key, amp in s.amplitudes.items():
        vec[key] = amp
    return DenseState(s.n, vec)


def dense_to_sparse(d: DenseState) -> SparseState:
    keys = np.nonzero(np.abs(d.amplitudes) > PRUNE_EPS)[0]
    return SparseState(d.n, {int(k): complex(d.amplitudes[k]) for k in keys})


def fidelity_check(a: SparseState | DenseState, b: SparseState | DenseState) -> float:
    """Max entrywise amplitude difference between two pure states."""
    if a.n != b.n:
        raise ValueError(f"register size mismatch: {a.n} vs {b.n}")
    if isinstance(a, DenseState) and isinstance(b, DenseState):
        return float(np.max(np.abs(a.amplitudes - b.amplitudes))) if a.amplitudes.size else 0.0

    def amp(state: SparseState | DenseState, key: int) -> complex:
        if isinstance(state, SparseState):
            return state.amplitudes.get(key, 0.0 + 0.0j)
        return complex(state.amplitudes[key])

    if isinstance(a, SparseState) and isinstance(b, SparseState):
        keys = set(a.amplitudes) | set(b.amplitudes)
    else:
        sparse = a if isinstance(a, SparseState) else b
        dense = b if isinstance(b, DenseState) else a
        keys = set(sparse.amplitudes) | set(np.nonzero(np.abs(dense.amplitudes) > 0.0)[0].tolist())
    return max((abs(amp(a, k) - amp(b, k)) for k in keys), default=0.0)


def assert_normalized(state: SparseState | DenseState, tol: float = NORM_TOL) -> None:
    norm_sq = state.norm_sq()
    if abs(norm_sq - 1.0) > tol:
        raise NormalizationError(f"state norm^2 drifted to {norm_sq!r}")


def dump_lines(state: SparseState | DenseState | DensityMatrix) -> list[str]:
    """State dump, one line per retained key, keys ascending.

    Line format: "<key-decimal> <key-binary-n-bits> <re> <im>" with 17
    significant digits. Density matrices dump their diagonal (populations).
    """
    n = state.n
    if isinstance(state, SparseState):
        entries = sorted(state.amplitudes.items())
    elif isinstance(state, DenseState):
        keys = np.nonzero(np.abs(state.amplitudes) > PRUNE_EPS)[0]
        entries = [(int(k), complex(state.amplitudes[k])) for k in keys]
    else:
        diag = np.diagonal(state.rho)
        keys = np.nonzero(np.abs(diag) > PRUNE_EPS)[0]
        entries = [(int(k), complex(diag[k])) for k in keys]
    return [
        # + 0.0 folds IEEE negative zeros into "0".
        f"{key} {key:0{n}b} {amp.real + 0.0:.17g} {amp.imag + 0.0:.17g}"
        for key, amp in entries
    ]
