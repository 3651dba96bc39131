"""Dense reference engines: full state-vector and density-matrix evolution.

The vector engine is the ground-truth oracle for the sparse engine on small
registers. The density-matrix engine adds the predefined noise channels.
Gates are applied by stride iteration over the 2^n array; the full
2^n x 2^n embedding of a gate is never materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bitcore import qubit_mask
from .bitwise import apply_qft, make_rng
from .gates import SparseGate, standard
from .state import (
    DenseState,
    DensityMatrix,
    MeasurementRecord,
    NormalizationError,
    init_dense,
    init_density,
)

_PROB_TOL = 1e-9

KRAUS_COMPLETENESS_TOL = 1e-10

_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _window_left(arr: np.ndarray, u: np.ndarray, q: int, w: int) -> np.ndarray:
    """Multiply u onto the qubit window [q, q + w) of the row index of arr."""
    lead, mid = 1 << q, 1 << w
    t = arr.reshape(lead, mid, -1)
    return np.einsum("ij,ajb->aib", u, t).reshape(arr.shape)


def _conjugate_window(rho: np.ndarray, u: np.ndarray, q: int, w: int) -> np.ndarray:
    """u rho u^dagger on the window, via (u (u rho)^dagger)^dagger."""
    half = _window_left(rho, u, q, w)
    return _window_left(half.conj().T, u, q, w).conj().T


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving map given by 2x2 Kraus operators."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        total = sum(k.conj().T @ k for k in self.operators)
        deviation = np.max(np.abs(total - np.eye(2)))
        if not deviation <= KRAUS_COMPLETENESS_TOL:
            raise ValueError(f"Kraus operators not trace preserving: deviation {deviation:.3g}")


def kraus_flip(axis: str, p: float) -> KrausChannel:
    """Bit/phase/bit-phase flip: keep with 1-p, apply the Pauli with p."""
    if axis not in _PAULI:
        raise ValueError(f"flip axis must be X, Y or Z, got {axis!r}")
    _check_probability(p)
    eye = np.eye(2, dtype=np.complex128)
    return KrausChannel((math.sqrt(1.0 - p) * eye, math.sqrt(p) * _PAULI[axis]))


def kraus_amp_damping(p: float) -> KrausChannel:
    """Energy decay |1> -> |0> with probability p."""
    _check_probability(p)
    k0 = np.array([[1, 0], [0, math.sqrt(1.0 - p)]], dtype=np.complex128)
    k1 = np.array([[0, math.sqrt(p)], [0, 0]], dtype=np.complex128)
    return KrausChannel((k0, k1))


def kraus_depolarizing(p: float) -> KrausChannel:
    """Uniform Pauli noise: (1 - 3p/4) rho + (p/4)(XrhoX + YrhoY + ZrhoZ)."""
    _check_probability(p)
    ops = [math.sqrt(1.0 - 0.75 * p) * np.eye(2, dtype=np.complex128)]
    ops += [math.sqrt(0.25 * p) * _PAULI[axis] for axis in ("X", "Y", "Z")]
    return KrausChannel(tuple(ops))


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")


def apply_channel(rho: DensityMatrix, channel: KrausChannel, q: int) -> DensityMatrix:
    """Apply a single-qubit Kraus channel on qubit q of the register."""
    qubit_mask(rho.n, q)  # validate the index
    total = np.zeros_like(rho.rho)
    for k in channel.operators:
        total += _conjugate_window(rho.rho, k, q, 1)
    return DensityMatrix(rho.n, total)


def flip_channel(rho: DensityMatrix, axis: str, q: int, p: float) -> DensityMatrix:
    return apply_channel(rho, kraus_flip(axis, p), q)


def amp_damping(rho: DensityMatrix, q: int, p: float) -> DensityMatrix:
    return apply_channel(rho, kraus_amp_damping(p), q)


def dpl_channel(rho: DensityMatrix, q: int, p: float) -> DensityMatrix:
    return apply_channel(rho, kraus_depolarizing(p), q)


class DenseEngine:
    """Full 2^n state-vector engine; oracle counterpart of the sparse engine."""

    kind = "dense"

    def __init__(self, n: int, seed: int = 0):
        self.state: DenseState = init_dense(n)
        self.record = MeasurementRecord.empty(n)
        self.rng = make_rng(seed)
        self._idx: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.state.n

    def _indices(self) -> np.ndarray:
        if self._idx is None:
            self._idx = np.arange(1 << self.state.n, dtype=np.int64)
        return self._idx

    def apply_gate(self, gate: SparseGate, q: int) -> None:
        n = self.state.n
        if q < 0 or q + gate.arity > n:
            raise ValueError(f"gate span [{q}, {q + gate.arity}) exceeds {n}-qubit register")
        self.state.amplitudes = _window_left(self.state.amplitudes, gate.to_matrix(), q, gate.arity)

    def hadamard(self, q: int) -> None:
        self.apply_gate(standard("H"), q)

    def cnot(self, target: int, controls: Sequence[int] = ()) -> None:
        if target in controls:
            raise ValueError(f"target qubit {target} also listed as control")
        n = self.state.n
        tmask = qubit_mask(n, target)
        cmask = 0
        for c in controls:
            cmask |= qubit_mask(n, c)
        idx = self._indices()
        src = np.where(idx & cmask == cmask, idx ^ tmask, idx)
        self.state.amplitudes = self.state.amplitudes[src]

    def cphase(self, phase: complex, target: int, controls: Sequence[int] = ()) -> None:
        if abs(abs(phase) - 1.0) > _PROB_TOL:
            raise ValueError(f"phase {phase!r} is not unimodular")
        n = self.state.n
        mask = qubit_mask(n, target)
        for c in controls:
            cm = qubit_mask(n, c)
            if cm & mask:
                raise ValueError("cphase qubit indices must be distinct")
            mask |= cm
        idx = self._indices()
        self.state.amplitudes[idx & mask == mask] *= phase

    def swap(self, a: int, b: int) -> None:
        n = self.state.n
        if a == b:
            qubit_mask(n, a)
            return
        amask, bmask = qubit_mask(n, a), qubit_mask(n, b)
        both = amask | bmask
        idx = self._indices()
        hit = idx & both
        src = np.where((hit == amask) | (hit == bmask), idx ^ both, idx)
        self.state.amplitudes = self.state.amplitudes[src]

    def qft(self, first: int, last: int) -> None:
        apply_qft(self, first, last)

    def measure(self, q: int) -> int:
        n = self.state.n
        qubit_mask(n, q)
        vec = self.state.amplitudes.reshape(1 << q, 2, -1)
        p0 = float(np.sum(np.abs(vec[:, 0, :]) ** 2))
        if p0 < -_PROB_TOL or p0 > 1.0 + _PROB_TOL:
            raise NormalizationError(f"measurement saw p0 = {p0!r}; state norm corrupted")
        p0 = min(max(p0, 0.0), 1.0)

        u = self.rng.random()
        outcome = 0 if p0 > 0.0 and u < p0 else 1
        p = p0 if outcome == 0 else 1.0 - p0
        vec[:, 1 - outcome, :] = 0.0
        self.state.amplitudes = (vec / math.sqrt(p)).reshape(-1)
        self.record.set(q, outcome)
        return outcome

    def measure_all(self) -> str:
        return "".join(str(self.measure(q)) for q in range(self.state.n))


class DensityEngine:
    """Density-matrix engine for circuits with classical noise."""

    kind = "density"

    def __init__(self, n: int, seed: int = 0):
        self.state: DensityMatrix = init_density(n)
        self.record = MeasurementRecord.empty(n)
        self.rng = make_rng(seed)
        self._idx: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.state.n

    def _indices(self) -> np.ndarray:
        if self._idx is None:
            self._idx = np.arange(1 << self.state.n, dtype=np.int64)
        return self._idx

    def apply_gate(self, gate: SparseGate, q: int) -> None:
        n = self.state.n
        if q < 0 or q + gate.arity > n:
            raise ValueError(f"gate span [{q}, {q + gate.arity}) exceeds {n}-qubit register")
        self.state.rho = _conjugate_window(self.state.rho, gate.to_matrix(), q, gate.arity)

    def hadamard(self, q: int) -> None:
        self.apply_gate(standard("H"), q)

    def _permute(self, src: np.ndarray) -> None:
        self.state.rho = self.state.rho[np.ix_(src, src)]

    def cnot(self, target: int, controls: Sequence[int] = ()) -> None:
        if target in controls:
            raise ValueError(f"target qubit {target} also listed as control")
        n = self.state.n
        tmask = qubit_mask(n, target)
        cmask = 0
        for c in controls:
            cmask |= qubit_mask(n, c)
        idx = self._indices()
        self._permute(np.where(idx & cmask == cmask, idx ^ tmask, idx))

    def cphase(self, phase: complex, target: int, controls: Sequence[int] = ()) -> None:
        if abs(abs(phase) - 1.0) > _PROB_TOL:
            raise ValueError(f"phase {phase!r} is not unimodular")
        n = self.state.n
        mask = qubit_mask(n, target)
        for c in controls:
            cm = qubit_mask(n, c)
            if cm & mask:
                raise ValueError("cphase qubit indices must be distinct")
            mask |= cm
        idx = self._indices()
        hit = idx & mask == mask
        self.state.rho[hit, :] *= phase
        self.state.rho[:, hit] *= np.conj(phase)

    def swap(self, a: int, b: int) -> None:
        n = self.state.n
        if a == b:
            qubit_mask(n, a)
            return
        amask, bmask = qubit_mask(n, a), qubit_mask(n, b)
        both = amask | bmask
        idx = self._indices()
        hit = idx & both
        self._permute(np.where((hit == amask) | (hit == bmask), idx ^ both, idx))

    def qft(self, first: int, last: int) -> None:
        apply_qft(self, first, last)

    def flip(self, axis: str, q: int, p: float) -> None:
        self.state = flip_channel(self.state, axis, q, p)

    def amp_damping(self, q: int, p: float) -> None:
        self.state = amp_damping(self.state, q, p)

    def dpl_channel(self, q: int, p: float) -> None:
        self.state = dpl_channel(self.state, q, p)

    def measure(self, q: int) -> int:
        n = self.state.n
        mask = qubit_mask(n, q)
        idx = self._indices()
        zero_rows = idx & mask == 0
        diag = np.real(np.diagonal(self.state.rho))
        p0 = float(np.sum(diag[zero_rows]))
        if p0 < -_PROB_TOL or p0 > 1.0 + _PROB_TOL:
            raise NormalizationError(f"measurement saw p0 = {p0!r}; trace corrupted")
        p0 = min(max(p0, 0.0), 1.0)

        u = self.rng.random()
        outcome = 0 if p0 > 0.0 and u < p0 else 1
        p = p0 if outcome == 0 else 1.0 - p0
        keep = zero_rows if outcome == 0 else ~zero_rows
        rho = self.state.rho
        rho[~keep, :] = 0.0
        rho[:, ~keep] = 0.0
        self.state.rho = rho / p
        self.record.set(q, outcome)
        return outcome

    def measure_all(self) -> str:
        return "".join(str(self.measure(q)) for q in range(self.state.n))
