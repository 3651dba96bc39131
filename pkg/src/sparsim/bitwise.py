"""Sparse hashmap engine: gates act on basis keys with masks, shifts and XOR.

Per-gate cost is O(s * g) for map size s and gate fanout g, independent of
the register size, so states described by few basis keys stay cheap no
matter how many qubits they span.
"""

from __future__ import annotations

import cmath
import math
import random
from typing import Sequence

from .bitcore import qubit_mask, split_key
from .gates import SparseGate
from .state import (
    PRUNE_EPS,
    MeasurementRecord,
    NormalizationError,
    SparseState,
    init_sparse,
)

_SQRT1_2 = 1.0 / math.sqrt(2.0)

# Slack on p0 before declaring the map's normalization corrupted.
_PROB_TOL = 1e-9


def make_rng(seed: int) -> random.Random:
    """Seedable PRNG for measurement draws.

    Uses the stdlib Mersenne Twister, whose random() stream is documented to
    be reproducible across platforms and versions for a fixed seed. Seed 0 is
    reserved to mean entropy-seeded.
    """
    return random.Random(seed) if seed != 0 else random.Random()


def apply_qft(engine, first: int, last: int) -> None:
    """Fourier transform on qubits [first, last] of any engine.

    Standard structure: per qubit a Hadamard followed by controlled phases
    of pi / 2^(j - i) from each later qubit j, then swaps reversing the
    sub-register order.
    """
    if not 0 <= first <= last < engine.n:
        raise ValueError(f"qft range [{first}, {last}] invalid for {engine.n} qubits")
    for i in range(first, last + 1):
        engine.hadamard(i)
        for j in range(i + 1, last + 1):
            phase = cmath.exp(1j * math.pi / (1 << (j - i)))
            engine.cphase(phase, i, [j])
    for k in range((last - first + 1) // 2):
        engine.swap(first + k, last - k)


class BitwiseEngine:
    """Holds a sparse state and applies gates and measurements to it."""

    kind = "bitwise"

    def __init__(self, n: int, seed: int = 0):
        self.state: SparseState = init_sparse(n)
        self.record = MeasurementRecord.empty(n)
        self.rng = make_rng(seed)

    @property
    def n(self) -> int:
        return self.state.n

    @property
    def map_size(self) -> int:
        return self.state.map_size

    def apply_gate(self, gate: SparseGate, q: int) -> None:
        """Apply a sparse gate spanning qubits [q, q + arity)."""
        n = self.state.n
        w = gate.arity
        if q < 0 or q + w > n:
            raise ValueError(f"gate span [{q}, {q + w}) exceeds {n}-qubit register")
        shift = n - q - w
        columns = gate.columns
        new: dict[int, complex] = {}
        get = new.get
        for key, amp in self.state.amplitudes.items():
            x, y, z = split_key(key, n, q, w)
            xz = x | z
            for a_j, j in columns.get(y, ()):
                xiz = xz | (j << shift)
                new[xiz] = get(xiz, 0.0) + a_j * amp
        # Interference may leave (near-)zero entries; drop them in one pass.
        self.state.amplitudes = {k: v for k, v in new.items() if abs(v) > PRUNE_EPS}

    def hadamard(self, q: int) -> None:
        """Hadamard on qubit q without materializing a gate map."""
        mask = qubit_mask(self.state.n, q)
        new: dict[int, complex] = {}
        get = new.get
        for key, amp in self.state.amplitudes.items():
            half = amp * _SQRT1_2
            # Same-key term picks up the -1 sign when the qubit bit is 1.
            new[key] = get(key, 0.0) + (-half if key & mask else half)
            flipped = key ^ mask
            new[flipped] = get(flipped, 0.0) + half
        self.state.amplitudes = {k: v for k, v in new.items() if abs(v) > PRUNE_EPS}

    def cnot(self, target: int, controls: Sequence[int] = ()) -> None:
        """Flip the target bit of every key whose control bits are all 1.

        An empty control list degenerates to an unconditional X.
        """
        n = self.state.n
        if target in controls:
            raise ValueError(f"target qubit {target} also listed as control")
        tmask = qubit_mask(n, target)
        cmask = 0
        for c in controls:
            cmask |= qubit_mask(n, c)
        new: dict[int, complex] = {}
        for key, amp in self.state.amplitudes.items():
            new[key ^ tmask if key & cmask == cmask else key] = amp
        self.state.amplitudes = new

    def cphase(self, phase: complex, target: int, controls: Sequence[int] = ()) -> None:
        """Multiply keys whose target and control bits are all 1 by phase."""
        if abs(abs(phase) - 1.0) > _PROB_TOL:
            raise ValueError(f"phase {phase!r} is not unimodular")
        n = self.state.n
        mask = qubit_mask(n, target)
        for c in controls:
            cm = qubit_mask(n, c)
            if cm & mask:
                raise ValueError("cphase qubit indices must be distinct")
            mask |= cm
        amplitudes = self.state.amplitudes
        for key in amplitudes:
            if key & mask == mask:
                amplitudes[key] *= phase

    def swap(self, a: int, b: int) -> None:
        """Exchange the bits of qubits a and b in every key."""
        n = self.state.n
        if a == b:
            qubit_mask(n, a)  # still validate the index
            return
        amask = qubit_mask(n, a)
        bmask = qubit_mask(n, b)
        both = amask | bmask
        new: dict[int, complex] = {}
        for key, amp in self.state.amplitudes.items():
            hit = key & both
            # Flip both bits exactly when they differ.
            new[key ^ both if hit == amask or hit == bmask else key] = amp
        self.state.amplitudes = new

    def qft(self, first: int, last: int) -> None:
        apply_qft(self, first, last)

    def measure(self, q: int) -> int:
        """Project qubit q onto the computational basis and collapse the map."""
        mask = qubit_mask(self.state.n, q)
        amplitudes = self.state.amplitudes
        p0 = 0.0
        for key, amp in amplitudes.items():
            if not key & mask:
                p0 += abs(amp) ** 2
        if p0 < -_PROB_TOL or p0 > 1.0 + _PROB_TOL:
            raise NormalizationError(f"measurement saw p0 = {p0!r}; map norm corrupted")
        p0 = min(max(p0, 0.0), 1.0)

        # One draw per measurement, even when the outcome is forced.
        u = self.rng.random()
        outcome = 0 if p0 > 0.0 and u < p0 else 1
        p = p0 if outcome == 0 else 1.0 - p0
        scale = 1.0 / math.sqrt(p)
        want = 0 if outcome == 0 else mask
        self.state.amplitudes = {
            key: amp * scale for key, amp in amplitudes.items() if key & mask == want
        }
        self.record.set(q, outcome)
        return outcome

    def measure_all(self) -> str:
        """Measure every qubit in order; returns the outcome string, qubit 0 first."""
        return "".join(str(self.measure(q)) for q in range(self.state.n))
