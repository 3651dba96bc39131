"""Gate construction: sparse column maps and the predefined gate catalogue."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .state import PRUNE_EPS

# Exhaustive unitarity verification is O(4^w); above this arity constructors
# skip it and mark the gate unverified.
UNITARITY_CHECK_CAP = 10

UNITARY_TOL = 1e-8

_SQRT1_2 = 1.0 / math.sqrt(2.0)

STANDARD_GATES = ("X", "Y", "Z", "H", "S", "T", "RX", "RY", "RZ", "U1", "U2", "U3")

# Angles taken by each catalogue gate, in call order.
GATE_PARAM_COUNT = {
    "X": 0, "Y": 0, "Z": 0, "H": 0, "S": 0, "T": 0,
    "RX": 1, "RY": 1, "RZ": 1, "U1": 1, "U2": 2, "U3": 3,
}


@dataclass(frozen=True)
class SparseGate:
    """Unitary as a map from input basis key to its output (amplitude, key) pairs.

    ``columns[i]`` lists the nonzero entries of matrix column i, i.e. the
    expansion of the gate applied to basis state i. ``unitarity_checked`` is
    False for gates too wide for the exhaustive check.
    """

    arity: int
    columns: dict[int, tuple[tuple[complex, int], ...]]
    unitarity_checked: bool = True

    @property
    def fanout(self) -> int:
        """Max output terms per input basis state; bounds the per-key gate cost."""
        return max((len(pairs) for pairs in self.columns.values()), default=0)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^w x 2^w matrix of the gate (small arities only)."""
        if self.arity > UNITARITY_CHECK_CAP:
            raise ValueError(f"refusing to densify a {self.arity}-qubit gate")
        dim = 1 << self.arity
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for col, pairs in self.columns.items():
            for amp, row in pairs:
                mat[row, col] = amp
        return mat


def _columns_from_matrix(mat: np.ndarray) -> dict[int, tuple[tuple[complex, int], ...]]:
    dim = mat.shape[0]
    columns = {}
    for col in range(dim):
        pairs = tuple(
            (complex(mat[row, col]), row)
            for row in range(dim)
            if abs(mat[row, col]) > PRUNE_EPS
        )
        columns[col] = pairs
    return columns


def _check_unitary(mat: np.ndarray, tol: float = UNITARY_TOL) -> None:
    dim = mat.shape[0]
    deviation = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
    if not deviation <= tol:  # also rejects NaN entries
        raise ValueError(f"matrix is not unitary: max |U†U - I| entry is {deviation:.3g}")


def from_matrix(u00: complex, u01: complex, u10: complex, u11: complex) -> SparseGate:
    """Single-qubit gate from the four entries of its matrix (row major)."""
    mat = np.array([[u00, u01], [u10, u11]], dtype=np.complex128)
    _check_unitary(mat)
    return SparseGate(1, _columns_from_matrix(mat))


def from_sparse(
    w: int,
    rows: Sequence[int],
    cols: Sequence[int],
    vals: Sequence[complex],
) -> SparseGate:
    """w-qubit gate from sparse triplets with U(rows[i], cols[i]) = vals[i]."""
    if not (len(rows) == len(cols) == len(vals)):
        raise ValueError("rows, cols and vals must have equal lengths")
    dim = 1 << w
    entries: dict[tuple[int, int], complex] = {}
    for r, c, v in zip(rows, cols, vals):
        if not (0 <= r < dim and 0 <= c < dim):
            raise ValueError(f"index ({r}, {c}) outside a {w}-qubit gate")
        if (r, c) in entries:
            raise ValueError(f"duplicate entry at ({r}, {c})")
        entries[(r, c)] = complex(v)

    checked = w <= UNITARITY_CHECK_CAP
    if checked:
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for (r, c), v in entries.items():
            mat[r, c] = v
        _check_unitary(mat)

    columns: dict[int, list[tuple[complex, int]]] = {}
    for (r, c), v in entries.items():
        if abs(v) > PRUNE_EPS:
            columns.setdefault(c, []).append((v, r))
    return SparseGate(
        w,
        {c: tuple(sorted(pairs, key=lambda p: p[1])) for c, pairs in columns.items()},
        unitarity_checked=checked,
    )


def from_permutation(f: Callable[[int], int], w: int) -> SparseGate:
    """w-qubit permutation gate mapping each basis state i to f(i)."""
    dim = 1 << w
    seen: set[int] = set()
    columns: dict[int, tuple[tuple[complex, int], ...]] = {}
    for i in range(dim):
        j = f(i)
        if not 0 <= j < dim or j in seen:
            raise ValueError(f"f is not a bijection on [0, {dim}): f({i}) = {j}")
        seen.add(j)
        columns[i] = ((1.0 + 0.0j, j),)
    return SparseGate(w, columns)


def _standard_matrix(name: str, params: tuple[float, ...]) -> np.ndarray:
    if name == "X":
        return np.array([[0, 1], [1, 0]], dtype=np.complex128)
    if name == "Y":
        return np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    if name == "Z":
        return np.array([[1, 0], [0, -1]], dtype=np.complex128)
    if name == "H":
        return np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=np.complex128)
    if name == "S":
        return np.array([[1, 0], [0, 1j]], dtype=np.complex128)
    if name == "T":
        return np.array([[1, 0], [0, cmath.exp(0.25j * math.pi)]], dtype=np.complex128)
    if name == "RX":
        c, s = math.cos(params[0] / 2), math.sin(params[0] / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if name == "RY":
        c, s = math.cos(params[0] / 2), math.sin(params[0] / 2)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if name == "RZ":
        half = 0.5j * params[0]
        return np.array([[cmath.exp(-half), 0], [0, cmath.exp(half)]], dtype=np.complex128)
    if name == "U1":
        return np.array([[1, 0], [0, cmath.exp(1j * params[0])]], dtype=np.complex128)
    if name == "U2":
        phi, lam = params
        return _SQRT1_2 * np.array(
            [[1, -cmath.exp(1j * lam)], [cmath.exp(1j * phi), cmath.exp(1j * (lam + phi))]],
            dtype=np.complex128,
        )
    if name == "U3":
        theta, phi, lam = params
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array(
            [[c, -cmath.exp(1j * lam) * s], [cmath.exp(1j * phi) * s, cmath.exp(1j * (lam + phi)) * c]],
            dtype=np.complex128,
        )
    raise ValueError(f"unknown gate {name!r}")


def standard(name: str, *params: float) -> SparseGate:
    """Catalogue gate by name; rotation and U gates take angles in radians."""
    canonical = name.upper()
    if canonical not in GATE_PARAM_COUNT:
        raise ValueError(f"unknown gate {name!r}")
    expected = GATE_PARAM_COUNT[canonical]
    if len(params) != expected:
        raise ValueError(f"{canonical} takes {expected} parameter(s), got {len(params)}")
    for p in params:
        if not math.isfinite(p):
            raise ValueError(f"{canonical} parameter {p!r} is not finite")
    return SparseGate(1, _columns_from_matrix(_standard_matrix(canonical, params)))
