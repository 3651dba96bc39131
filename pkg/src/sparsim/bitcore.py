"""Basis-key bit arithmetic shared by every engine.

A computational basis state of an n-qubit register is named by an unsigned
integer key. Qubit 0 is the LEFTMOST (most significant) bit of the key, so
qubit q sits at bit position n - q - 1. All bit positions used anywhere in
the package are computed through this module.
"""

from __future__ import annotations

KEY_WIDTH = 64


def bit_position(n: int, q: int) -> int:
    """Bit position of qubit q in an n-qubit key (qubit 0 is the MSB)."""
    if not 0 <= q < n:
        raise ValueError(f"qubit {q} out of range for {n}-qubit register")
    return n - q - 1


def qubit_mask(n: int, q: int) -> int:
    """Single-bit mask selecting qubit q of an n-qubit key."""
    return 1 << bit_position(n, q)


def select_low_bits(key: int, m: int) -> int:
    """Select the m lowest bits of key: key AND (2^m - 1)."""
    if not 0 <= m <= KEY_WIDTH:
        raise ValueError(f"mask width {m} exceeds {KEY_WIDTH}-bit keys")
    return key & ((1 << m) - 1)


def flip_bit(key: int, pos: int) -> int:
    """Flip the bit at position pos: key XOR (1 << pos)."""
    if not 0 <= pos < KEY_WIDTH:
        raise ValueError(f"bit position {pos} exceeds {KEY_WIDTH}-bit keys")
    return key ^ (1 << pos)


def combine(x: int, y: int, z: int) -> int:
    """Bitwise OR of three keys with pairwise disjoint set-bit ranges."""
    return x | y | z


def split_key(key: int, n: int, q: int, w: int) -> tuple[int, int, int]:
    """Split an n-qubit key around a w-qubit window starting at qubit q.

    Returns (x, y, z): x keeps the bits of the qubits left of the window in
    place, y is the window value shifted down to the low w bits, and z keeps
    the bits right of the window. combine(x, y << (n - q - w), z)
    reproduces key.
    """
    if q + w > n:
        raise ValueError(f"gate span [{q}, {q + w}) exceeds {n}-qubit register")
    low = n - q - w
    x = key & (((1 << q) - 1) << (n - q))
    y = (key >> low) & ((1 << w) - 1)
    z = key & ((1 << low) - 1)
    return x, y, z
