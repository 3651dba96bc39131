"""Shared test helpers: forced RNGs, random states and random circuits."""

from __future__ import annotations

import math
import random

import pytest

from sparsim import BitwiseEngine, Circuit, Instruction, SparseState, from_permutation


class ForcedRng:
    """Stands in for the engine RNG; replays a fixed queue of draws."""

    def __init__(self, draws):
        self.draws = list(draws)

    def random(self) -> float:
        return self.draws.pop(0)


def forced_engine(n: int, draws) -> BitwiseEngine:
    engine = BitwiseEngine(n, seed=1)
    engine.rng = ForcedRng(draws)
    return engine


def random_sparse_state(rng: random.Random, n: int, max_keys: int = 12) -> SparseState:
    """Normalized sparse state over random distinct keys."""
    count = rng.randint(1, min(max_keys, 1 << n))
    keys = rng.sample(range(1 << n), count)
    amps = {k: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for k in keys}
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    return SparseState(n, {k: a / norm for k, a in amps.items()})


# Fixed 2-qubit permutation used as the user-defined gate in random circuits.
USER_PERMUTATION = (0, 2, 3, 1)


def user_gate():
    return from_permutation(lambda i: USER_PERMUTATION[i], 2)


def random_circuit(rng: random.Random, n: int, depth: int) -> Circuit:
    """Random program over the predefined gates plus one user 2-qubit gate."""
    circuit = Circuit(n)
    circuit.gate_defs["perm2"] = user_gate()
    plain = ["H", "X", "Y", "Z", "S", "T"]
    for _ in range(depth):
        kind = rng.randrange(10)
        if kind < 4:
            circuit.instructions.append(Instruction(rng.choice(plain), (rng.randrange(n),)))
        elif kind < 6:
            op = rng.choice(["RX", "RY", "RZ", "U1", "U2", "U3"])
            arity = {"RX": 1, "RY": 1, "RZ": 1, "U1": 1, "U2": 2, "U3": 3}[op]
            params = tuple(rng.uniform(0, 2 * math.pi) for _ in range(arity))
            circuit.instructions.append(Instruction(op, (rng.randrange(n),), params))
        elif kind == 6 and n >= 2:
            qubits = rng.sample(range(n), rng.randint(2, min(3, n)))
            circuit.instructions.append(Instruction("CNOT", tuple(qubits)))
        elif kind == 7 and n >= 2:
            qubits = rng.sample(range(n), rng.randint(2, min(3, n)))
            circuit.instructions.append(
                Instruction("CPHASE", tuple(qubits), (rng.uniform(0, 2 * math.pi),))
            )
        elif kind == 8 and n >= 2:
            a, b = rng.sample(range(n), 2)
            circuit.instructions.append(Instruction("SWAP", (a, b)))
        elif n >= 2:
            q = rng.randrange(n - 1)
            circuit.instructions.append(Instruction("APPLY", (q,), gate_ref="perm2"))
    return circuit


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
