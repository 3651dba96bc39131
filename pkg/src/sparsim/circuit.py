"""Circuit text format: parser, typed instructions, and engine dispatch.

The format is line oriented and whitespace separated. A program starts with
``qubits N``; each following line is one instruction, a blank line or a
``#`` comment. Keywords are lowercase on output and case-insensitive on
input; angles are radians written as decimal literals.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .bitwise import BitwiseEngine
from .dense import DenseEngine, DensityEngine
from .gates import GATE_PARAM_COUNT, SparseGate, from_sparse, standard
from .state import MAX_QUBITS, MeasurementRecord, assert_normalized

ENGINE_KINDS = ("bitwise", "dense", "density")

_PLAIN_OPS = ("H", "X", "Y", "Z", "S", "T")
_ROT_OPS = ("RX", "RY", "RZ", "U1", "U2", "U3")


class ParseError(Exception):
    """Circuit source rejected; carries the 1-based line number and a code."""

    def __init__(self, lineno: int, message: str, code: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.code = code


@dataclass(frozen=True)
class Instruction:
    """One typed circuit step. For cnot/cphase, qubits is (target, *controls)."""

    opcode: str
    qubits: tuple[int, ...] = ()
    params: tuple[float, ...] = ()
    gate_ref: str | None = None


@dataclass
class Circuit:
    n: int
    instructions: list[Instruction] = field(default_factory=list)
    gate_defs: dict[str, SparseGate] = field(default_factory=dict)


def _parse_int(token: str, lineno: int) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise ParseError(lineno, f"malformed number {token!r}", "number") from None
    if value < 0:
        raise ParseError(lineno, f"malformed number {token!r}", "number")
    return value


def _parse_float(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"malformed number {token!r}", "number") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ParseError(lineno, f"malformed number {token!r}", "number")
    return value


def _check_qubit(q: int, n: int, lineno: int) -> int:
    if q >= n:
        raise ParseError(lineno, f"qubit {q} out of range", "range")
    return q


def _significant_lines(text: str):
    """Yield (lineno, tokens) for non-blank lines with comments stripped."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = body.split()
        if tokens:
            yield lineno, tokens


def _expect_arity(tokens: list[str], count: int, lineno: int) -> None:
    if len(tokens) - 1 != count:
        raise ParseError(
            lineno,
            f"{tokens[0]} takes {count} operand(s), got {len(tokens) - 1}",
            "arity",
        )


def parse(text: str) -> Circuit:
    """Parse circuit source into a validated Circuit."""
    lines = list(_significant_lines(text))
    if not lines or lines[0][1][0].lower() != "qubits":
        lineno = lines[0][0] if lines else 1
        raise ParseError(lineno, "missing 'qubits' header", "header")

    header_lineno, header = lines[0]
    _expect_arity(header, 1, header_lineno)
    n = _parse_int(header[1], header_lineno)
    if not 1 <= n <= MAX_QUBITS:
        raise ParseError(header_lineno, f"register size {n} outside [1, {MAX_QUBITS}]", "range")

    circuit = Circuit(n)
    i = 1
    while i < len(lines):
        lineno, tokens = lines[i]
        op = tokens[0].lower()

        if op in ("h", "x", "y", "z", "s", "t"):
            _expect_arity(tokens, 1, lineno)
            q = _check_qubit(_parse_int(tokens[1], lineno), n, lineno)
            circuit.instructions.append(Instruction(op.upper(), (q,)))

        elif op in ("rx", "ry", "rz", "u1", "u2", "u3"):
            nparams = GATE_PARAM_COUNT[op.upper()]
            _expect_arity(tokens, nparams + 1, lineno)
            params = tuple(_parse_float(t, lineno) for t in tokens[1 : 1 + nparams])
            q = _check_qubit(_parse_int(tokens[-1], lineno), n, lineno)
            circuit.instructions.append(Instruction(op.upper(), (q,), params))

        elif op == "cnot":
            if len(tokens) < 3:
                raise ParseError(lineno, "cnot takes a target and at least one control", "arity")
            qubits = tuple(_check_qubit(_parse_int(t, lineno), n, lineno) for t in tokens[1:])
            if qubits[0] in qubits[1:]:
                raise ParseError(lineno, f"qubit {qubits[0]} is both target and control", "range")
            circuit.instructions.append(Instruction("CNOT", qubits))

        elif op == "cphase":
            if len(tokens) < 4:
                raise ParseError(
                    lineno, "cphase takes an angle, a target and at least one control", "arity"
                )
            theta = _parse_float(tokens[1], lineno)
            qubits = tuple(_check_qubit(_parse_int(t, lineno), n, lineno) for t in tokens[2:])
            if len(set(qubits)) != len(qubits):
                raise ParseError(lineno, "cphase qubits must be distinct", "range")
            circuit.instructions.append(Instruction("CPHASE", qubits, (theta,)))

        elif op == "swap":
            _expect_arity(tokens, 2, lineno)
            a, b = (_check_qubit(_parse_int(t, lineno), n, lineno) for t in tokens[1:])
            circuit.instructions.append(Instruction("SWAP", (a, b)))

        elif op == "qft":
            _expect_arity(tokens, 2, lineno)
            first, last = (_check_qubit(_parse_int(t, lineno), n, lineno) for t in tokens[1:])
            if first > last:
                raise ParseError(lineno, f"qft range [{first}, {last}] is empty", "range")
            circuit.instructions.append(Instruction("QFT", (first, last)))

        elif op == "gate":
            i = _parse_gate_def(circuit, lines, i)
            continue

        elif op == "apply":
            _expect_arity(tokens, 2, lineno)
            name = tokens[1]
            if name not in circuit.gate_defs:
                raise ParseError(lineno, f"gate {name!r} is not defined", "undefined_gate")
            q = _check_qubit(_parse_int(tokens[2], lineno), n, lineno)
            w = circuit.gate_defs[name].arity
            if q + w > n:
                raise ParseError(lineno, f"{w}-qubit gate at {q} exceeds the register", "range")
            circuit.instructions.append(Instruction("APPLY", (q,), gate_ref=name))

        elif op == "measure":
            _expect_arity(tokens, 1, lineno)
            q = _check_qubit(_parse_int(tokens[1], lineno), n, lineno)
            circuit.instructions.append(Instruction("MEASURE", (q,)))

        elif op == "measure_all":
            _expect_arity(tokens, 0, lineno)
            circuit.instructions.append(Instruction("MEASURE_ALL"))

        else:
            raise ParseError(lineno, f"unknown opcode {op!r}", "unknown_opcode")
        i += 1

    return circuit


def _parse_gate_def(circuit: Circuit, lines: list, i: int) -> int:
    """Parse a gate ... endgate block; returns the index after the block."""
    lineno, tokens = lines[i]
    _expect_arity(tokens, 2, lineno)
    name = tokens[1]
    if not (name[0].isalpha() or name[0] == "_") or not name.replace("_", "").isalnum():
        raise ParseError(lineno, f"invalid gate name {name!r}", "unknown_opcode")
    if name in circuit.gate_defs:
        raise ParseError(lineno, f"duplicate gate definition {name!r}", "duplicate_gate")
    w = _parse_int(tokens[2], lineno)
    if not 1 <= w <= circuit.n:
        raise ParseError(lineno, f"gate arity {w} outside [1, {circuit.n}]", "range")

    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    i += 1
    while i < len(lines):
        entry_lineno, entry = lines[i]
        if entry[0].lower() == "endgate":
            _expect_arity(entry, 0, entry_lineno)
            if not rows:
                raise ParseError(entry_lineno, f"gate {name!r} has no entries", "arity")
            try:
                circuit.gate_defs[name] = from_sparse(w, rows, cols, vals)
            except ValueError as exc:
                raise ParseError(lineno, f"gate {name!r}: {exc}", "bad_gate") from None
            return i + 1
        if len(entry) != 4:
            raise ParseError(entry_lineno, "gate entries are 'row col re im'", "arity")
        dim = 1 << w
        r = _parse_int(entry[0], entry_lineno)
        c = _parse_int(entry[1], entry_lineno)
        if r >= dim or c >= dim:
            raise ParseError(entry_lineno, f"entry ({r}, {c}) outside a {w}-qubit gate", "range")
        rows.append(r)
        cols.append(c)
        vals.append(complex(_parse_float(entry[2], entry_lineno), _parse_float(entry[3], entry_lineno)))
        i += 1
    raise ParseError(lineno, f"gate {name!r} is missing endgate", "unterminated_gate")


def format_circuit(circuit: Circuit) -> str:
    """Canonical text for a Circuit; parse(format_circuit(c)) reproduces c."""
    out = [f"qubits {circuit.n}"]
    for name, gate in circuit.gate_defs.items():
        out.append(f"gate {name} {gate.arity}")
        for col in sorted(gate.columns):
            for amp, row in gate.columns[col]:
                out.append(f"{row} {col} {amp.real!r} {amp.imag!r}")
        out.append("endgate")
    for ins in circuit.instructions:
        parts = [ins.opcode.lower()]
        if ins.opcode == "CPHASE":
            parts += [repr(ins.params[0])] + [str(q) for q in ins.qubits]
        elif ins.opcode in _ROT_OPS:
            parts += [repr(p) for p in ins.params] + [str(q) for q in ins.qubits]
        elif ins.opcode == "APPLY":
            parts += [ins.gate_ref, str(ins.qubits[0])]
        else:
            parts += [str(q) for q in ins.qubits]
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


_plain_cache: dict[str, SparseGate] = {}


def _plain_gate(name: str) -> SparseGate:
    gate = _plain_cache.get(name)
    if gate is None:
        gate = _plain_cache[name] = standard(name)
    return gate


def make_engine(kind: str, n: int, seed: int = 0):
    if kind == "bitwise":
        return BitwiseEngine(n, seed)
    if kind == "dense":
        return DenseEngine(n, seed)
    if kind == "density":
        return DensityEngine(n, seed)
    raise ValueError(f"unknown engine kind {kind!r}")


def execute(engine, instruction: Instruction, gate_defs: dict[str, SparseGate] | None = None) -> None:
    """Run one instruction against an engine."""
    op = instruction.opcode
    if op == "H":
        engine.hadamard(instruction.qubits[0])
    elif op in _PLAIN_OPS:
        engine.apply_gate(_plain_gate(op), instruction.qubits[0])
    elif op in _ROT_OPS:
        engine.apply_gate(standard(op, *instruction.params), instruction.qubits[0])
    elif op == "CNOT":
        engine.cnot(instruction.qubits[0], instruction.qubits[1:])
    elif op == "CPHASE":
        engine.cphase(cmath.exp(1j * instruction.params[0]), instruction.qubits[0], instruction.qubits[1:])
    elif op == "SWAP":
        engine.swap(*instruction.qubits)
    elif op == "QFT":
        engine.qft(*instruction.qubits)
    elif op == "APPLY":
        engine.apply_gate((gate_defs or {})[instruction.gate_ref], instruction.qubits[0])
    elif op == "MEASURE":
        engine.measure(instruction.qubits[0])
    elif op == "MEASURE_ALL":
        engine.measure_all()
    else:
        raise ValueError(f"unknown opcode {op!r}")


def run(
    circuit: Circuit,
    engine_kind: str = "bitwise",
    seed: int = 0,
    check_invariants: bool = False,
):
    """Execute a circuit on a fresh engine.

    Returns (final state, MeasurementRecord, outcome string or None). The
    outcome string reports each qubit's latest measured bit, qubit 0 first,
    with '-' for qubits the circuit never measured; it is None when the
    circuit contains no measurement. Identical (circuit, engine, seed)
    triples give identical outcomes.
    """
    engine = make_engine(engine_kind, circuit.n, seed)
    for instruction in circuit.instructions:
        execute(engine, instruction, circuit.gate_defs)
        if check_invariants and engine.kind != "density":
            assert_normalized(engine.state)
    record: MeasurementRecord = engine.record
    outcome = record.to_string() if record.any_measured() else None
    return engine.state, record, outcome


def emit_builtin(family: str, n: int) -> Circuit:
    """Benchmark circuit families over n qubits (2n for entangled_registers)."""
    if n < 1:
        raise ValueError("family size must be at least 1")
    if family == "ghz":
        if n > MAX_QUBITS:
            raise ValueError(f"ghz needs n <= {MAX_QUBITS}")
        circuit = Circuit(n)
        circuit.instructions.append(Instruction("H", (0,)))
        circuit.instructions += [Instruction("CNOT", (i, 0)) for i in range(1, n)]
        return circuit
    if family == "superpos":
        if n > MAX_QUBITS:
            raise ValueError(f"superpos needs n <= {MAX_QUBITS}")
        circuit = Circuit(n)
        circuit.instructions += [Instruction("H", (q,)) for q in range(n)]
        return circuit
    if family == "entangled_registers":
        if 2 * n > MAX_QUBITS:
            raise ValueError(f"entangled_registers needs 2n <= {MAX_QUBITS}")
        circuit = Circuit(2 * n)
        circuit.instructions += [Instruction("H", (q,)) for q in range(n)]
        circuit.instructions += [Instruction("CNOT", (n + i, i)) for i in range(n)]
        return circuit
    if family == "superpos_measure":
        circuit = emit_builtin("superpos", n)
        circuit.instructions.append(Instruction("MEASURE_ALL"))
        return circuit
    raise ValueError(f"unknown circuit family {family!r}")
