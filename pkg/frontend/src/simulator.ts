/**
 * Opaque-handle wrapper around the sparsim simulator.
 *
 * A Simulator records the operations it is asked to perform in the circuit
 * text format and lazily executes them through the `sparsim` CLI whenever a
 * result (measurement bit, record, state dump) is needed. Because runs are
 * fully deterministic for a fixed seed and gates never consume randomness,
 * re-executing a longer program reproduces every earlier measurement draw
 * exactly, so results already returned never change. Only state dumps and
 * outcome lists cross the process boundary.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export type EngineKind = "bitwise" | "dense" | "density";

export type Bit = 0 | 1;

/** One nonzero amplitude of the final state. */
export interface DumpEntry {
  /** Basis key; 64-bit registers need bigint range. */
  key: bigint;
  re: number;
  im: number;
}

/** Mirrors the core package version. */
export const VERSION = "0.1.0";

const PLAIN_GATES = new Set(["X", "Y", "Z", "H", "S", "T"]);
const ROT_AXES = new Set(["X", "Y", "Z"]);

/** Command used to launch the CLI; override with the SPARSIM_CLI env var. */
function cliCommand(): string[] {
  const raw = process.env.SPARSIM_CLI ?? "sparsim";
  return raw.split(" ").filter((part) => part.length > 0);
}

interface RunResult {
  record: (Bit | null)[];
  dump: DumpEntry[];
}

export class Simulator {
  readonly n: number;
  readonly engine: EngineKind;
  readonly seed: number;

  private readonly lines: string[] = [];
  private measured = false;
  private busy = false;
  private cached: { program: string; result: RunResult } | null = null;

  /**
   * @param n      register size (1..64; dense engines have lower caps)
   * @param engine backing representation
   * @param seed   measurement seed; 0 picks a fresh entropy seed once, so
   *               repeated queries on this handle still agree with each other
   */
  constructor(n: number, engine: EngineKind = "bitwise", seed = 0) {
    if (!Number.isInteger(n) || n < 1 || n > 64) {
      throw new RangeError(`register size ${n} outside [1, 64]`);
    }
    this.n = n;
    this.engine = engine;
    this.seed = seed === 0 ? 1 + Math.floor(Math.random() * 0x7fffffff) : seed;
  }

  /** Apply a predefined single-qubit gate: X, Y, Z, H, S or T. */
  evol(gate: string, q: number): void {
    const name = gate.toUpperCase();
    if (!PLAIN_GATES.has(name)) {
      throw new Error(`unknown gate '${gate}'`);
    }
    this.push(`${name.toLowerCase()} ${this.qubit(q)}`);
  }

  /** Rotation around the X, Y or Z axis by theta radians. */
  rot(axis: string, theta: number, q: number): void {
    const name = axis.toUpperCase();
    if (!ROT_AXES.has(name)) {
      throw new Error(`unknown rotation axis '${axis}'`);
    }
    this.push(`r${name.toLowerCase()} ${num(theta)} ${this.qubit(q)}`);
  }

  u1(lambda: number, q: number): void {
    this.push(`u1 ${num(lambda)} ${this.qubit(q)}`);
  }

  u2(phi: number, lambda: number, q: number): void {
    this.push(`u2 ${num(phi)} ${num(lambda)} ${this.qubit(q)}`);
  }

  u3(theta: number, phi: number, lambda: number, q: number): void {
    this.push(`u3 ${num(theta)} ${num(phi)} ${num(lambda)} ${this.qubit(q)}`);
  }

  /** Flip target wherever every control bit is 1; no controls means plain X. */
  cnot(target: number, controls: number[] = []): void {
    if (controls.length === 0) {
      this.push(`x ${this.qubit(target)}`);
      return;
    }
    const operands = [target, ...controls].map((q) => this.qubit(q)).join(" ");
    this.push(`cnot ${operands}`);
  }

  /** Multiply by e^{i theta} wherever target and all control bits are 1. */
  cphase(theta: number, target: number, controls: number[] = []): void {
    if (controls.length === 0) {
      // Same diagonal action as an uncontrolled phase gate.
      this.u1(theta, target);
      return;
    }
    const operands = [target, ...controls].map((q) => this.qubit(q)).join(" ");
    this.push(`cphase ${num(theta)} ${operands}`);
  }

  swap(a: number, b: number): void {
    this.push(`swap ${this.qubit(a)} ${this.qubit(b)}`);
  }

  /** Fourier transform on qubits first..last inclusive. */
  qft(first: number, last: number): void {
    this.push(`qft ${this.qubit(first)} ${this.qubit(last)}`);
  }

  /** Measure one qubit; the state collapses and the bit is returned. */
  measure(q: number): Bit {
    this.push(`measure ${this.qubit(q)}`);
    this.measured = true;
    const bit = this.run().record[q];
    if (bit === null) {
      throw new Error(`measurement of qubit ${q} produced no outcome`);
    }
    return bit;
  }

  /** Measure every qubit in order; returns the outcome string, qubit 0 first. */
  measureAll(): string {
    this.push("measure_all");
    this.measured = true;
    return this.run()
      .record.map((bit) => String(bit))
      .join("");
  }

  /** Latest measurement outcome per qubit; null where never measured. */
  bits(): (Bit | null)[] {
    return [...this.run().record];
  }

  /** Nonzero amplitudes of the current state, keys ascending. */
  dump(): DumpEntry[] {
    return this.run().dump.map((entry) => ({ ...entry }));
  }

  /** The recorded program in the circuit text format. */
  program(): string {
    return [`qubits ${this.n}`, ...this.lines, ""].join("\n");
  }

  private qubit(q: number): number {
    if (!Number.isInteger(q) || q < 0 || q >= this.n) {
      throw new RangeError(`qubit ${q} out of range for ${this.n}-qubit register`);
    }
    return q;
  }

  private push(line: string): void {
    this.lines.push(line);
    this.cached = null;
  }

  private run(): RunResult {
    const program = this.program();
    if (this.cached !== null && this.cached.program === program) {
      return this.cached.result;
    }
    if (this.busy) {
      throw new Error("Simulator handle used concurrently");
    }
    this.busy = true;
    try {
      const stdout = this.invokeCli(program);
      const result = this.parseOutput(stdout);
      this.cached = { program, result };
      return result;
    } finally {
      this.busy = false;
    }
  }

  private invokeCli(program: string): string {
    const dir = mkdtempSync(join(tmpdir(), "sparsim-"));
    const file = join(dir, "program.sim");
    try {
      writeFileSync(file, program);
      const [command, ...prefix] = cliCommand();
      const args = [
        ...prefix,
        "run",
        file,
        "--engine",
        this.engine,
        "--seed",
        String(this.seed),
        "--shots",
        "1",
        "--dump-state",
      ];
      const proc = spawnSync(command, args, { encoding: "utf8" });
      if (proc.error) {
        throw new Error(`failed to launch '${command}': ${proc.error.message}`);
      }
      if (proc.status !== 0) {
        throw new Error(proc.stderr.trim() || `sparsim exited with status ${proc.status}`);
      }
      return proc.stdout;
    } finally {
      rmSync(dir, { recursive: true, force: true });
    }
  }

  private parseOutput(stdout: string): RunResult {
    const lines = stdout.split("\n").filter((line) => line.length > 0);
    let record: (Bit | null)[] = new Array(this.n).fill(null);
    let dumpLines = lines;
    if (this.measured) {
      const outcome = lines[0] ?? "";
      record = [...outcome].map((char) => (char === "-" ? null : (Number(char) as Bit)));
      dumpLines = lines.slice(1);
    }
    const dump = dumpLines.map((line) => {
      const [key, , re, im] = line.split(" ");
      return { key: BigInt(key), re: Number(re), im: Number(im) };
    });
    return { record, dump };
  }
}

/** Format a float so the text-format parser reads back the same value. */
function num(value: number): string {
  if (!Number.isFinite(value)) {
    throw new RangeError(`angle ${value} is not finite`);
  }
  return String(value);
}
