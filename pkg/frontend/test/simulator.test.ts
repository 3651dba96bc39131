import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import { Simulator } from "../src/simulator";

const INV_SQRT2 = Math.SQRT1_2;

const tempDirs: string[] = [];
afterAll(() => {
  for (const dir of tempDirs) rmSync(dir, { recursive: true, force: true });
});

/** Run the CLI directly on a program text; returns stdout lines. */
function cliRun(program: string, engine: string, seed: number): string[] {
  const dir = mkdtempSync(join(tmpdir(), "sparsim-test-"));
  tempDirs.push(dir);
  const file = join(dir, "program.sim");
  writeFileSync(file, program);
  const command = (process.env.SPARSIM_CLI ?? "sparsim").split(" ");
  const proc = spawnSync(
    command[0],
    [...command.slice(1), "run", file, "--engine", engine, "--seed", String(seed), "--shots", "1", "--dump-state"],
    { encoding: "utf8" },
  );
  expect(proc.status).toBe(0);
  return proc.stdout.split("\n").filter((line) => line.length > 0);
}

function ghz5(sim: Simulator): void {
  sim.evol("H", 0);
  for (let q = 1; q <= 4; q++) sim.cnot(q, [0]);
}

describe("bindings parity with the CLI", () => {
  // Independently written program equivalent to the recorded GHZ-5 ops.
  const GHZ5_TEXT = "qubits 5\nh 0\ncnot 1 0\ncnot 2 0\ncnot 3 0\ncnot 4 0\nmeasure_all\n";

  it("GHZ-5 with seed 42 matches outcome string and state dump", () => {
    const sim = new Simulator(5, "bitwise", 42);
    ghz5(sim);
    const outcome = sim.measureAll();
    const dump = sim.dump();

    const cliLines = cliRun(GHZ5_TEXT, "bitwise", 42);
    expect(outcome).toBe(cliLines[0]);
    const cliDump = cliLines.slice(1).map((line) => {
      const [key, , re, im] = line.split(" ");
      return { key: BigInt(key), re: Number(re), im: Number(im) };
    });
    expect(dump).toEqual(cliDump);
  });

  it("records the same program text it executes", () => {
    const sim = new Simulator(5, "bitwise", 42);
    ghz5(sim);
    sim.measureAll();
    expect(sim.program()).toBe(GHZ5_TEXT);
  });

  it("same seed gives identical results across handles", () => {
    const a = new Simulator(3, "bitwise", 1234);
    const b = new Simulator(3, "bitwise", 1234);
    for (const sim of [a, b]) {
      sim.evol("H", 0);
      sim.evol("H", 1);
      sim.evol("H", 2);
    }
    expect(a.measureAll()).toBe(b.measureAll());
  });
});

describe("gate methods", () => {
  it("evol H creates an equal superposition", () => {
    const sim = new Simulator(1);
    sim.evol("H", 0);
    const dump = sim.dump();
    expect(dump.map((e) => e.key)).toEqual([0n, 1n]);
    for (const entry of dump) {
      expect(entry.re).toBeCloseTo(INV_SQRT2, 12);
      expect(entry.im).toBe(0);
    }
  });

  it("rejects unknown gate letters", () => {
    const sim = new Simulator(1);
    expect(() => sim.evol("Q", 0)).toThrow(/unknown gate/);
  });

  it("rot Z by zero is the identity", () => {
    const sim = new Simulator(1);
    sim.rot("Z", 0, 0);
    expect(sim.dump()).toEqual([{ key: 0n, re: 1, im: 0 }]);
  });

  it("rejects unknown rotation axes", () => {
    const sim = new Simulator(1);
    expect(() => sim.rot("W", 1, 0)).toThrow(/rotation axis/);
  });

  it("cnot with no controls acts as X", () => {
    const sim = new Simulator(2);
    sim.cnot(1);
    expect(sim.dump()).toEqual([{ key: 1n, re: 1, im: 0 }]);
  });

  it("cphase applies e^{i theta} on the 11 component", () => {
    const sim = new Simulator(2, "bitwise", 7);
    sim.evol("X", 0);
    sim.evol("X", 1);
    sim.cphase(Math.PI / 2, 1, [0]);
    const dump = sim.dump();
    expect(dump).toHaveLength(1);
    expect(dump[0].key).toBe(3n);
    expect(dump[0].re).toBeCloseTo(0, 12);
    expect(dump[0].im).toBeCloseTo(1, 12);
  });

  it("swap moves the excitation", () => {
    const sim = new Simulator(2);
    sim.evol("X", 0); // |10>
    sim.swap(0, 1);
    expect(sim.dump()).toEqual([{ key: 1n, re: 1, im: 0 }]);
  });

  it("qft over the full register spreads |0> evenly", () => {
    const sim = new Simulator(3);
    sim.qft(0, 2);
    const dump = sim.dump();
    expect(dump).toHaveLength(8);
    for (const entry of dump) {
      expect(entry.re).toBeCloseTo(Math.SQRT1_2 / 2, 12);
    }
  });

  it("u3 matches the u-family composition", () => {
    const a = new Simulator(1);
    a.u3(Math.PI / 2, 0.3, 0.7, 0);
    const b = new Simulator(1);
    b.u2(0.3, 0.7, 0);
    const [ea] = a.dump();
    const [eb] = b.dump();
    expect(ea.re).toBeCloseTo(eb.re, 12);
    expect(ea.im).toBeCloseTo(eb.im, 12);
  });

  it("validates qubit indices eagerly", () => {
    const sim = new Simulator(2);
    expect(() => sim.evol("X", 2)).toThrow(RangeError);
    expect(() => sim.swap(0, -1)).toThrow(RangeError);
  });
});

describe("measurement", () => {
  it("bits is all null before any measurement", () => {
    const sim = new Simulator(4, "bitwise", 5);
    sim.evol("H", 0);
    expect(sim.bits()).toEqual([null, null, null, null]);
  });

  it("measure collapses and re-measuring returns the same bit", () => {
    const sim = new Simulator(1, "bitwise", 77);
    sim.evol("H", 0);
    const first = sim.measure(0);
    expect(sim.dump()).toHaveLength(1);
    const second = sim.measure(0);
    expect(second).toBe(first);
    expect(sim.bits()).toEqual([first]);
  });

  it("GHZ outcomes are all-equal bits", () => {
    const sim = new Simulator(5, "bitwise", 42);
    ghz5(sim);
    const outcome = sim.measureAll();
    expect(outcome === "00000" || outcome === "11111").toBe(true);
    expect(sim.bits()).toEqual([...outcome].map(Number));
  });

  it("partial measurement leaves other qubits unmeasured", () => {
    const sim = new Simulator(3, "bitwise", 9);
    sim.evol("X", 1);
    expect(sim.measure(1)).toBe(1);
    expect(sim.bits()).toEqual([null, 1, null]);
  });

  it("dense engine agrees with bitwise through the boundary", () => {
    const bitwise = new Simulator(3, "bitwise", 11);
    const dense = new Simulator(3, "dense", 11);
    for (const sim of [bitwise, dense]) {
      sim.evol("H", 0);
      sim.cnot(1, [0]);
      sim.u1(0.25, 2);
    }
    expect(dense.dump()).toEqual(bitwise.dump());
    expect(dense.measureAll()).toBe(bitwise.measureAll());
  });
});

describe("error surfacing", () => {
  it("reports engine capacity errors from the CLI", () => {
    const sim = new Simulator(30, "dense", 1);
    sim.evol("H", 0);
    expect(() => sim.dump()).toThrow(/cap/);
  });
});
