export { Simulator, VERSION } from "./simulator.js";
export type { Bit, DumpEntry, EngineKind } from "./simulator.js";
