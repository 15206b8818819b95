/**
 * Hand-off to the native side. Everything crosses through the external
 * surface only: the CLI (`python3 -m ragbuf ...`) and the on-disk
 * container format.
 */

import { spawnSync } from "node:child_process";

import { BridgeError } from "./errors.js";

export interface NativeReport {
  command: string;
  status: "ok" | "error";
  metrics: Record<string, number>;
  diagnostics: string[];
}

export interface NativeResult {
  code: number;
  report: NativeReport;
}

/** Run one native CLI command with --json and parse its report. */
export function runNative(args: string[]): NativeResult {
  const python = process.env.RAGBUF_PYTHON ?? "python3";
  const proc = spawnSync(python, ["-m", "ragbuf", ...args, "--json"], {
    encoding: "utf-8",
    env: { ...process.env, RAGBUF_NO_NUMBA: process.env.RAGBUF_NO_NUMBA ?? "" },
  });
  if (proc.error !== undefined) {
    throw new BridgeError(`cannot reach the native runtime via "${python}": ${proc.error.message}`);
  }
  const code = proc.status ?? -1;
  const raw = code === 0 ? proc.stdout : proc.stderr;
  let report: NativeReport;
  try {
    report = JSON.parse(raw.trim().split("\n").pop() ?? "");
  } catch {
    throw new BridgeError(
      `native command ${args.join(" ")} produced no report (exit ${code}): ${proc.stderr}`,
    );
  }
  return { code, report };
}

export function nativeRoundtrip(inDir: string, outDir: string): NativeResult {
  return runNative(["roundtrip", inDir, "--out", outDir]);
}

export function nativeValidate(dir: string): NativeResult {
  return runNative(["validate", dir]);
}

export function nativeInspect(dir: string): NativeResult {
  return runNative(["inspect", dir]);
}

export function nativeDimuon(gen: number, seed: number, outDir: string): NativeResult {
  return runNative(["dimuon", "--gen", String(gen), "--seed", String(seed), "--out", outDir]);
}
