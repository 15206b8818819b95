import { DtypeTag, Form } from "../src/forms.js";
import { ListValue } from "../src/layout.js";

/** Small deterministic PRNG so the random-array suites are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const DTYPES: DtypeTag[] = [
  "bool",
  "int8",
  "int16",
  "int32",
  "int64",
  "uint8",
  "uint16",
  "uint32",
  "uint64",
  "float32",
  "float64",
];

const FIELD_POOL = ["a", "b", "c", "x", "energia"];

function randInt(rnd: () => number, lo: number, hi: number): number {
  return lo + Math.floor(rnd() * (hi - lo + 1));
}

/** Random schema, keys assigned node0.. pre-order (the canonical naming). */
export function randomForm(rnd: () => number, depth: number): Form {
  let counter = 0;
  const build = (d: number): Form => {
    const formKey = `node${counter++}`;
    const kind = d > 0 ? randInt(rnd, 0, 2) : 0;
    if (kind === 0) {
      return { kind: "primitive", dtype: DTYPES[randInt(rnd, 0, DTYPES.length - 1)], formKey };
    }
    if (kind === 1) {
      return { kind: "list-offset", content: build(d - 1), formKey };
    }
    const names = FIELD_POOL.slice(0, randInt(rnd, 1, 3));
    return { kind: "record", fields: names.map((name) => [name, build(d - 1)]), formKey };
  };
  return build(depth);
}

function randomScalar(rnd: () => number, dtype: DtypeTag): number | boolean {
  switch (dtype) {
    case "bool":
      return rnd() < 0.5;
    case "int8":
      return randInt(rnd, -128, 127);
    case "int16":
      return randInt(rnd, -32768, 32767);
    case "int32":
      return randInt(rnd, -2147483648, 2147483647);
    case "int64":
      // stays well inside the float-safe integer range
      return randInt(rnd, -2147483648, 2147483647);
    case "uint8":
      return randInt(rnd, 0, 255);
    case "uint16":
      return randInt(rnd, 0, 65535);
    case "uint32":
      return randInt(rnd, 0, 4294967295);
    case "uint64":
      return randInt(rnd, 0, 4294967295);
    case "float32":
      return Math.fround(rnd() * 2e3 - 1e3);
    case "float64":
      return rnd() * 2e6 - 1e6;
  }
}

/** `length` values shaped like `form`. */
export function randomValues(rnd: () => number, form: Form, length: number): ListValue[] {
  if (form.kind === "primitive") {
    return Array.from({ length }, () => randomScalar(rnd, form.dtype));
  }
  if (form.kind === "list-offset") {
    return Array.from({ length }, () =>
      randomValues(rnd, form.content, randInt(rnd, 0, 4)),
    );
  }
  const rows: ListValue[] = [];
  for (let i = 0; i < length; i++) {
    const row: { [field: string]: ListValue } = {};
    for (const [name, child] of form.fields) {
      row[name] = randomValues(rnd, child, 1)[0];
    }
    rows.push(row);
  }
  return rows;
}

export function buffersEqual(a: Uint8Array, b: Uint8Array): boolean {
  if (a.byteLength !== b.byteLength) {
    return false;
  }
  for (let i = 0; i < a.byteLength; i++) {
    if (a[i] !== b[i]) {
      return false;
    }
  }
  return true;
}
