/**
 * Foreign-side array nodes over raw little-endian byte buffers.
 *
 * Elements are decoded on read through DataView, so buffers of any
 * alignment work; 64-bit integers are surfaced as plain numbers (all
 * values exchanged in tests stay well inside the safe-integer range).
 */

import { ValidationError } from "./errors.js";
import { DTYPE_BYTES, DtypeTag, Form } from "./forms.js";

export interface PrimitiveArray {
  kind: "primitive";
  dtype: DtypeTag;
  bytes: Uint8Array;
  length: number;
}

export interface ListOffsetArray {
  kind: "list-offset";
  offsetsBytes: Uint8Array;
  offsets: number[];
  content: ArrayNode;
  length: number;
}

export interface RecordArray {
  kind: "record";
  fields: Array<[string, ArrayNode]>;
  length: number;
}

export type ArrayNode = PrimitiveArray | ListOffsetArray | RecordArray;

export type ListValue = number | boolean | ListValue[] | { [field: string]: ListValue };

function view(bytes: Uint8Array): DataView {
  return new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
}

export function readElement(node: PrimitiveArray, i: number): number | boolean {
  const dv = view(node.bytes);
  const at = i * DTYPE_BYTES[node.dtype];
  switch (node.dtype) {
    case "bool":
      return dv.getUint8(at) !== 0;
    case "int8":
      return dv.getInt8(at);
    case "int16":
      return dv.getInt16(at, true);
    case "int32":
      return dv.getInt32(at, true);
    case "int64":
      return Number(dv.getBigInt64(at, true));
    case "uint8":
      return dv.getUint8(at);
    case "uint16":
      return dv.getUint16(at, true);
    case "uint32":
      return dv.getUint32(at, true);
    case "uint64":
      return Number(dv.getBigUint64(at, true));
    case "float32":
      return dv.getFloat32(at, true);
    case "float64":
      return dv.getFloat64(at, true);
  }
}

function writeElement(dv: DataView, dtype: DtypeTag, i: number, value: number | boolean): void {
  const at = i * DTYPE_BYTES[dtype];
  const num = typeof value === "boolean" ? (value ? 1 : 0) : value;
  switch (dtype) {
    case "bool":
    case "uint8":
      dv.setUint8(at, num);
      break;
    case "int8":
      dv.setInt8(at, num);
      break;
    case "int16":
      dv.setInt16(at, num, true);
      break;
    case "int32":
      dv.setInt32(at, num, true);
      break;
    case "int64":
      dv.setBigInt64(at, BigInt(num), true);
      break;
    case "uint16":
      dv.setUint16(at, num, true);
      break;
    case "uint32":
      dv.setUint32(at, num, true);
      break;
    case "uint64":
      dv.setBigUint64(at, BigInt(num), true);
      break;
    case "float32":
      dv.setFloat32(at, num, true);
      break;
    case "float64":
      dv.setFloat64(at, num, true);
      break;
  }
}

export function decodeOffsets(bytes: Uint8Array, count: number): number[] {
  const dv = view(bytes);
  const offsets: number[] = new Array(count);
  for (let i = 0; i < count; i++) {
    offsets[i] = Number(dv.getBigInt64(i * 8, true));
  }
  return offsets;
}

function rangeToList(node: ArrayNode, start: number, stop: number): ListValue[] {
  if (node.kind === "primitive") {
    const out: ListValue[] = [];
    for (let i = start; i < stop; i++) {
      out.push(readElement(node, i));
    }
    return out;
  }
  if (node.kind === "list-offset") {
    const out: ListValue[] = [];
    for (let i = start; i < stop; i++) {
      out.push(rangeToList(node.content, node.offsets[i], node.offsets[i + 1]));
    }
    return out;
  }
  const out: ListValue[] = [];
  for (let i = start; i < stop; i++) {
    const row: { [field: string]: ListValue } = {};
    for (const [name, child] of node.fields) {
      row[name] = rangeToList(child, i, i + 1)[0];
    }
    out.push(row);
  }
  return out;
}

/** Deep materialization into plain values; the equality witness. */
export function toList(node: ArrayNode): ListValue[] {
  return rangeToList(node, 0, node.length);
}

/** Rebuild a canonical node (fresh buffers, offsets starting at 0) from
 * plain values shaped like `form`. */
export function fromList(values: ListValue[], form: Form): ArrayNode {
  if (form.kind === "primitive") {
    const bytes = new Uint8Array(values.length * DTYPE_BYTES[form.dtype]);
    const dv = view(bytes);
    values.forEach((value, i) => {
      writeElement(dv, form.dtype, i, value as number | boolean);
    });
    return { kind: "primitive", dtype: form.dtype, bytes, length: values.length };
  }
  if (form.kind === "list-offset") {
    const lists = values as ListValue[][];
    const offsets = [0];
    const flat: ListValue[] = [];
    for (const sub of lists) {
      flat.push(...sub);
      offsets.push(flat.length);
    }
    const offsetsBytes = new Uint8Array(offsets.length * 8);
    const dv = view(offsetsBytes);
    offsets.forEach((value, i) => {
      dv.setBigInt64(i * 8, BigInt(value), true);
    });
    return {
      kind: "list-offset",
      offsetsBytes,
      offsets,
      content: fromList(flat, form.content),
      length: lists.length,
    };
  }
  const rows = values as Array<{ [field: string]: ListValue }>;
  const fields: Array<[string, ArrayNode]> = form.fields.map(([name, child]) => [
    name,
    fromList(rows.map((row) => row[name]), child),
  ]);
  return { kind: "record", fields, length: rows.length };
}

/** Walk the tree and throw ValidationError on the first violated invariant. */
export function validate(node: ArrayNode, path = "root"): void {
  if (node.kind === "primitive") {
    return;
  }
  if (node.kind === "list-offset") {
    const offsets = node.offsets;
    if (offsets[0] < 0) {
      throw new ValidationError("first offset non-negative", path, `offsets[0] == ${offsets[0]}`);
    }
    for (let i = 0; i < node.length; i++) {
      if (offsets[i] > offsets[i + 1]) {
        throw new ValidationError("monotonic offsets", path, `offsets[${i}] == ${offsets[i]}`);
      }
    }
    if (offsets[node.length] > node.content.length) {
      throw new ValidationError(
        "final offset within content",
        path,
        `offsets[${node.length}] == ${offsets[node.length]} exceeds content length ${node.content.length}`,
      );
    }
    validate(node.content, `${path}.content`);
    return;
  }
  const seen = new Set<string>();
  for (const [name] of node.fields) {
    if (!name) {
      throw new ValidationError("record field names non-empty", path);
    }
    if (seen.has(name)) {
      throw new ValidationError("record field names unique", path, `duplicate "${name}"`);
    }
    seen.add(name);
  }
  for (const [name, child] of node.fields) {
    if (child.length !== node.length) {
      throw new ValidationError(
        "record field lengths equal",
        path,
        `field "${name}" has length ${child.length}, record declares ${node.length}`,
      );
    }
  }
  for (const [name, child] of node.fields) {
    validate(child, `${path}.${name}`);
  }
}
