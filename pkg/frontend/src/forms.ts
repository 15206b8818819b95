/**
 * Form documents: the JSON schema half of the buffer interchange protocol.
 *
 * Wire tokens (closed set):
 *   primitive   -> {"class":"NumpyArray","primitive":"<dtype>","form_key":k}
 *   list-offset -> {"class":"ListOffsetArray","offsets":"i64","content":{...},"form_key":k}
 *   record      -> {"class":"RecordArray","fields":[...],"contents":[...],"form_key":k}
 *
 * Unknown keys are ignored on parse; unknown classes (unions, options,
 * regular/masked layouts) are rejected with UnsupportedLayoutError.
 * Emission uses compact separators and raw UTF-8, byte-compatible with the
 * native emitter.
 */

import { SchemaError, UnsupportedLayoutError } from "./errors.js";

export const DTYPE_BYTES = {
  bool: 1,
  int8: 1,
  int16: 2,
  int32: 4,
  int64: 8,
  uint8: 1,
  uint16: 2,
  uint32: 4,
  uint64: 8,
  float32: 4,
  float64: 8,
} as const;

export type DtypeTag = keyof typeof DTYPE_BYTES;

export interface PrimitiveForm {
  kind: "primitive";
  dtype: DtypeTag;
  formKey: string;
}

export interface ListOffsetForm {
  kind: "list-offset";
  content: Form;
  formKey: string;
}

export interface RecordForm {
  kind: "record";
  fields: Array<[string, Form]>;
  formKey: string;
}

export type Form = PrimitiveForm | ListOffsetForm | RecordForm;

function toWire(form: Form): Record<string, unknown> {
  // key order is part of the wire contract
  switch (form.kind) {
    case "primitive":
      return { class: "NumpyArray", primitive: form.dtype, form_key: form.formKey };
    case "list-offset":
      return {
        class: "ListOffsetArray",
        offsets: "i64",
        content: toWire(form.content),
        form_key: form.formKey,
      };
    case "record":
      return {
        class: "RecordArray",
        fields: form.fields.map(([name]) => name),
        contents: form.fields.map(([, child]) => toWire(child)),
        form_key: form.formKey,
      };
  }
}

export function emitForm(form: Form): string {
  return JSON.stringify(toWire(form));
}

function require(obj: Record<string, unknown>, key: string, cls: string): unknown {
  if (!(key in obj)) {
    throw new SchemaError(key, `required by class "${cls}"`);
  }
  return obj[key];
}

function requireKey(obj: Record<string, unknown>, cls: string): string {
  const key = require(obj, "form_key", cls);
  if (typeof key !== "string") {
    throw new SchemaError("form_key", "must be a string");
  }
  return key;
}

function fromWire(node: unknown): Form {
  if (typeof node !== "object" || node === null || Array.isArray(node)) {
    throw new SchemaError("class", "form node must be a JSON object");
  }
  const obj = node as Record<string, unknown>;
  const cls = require(obj, "class", "<node>");
  if (cls === "NumpyArray") {
    const dtype = require(obj, "primitive", "NumpyArray");
    if (typeof dtype !== "string" || !(dtype in DTYPE_BYTES)) {
      throw new UnsupportedLayoutError(`unsupported primitive dtype "${dtype}"`);
    }
    return { kind: "primitive", dtype: dtype as DtypeTag, formKey: requireKey(obj, "NumpyArray") };
  }
  if (cls === "ListOffsetArray") {
    const offsets = obj["offsets"] ?? "i64";
    if (offsets !== "i64") {
      throw new UnsupportedLayoutError(`unsupported offsets dtype "${offsets}" (only i64)`);
    }
    const content = fromWire(require(obj, "content", "ListOffsetArray"));
    return { kind: "list-offset", content, formKey: requireKey(obj, "ListOffsetArray") };
  }
  if (cls === "RecordArray") {
    const names = require(obj, "fields", "RecordArray");
    const contents = require(obj, "contents", "RecordArray");
    if (!Array.isArray(names) || names.some((n) => typeof n !== "string")) {
      throw new SchemaError("fields", "must be a list of strings");
    }
    if (!Array.isArray(contents)) {
      throw new SchemaError("contents", "must be a list of form nodes");
    }
    if (names.length !== contents.length) {
      throw new SchemaError("contents", `${contents.length} contents for ${names.length} fields`);
    }
    const fields: Array<[string, Form]> = names.map((name, i) => [name, fromWire(contents[i])]);
    return { kind: "record", fields, formKey: requireKey(obj, "RecordArray") };
  }
  throw new UnsupportedLayoutError(`unsupported layout class "${cls}"`);
}

function checkUniqueKeys(form: Form, seen: Set<string>): void {
  if (seen.has(form.formKey)) {
    throw new SchemaError("form_key", `duplicate "${form.formKey}"`);
  }
  seen.add(form.formKey);
  if (form.kind === "list-offset") {
    checkUniqueKeys(form.content, seen);
  } else if (form.kind === "record") {
    for (const [, child] of form.fields) {
      checkUniqueKeys(child, seen);
    }
  }
}

export function parseForm(text: string): Form {
  const form = fromWire(JSON.parse(text));
  checkUniqueKeys(form, new Set());
  return form;
}
