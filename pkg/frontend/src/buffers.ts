/**
 * Buffer assembly and the on-disk container directory format.
 *
 * Containers mirror the native layout exactly: form.json (compact UTF-8),
 * length.txt (decimal + newline), buffers/<name> raw little-endian bytes
 * with names `<form_key>-offsets` / `<form_key>-data`.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { FormatError, MissingBufferError, SizeError } from "./errors.js";
import { DTYPE_BYTES, Form, emitForm, parseForm } from "./forms.js";
import { ArrayNode, decodeOffsets, validate } from "./layout.js";

export interface Container {
  form: Form;
  length: number;
  buffers: Map<string, Uint8Array>;
}

/** Buffer names referenced by a form, in pre-order. */
export function bufferNames(form: Form): string[] {
  const names: string[] = [];
  const walk = (f: Form): void => {
    if (f.kind === "primitive") {
      names.push(`${f.formKey}-data`);
    } else if (f.kind === "list-offset") {
      names.push(`${f.formKey}-offsets`);
      walk(f.content);
    } else {
      for (const [, child] of f.fields) {
        walk(child);
      }
    }
  };
  walk(form);
  return names;
}

/** Schema of a node with form keys assigned `<prefix><counter>` pre-order. */
export function formOf(node: ArrayNode, prefix = "node"): Form {
  let counter = 0;
  const build = (n: ArrayNode): Form => {
    const formKey = `${prefix}${counter++}`;
    if (n.kind === "primitive") {
      return { kind: "primitive", dtype: n.dtype, formKey };
    }
    if (n.kind === "list-offset") {
      return { kind: "list-offset", content: build(n.content), formKey };
    }
    return { kind: "record", fields: n.fields.map(([name, child]) => [name, build(child)]), formKey };
  };
  return build(node);
}

/** Decompose a node into named buffer views (no bytes copied). */
export function toBuffers(node: ArrayNode, prefix = "node"): Container {
  const form = formOf(node, prefix);
  const buffers = new Map<string, Uint8Array>();
  const walk = (n: ArrayNode, f: Form): void => {
    if (n.kind === "primitive" && f.kind === "primitive") {
      buffers.set(`${f.formKey}-data`, n.bytes);
    } else if (n.kind === "list-offset" && f.kind === "list-offset") {
      buffers.set(`${f.formKey}-offsets`, n.offsetsBytes);
      walk(n.content, f.content);
    } else if (n.kind === "record" && f.kind === "record") {
      n.fields.forEach(([, child], i) => {
        walk(child, f.fields[i][1]);
      });
    }
  };
  walk(node, form);
  return { form, length: node.length, buffers };
}

function nodeFrom(form: Form, length: number | null, buffers: Map<string, Uint8Array>): ArrayNode {
  if (form.kind === "primitive") {
    const name = `${form.formKey}-data`;
    const entry = buffers.get(name);
    if (entry === undefined) {
      throw new MissingBufferError(name, [...buffers.keys()]);
    }
    const width = DTYPE_BYTES[form.dtype];
    const n = length ?? Math.floor(entry.byteLength / width);
    const needed = n * width;
    if (entry.byteLength < needed) {
      throw new SizeError(name, needed, entry.byteLength);
    }
    return { kind: "primitive", dtype: form.dtype, bytes: entry.subarray(0, needed), length: n };
  }
  if (form.kind === "list-offset") {
    const name = `${form.formKey}-offsets`;
    const entry = buffers.get(name);
    if (entry === undefined) {
      throw new MissingBufferError(name, [...buffers.keys()]);
    }
    if (length === null && entry.byteLength < 8) {
      throw new SizeError(name, 8, entry.byteLength);
    }
    const n = length ?? Math.floor(entry.byteLength / 8) - 1;
    const needed = (n + 1) * 8;
    if (entry.byteLength < needed) {
      throw new SizeError(name, needed, entry.byteLength);
    }
    const offsetsBytes = entry.subarray(0, needed);
    return {
      kind: "list-offset",
      offsetsBytes,
      offsets: decodeOffsets(offsetsBytes, n + 1),
      content: nodeFrom(form.content, null, buffers),
      length: n,
    };
  }
  const children: Array<[string, ArrayNode]> = form.fields.map(([name, child]) => [
    name,
    nodeFrom(child, length, buffers),
  ]);
  const n =
    length ?? (children.length ? Math.min(...children.map(([, c]) => c.length)) : 0);
  return { kind: "record", fields: children, length: n };
}

/** Reassemble an array viewing the buffers directly, then validate it. */
export function fromBuffers(
  form: Form,
  length: number,
  buffers: Map<string, Uint8Array>,
): ArrayNode {
  const node = nodeFrom(form, length, buffers);
  validate(node);
  return node;
}

export function writeContainer(container: Container, dir: string): void {
  const bufdir = path.join(dir, "buffers");
  fs.mkdirSync(bufdir, { recursive: true });
  fs.writeFileSync(path.join(dir, "form.json"), emitForm(container.form), "utf-8");
  fs.writeFileSync(path.join(dir, "length.txt"), `${container.length}\n`, "ascii");
  for (const name of bufferNames(container.form)) {
    const entry = container.buffers.get(name);
    if (entry === undefined) {
      throw new MissingBufferError(name, [...container.buffers.keys()]);
    }
    fs.writeFileSync(path.join(bufdir, name), entry);
  }
}

function freshBytes(buf: Buffer): Uint8Array {
  // readFileSync buffers share a pool; re-home the bytes at offset 0
  const out = new Uint8Array(buf.byteLength);
  out.set(buf);
  return out;
}

export function readContainer(dir: string): Container {
  const formPath = path.join(dir, "form.json");
  const lengthPath = path.join(dir, "length.txt");
  if (!fs.existsSync(formPath)) {
    throw new FormatError(`missing form.json in ${dir}`);
  }
  if (!fs.existsSync(lengthPath)) {
    throw new FormatError(`missing length.txt in ${dir}`);
  }
  const form = parseForm(fs.readFileSync(formPath, "utf-8"));
  const rawLength = fs.readFileSync(lengthPath, "ascii").trim();
  if (!/^\d+$/.test(rawLength)) {
    throw new FormatError(`length.txt holds "${rawLength}", not a decimal integer`);
  }
  const buffers = new Map<string, Uint8Array>();
  for (const name of bufferNames(form)) {
    const bufPath = path.join(dir, "buffers", name);
    if (!fs.existsSync(bufPath)) {
      const bufdir = path.join(dir, "buffers");
      const present = fs.existsSync(bufdir) ? fs.readdirSync(bufdir) : [];
      throw new MissingBufferError(name, present);
    }
    buffers.set(name, freshBytes(fs.readFileSync(bufPath)));
  }
  return { form, length: Number(rawLength), buffers };
}
