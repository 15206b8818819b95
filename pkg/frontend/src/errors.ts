/** Error types for the foreign-side bridge. */

/** A layout class or dtype outside the supported closed set. */
export class UnsupportedLayoutError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UnsupportedLayoutError";
  }
}

/** A form document is missing or misusing a required key. */
export class SchemaError extends Error {
  constructor(public readonly key: string, detail = "") {
    super(`form schema error for key "${key}"${detail ? `: ${detail}` : ""}`);
    this.name = "SchemaError";
  }
}

/** A structural invariant does not hold. */
export class ValidationError extends Error {
  constructor(public readonly rule: string, public readonly path: string, detail = "") {
    super(`${path}: ${rule}${detail ? ` (${detail})` : ""}`);
    this.name = "ValidationError";
  }
}

/** A buffer name referenced by a form is absent. */
export class MissingBufferError extends Error {
  constructor(public readonly bufferName: string, available: string[]) {
    super(`missing buffer "${bufferName}"; present: [${available.join(", ")}]`);
    this.name = "MissingBufferError";
  }
}

/** A buffer is too short for the declared element count. */
export class SizeError extends Error {
  constructor(public readonly bufferName: string, needed: number, got: number) {
    super(`buffer "${bufferName}" holds ${got} bytes, needs ${needed}`);
    this.name = "SizeError";
  }
}

/** An on-disk container directory is malformed. */
export class FormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "FormatError";
  }
}

/** No conversion rule accepted a foreign value. */
export class NoRuleError extends Error {
  constructor(public readonly typeKey: string, public readonly tiersTried: number[]) {
    super(`no conversion rule for type key "${typeKey}" (tiers tried: [${tiersTried.join(", ")}])`);
    this.name = "NoRuleError";
  }
}

/** The native runtime could not be reached (interpreter or package absent). */
export class BridgeError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BridgeError";
  }
}
