export * from "./errors.js";
export * from "./forms.js";
export * from "./layout.js";
export * from "./buffers.js";
export * from "./registry.js";
export * from "./native.js";

import { Registry, defaultRegistry } from "./registry.js";

/** Module-level registry; the container rule for `awkward.highlevel:Array`
 * is registered the moment the package is imported. */
export const registry: Registry = defaultRegistry();
