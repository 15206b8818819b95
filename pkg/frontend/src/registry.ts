/**
 * Priority-ordered conversion rules for tagged foreign values, mirroring
 * the native registry semantics: highest tier first, most recent
 * registration first within a tier, UNCONVERTED falls through.
 */

import { NoRuleError } from "./errors.js";
import { Container, fromBuffers } from "./buffers.js";
import { ArrayNode } from "./layout.js";

export const ARRAY_TYPE_KEY = "awkward.highlevel:Array";

export const Priority = {
  CANONICAL: 400,
  ARRAY: 300,
  STANDARD: 200,
  FALLBACK: 100,
} as const;

export type PriorityTier = (typeof Priority)[keyof typeof Priority];

/** Sentinel: the converter declines and dispatch falls through. */
export const UNCONVERTED: unique symbol = Symbol("UNCONVERTED");

export interface ForeignValue {
  typeKey: string;
  payload: unknown;
}

export type Converter = (value: ForeignValue) => ArrayNode | typeof UNCONVERTED;

export type TargetKind = "primitive" | "list-offset" | "record" | "any";

export interface ConversionRule {
  typeKey: string;
  targetKind: TargetKind;
  converter: Converter;
  priority: PriorityTier;
}

function isContainer(payload: unknown): payload is Container {
  return (
    typeof payload === "object" &&
    payload !== null &&
    "form" in payload &&
    "buffers" in payload &&
    (payload as Container).buffers instanceof Map
  );
}

export class Registry {
  private rules: Array<[ConversionRule, number]> = [];
  private nextSeq = 0;

  register(rule: ConversionRule): void {
    this.rules.push([rule, this.nextSeq++]);
  }

  registerRule(
    typeKey: string,
    targetKind: TargetKind,
    converter: Converter,
    priority: PriorityTier,
  ): ConversionRule {
    const rule: ConversionRule = { typeKey, targetKind, converter, priority };
    this.register(rule);
    return rule;
  }

  lookupOrder(typeKey: string, kind: string | null): ConversionRule[] {
    return this.rules
      .filter(
        ([rule]) =>
          rule.typeKey === typeKey &&
          (kind === null || rule.targetKind === "any" || rule.targetKind === kind),
      )
      .sort(([a, aSeq], [b, bSeq]) => b.priority - a.priority || bSeq - aSeq)
      .map(([rule]) => rule);
  }

  convert(value: ForeignValue): ArrayNode {
    const kind = isContainer(value.payload) ? value.payload.form.kind : null;
    const tiersTried: number[] = [];
    for (const rule of this.lookupOrder(value.typeKey, kind)) {
      if (!tiersTried.includes(rule.priority)) {
        tiersTried.push(rule.priority);
      }
      const result = rule.converter(value);
      if (result !== UNCONVERTED) {
        return result;
      }
    }
    throw new NoRuleError(value.typeKey, tiersTried);
  }
}

/** Built-in converter: reassemble a container payload, target selected by
 * its form; declines anything else. */
export function convertContainer(value: ForeignValue): ArrayNode | typeof UNCONVERTED {
  if (!isContainer(value.payload)) {
    return UNCONVERTED;
  }
  const { form, length, buffers } = value.payload;
  return fromBuffers(form, length, buffers);
}

export function defaultRegistry(): Registry {
  const registry = new Registry();
  registry.registerRule(ARRAY_TYPE_KEY, "any", convertContainer, Priority.ARRAY);
  return registry;
}
