"""Priority-ordered conversion rules for tagged foreign values.

Foreign values carry a type key like ``"awkward.highlevel:Array"``
(``"<module path>:<type name>"``) and an opaque payload. Conversion walks
the registered rules from the highest priority tier down, most recent
registration first within a tier; a converter may decline by returning the
:data:`UNCONVERTED` sentinel, letting lower-priority rules take over.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Union

from .buffers import Container, to_buffers
from .errors import NoRuleError
from .layout import ArrayNode, validate

__all__ = [
    "Priority",
    "ForeignValue",
    "ConversionRule",
    "Registry",
    "Unconverted",
    "UNCONVERTED",
    "ARRAY_TYPE_KEY",
    "default_registry",
    "convert_container",
    "export",
]

ARRAY_TYPE_KEY = "awkward.highlevel:Array"


class Priority(IntEnum):
    """Dispatch tiers; higher wins."""

    CANONICAL = 400
    ARRAY = 300
    STANDARD = 200
    FALLBACK = 100


class Unconverted:
    """Sentinel result: the converter declines and dispatch falls through."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNCONVERTED"


UNCONVERTED = Unconverted()


@dataclass(frozen=True)
class ForeignValue:
    """A value from another runtime: a type key plus an opaque payload."""

    type_key: str
    payload: object

    def __post_init__(self):
        if not self.type_key:
            raise ValueError("type_key must be non-empty")


Converter = Callable[[ForeignValue], Union[ArrayNode, Unconverted]]


@dataclass(frozen=True)
class ConversionRule:
    type_key: str
    target_kind: str  # "primitive" | "list-offset" | "record" | "any"
    converter: Converter = field(compare=False)
    priority: Priority = Priority.STANDARD

    def __post_init__(self):
        if self.target_kind not in ("primitive", "list-offset", "record", "any"):
            raise ValueError(f"unknown target kind {self.target_kind!r}")
        if self.priority not in tuple(Priority):
            raise ValueError(f"priority must be one of {[p.value for p in Priority]}")


def _payload_kind(payload) -> str | None:
    """Root layout kind of the payload if it exposes a form, else None."""
    if isinstance(payload, Container):
        return payload.form.kind
    return None


class Registry:
    """Ordered rule collection; lookup is (priority desc, recency desc)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._rules: tuple[tuple[ConversionRule, int], ...] = ()
        self._next_seq = 0

    def register(self, rule: ConversionRule) -> None:
        """Add a rule. Duplicates are allowed; the newest is tried first
        within its tier, so built-ins can be overridden without removal."""
        with self._lock:
            self._rules = self._rules + ((rule, self._next_seq),)
            self._next_seq += 1

    def register_rule(
        self,
        type_key: str,
        target_kind: str,
        converter: Converter,
        priority: Priority = Priority.STANDARD,
    ) -> ConversionRule:
        """Convenience wrapper mirroring the (key, target, fn, tier) shape."""
        rule = ConversionRule(type_key, target_kind, converter, Priority(priority))
        self.register(rule)
        return rule

    def lookup_order(self, type_key: str, kind: str | None = None) -> list[ConversionRule]:
        """Matching rules in dispatch order."""
        snapshot = self._rules
        matches = [
            (rule, seq)
            for rule, seq in snapshot
            if rule.type_key == type_key
            and (kind is None or rule.target_kind in ("any", kind))
        ]
        matches.sort(key=lambda item: (item[0].priority, item[1]), reverse=True)
        return [rule for rule, _ in matches]

    def convert(self, value: ForeignValue) -> ArrayNode:
        """Translate a foreign value via the first accepting rule.

        Rules are tried in lookup order; each converter either returns an
        :class:`~ragbuf.layout.ArrayNode` or :data:`UNCONVERTED` to pass.
        Raises :class:`NoRuleError` when nothing accepts.
        """
        kind = _payload_kind(value.payload)
        tiers_tried: list[int] = []
        for rule in self.lookup_order(value.type_key, kind):
            if rule.priority not in tiers_tried:
                tiers_tried.append(int(rule.priority))
            result = rule.converter(value)
            if isinstance(result, Unconverted):
                continue
            if not isinstance(result, ArrayNode):
                raise TypeError(
                    f"converter for {rule.type_key!r} returned "
                    f"{type(result).__name__}, expected ArrayNode or UNCONVERTED"
                )
            return result
        raise NoRuleError(value.type_key, tiers_tried)


def convert_container(value: ForeignValue) -> ArrayNode | Unconverted:
    """Built-in converter: reassemble a Container payload, target chosen by
    its form (structure-directed); declines non-Container payloads."""
    if not isinstance(value.payload, Container):
        return UNCONVERTED
    return value.payload.to_node()


def default_registry() -> Registry:
    """A registry preloaded with the container rule at the ARRAY tier."""
    registry = Registry()
    registry.register_rule(ARRAY_TYPE_KEY, "any", convert_container, Priority.ARRAY)
    return registry


def export(node: ArrayNode) -> ForeignValue:
    """Wrap a valid node for a foreign runtime: the payload is its container
    (views, not copies) under the array type key."""
    err = validate(node)
    if err is not None:
        raise err
    return ForeignValue(ARRAY_TYPE_KEY, to_buffers(node))
