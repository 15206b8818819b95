"""Exception types shared across the library.

Layout validation is unusual in that :func:`ragbuf.layout.validate` *returns*
a :class:`ValidationError` as a diagnostic value instead of raising it; the
buffer-ingestion path raises the same object once validation fails.
"""

from __future__ import annotations


class RagbufError(Exception):
    """Base class for all ragbuf errors."""


class BoundsError(RagbufError, IndexError):
    """Index outside the valid range of a node."""

    def __init__(self, index: int, length: int, kind: str, base: int = 0):
        self.index = index
        self.length = length
        self.kind = kind
        self.base = base
        super().__init__(
            f"attempt to access {length}-element {kind} at index [{index}] "
            f"(valid range: [{base}, {base + length}))"
        )


class FieldError(RagbufError, KeyError):
    """Unknown record field name."""

    def __init__(self, name: str, available: list[str]):
        self.name = name
        self.available = list(available)
        super().__init__(f"no field {name!r}; available fields: {self.available}")

    def __str__(self) -> str:  # KeyError quotes its args otherwise
        return self.args[0]


class ValidationError(RagbufError):
    """A structural invariant does not hold.

    ``rule`` is a stable short name for the violated invariant and ``path``
    locates the offending node in the tree (``"root"``, ``"root.content"``,
    ``"root.muons"`` ...).
    """

    def __init__(self, rule: str, path: str, detail: str = ""):
        self.rule = rule
        self.path = path
        self.detail = detail
        msg = f"{path}: {rule}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ParseError(RagbufError, ValueError):
    """Malformed JSON text."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at byte offset {offset})")


class SchemaError(RagbufError, ValueError):
    """A form document is missing or misusing a required key."""

    def __init__(self, key: str, detail: str = ""):
        self.key = key
        msg = f"form schema error for key {key!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnsupportedLayoutError(RagbufError, ValueError):
    """A layout class or dtype outside the supported closed set."""


class MissingBufferError(RagbufError, KeyError):
    """A buffer name referenced by a form is absent from the buffer set."""

    def __init__(self, name: str, available: list[str]):
        self.name = name
        self.available = list(available)
        super().__init__(f"missing buffer {name!r}; present: {self.available}")

    def __str__(self) -> str:
        return self.args[0]


class SizeError(RagbufError, ValueError):
    """A buffer is too short for the declared element count."""

    def __init__(self, name: str, needed: int, got: int):
        self.name = name
        self.needed = needed
        self.got = got
        super().__init__(f"buffer {name!r} holds {got} bytes, needs {needed}")


class FormatError(RagbufError, ValueError):
    """An on-disk container directory is malformed."""


class MismatchError(RagbufError):
    """A round-trip or differential comparison did not come back equal."""


class NoRuleError(RagbufError, LookupError):
    """No conversion rule accepted a foreign value."""

    def __init__(self, type_key: str, tiers_tried: list[int]):
        self.type_key = type_key
        self.tiers_tried = list(tiers_tried)
        super().__init__(
            f"no conversion rule for type key {type_key!r} "
            f"(tiers tried: {self.tiers_tried})"
        )
