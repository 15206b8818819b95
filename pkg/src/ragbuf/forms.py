"""Schema trees (forms) describing array structure, with a JSON wire format.

The wire tokens follow the established columnar-ecosystem spelling so that
containers written here can be read elsewhere and vice versa:

* primitive    -> ``{"class": "NumpyArray", "primitive": "<dtype>", "form_key": k}``
* list-offset  -> ``{"class": "ListOffsetArray", "offsets": "i64", "content": {...}, "form_key": k}``
* record       -> ``{"class": "RecordArray", "fields": [...], "contents": [...], "form_key": k}``

Unknown keys are ignored on parse (richer ecosystems attach ``parameters``
and similar); anything outside the three classes above is rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ParseError, SchemaError, UnsupportedLayoutError
from .layout import (
    DTYPES,
    ArrayNode,
    ListOffsetArray,
    PrimitiveArray,
    RecordArray,
)

__all__ = [
    "Form",
    "PrimitiveForm",
    "ListOffsetForm",
    "RecordForm",
    "form_of",
    "parse_form",
    "emit_form",
]


class Form:
    """Base of the three schema node kinds; immutable value objects."""

    kind: str
    form_key: str


@dataclass(frozen=True)
class PrimitiveForm(Form):
    dtype: str
    form_key: str
    kind = "primitive"

    def __post_init__(self):
        if self.dtype not in DTYPES:
            raise UnsupportedLayoutError(f"unsupported primitive dtype {self.dtype!r}")


@dataclass(frozen=True)
class ListOffsetForm(Form):
    content: Form
    form_key: str
    offsets_dtype: str = "i64"
    kind = "list-offset"

    def __post_init__(self):
        if self.offsets_dtype != "i64":
            raise UnsupportedLayoutError(
                f"unsupported offsets dtype {self.offsets_dtype!r} (only i64)"
            )


@dataclass(frozen=True)
class RecordForm(Form):
    fields: tuple[tuple[str, Form], ...]
    form_key: str
    kind = "record"

    def __post_init__(self):
        object.__setattr__(
            self, "fields", tuple((name, form) for name, form in self.fields)
        )

    @property
    def field_names(self) -> list[str]:
        return [name for name, _ in self.fields]


def form_of(node: ArrayNode, key_prefix: str = "node") -> Form:
    """Form of a node tree, with ``form_key`` values assigned pre-order.

    Keys are ``"<prefix><counter>"`` starting at 0, so the same structure
    always gets the same keys: the schema is a function of shape alone.
    """
    counter = [0]

    def build(n: ArrayNode) -> Form:
        key = f"{key_prefix}{counter[0]}"
        counter[0] += 1
        if isinstance(n, PrimitiveArray):
            return PrimitiveForm(n.dtype, key)
        if isinstance(n, ListOffsetArray):
            return ListOffsetForm(build(n.content), key)
        if isinstance(n, RecordArray):
            return RecordForm(
                tuple((name, build(child)) for name, child in n.fields), key
            )
        raise TypeError(f"not an ArrayNode: {type(n).__name__}")

    return build(node)


def _form_to_obj(form: Form) -> dict:
    # Key order is part of the wire contract:
    # class, offsets, primitive, content/contents/fields, form_key.
    if isinstance(form, PrimitiveForm):
        return {"class": "NumpyArray", "primitive": form.dtype, "form_key": form.form_key}
    if isinstance(form, ListOffsetForm):
        return {
            "class": "ListOffsetArray",
            "offsets": form.offsets_dtype,
            "content": _form_to_obj(form.content),
            "form_key": form.form_key,
        }
    if isinstance(form, RecordForm):
        return {
            "class": "RecordArray",
            "fields": [name for name, _ in form.fields],
            "contents": [_form_to_obj(child) for _, child in form.fields],
            "form_key": form.form_key,
        }
    raise TypeError(f"not a Form: {type(form).__name__}")


def emit_form(form: Form) -> str:
    """Serialize a form to its JSON wire format.

    Compact separators, stable key order, raw UTF-8 (no ASCII escaping), so
    any two emitters of the same form produce byte-identical documents.
    """
    return json.dumps(_form_to_obj(form), separators=(",", ":"), ensure_ascii=False)


def _require(obj: dict, key: str, cls: str):
    if key not in obj:
        raise SchemaError(key, f"required by class {cls!r}")
    return obj[key]


def _form_from_obj(obj) -> Form:
    if not isinstance(obj, dict):
        raise SchemaError("class", f"form node must be a JSON object, got {type(obj).__name__}")
    cls = _require(obj, "class", "<node>")
    if cls == "NumpyArray":
        dtype = _require(obj, "primitive", cls)
        key = _require(obj, "form_key", cls)
        if not isinstance(key, str):
            raise SchemaError("form_key", "must be a string")
        return PrimitiveForm(dtype, key)
    if cls == "ListOffsetArray":
        content = _form_from_obj(_require(obj, "content", cls))
        offsets = obj.get("offsets", "i64")
        key = _require(obj, "form_key", cls)
        if not isinstance(key, str):
            raise SchemaError("form_key", "must be a string")
        return ListOffsetForm(content, key, offsets_dtype=offsets)
    if cls == "RecordArray":
        names = _require(obj, "fields", cls)
        contents = _require(obj, "contents", cls)
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise SchemaError("fields", "must be a list of strings")
        if not isinstance(contents, list):
            raise SchemaError("contents", "must be a list of form nodes")
        if len(names) != len(contents):
            raise SchemaError(
                "contents", f"{len(contents)} contents for {len(names)} fields"
            )
        key = _require(obj, "form_key", cls)
        if not isinstance(key, str):
            raise SchemaError("form_key", "must be a string")
        return RecordForm(
            tuple((n, _form_from_obj(c)) for n, c in zip(names, contents)), key
        )
    raise UnsupportedLayoutError(f"unsupported layout class {cls!r}")


def _check_unique_keys(form: Form, seen: set[str]) -> None:
    if form.form_key in seen:
        raise SchemaError("form_key", f"duplicate {form.form_key!r}")
    seen.add(form.form_key)
    if isinstance(form, ListOffsetForm):
        _check_unique_keys(form.content, seen)
    elif isinstance(form, RecordForm):
        for _, child in form.fields:
            _check_unique_keys(child, seen)


def parse_form(text: str) -> Form:
    """Parse the JSON wire format back into a form tree.

    Raises :class:`ParseError` on malformed JSON (with the byte offset),
    :class:`UnsupportedLayoutError` for classes outside the closed node set,
    and :class:`SchemaError` for missing or malformed required keys.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    form = _form_from_obj(obj)
    _check_unique_keys(form, set())
    return form
