"""ragbuf: ragged columnar arrays with a zero-copy buffer interchange
protocol, a priority-ordered conversion registry, explicit index-convention
bridging, and array-oriented event kernels."""

from .buffers import (
    BufferSet,
    Container,
    buffer_names,
    from_buffers,
    read_container,
    to_buffers,
    write_container,
)
from .errors import (
    BoundsError,
    FieldError,
    FormatError,
    MismatchError,
    MissingBufferError,
    NoRuleError,
    ParseError,
    RagbufError,
    SchemaError,
    SizeError,
    UnsupportedLayoutError,
    ValidationError,
)
from .forms import Form, ListOffsetForm, PrimitiveForm, RecordForm, emit_form, form_of, parse_form
from .indexing import ONE_BASED, ZERO_BASED, Convention, first_index, get, last_index
from .layout import (
    ArrayNode,
    ListOffsetArray,
    PrimitiveArray,
    RecordArray,
    RecordView,
    get_field,
    get_list,
    get_record,
    length,
    to_list,
    validate,
)
from .registry import (
    ARRAY_TYPE_KEY,
    UNCONVERTED,
    ConversionRule,
    ForeignValue,
    Priority,
    Registry,
    Unconverted,
    default_registry,
    export,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayNode",
    "PrimitiveArray",
    "ListOffsetArray",
    "RecordArray",
    "RecordView",
    "length",
    "get_list",
    "get_field",
    "get_record",
    "to_list",
    "validate",
    "Form",
    "PrimitiveForm",
    "ListOffsetForm",
    "RecordForm",
    "form_of",
    "parse_form",
    "emit_form",
    "BufferSet",
    "Container",
    "buffer_names",
    "to_buffers",
    "from_buffers",
    "write_container",
    "read_container",
    "Convention",
    "ZERO_BASED",
    "ONE_BASED",
    "first_index",
    "last_index",
    "get",
    "Priority",
    "ForeignValue",
    "ConversionRule",
    "Registry",
    "Unconverted",
    "UNCONVERTED",
    "ARRAY_TYPE_KEY",
    "default_registry",
    "export",
    "RagbufError",
    "BoundsError",
    "FieldError",
    "ValidationError",
    "ParseError",
    "SchemaError",
    "UnsupportedLayoutError",
    "MissingBufferError",
    "SizeError",
    "FormatError",
    "MismatchError",
    "NoRuleError",
    "__version__",
]
