"""Regenerate the committed golden containers.

The bytes are written with raw struct packing, independent of the library
under test: buffer names follow the interchange convention
(``<form_key>-offsets`` / ``<form_key>-data``), multi-byte values are
little-endian, and the form documents are frozen literal strings. Run from
the repository root:

    python3 tests/golden/regen.py
"""

import struct
from pathlib import Path

HERE = Path(__file__).parent

LISTOFFSET_FORM = (
    '{"class":"ListOffsetArray","offsets":"i64",'
    '"content":{"class":"NumpyArray","primitive":"float64","form_key":"node1"},'
    '"form_key":"node0"}'
)

RECORD_FORM = (
    '{"class":"RecordArray","fields":["a","b"],'
    '"contents":[{"class":"NumpyArray","primitive":"int64","form_key":"node1"},'
    '{"class":"NumpyArray","primitive":"float64","form_key":"node2"}],'
    '"form_key":"node0"}'
)


def write(dirname: str, form: str, length: int, buffers: dict[str, bytes]) -> None:
    root = HERE / dirname
    (root / "buffers").mkdir(parents=True, exist_ok=True)
    (root / "form.json").write_text(form, encoding="utf-8")
    (root / "length.txt").write_text(f"{length}\n", encoding="ascii")
    for name, data in buffers.items():
        (root / "buffers" / name).write_bytes(data)


def main() -> None:
    write(
        "listoffset_f64",
        LISTOFFSET_FORM,
        3,
        {
            "node0-offsets": struct.pack("<4q", 0, 3, 3, 5),
            "node1-data": struct.pack("<5d", 1.1, 2.2, 3.3, 4.4, 5.5),
        },
    )
    write(
        "record_ab",
        RECORD_FORM,
        5,
        {
            "node1-data": struct.pack("<5q", 1, 2, 3, 4, 5),
            "node2-data": struct.pack("<5d", 1.1, 2.2, 3.3, 4.4, 5.5),
        },
    )
    print(f"golden containers written under {HERE}")


if __name__ == "__main__":
    main()
