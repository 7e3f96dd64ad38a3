"""Small helper to accept CSV input as text, bytes, a path-like or a file object."""

from __future__ import annotations

import os
from typing import IO


def read_text(source: str | bytes | os.PathLike | IO) -> str:
    """Return the full text of *source*, decoding UTF-8 where needed.

    Strings containing a newline (or a comma) are treated as inline CSV
    content, anything else as a filesystem path.
    """
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        if "\n" in source or "," in source:
            return source
        with open(source, "r", encoding="utf-8") as handle:
            return handle.read()
    if isinstance(source, os.PathLike):
        with open(source, "r", encoding="utf-8") as handle:
            return handle.read()
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data
