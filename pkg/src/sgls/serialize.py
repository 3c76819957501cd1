"""Deterministic JSON emission.

Reports must be byte-identical across runs of the same build and config,
so floats are rendered with a fixed 17-significant-digit format (enough
to round-trip IEEE doubles) and dictionaries keep insertion order.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["to_json_text", "format_float", "format_float_human"]


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(float(x), ".17g")
    if "e" not in text and "E" not in text and "." not in text:
        text += ".0"  # keep the token a float on the way back in
    return text


def format_float_human(x: float) -> str:
    return format(float(x), ".6g")


def _encode(obj, pieces: list, indent: int, level: int) -> None:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        pieces.append("null")
    elif isinstance(obj, bool):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, int):
        pieces.append(str(obj))
    elif isinstance(obj, float):
        pieces.append(format_float(obj))
    elif isinstance(obj, Fraction):
        pieces.append(_quote(str(obj)))
    elif isinstance(obj, str):
        pieces.append(_quote(obj))
    elif isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            pieces.append(pad_in + _quote(str(key)) + ": ")
            _encode(val, pieces, indent, level + 1)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, val in enumerate(seq):
            pieces.append(pad_in)
            _encode(val, pieces, indent, level + 1)
            pieces.append(",\n" if i < len(seq) - 1 else "\n")
        pieces.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")


def _quote(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def to_json_text(obj, indent: int = 2) -> str:
    pieces: list[str] = []
    _encode(obj, pieces, indent, 0)
    pieces.append("\n")
    return "".join(pieces)
