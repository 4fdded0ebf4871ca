"""Reading and writing the plain-text incidence format.

    incidence v1
    points <v>
    blocks <b>
    # key=value            (optional, any number, before the blocks)
    <b lines of strictly increasing 0-based point indices>
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import DuplicateBlock, IndexOutOfRange, ParseError
from .incidence import IncidenceStructure

MAGIC = "incidence v1"
_TOKEN = re.compile(r"^[A-Za-z0-9_.\-]+$")
_VALUE = re.compile(r"^[!-~]+$")


def _header_int(lines: list[str], i: int, key: str) -> int:
    if i >= len(lines):
        raise ParseError(i + 1, f"missing '{key} <n>' line")
    parts = lines[i].split(" ")
    if len(parts) != 2 or parts[0] != key or not parts[1].isdigit():
        raise ParseError(i + 1, f"expected '{key} <n>', got {lines[i]!r}")
    return int(parts[1])


def parse_inc(text: str) -> IncidenceStructure:
    if not text.isascii():
        raise ParseError(1, "file is not ASCII")
    if "\r" in text:
        raise ParseError(1, "line endings must be LF")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MAGIC:
        raise ParseError(1, f"first line must be {MAGIC!r}")
    v = _header_int(lines, 1, "points")
    b = _header_int(lines, 2, "blocks")
    if v < 1:
        raise ParseError(2, "need at least one point")

    meta: dict[str, str] = {}
    i = 3
    while i < len(lines) and lines[i].startswith("#"):
        body = lines[i][1:].strip()
        for tok in body.split():
            key, sep, value = tok.partition("=")
            if not sep or not _TOKEN.match(key) or not value:
                raise ParseError(i + 1, f"metadata must be key=value pairs, got {tok!r}")
            meta[key] = value
        i += 1

    block_lines = lines[i:]
    if len(block_lines) != b:
        raise ParseError(min(i + len(block_lines), i + b) + 1, f"expected {b} block lines, found {len(block_lines)}")
    blocks = []
    seen: dict[tuple[int, ...], int] = {}
    for n, raw in enumerate(block_lines, start=i + 1):
        toks = raw.split(" ") if raw else []
        if any(not t.isdigit() for t in toks):
            raise ParseError(n, f"block line must be space-separated integers, got {raw!r}")
        blk = tuple(int(t) for t in toks)
        if len(set(blk)) != len(blk):
            raise ParseError(n, "point repeated within a block")
        if any(a >= c for a, c in zip(blk, blk[1:])):
            raise ParseError(n, "point indices must be strictly increasing")
        if blk and blk[-1] >= v:
            raise IndexOutOfRange(f"line {n}: point {blk[-1]} out of range for {v} points")
        if blk in seen:
            raise DuplicateBlock(blk, f"line {n}: block repeats line {seen[blk]}")
        seen[blk] = n
        blocks.append(blk)
    return IncidenceStructure(v, tuple(blocks), meta)


def write_inc(S: IncidenceStructure) -> str:
    out = [MAGIC, f"points {S.num_points}", f"blocks {S.b}"]
    for key in sorted(S.meta):
        value = str(S.meta[key])
        if not _TOKEN.match(key) or not _VALUE.match(value):
            raise ValueError(f"metadata {key}={value!r} cannot be written")
        out.append(f"# {key}={value}")
    out.extend(" ".join(map(str, blk)) for blk in S.blocks)
    return "\n".join(out) + "\n"


def read_inc(path: str | Path) -> IncidenceStructure:
    return parse_inc(Path(path).read_bytes().decode("ascii", errors="replace"))


def save_inc(S: IncidenceStructure, path: str | Path) -> None:
    Path(path).write_bytes(write_inc(S).encode("ascii"))
