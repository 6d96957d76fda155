"""Reading and writing trellis JSON, generator files and code files.

Trellis JSON holds the field, section count, dimensions, one list of RREF
basis rows per constraint (layout ``s_i | a_i | s_{i+1}``) and the sign
flags.  Output is canonical, so equal trellises serialize to equal bytes.

A generator file has one generator per line, ``word;span=a..b``; the span
may be omitted to use the word's shortest circular span.  Words are digit
strings, or comma/space separated integers when ``p > 10``.  Directives:

    field 3
    symbol_dims 1 1 2
    relabel 4: 11 01      # new S_4 coordinates = M @ old, rows listed
                          # (rows separated by ';' when p > 10)

``#`` starts a comment.  A code file lists generator-matrix rows, one per
line, and accepts the ``field`` and ``symbol_dims`` directives.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .gflinalg import Subspace, Vector
from .kv import circular_span
from .trellis import CircularSpan, Trellis, TrellisError, check, from_generators, make_trellis, relabel_states

KEYS = ("field", "m", "symbol_dims", "state_dims", "constraints", "sign_flags")


class FormatError(ValueError):
    pass


def to_dict(T: Trellis) -> dict[str, Any]:
    return {
        "field": T.p,
        "m": T.m,
        "symbol_dims": list(T.symbol_dims),
        "state_dims": list(T.state_dims),
        "constraints": [[list(r) for r in C.basis] for C in T.constraints],
        "sign_flags": list(T.sign_flags),
    }


def dumps(T: Trellis) -> str:
    """Canonical JSON text: fixed key order, one constraint per line."""
    d = to_dict(T)
    lines = ["{"]
    for key in KEYS[:4]:
        lines.append(f'  "{key}": {json.dumps(d[key])},')
    lines.append('  "constraints": [')
    cons = [json.dumps(c) for c in d["constraints"]]
    lines.extend(f"    {c}{',' if k < len(cons) - 1 else ''}" for k, c in enumerate(cons))
    lines.append("  ],")
    lines.append(f'  "sign_flags": {json.dumps(d["sign_flags"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_dict(d: dict[str, Any]) -> Trellis:
    if not isinstance(d, dict):
        raise FormatError("trellis JSON must be an object")
    missing = [k for k in KEYS[:5] if k not in d]
    if missing:
        raise FormatError(f"trellis JSON lacks {', '.join(missing)}")
    unknown = sorted(set(d) - set(KEYS))
    if unknown:
        raise FormatError(f"unknown trellis JSON keys: {', '.join(unknown)}")
    m = d["m"]
    if not isinstance(m, int) or m < 1:
        raise FormatError(f"m must be a positive integer, not {m!r}")
    for key in ("symbol_dims", "state_dims", "constraints"):
        if not isinstance(d[key], list) or len(d[key]) != m:
            raise FormatError(f"{key} must be a list of length m = {m}")
    p = d["field"]
    try:
        rows = [[tuple(int(x) for x in r) for r in C] for C in d["constraints"]]
    except (TypeError, ValueError) as e:
        raise FormatError(f"constraint rows must be integer lists: {e}") from None
    for C in rows:
        for r in C:
            if any(not 0 <= x < p for x in r):
                raise FormatError(f"constraint entry outside [0, {p}) in row {list(r)}")
    T = make_trellis(p, d["state_dims"], rows, d["symbol_dims"], d.get("sign_flags"))
    return check(T)


def loads(text: str) -> Trellis:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from None
    return from_dict(d)


def read_trellis(path: str | Path) -> Trellis:
    return loads(Path(path).read_text())


def write_trellis(T: Trellis, path: str | Path) -> None:
    Path(path).write_text(dumps(T))


# --- generator and code files ------------------------------------------------------------


@dataclass
class GeneratorFile:
    p: int = 2
    symbol_dims: tuple[int, ...] | None = None
    generators: list[tuple[Vector, CircularSpan | None]] = field(default_factory=list)
    relabels: list[tuple[int, tuple[Vector, ...]]] = field(default_factory=list)

    def n(self) -> int:
        if self.symbol_dims is not None:
            return sum(self.symbol_dims)
        if self.generators:
            return len(self.generators[0][0])
        raise FormatError("cannot tell the code length: no generators and no symbol_dims")

    def dims(self) -> tuple[int, ...]:
        return self.symbol_dims if self.symbol_dims is not None else (1,) * self.n()


def parse_word(text: str, p: int) -> Vector:
    text = text.strip()
    if re.search(r"[,\s]", text):
        parts = [t for t in re.split(r"[,\s]+", text) if t]
    elif p <= 10:
        parts = list(text)
    else:
        raise FormatError(f"over GF({p}) separate word entries with commas or spaces: {text!r}")
    try:
        vals = tuple(int(x) for x in parts)
    except ValueError:
        raise FormatError(f"bad word {text!r}") from None
    if not vals:
        raise FormatError("empty word")
    if any(not 0 <= v < p for v in vals):
        raise FormatError(f"word {text!r} has entries outside [0, {p})")
    return vals


def parse_span(text: str) -> CircularSpan:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise FormatError(f"bad span {text!r}; expected a..b")
    return CircularSpan(int(m.group(1)), int(m.group(2)))


def _directive(line: str, genfile: GeneratorFile, p_override: int | None) -> bool:
    head, _, rest = line.partition(" ")
    if head == "field":
        if p_override is None:
            try:
                genfile.p = int(rest)
            except ValueError:
                raise FormatError(f"bad field directive {line!r}") from None
        return True
    if head == "symbol_dims":
        try:
            genfile.symbol_dims = tuple(int(x) for x in rest.split())
        except ValueError:
            raise FormatError(f"bad symbol_dims directive {line!r}") from None
        return True
    return False


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_generator_file(text: str, p: int | None = None) -> GeneratorFile:
    genfile = GeneratorFile(p=p if p is not None else 2)
    for lineno, line in _lines(text):
        try:
            if _directive(line, genfile, p):
                continue
            if line.startswith("relabel"):
                m = re.fullmatch(r"relabel\s+(\d+)\s*:\s*(.+)", line)
                if not m:
                    raise FormatError(f"bad relabel directive {line!r}")
                parts = m.group(2).split(";") if genfile.p > 10 else m.group(2).split()
                rows = tuple(parse_word(r, genfile.p) for r in parts)
                genfile.relabels.append((int(m.group(1)), rows))
                continue
            word, _, opts = line.partition(";")
            span = None
            if opts.strip():
                key, _, val = opts.partition("=")
                if key.strip() != "span":
                    raise FormatError(f"unknown generator option {key.strip()!r}")
                span = parse_span(val)
            genfile.generators.append((parse_word(word, genfile.p), span))
        except FormatError as e:
            raise FormatError(f"line {lineno}: {e}") from None
    return genfile


def build_from_generator_file(genfile: GeneratorFile) -> Trellis:
    dims = genfile.dims()
    gens = []
    for word, span in genfile.generators:
        if len(word) != sum(dims):
            raise FormatError(f"generator {word} has length {len(word)}, expected {sum(dims)}")
        gens.append((word, span if span is not None else circular_span(word, dims)))
    T = from_generators(gens, p=genfile.p, symbol_dims=dims)
    for i, rows in genfile.relabels:
        if not 0 <= i < T.m:
            raise FormatError(f"relabel time {i} out of range")
        T = relabel_states(T, i, rows)
    return T


def parse_code_file(text: str, p: int | None = None) -> tuple[Subspace, tuple[int, ...]]:
    """Generator-matrix rows -> (code, symbol dims)."""
    genfile = GeneratorFile(p=p if p is not None else 2)
    rows: list[Vector] = []
    for lineno, line in _lines(text):
        try:
            if _directive(line, genfile, p):
                continue
            rows.append(parse_word(line, genfile.p))
        except FormatError as e:
            raise FormatError(f"line {lineno}: {e}") from None
    if genfile.symbol_dims is not None:
        n = sum(genfile.symbol_dims)
    elif rows:
        n = len(rows[0])
    else:
        raise FormatError("code file has no rows and no symbol_dims")
    if any(len(r) != n for r in rows):
        raise FormatError(f"all rows must have length {n}")
    dims = genfile.symbol_dims if genfile.symbol_dims is not None else (1,) * n
    return Subspace(genfile.p, n, tuple(rows)), dims


def format_word(v: Sequence[int], p: int = 2) -> str:
    if p <= 10:
        return "".join(str(x) for x in v)
    return ",".join(str(x) for x in v)


__all__ = [
    "FormatError",
    "GeneratorFile",
    "build_from_generator_file",
    "dumps",
    "format_word",
    "from_dict",
    "loads",
    "parse_code_file",
    "parse_generator_file",
    "parse_span",
    "parse_word",
    "read_trellis",
    "to_dict",
    "write_trellis",
]
