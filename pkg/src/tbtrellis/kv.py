"""Product trellises built from shortest-circular-span generators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import GuardExceeded, InvariantViolation
from .gflinalg import Subspace, Vector, rank
from .trellis import CircularSpan, Trellis, TrellisError, from_generators, support

ENUMERATION_LIMIT = 1 << 20


@dataclass(frozen=True)
class SpannedGenerator:
    word: Vector
    span: CircularSpan
    span_length: int


def _intervals(m: int, sup: Sequence[int]) -> list[CircularSpan]:
    """All shortest circular intervals covering ``sup``, by increasing start."""
    best: list[CircularSpan] = []
    best_len = m + 1
    for start in range(m):
        length = max((s - start) % m for s in sup) + 1
        if length < best_len:
            best, best_len = [], length
        if length == best_len:
            best.append(CircularSpan(start, (start + length - 1) % m))
    return best


def circular_span(w: Sequence[int], symbol_dims: Sequence[int] | None = None) -> CircularSpan:
    """Shortest circular interval of sections containing the support; ties go to the smallest start."""
    m = len(w) if symbol_dims is None else len(symbol_dims)
    sup = support(w, symbol_dims)
    if not sup:
        raise TrellisError("the zero word has no span")
    return _intervals(m, sup)[0]


def _stop_span(w, m, symbol_dims) -> CircularSpan:
    """Shortest span again, but ties go to the smallest stop."""
    return min(_intervals(m, support(w, symbol_dims)), key=lambda s: s.stop)


def shortest_span_generators(
    C: Subspace, symbol_dims: Sequence[int] | None = None, by: str = "start"
) -> list[SpannedGenerator]:
    """``dim C`` independent codewords, each shortest among words starting (or stopping) where it does."""
    if by not in ("start", "stop"):
        raise ValueError(f"by must be 'start' or 'stop', not {by!r}")
    if symbol_dims is None:
        symbol_dims = (1,) * C.n
    if sum(symbol_dims) != C.n:
        raise TrellisError(f"symbol dims {tuple(symbol_dims)} do not fit a code of length {C.n}")
    m = len(symbol_dims)
    if C.p ** C.dim > ENUMERATION_LIMIT:
        raise GuardExceeded(f"{C.p}^{C.dim} codewords exceed the enumeration limit")

    best: dict[int, tuple[int, Vector, CircularSpan]] = {}
    for w in C.elements():
        if not any(w):
            continue
        span = circular_span(w, symbol_dims) if by == "start" else _stop_span(w, m, symbol_dims)
        key = span.start if by == "start" else span.stop
        cand = (span.length(m), w, span)
        if key not in best or cand[:2] < best[key][:2]:
            best[key] = cand

    chosen: list[SpannedGenerator] = []
    for key in sorted(best, key=lambda k: (best[k][0], k, best[k][1])):
        length, w, span = best[key]
        if rank([g.word for g in chosen] + [w], C.p, C.n) > len(chosen):
            chosen.append(SpannedGenerator(w, span, length))
        if len(chosen) == C.dim:
            break
    if len(chosen) != C.dim:
        raise InvariantViolation(f"only {len(chosen)} independent shortest-span words for a code of dim {C.dim}")
    return chosen


def kv_trellis(C: Subspace, symbol_dims: Sequence[int] | None = None, by: str = "start") -> Trellis:
    if symbol_dims is None:
        symbol_dims = (1,) * C.n
    gens = shortest_span_generators(C, symbol_dims, by)
    return from_generators([(g.word, g.span) for g in gens], p=C.p, symbol_dims=symbol_dims)
