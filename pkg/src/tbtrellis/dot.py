"""Graphviz rendering of a trellis: one column of states per time, one edge per branch."""

from __future__ import annotations

import itertools

from .errors import GuardExceeded
from .trellis import Trellis, check

BRANCH_LIMIT = 1 << 16


def _label(v, p: int) -> str:
    if not v:
        return "0"
    sep = "" if p <= 10 else ","
    return sep.join(str(x) for x in v)


def export_dot(T: Trellis, labels: bool = False, name: str = "trellis") -> str:
    """DOT digraph text.  Time 0 is drawn again at the right end to show the wrap.

    Edges whose symbol block is all zero are dashed.  Vertex and edge order
    is lexicographic, so the output is deterministic.
    """
    check(T)
    m, p = T.m, T.p
    for i, C in enumerate(T.constraints):
        if p ** C.dim > BRANCH_LIMIT:
            raise GuardExceeded(f"section {i} has {p}^{C.dim} branches, over the limit of {BRANCH_LIMIT}")
        if p ** T.state_dims[i] > BRANCH_LIMIT:
            raise GuardExceeded(f"state time {i} has {p}^{T.state_dims[i]} states, over the limit")

    def node(col, s):
        return f'"t{col}_{_label(s, p)}"'

    out = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle, fontsize=10];"]
    for col in range(m + 1):
        d = T.state_dims[col % m]
        out.append(f"  subgraph col{col} {{")
        out.append("    rank=same;")
        for s in itertools.product(range(p), repeat=d):
            attrs = f'label="{_label(s, p)}"' if labels else 'label="", shape=point, width=0.1'
            out.append(f"    {node(col, s)} [{attrs}];")
        out.append("  }")
    for i in range(m):
        d0, n, _ = T.layout(i)
        for b in sorted(T.constraints[i].elements()):
            s, a, t = b[:d0], b[d0:d0 + n], b[d0 + n:]
            attrs = []
            if not any(a):
                attrs.append("style=dashed")
            if labels:
                attrs.append(f'label="{_label(a, p)}"')
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            out.append(f"  {node(i, s)} -> {node(i + 1, t)}{suffix};")
    out.append("}")
    return "\n".join(out) + "\n"
