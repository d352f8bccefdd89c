"""Text format for diagrams, DOT export and JSON encoding.

Diagram files hold one directive per line; ``#`` starts a comment::

    level 0: 1
    level 1: 2
    edges 0->1: 0 0 2
    periodic from 1 period 1
    edges 1->2: 0 0 2

A periodic file declares levels ``0 .. start + period - 1`` and one edge
block leaving each of them; the last block targets the vertices of level
``start``.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .diagram import BratteliDiagram, empty_diagram, validate_diagram
from .errors import DiagramSyntaxError, DiagramValidationError, InputError
from .ideals import LevelSet, closure

JSON_SCHEMA = "v1"

_LEVEL = re.compile(r"^level\s+(\d+)\s*:(.*)$")
_EDGES = re.compile(r"^edges\s+(\d+)\s*->\s*(\d+)\s*:(.*)$")
_PERIODIC = re.compile(r"^periodic\s+from\s+(\d+)\s+period\s+(\d+)$")


def _ints(text: str, line: int) -> list[int]:
    try:
        return [int(t) for t in text.split()]
    except ValueError:
        raise DiagramSyntaxError(f"expected integers, got {text.strip()!r}", line) from None


def parse_diagram(text: str, validate: bool = True) -> BratteliDiagram:
    levels: dict[int, tuple[list[int], int]] = {}
    edges: dict[int, tuple[list[tuple[int, int, int]], int]] = {}
    periodic = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _LEVEL.match(line):
            p = int(m.group(1))
            if p in levels:
                raise DiagramSyntaxError(f"level {p} declared twice", lineno)
            dims = _ints(m.group(2), lineno)
            if not dims:
                raise DiagramSyntaxError(f"level {p} has no vertices", lineno)
            levels[p] = (dims, lineno)
        elif m := _EDGES.match(line):
            p, q = int(m.group(1)), int(m.group(2))
            if q != p + 1:
                raise DiagramSyntaxError(f"edges must join consecutive levels, got {p}->{q}", lineno)
            if p in edges:
                raise DiagramSyntaxError(f"edges {p}->{q} declared twice", lineno)
            block = []
            for chunk in m.group(3).split(";"):
                if not chunk.strip():
                    continue
                nums = _ints(chunk, lineno)
                if len(nums) != 3:
                    raise DiagramSyntaxError(f"edge triple must be 'i j m', got {chunk.strip()!r}", lineno)
                block.append(tuple(nums))
            if not block:
                raise DiagramSyntaxError(f"edges {p}->{q} lists no edges", lineno)
            edges[p] = (block, lineno)
        elif m := _PERIODIC.match(line):
            if periodic is not None:
                raise DiagramSyntaxError("periodic directive given twice", lineno)
            periodic = (int(m.group(1)), int(m.group(2)), lineno)
        else:
            raise DiagramSyntaxError(f"unrecognized directive {line!r}", lineno)

    if not levels:
        if edges or periodic:
            raise DiagramSyntaxError("no levels declared")
        return empty_diagram()
    n = max(levels) + 1
    for p in range(n):
        if p not in levels:
            raise DiagramSyntaxError(f"level {p} missing", levels[min(q for q in levels if q > p)][1])
    if periodic is not None:
        start, period, pline = periodic
        if period < 1:
            raise DiagramSyntaxError("period must be >= 1", pline)
        if n != start + period:
            raise DiagramSyntaxError(
                f"periodic from {start} period {period} needs levels 0..{start + period - 1}, "
                f"found 0..{n - 1}", pline)
        n_blocks = n
    else:
        n_blocks = n - 1
    for p in range(n_blocks):
        if p not in edges:
            raise DiagramSyntaxError(f"missing edges {p}->{p + 1}", levels[p][1])
    extra = [p for p in edges if p >= n_blocks]
    if extra:
        raise DiagramSyntaxError(f"edges {extra[0]}->{extra[0] + 1} leave the declared levels",
                                 edges[extra[0]][1])
    try:
        d = BratteliDiagram(
            tuple(tuple(levels[p][0]) for p in range(n)),
            tuple(tuple(edges[p][0]) for p in range(n_blocks)),
            (periodic[0], periodic[1]) if periodic else None,
        )
    except InputError as exc:
        raise DiagramSyntaxError(str(exc)) from None
    if validate:
        report = validate_diagram(d)
        if not report.ok:
            raise DiagramValidationError(report)
    return d


def read_diagram(path, validate: bool = True) -> BratteliDiagram:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_diagram(text, validate=validate)


def serialize_diagram(d: BratteliDiagram) -> str:
    """Canonical text: levels in order, each followed by its incoming edge block."""
    if d.is_empty:
        return "# empty diagram\n"

    def level(p):
        return f"level {p}: " + " ".join(map(str, d.levels[p]))

    def block(p):
        body = "; ".join(f"{i} {j} {m}" for i, j, m in d.edges[p])
        return f"edges {p}->{p + 1}: {body}"

    out = [level(0)]
    if d.is_periodic and d.tail_start == 0:
        out.append(f"periodic from 0 period {d.period}")
    for p in range(1, len(d.levels)):
        out.append(level(p))
        out.append(block(p - 1))
        if d.is_periodic and p == d.tail_start:
            out.append(f"periodic from {d.tail_start} period {d.period}")
    if d.is_periodic:
        out.append(block(len(d.levels) - 1))
    return "\n".join(out) + "\n"


# -- ideal specifications --------------------------------------------------------

def parse_ideal_spec(d: BratteliDiagram, spec: str | None):
    """``"p:i,p:i"`` -> the ideal generated by those vertices; ``None`` -> the full set."""
    from .ideals import full_set

    if spec is None:
        return full_set(d)
    spec = spec.strip()
    if spec in ("", "none", "0"):
        return closure(d, ())
    vertices = []
    for tok in spec.split(","):
        tok = tok.strip()
        m = re.fullmatch(r"(\d+)\s*:\s*(\d+)", tok)
        if not m:
            raise InputError(f"bad vertex {tok!r} in ideal spec (expected level:index)")
        v = (int(m.group(1)), int(m.group(2)))
        if not d.has_level(v[0]) or v[1] >= d.num_vertices(v[0]):
            raise InputError(f"unknown ideal generator {tok}")
        vertices.append(v)
    return closure(d, vertices)


# -- DOT -------------------------------------------------------------------------

def to_dot(d: BratteliDiagram, s: LevelSet | None = None, extra_periods: int = 1) -> str:
    """Graphviz digraph of the declared levels (plus ``extra_periods`` unrolled periods).

    Vertices of ``s`` are filled; dimension-one vertices are drawn doubled.
    """
    if d.is_empty:
        return "digraph bratteli {\n}\n"
    if d.is_periodic:
        n = max(d.tail_start + d.period * (1 + extra_periods),
                (s.window() + d.period) if s is not None else 0)
    else:
        n = len(d.levels)
    lines = ["digraph bratteli {", "  rankdir=TB;", "  node [shape=circle];"]
    if d.is_periodic:
        lines.append(f"  // periodic from {d.tail_start} period {d.period}; {n} levels drawn")
    for p in range(n):
        names = []
        for i, dim in enumerate(d.dims(p)):
            name = f'"{p}:{i}"'
            names.append(name)
            attrs = [f'label="{dim}"']
            if dim == 1:
                attrs.append("shape=doublecircle")
                attrs.append('xlabel="dim 1"')
            if s is not None and i in s.at(p):
                attrs.append("style=filled")
                attrs.append("fillcolor=lightblue")
            lines.append(f"  {name} [{', '.join(attrs)}];")
        lines.append("  { rank=same; " + " ".join(names) + "; }")
    for p in range(n - 1):
        for i, j, m in d.edges_from(p):
            lines.append(f'  "{p}:{i}" -> "{p + 1}:{j}" [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- JSON ----------------------------------------------------------------------

def level_set_json(s: LevelSet) -> dict[str, Any]:
    return {
        "prefix": [sorted(x) for x in s.prefix],
        "tail_start": s.tail_start,
        "tail": [sorted(x) for x in s.tail],
    }


def dumps(payload: dict[str, Any]) -> str:
    return json.dumps({"schema": JSON_SCHEMA, **payload}, sort_keys=True, indent=2) + "\n"
