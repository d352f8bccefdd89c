"""Bratteli diagrams: finite truncations and eventually periodic presentations.

A diagram stores its *declared* levels explicitly.  For a truncated diagram
these are all of its levels.  A periodic diagram with tail ``(start, period)``
declares levels ``0 .. start + period - 1`` together with one edge block per
declared level; the last block points back into the vertex set of level
``start``, and the edge pattern then repeats forever.  Dimensions beyond the
declared levels are not stored: they follow from unitality,
``d(p+1, j) = sum_i mult(i, j) * d(p, i)``, so they grow along the tail.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .errors import InputError

Edge = tuple[int, int, int]


class VertexId(NamedTuple):
    level: int
    index: int

    def __str__(self) -> str:
        return f"{self.level}:{self.index}"


def _merge_edges(block) -> tuple[Edge, ...]:
    mult: Counter = Counter()
    for i, j, m in block:
        mult[int(i), int(j)] += int(m)
    return tuple(sorted((i, j, m) for (i, j), m in mult.items()))


@dataclass(frozen=True)
class BratteliDiagram:
    levels: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[Edge, ...], ...]
    periodic_tail: tuple[int, int] | None = None
    # block sizes past the declared levels for non-unital diagrams: (p -> dims)
    block_sizes: object = field(default=None, repr=False, compare=False)
    _succ: tuple = field(init=False, repr=False, compare=False)
    _pred: tuple = field(init=False, repr=False, compare=False)
    _dim_cache: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        levels = tuple(tuple(int(x) for x in lvl) for lvl in self.levels)
        edges = tuple(_merge_edges(block) for block in self.edges)
        tail = self.periodic_tail
        if tail is not None:
            tail = (int(tail[0]), int(tail[1]))
            start, period = tail
            if start < 0 or period < 1:
                raise InputError(f"bad periodic tail {tail}")
            if len(levels) != start + period:
                raise InputError(
                    f"periodic tail {tail} needs exactly {start + period} declared levels, got {len(levels)}")
            if len(edges) != len(levels):
                raise InputError("a periodic diagram needs one edge block per declared level")
        elif len(edges) != max(len(levels) - 1, 0):
            raise InputError("a truncated diagram needs one edge block between each pair of levels")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "periodic_tail", tail)

        succ, pred = [], []
        for p, block in enumerate(edges):
            n_src = len(levels[p])
            q = p + 1 if p + 1 < len(levels) else tail[0]
            n_dst = len(levels[q])
            s = [[] for _ in range(n_src)]
            r = [[] for _ in range(n_dst)]
            for i, j, m in block:
                if not (0 <= i < n_src and 0 <= j < n_dst):
                    raise InputError(f"edge ({i}, {j}) out of range between levels {p} and {p + 1}")
                s[i].append((j, m))
                r[j].append((i, m))
            succ.append(tuple(tuple(x) for x in s))
            pred.append(tuple(tuple(x) for x in r))
        object.__setattr__(self, "_succ", tuple(succ))
        object.__setattr__(self, "_pred", tuple(pred))

    # -- shape ---------------------------------------------------------------

    @property
    def is_periodic(self) -> bool:
        return self.periodic_tail is not None

    @property
    def depth(self) -> int | None:
        """Number of levels of a truncated diagram; ``None`` when periodic."""
        return None if self.is_periodic else len(self.levels)

    @property
    def tail_start(self) -> int:
        return self.periodic_tail[0] if self.is_periodic else len(self.levels)

    @property
    def period(self) -> int:
        return self.periodic_tail[1] if self.is_periodic else 0

    @property
    def is_empty(self) -> bool:
        return not self.levels

    def phase(self, p: int) -> int:
        """Declared level whose vertex set and outgoing edges level ``p`` copies."""
        if p < 0:
            raise InputError(f"negative level {p}")
        if p < len(self.levels):
            return p
        if not self.is_periodic:
            raise InputError(f"level {p} out of range (depth {len(self.levels)})")
        start, period = self.periodic_tail
        return start + (p - start) % period

    def has_level(self, p: int) -> bool:
        return p >= 0 and (self.is_periodic or p < len(self.levels))

    def num_vertices(self, p: int) -> int:
        return len(self.levels[self.phase(p)])

    def vertices(self, p: int) -> Iterator[VertexId]:
        return (VertexId(p, i) for i in range(self.num_vertices(p)))

    def check_vertex(self, v) -> VertexId:
        v = VertexId(*v)
        if not self.has_level(v.level) or not 0 <= v.index < self.num_vertices(v.level):
            raise InputError(f"vertex {v} does not exist")
        return v

    # -- adjacency -----------------------------------------------------------

    def edges_from(self, p: int) -> tuple[Edge, ...]:
        """Edge block between levels ``p`` and ``p + 1`` (empty after the last truncated level)."""
        q = self.phase(p)
        return self.edges[q] if q < len(self.edges) else ()

    def successors(self, p: int, i: int) -> tuple[tuple[int, int], ...]:
        q = self.phase(p)
        return self._succ[q][i] if q < len(self._succ) else ()

    def predecessors(self, p: int, j: int) -> tuple[tuple[int, int], ...]:
        if p == 0:
            return ()
        q = self.phase(p - 1)
        return self._pred[q][j]

    def out_multiplicity(self, p: int, i: int) -> int:
        return sum(m for _, m in self.successors(p, i))

    # -- dimensions ----------------------------------------------------------

    def dims(self, p: int) -> tuple[int, ...]:
        if 0 <= p < len(self.levels):
            return self.levels[p]
        self.phase(p)
        cached = self._dim_cache.get(p)
        if cached is None and self.block_sizes is not None:
            cached = self._dim_cache[p] = tuple(self.block_sizes(p))
        if cached is None:
            # iterate rather than recurse: tails can be unrolled deep
            top = max([q for q in self._dim_cache if q < p], default=len(self.levels) - 1)
            prev = self.dims(top)
            for q in range(top + 1, p + 1):
                cur = [0] * self.num_vertices(q)
                for i, j, m in self.edges_from(q - 1):
                    cur[j] += m * prev[i]
                prev = tuple(cur)
                self._dim_cache[q] = prev
            cached = prev
        return cached

    def dim(self, v) -> int:
        level, index = v
        return self.dims(level)[index]

    def total_dimension(self, p: int) -> int:
        """Vector-space dimension of the level-``p`` algebra, sum of squares of block sizes."""
        return sum(n * n for n in self.dims(p))


def empty_diagram() -> BratteliDiagram:
    return BratteliDiagram(levels=(), edges=())


@dataclass(frozen=True)
class Issue:
    kind: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set[str]:
        return {i.kind for i in self.issues}


def validate_diagram(d: BratteliDiagram, unital: bool = True) -> ValidationReport:
    """Collect every invariant violation of ``d``.

    With ``unital=False`` (diagrams of ideals) the unitality equation, the
    incoming-edge requirement and the dimension-one consequence are skipped.
    """
    issues: list[Issue] = []
    n_decl = len(d.levels)
    for p, lvl in enumerate(d.levels):
        for i, n in enumerate(lvl):
            if n < 1:
                issues.append(Issue("dimension", f"{p}:{i}", f"dimension {n} < 1"))
    for p, block in enumerate(d.edges):
        for i, j, m in block:
            if m < 1:
                issues.append(Issue("multiplicity", f"{p}:{i}->{p + 1}:{j}", f"multiplicity {m} < 1"))

    # out-degree on every declared level that has an edge block
    for p in range(len(d.edges)):
        for i in range(d.num_vertices(p)):
            if not d.successors(p, i):
                issues.append(Issue("no-outgoing", f"{p}:{i}", "vertex has no outgoing edge"))

    if unital:
        # levels 1 .. n_decl, the last one being the first derived tail level
        last = n_decl + 1 if d.is_periodic else n_decl
        for p in range(1, last):
            declared = p < n_decl
            for j in range(d.num_vertices(p)):
                preds = d.predecessors(p, j)
                where = f"{p}:{j}"
                if not preds:
                    issues.append(Issue("no-incoming", where, "vertex has no incoming edge"))
                    continue
                mass = sum(m * d.dims(p - 1)[i] for i, m in preds)
                if declared:
                    dim = d.levels[p][j]
                    if dim != mass:
                        issues.append(Issue(
                            "unitality", where,
                            f"dimension {dim} != sum of multiplicity * source dimension = {mass}"))
                        continue
                else:
                    dim = mass
                if dim == 1:
                    src_dims = d.dims(p - 1)
                    if not (len(preds) == 1 and preds[0][1] == 1 and src_dims[preds[0][0]] == 1):
                        issues.append(Issue(
                            "dimension-one", where,
                            "dimension-1 vertex must have a single incoming edge of multiplicity 1 "
                            "from a dimension-1 vertex"))
    return ValidationReport(tuple(issues))


def unroll(d: BratteliDiagram, n_levels: int) -> BratteliDiagram:
    """Materialize the first ``n_levels`` levels as a truncated diagram."""
    if not d.is_periodic:
        if n_levels != len(d.levels):
            raise InputError(f"truncated diagram has depth {len(d.levels)}; cannot unroll to {n_levels}")
        return d
    if n_levels < max(d.tail_start, 1):
        raise InputError(f"cannot unroll to {n_levels} levels: the prefix already has {d.tail_start}")
    levels = tuple(d.dims(p) for p in range(n_levels))
    edges = tuple(d.edges_from(p) for p in range(n_levels - 1))
    return BratteliDiagram(levels, edges)
