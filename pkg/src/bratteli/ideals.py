"""Vertex sets of Bratteli diagrams and the ideal-generating closure.

Ideals of an AF algebra correspond to vertex sets that are *directed*
(closed under following edges) and *hereditary* (a vertex whose every
outgoing edge lands in the set belongs to the set).  On a periodic diagram
such sets are infinite, so a :class:`LevelSet` stores an explicit prefix of
per-level index sets followed by a repeating tail.  The tail period is always
a multiple of the diagram period and the tail starts no earlier than the
diagram's own tail; both are minimized, so equal sets compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable

from .diagram import BratteliDiagram, VertexId, empty_diagram, validate_diagram
from .errors import InputError, StabilizationError

DEFAULT_MAX_PERIODS = 4096


@dataclass(frozen=True, eq=False)
class LevelSet:
    prefix: tuple[frozenset[int], ...]
    tail: tuple[frozenset[int], ...] = ()

    # normalized representations are canonical, so equality is structural
    def __eq__(self, other):
        if not isinstance(other, LevelSet):
            return NotImplemented
        return (self.prefix, self.tail) == (other.prefix, other.tail)

    def __hash__(self):
        return hash((self.prefix, self.tail))

    @property
    def tail_start(self) -> int:
        return len(self.prefix)

    @property
    def period(self) -> int:
        return len(self.tail)

    def at(self, p: int) -> frozenset[int]:
        if p < len(self.prefix):
            return self.prefix[p]
        if not self.tail:
            return frozenset()
        return self.tail[(p - len(self.prefix)) % len(self.tail)]

    def __contains__(self, v) -> bool:
        level, index = v
        return index in self.at(level)

    def levels_upto(self, n: int) -> tuple[frozenset[int], ...]:
        return tuple(self.at(p) for p in range(n))

    def is_empty(self) -> bool:
        return not any(self.prefix) and not any(self.tail)

    def window(self) -> int:
        return self.tail_start + self.period

    def issubset(self, other: LevelSet) -> bool:
        n = common_window(self, other)
        return all(self.at(p) <= other.at(p) for p in range(n))

    def vertices(self, upto: int | None = None) -> list[VertexId]:
        n = self.window() if upto is None else upto
        return [VertexId(p, i) for p in range(n) for i in sorted(self.at(p))]

    def describe(self) -> str:
        def fmt(s):
            return "{" + ",".join(str(i) for i in sorted(s)) + "}"
        head = " ".join(fmt(s) for s in self.prefix)
        if not self.tail:
            return head or "{}"
        cyc = " ".join(fmt(s) for s in self.tail)
        return f"{head} ({cyc})* from level {self.tail_start}".strip()


@dataclass(frozen=True, eq=False)
class IdealSet(LevelSet):
    """A directed and hereditary :class:`LevelSet`."""


def common_window(*sets: LevelSet) -> int:
    start = max(s.tail_start for s in sets)
    period = lcm(*[max(s.period, 1) for s in sets])
    return start + period


def canonical_key(d: BratteliDiagram, s: LevelSet, n: int) -> tuple[int, ...]:
    return tuple(int(i in s.at(p)) for p in range(n) for i in range(d.num_vertices(p)))


def _normalize(d: BratteliDiagram, prefix, tail, cls=LevelSet):
    prefix = [frozenset(x) for x in prefix]
    tail = [frozenset(x) for x in tail]
    if not d.is_periodic:
        return cls(tuple(prefix), ())
    k = d.period
    # shortest period that is a multiple of the diagram period
    n = len(tail)
    for cand in range(k, n + 1, k):
        if n % cand == 0 and all(tail[i] == tail[i % cand] for i in range(n)):
            tail = tail[:cand]
            break
    while len(prefix) > d.tail_start and prefix[-1] == tail[-1]:
        tail = [prefix.pop()] + tail[:-1]
    return cls(tuple(prefix), tuple(tail))


def check_shape(d: BratteliDiagram, s: LevelSet) -> None:
    if d.is_periodic:
        if not s.tail or s.period % d.period or s.tail_start < d.tail_start:
            raise InputError(
                f"vertex set tail (start {s.tail_start}, period {s.period}) does not align with "
                f"diagram tail (start {d.tail_start}, period {d.period})")
    else:
        if s.tail or s.tail_start != len(d.levels):
            raise InputError(f"vertex set must list exactly {len(d.levels)} levels")
    for p in range(s.window()):
        n = d.num_vertices(p)
        bad = [i for i in s.at(p) if not 0 <= i < n]
        if bad:
            raise InputError(f"vertex {p}:{bad[0]} does not exist")


def level_set(d: BratteliDiagram, vertices: Iterable, cls=LevelSet) -> LevelSet:
    """Build a vertex set from finitely many vertices, or pass a :class:`LevelSet` through."""
    if isinstance(vertices, LevelSet):
        check_shape(d, vertices)
        return vertices
    vs = [d.check_vertex(v) for v in vertices]
    top = max((v.level for v in vs), default=-1)
    n = max(top + 1, d.tail_start)
    prefix = [set() for _ in range(n)]
    for v in vs:
        prefix[v.level].add(v.index)
    tail = [()] * d.period
    return _normalize(d, prefix, tail, cls)


def empty_set(d: BratteliDiagram) -> IdealSet:
    return level_set(d, (), IdealSet)


def full_set(d: BratteliDiagram) -> IdealSet:
    n = d.tail_start + d.period
    sets = [range(d.num_vertices(p)) for p in range(n)]
    return _normalize(d, sets[: d.tail_start], sets[d.tail_start:], IdealSet)


def is_full(d: BratteliDiagram, s: LevelSet) -> bool:
    n = common_window(s, full_set(d)) if d.is_periodic else len(d.levels)
    return all(len(s.at(p)) == d.num_vertices(p) for p in range(n))


def is_ideal_set(d: BratteliDiagram, s) -> bool:
    """True iff ``s`` is directed and hereditary.

    Vertices without outgoing edges (the last level of a truncation) are
    exempt from the hereditary rule.
    """
    s = level_set(d, s)
    n = s.window() if d.is_periodic else max(len(d.levels) - 1, 0)
    for p in range(n):
        here, nxt = s.at(p), s.at(p + 1)
        for i in range(d.num_vertices(p)):
            targets = {j for j, _ in d.successors(p, i)}
            inside = targets <= nxt
            if i in here and not inside:
                return False
            if targets and inside and i not in here:
                return False
    return True


def _forward(d: BratteliDiagram, prev: frozenset[int], p: int) -> set[int]:
    """Successors at level ``p + 1`` of the vertices ``prev`` at level ``p``."""
    out = set()
    for i in prev:
        out.update(j for j, _ in d.successors(p, i))
    return out


def _backward_step(d: BratteliDiagram, p: int, forced: frozenset[int], nxt: frozenset[int]) -> frozenset[int]:
    keep = set(forced)
    for i in range(d.num_vertices(p)):
        succ = d.successors(p, i)
        if succ and all(j in nxt for j, _ in succ):
            keep.add(i)
    return frozenset(keep)


def closure(d: BratteliDiagram, seed=(), max_periods: int = DEFAULT_MAX_PERIODS) -> IdealSet:
    """Smallest directed hereditary set containing ``seed`` (least fixed point).

    A vertex belongs to the closure iff, at some finite depth, every vertex
    reachable from it lies in the forward closure of the seed.  On periodic
    diagrams the forward closure is eventually periodic; once a repeat is
    found the hereditary rule is solved as an attractor on the finite cyclic
    quotient of the tail, and the prefix is filled in by backward induction.
    """
    seed = level_set(d, seed)
    if d.is_empty:
        return IdealSet((), ())

    if not d.is_periodic:
        n = len(d.levels)
        fwd = [frozenset(seed.at(0))]
        for p in range(1, n):
            fwd.append(frozenset(seed.at(p) | _forward(d, fwd[-1], p - 1)))
        out = [fwd[-1]]
        for p in range(n - 2, -1, -1):
            out.append(_backward_step(d, p, fwd[p], out[-1]))
        return IdealSet(tuple(reversed(out)), ())

    t0, step = seed.tail_start, seed.period
    fwd: list[frozenset[int]] = []
    seen: dict[frozenset[int], int] = {}
    p = 0
    while True:
        cur = frozenset(seed.at(p) | (_forward(d, fwd[-1], p - 1) if p else set()))
        fwd.append(cur)
        if p >= t0 and (p - t0) % step == 0:
            j = (p - t0) // step
            if cur in seen:
                tf = t0 + seen[cur] * step
                kf = (j - seen[cur]) * step
                break
            if j > max_periods:
                raise StabilizationError(f"forward closure did not become periodic within {max_periods} periods")
            seen[cur] = j
        p += 1

    # attractor of the forward set on the cyclic window tf .. tf+kf-1
    def wrap(q):
        return tf if q == tf + kf else q

    members = {(q, i) for q in range(tf, tf + kf) for i in fwd[q]}
    pending: dict[tuple[int, int], int] = {}
    parents: dict[tuple[int, int], list] = {}
    for q in range(tf, tf + kf):
        for i in range(d.num_vertices(q)):
            succ = [(wrap(q + 1), j) for j, _ in d.successors(q, i)]
            pending[q, i] = len(succ)
            for t in succ:
                parents.setdefault(t, []).append((q, i))
    work = list(members)
    while work:
        t = work.pop()
        for u in parents.get(t, ()):
            if u in members:
                continue
            pending[u] -= 1
            if pending[u] == 0:
                members.add(u)
                work.append(u)
    tail = [frozenset(i for (q, i) in members if q == r) for r in range(tf, tf + kf)]

    prefix = []
    nxt = tail[0]
    for q in range(tf - 1, -1, -1):
        nxt = _backward_step(d, q, fwd[q], nxt)
        prefix.append(nxt)
    return _normalize(d, list(reversed(prefix)), tail, IdealSet)


def as_ideal(d: BratteliDiagram, s) -> IdealSet:
    """Validate that ``s`` is directed and hereditary and return it as an :class:`IdealSet`."""
    s = level_set(d, s)
    if not is_ideal_set(d, s):
        raise InputError("vertex set is not directed and hereditary")
    s = _normalize(d, s.prefix, s.tail, IdealSet)
    return s


def join(d: BratteliDiagram, a: LevelSet, b: LevelSet) -> IdealSet:
    """Ideal generated by ``a`` and ``b`` (closure of the union)."""
    return closure(d, union(d, a, b))


def union(d: BratteliDiagram, a: LevelSet, b: LevelSet) -> LevelSet:
    return _pointwise(d, a, b, frozenset.union)


def meet(d: BratteliDiagram, a: LevelSet, b: LevelSet) -> LevelSet:
    cls = IdealSet if isinstance(a, IdealSet) and isinstance(b, IdealSet) else LevelSet
    return _pointwise(d, a, b, frozenset.intersection, cls)


def _pointwise(d, a, b, op, cls=LevelSet):
    if not d.is_periodic:
        return cls(tuple(op(a.at(p), b.at(p)) for p in range(len(d.levels))), ())
    start = max(a.tail_start, b.tail_start)
    n = common_window(a, b)
    sets = [op(a.at(p), b.at(p)) for p in range(n)]
    return _normalize(d, sets[:start], sets[start:], cls)


def _subdiagram(d: BratteliDiagram, s: LevelSet, keep_members: bool) -> BratteliDiagram:
    if d.is_periodic:
        start, period = s.tail_start, s.period
        n = start + period
    else:
        start, period = None, None
        n = len(d.levels)

    kept = []
    for p in range(n + (1 if d.is_periodic else 0)):
        members = s.at(p)
        idx = [i for i in range(d.num_vertices(p)) if (i in members) == keep_members]
        kept.append(idx)
    relabel = [{old: new for new, old in enumerate(idx)} for idx in kept]
    if d.is_periodic:
        relabel[n] = relabel[start]

    levels = [tuple(d.dims(p)[i] for i in kept[p]) for p in range(n)]
    edges = []
    for p in range(n if d.is_periodic else n - 1):
        block = [(relabel[p][i], relabel[p + 1][j], m)
                 for i, j, m in d.edges_from(p)
                 if i in relabel[p] and j in relabel[p + 1]]
        edges.append(tuple(block))
    tail = (start, period) if d.is_periodic else None
    sizes = None
    if keep_members and d.is_periodic:
        # blocks of an ideal also receive mass from outside it, so sizes come from d
        def sizes(p):
            return [x for i, x in enumerate(d.dims(p)) if i in s.at(p)]
    return BratteliDiagram(tuple(levels), tuple(edges), tail, block_sizes=sizes)


def quotient_diagram(d: BratteliDiagram, s) -> BratteliDiagram:
    """Diagram of ``A/I`` on the vertices outside ``s``, renumbered in order."""
    s = as_ideal(d, s)
    if is_full(d, s):
        return empty_diagram()
    q = _subdiagram(d, s, keep_members=False)
    report = validate_diagram(q)
    # the complement of a directed hereditary set is again a unital diagram
    assert report.ok, report
    return q


def restrict_diagram(d: BratteliDiagram, s) -> BratteliDiagram:
    """Diagram of the (non-unital) ideal on the vertices of ``s``.

    Levels keep their original numbering, so leading levels may be empty and
    vertices may lack incoming edges.
    """
    s = as_ideal(d, s)
    if s.is_empty():
        return empty_diagram()
    return _subdiagram(d, s, keep_members=True)
