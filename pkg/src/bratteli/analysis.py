"""Characters, perfect ideals and the normal-subgroup classification.

A character of an ideal given by a vertex set ``S`` is the same thing as an
infinite path of dimension-one vertices inside ``S``: each dimension-one
block receives exactly one copy of exactly one dimension-one block from the
previous level, so compatible sequences of one-dimensional representations
are exactly such paths.  An ideal is perfect iff it has no character.

Three routes to perfectness are computed and compared:

* the character oracle: count infinite dimension-one paths by cycle
  detection on the periodic quotient of the tail (ground truth);
* the closure criterion: ``S`` equals the ideal generated by its vertices of
  dimension at least two;
* the strict path criterion: only paths whose vertices each have a single
  outgoing arrow in the whole diagram count.  It agrees with the other two
  whenever dimension-one vertices have out-degree one, and is reported as a
  divergence when it does not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

import networkx as nx

from .diagram import BratteliDiagram, VertexId
from .errors import CharactersUndecidable, CrossCheckError, StabilizationError
from .ideals import (
    DEFAULT_MAX_PERIODS,
    IdealSet,
    LevelSet,
    _normalize,
    as_ideal,
    canonical_key,
    closure,
    empty_set,
    full_set,
    is_full,
    join,
)

DEFAULT_CAP = 1024


# -- dimension-one profile ----------------------------------------------------

@dataclass(frozen=True)
class _Profile:
    """Dimension-one vertex sets, periodic from ``start`` with ``period``."""

    sets: tuple[frozenset[int], ...]
    start: int
    period: int

    def at(self, p: int) -> frozenset[int]:
        if p < len(self.sets):
            return self.sets[p]
        return self.sets[self.start + (p - self.start) % self.period]


def _dim_one_profile(d: BratteliDiagram, max_periods: int = DEFAULT_MAX_PERIODS) -> _Profile:
    # On a validated diagram d(p+1, j) = 1 exactly when j has one incoming
    # edge, of multiplicity one, from a dimension-one vertex.
    sets = [frozenset(i for i, n in enumerate(d.dims(0)) if n == 1)]
    start, k = d.tail_start, d.period
    seen: dict[frozenset[int], int] = {}
    p = 0
    while True:
        if p >= start and (p - start) % k == 0:
            j = (p - start) // k
            if sets[p] in seen:
                t = start + seen[sets[p]] * k
                return _Profile(tuple(sets[: p]), t, (j - seen[sets[p]]) * k)
            if j > max_periods:
                raise StabilizationError("dimension-one pattern did not become periodic")
            seen[sets[p]] = j
        nxt = set()
        for jdx in range(d.num_vertices(p + 1)):
            preds = d.predecessors(p + 1, jdx)
            if len(preds) == 1 and preds[0][1] == 1 and preds[0][0] in sets[p]:
                nxt.add(jdx)
        sets.append(frozenset(nxt))
        p += 1


def _require_periodic(d: BratteliDiagram) -> None:
    if not d.is_periodic:
        raise CharactersUndecidable(
            "characters undecidable on truncation; supply a periodic tail or use "
            "finite_dim_characters on a level")


def high_part(d: BratteliDiagram, s: LevelSet) -> LevelSet:
    """Vertices of ``s`` whose blocks have dimension at least two."""
    if not d.is_periodic:
        return LevelSet(tuple(frozenset(i for i in s.at(p) if d.dims(p)[i] >= 2)
                              for p in range(len(d.levels))), ())
    prof = _dim_one_profile(d)
    start = max(prof.start, s.tail_start)
    n = start + lcm(prof.period, s.period)
    sets = [s.at(p) - prof.at(p) for p in range(n)]
    return _normalize(d, sets[:start], sets[start:])


# -- characters -----------------------------------------------------------------

@dataclass(frozen=True)
class CharacterPath:
    """Maximal infinite path of dimension-one vertices.

    The path starts at ``start``, visits ``prefix`` on the levels before the
    periodic part, then repeats ``cycle`` forever from level ``cycle_start``.
    ``single_arrow`` records whether every vertex on it has exactly one
    outgoing arrow in the diagram.
    """

    start: VertexId
    prefix: tuple[int, ...]
    cycle_start: int
    cycle: tuple[int, ...]
    single_arrow: bool

    def index_at(self, p: int) -> int:
        if p < self.start.level:
            raise ValueError(f"path starts at level {self.start.level}")
        if p < self.cycle_start:
            return self.prefix[p - self.start.level]
        return self.cycle[(p - self.cycle_start) % len(self.cycle)]

    def describe(self) -> str:
        head = " ".join(map(str, self.prefix))
        cyc = " ".join(map(str, self.cycle))
        return f"from {self.start}: {head} ({cyc})* from level {self.cycle_start}".replace(":  (", ": (")


@dataclass(frozen=True)
class CharacterReport:
    count: int | None
    witnesses: tuple[CharacterPath, ...] = ()
    cycles: tuple[tuple[VertexId, ...], ...] = ()

    @property
    def infinite(self) -> bool:
        return self.count is None

    @property
    def count_label(self) -> str:
        return "infinite" if self.count is None else str(self.count)


def characters(d: BratteliDiagram, s=None) -> CharacterReport:
    """Enumerate the maximal infinite dimension-one paths inside ``s`` (default: all of ``d``)."""
    _require_periodic(d)
    s = full_set(d) if s is None else as_ideal(d, s)
    prof = _dim_one_profile(d)
    t = max(prof.start, s.tail_start)
    k = lcm(prof.period, s.period)

    def ones(p):
        return prof.at(p) & s.at(p)

    g = nx.DiGraph()
    for q in range(t, t + k):
        for i in ones(q):
            g.add_node((q, i))
    for q in range(t, t + k):
        r = q + 1 if q + 1 < t + k else t
        for i in ones(q):
            for j, _ in d.successors(q, i):
                if j in ones(r):
                    g.add_edge((q, i), (r, j))

    cyclic = [c for c in nx.strongly_connected_components(g)
              if len(c) > 1 or any(g.has_edge(v, v) for v in c)]
    cond = nx.condensation(g, scc=[set(c) for c in nx.strongly_connected_components(g)])
    mapping = cond.graph["mapping"]
    cyc_nodes = {mapping[next(iter(c))] for c in cyclic}
    branching = any(g.subgraph(c).number_of_edges() > len(c) for c in cyclic)
    feeds = any(nx.descendants(cond, a) & cyc_nodes for a in cyc_nodes)
    if branching or feeds:
        gens = tuple(tuple(VertexId(*v) for v in sorted(c)) for c in sorted(cyclic, key=min))
        return CharacterReport(None, (), gens)

    on_cycle = set().union(*cyclic) if cyclic else set()
    witnesses = []
    for i in sorted(i for (q, i) in on_cycle if q == t):
        cycle = [i]
        q, cur = t, i
        while True:
            q, cur = next(v for v in g.successors((q, cur)) if v in on_cycle)
            if q == t and cur == i:
                break
            cycle.append(cur)
        back = []
        p, cur = t, i
        while p > 0:
            preds = d.predecessors(p, cur)
            if len(preds) != 1 or preds[0][0] not in ones(p - 1):
                break
            p, cur = p - 1, preds[0][0]
            back.append(cur)
        back.reverse()
        start = VertexId(p, cur)
        single = all(d.out_multiplicity(start.level + n, v) == 1 for n, v in enumerate(back))
        single = single and all(d.out_multiplicity(t + n, v) == 1 for n, v in enumerate(cycle))
        witnesses.append(CharacterPath(start, tuple(back), t, tuple(cycle), single))
    return CharacterReport(len(witnesses), tuple(witnesses))


# -- perfectness ------------------------------------------------------------------

@dataclass(frozen=True)
class PerfectnessVerdict:
    """Perfectness of one ideal by every available route.

    ``path_criterion`` reads "no maximal infinite path of 1s" literally and
    is computed by pruning the periodic quotient to its infinite-walk core.
    ``strict_path_criterion`` additionally requires every vertex of such a
    path to have a single outgoing arrow, as the classical proof assumes.
    """

    character_oracle: bool
    closure_criterion: bool
    path_criterion: bool
    strict_path_criterion: bool
    report: CharacterReport

    @property
    def perfect(self) -> bool:
        return self.character_oracle

    @property
    def consistent(self) -> bool:
        return self.character_oracle == self.closure_criterion == self.path_criterion

    @property
    def divergent(self) -> bool:
        """The single-arrow reading disagrees with the character count."""
        return self.strict_path_criterion != self.character_oracle


def _has_infinite_one_path(d: BratteliDiagram, s: LevelSet) -> bool:
    prof = _dim_one_profile(d)
    t = max(prof.start, s.tail_start)
    k = lcm(prof.period, s.period)
    alive = {(q, i) for q in range(t, t + k) for i in prof.at(q) & s.at(q)}
    changed = True
    while changed:
        changed = False
        for q, i in list(alive):
            r = q + 1 if q + 1 < t + k else t
            if not any((r, j) in alive for j, _ in d.successors(q, i)):
                alive.discard((q, i))
                changed = True
    return bool(alive)


def perfectness_check(d: BratteliDiagram, s=None) -> PerfectnessVerdict:
    _require_periodic(d)
    s = full_set(d) if s is None else as_ideal(d, s)
    report = characters(d, s)
    by_characters = report.count == 0
    by_closure = closure(d, high_part(d, s)) == s
    by_paths = not _has_infinite_one_path(d, s)
    if report.infinite:
        strict = False
    else:
        strict = not any(w.single_arrow for w in report.witnesses)
    return PerfectnessVerdict(by_characters, by_closure, by_paths, strict, report)


def is_perfect(d: BratteliDiagram, s=None) -> bool:
    """True iff the ideal of ``s`` has no character.

    Raises :class:`CrossCheckError` if the closure or path criterion disagrees
    with the character count; all three are equivalent on every valid diagram.
    """
    v = perfectness_check(d, s)
    if not v.consistent:
        raise CrossCheckError(
            f"character count {v.report.count_label} but closure criterion says "
            f"{v.closure_criterion} and path criterion says {v.path_criterion}")
    return v.perfect


def largest_perfect(d: BratteliDiagram, s=None) -> IdealSet:
    """Biggest perfect ideal inside ``s``: the ideal generated by its blocks of size >= 2.

    On a truncated diagram perfectness is read at the deepest level, where
    the ideal is a finite-dimensional algebra.
    """
    s = full_set(d) if s is None else as_ideal(d, s)
    result = closure(d, high_part(d, s))
    if not result.issubset(s):
        raise CrossCheckError("generated ideal escapes the original set")
    if d.is_periodic:
        if not is_perfect(d, result):
            raise CrossCheckError("ideal generated by blocks of size >= 2 has a character")
    elif d.levels:
        last = len(d.levels) - 1
        if any(d.dims(last)[i] == 1 for i in result.at(last)):
            raise CrossCheckError("ideal generated by blocks of size >= 2 has a character")
    return result


# -- lattice enumeration -------------------------------------------------------------

@dataclass(frozen=True)
class IdealLattice:
    ideals: tuple[IdealSet, ...]
    complete: bool
    capped: bool
    max_seed_level: int
    cap: int
    window: int = field(default=0)

    def __len__(self) -> int:
        return len(self.ideals)

    def __iter__(self):
        return iter(self.ideals)

    def __getitem__(self, i):
        return self.ideals[i]


def default_seed_level(d: BratteliDiagram) -> int:
    if d.is_periodic:
        return d.tail_start + d.period
    return max(len(d.levels) - 1, 0)


def _generate(d: BratteliDiagram, max_seed_level: int, cap: int):
    bottom, top = empty_set(d), full_set(d)
    principals = []
    for p in range(max_seed_level + 1):
        if not d.has_level(p):
            break
        for v in d.vertices(p):
            c = closure(d, [v])
            if c not in principals:
                principals.append(c)
    found = {bottom: None, top: None}
    queue = [bottom]
    capped = False
    while queue and not capped:
        ideal = queue.pop(0)
        for gen in principals:
            if gen.issubset(ideal):
                continue
            new = join(d, ideal, gen)
            if new not in found:
                if len(found) >= cap:
                    capped = True
                    break
                found[new] = None
                queue.append(new)
    return set(found), capped


def canonical_order(d: BratteliDiagram, ideals) -> tuple[tuple[IdealSet, ...], int]:
    ideals = list(ideals)
    if d.is_periodic:
        start = max(s.tail_start for s in ideals)
        n = start + lcm(*[s.period for s in ideals])
    else:
        n = len(d.levels)
    return tuple(sorted(ideals, key=lambda s: canonical_key(d, s, n))), n


def enumerate_ideals(d: BratteliDiagram, max_seed_level: int | None = None,
                     cap: int = DEFAULT_CAP) -> IdealLattice:
    """All ideals generated by vertices at levels ``<= max_seed_level``.

    On a periodic diagram the result is marked complete only when the seeds
    reach the periodic part and seeding one more period deeper produces no
    new ideal.
    """
    if max_seed_level is None:
        max_seed_level = default_seed_level(d)
    if max_seed_level < 0 or cap < 2:
        raise ValueError("max_seed_level must be >= 0 and cap >= 2")
    if d.is_empty:
        return IdealLattice((IdealSet((), ()),), True, False, max_seed_level, cap)
    found, capped = _generate(d, max_seed_level, cap)
    if d.is_periodic:
        deeper, capped2 = _generate(d, max_seed_level + d.period, cap)
        complete = (not capped and not capped2 and deeper == found
                    and max_seed_level >= d.tail_start)
    else:
        complete = not capped and max_seed_level >= len(d.levels) - 1
    ordered, n = canonical_order(d, found)
    return IdealLattice(ordered, complete, capped, max_seed_level, cap, n)


# -- normal subgroups --------------------------------------------------------------

@dataclass(frozen=True)
class NormalSubgroupDescriptor:
    ideal: IdealSet
    label: str
    sandwich_note: str


@dataclass(frozen=True)
class NormalSubgroups:
    descriptors: tuple[NormalSubgroupDescriptor, ...]
    complete: bool
    lattice: IdealLattice

    def __len__(self) -> int:
        return len(self.descriptors)

    def __iter__(self):
        return iter(self.descriptors)


def normal_subgroups_of_VA(d: BratteliDiagram, max_seed_level: int | None = None,
                           cap: int = DEFAULT_CAP) -> NormalSubgroups:
    """Closed normal subgroups of ``V_A``, one per perfect ideal ``I`` (as ``V_I``).

    The label ``full`` goes to the largest perfect ideal of ``A``, whose
    subgroup is all of ``V_A``.
    """
    _require_periodic(d)
    lattice = enumerate_ideals(d, max_seed_level, cap)
    top = largest_perfect(d)
    out = []
    for ideal in lattice:
        if not is_perfect(d, ideal):
            continue
        if ideal.is_empty():
            label = "trivial"
        elif ideal == top:
            label = "full"
        else:
            label = "proper"
        out.append(NormalSubgroupDescriptor(
            ideal, label, "V_I <= H <= ker(P_I) collapses to H = V_I for AF algebras"))
    return NormalSubgroups(tuple(out), lattice.complete, lattice)


@dataclass(frozen=True)
class SimplicityReport:
    holds: bool
    conclusive: bool
    perfect_ideals: tuple[IdealSet, ...]
    commutator_ideal: IdealSet

    @property
    def message(self) -> str:
        verdict = "holds" if self.holds else "fails"
        lines = [f"condition (2) {verdict}: {len(self.perfect_ideals)} perfect ideal(s) found, "
                 f"Id([A,A]) = {self.commutator_ideal.describe()}"]
        if self.holds and self.commutator_ideal.is_empty():
            lines.append("Id([A,A]) = 0, so V_A is the trivial group")
        elif self.holds:
            lines.append("V_A and CU_A/Z(CU_A) are topologically simple" if self.conclusive else
                         "simplicity signature holds on the enumerated part only")
        else:
            lines.append("V_A and CU_A/Z(CU_A) are not topologically simple")
        if not self.conclusive:
            lines.append("warning: enumeration incomplete; verdict is not conclusive")
        return "\n".join(lines)


def simplicity_report(d: BratteliDiagram, max_seed_level: int | None = None,
                      cap: int = DEFAULT_CAP) -> SimplicityReport:
    """Check that the only perfect ideals are 0 and Id([A,A])."""
    subgroups = normal_subgroups_of_VA(d, max_seed_level, cap)
    top = largest_perfect(d)
    allowed = {empty_set(d), top}
    perfect = tuple(x.ideal for x in subgroups)
    holds = set(perfect) <= allowed
    # a failure is conclusive even on a partial lattice
    conclusive = subgroups.complete or not holds
    return SimplicityReport(holds, conclusive, perfect, top)


__all__ = [
    "CharacterPath", "CharacterReport", "IdealLattice", "NormalSubgroupDescriptor",
    "NormalSubgroups", "PerfectnessVerdict", "SimplicityReport", "characters",
    "enumerate_ideals", "high_part", "is_full", "is_perfect", "largest_perfect",
    "normal_subgroups_of_VA", "perfectness_check", "simplicity_report",
]
