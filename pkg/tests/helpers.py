"""Seeded diagram generators and library-independent oracles for the tests."""

from __future__ import annotations

from functools import reduce
from math import lcm
from pathlib import Path

import numpy as np

from bratteli.diagram import BratteliDiagram, validate_diagram

CORPUS = Path(__file__).resolve().parents[1] / "src" / "bratteli" / "corpus"


# -- generators ------------------------------------------------------------------

def _random_block(rng, n_src: int, n_dst: int, max_mult: int = 2, sparse_ones=None):
    """Edges with every source and every target touched at least once."""
    edges = {}
    for i in range(n_src):
        j = int(rng.integers(n_dst))
        edges[i, j] = int(rng.integers(1, max_mult + 1))
    for j in range(n_dst):
        if not any(jj == j for _, jj in edges):
            i = int(rng.integers(n_src))
            if sparse_ones is not None and i in sparse_ones:
                i = next((k for k in range(n_src) if k not in sparse_ones), i)
            edges[i, j] = int(rng.integers(1, max_mult + 1))
    extra = int(rng.integers(0, n_src + 1))
    for _ in range(extra):
        i, j = int(rng.integers(n_src)), int(rng.integers(n_dst))
        if sparse_ones is not None and i in sparse_ones:
            continue
        edges[i, j] = edges.get((i, j), 0) + int(rng.integers(1, max_mult + 1))
    return tuple((i, j, m) for (i, j), m in sorted(edges.items()))


def block_index(d: BratteliDiagram, p: int) -> int:
    if p < len(d.edges) or not d.periodic_tail:
        return p
    s, k = d.periodic_tail
    return s + (p - s) % k


def level_index(d: BratteliDiagram, p: int) -> int:
    """Declared level with the same vertex set as level ``p``."""
    if p < len(d.levels):
        return p
    s, k = d.periodic_tail
    return s + (p - s) % k


def oracle_dims(d: BratteliDiagram, n_levels: int) -> list[list[int]]:
    """Level dimensions from the edge data alone."""
    dims = [list(d.levels[0])]
    for p in range(n_levels - 1):
        size = len(d.levels[level_index(d, p + 1)])
        nxt = [0] * size
        for i, j, m in d.edges[block_index(d, p)]:
            nxt[j] += m * dims[p][i]
        dims.append(nxt)
    return dims


def oracle_successors(d: BratteliDiagram, p: int, i: int) -> list[int]:
    return sorted({j for ii, j, _ in d.edges[block_index(d, p)] if ii == i})


def one_out_degree_ok(d: BratteliDiagram, n_levels: int) -> bool:
    """Every dimension-one vertex has at most one outgoing edge."""
    dims = oracle_dims(d, n_levels)
    for p in range(n_levels - 1):
        for i, dim in enumerate(dims[p]):
            if dim == 1 and len(oracle_successors(d, p, i)) > 1:
                return False
    return True


def random_periodic(rng: np.random.Generator, constrained: bool = False, max_vertices: int = 4,
                    max_period: int = 3, max_dim: int = 5, tries: int = 200) -> BratteliDiagram:
    for _ in range(tries):
        start = int(rng.integers(0, 2))
        period = int(rng.integers(1, max_period + 1))
        sizes = [int(rng.integers(1, max_vertices + 1)) for _ in range(start + period)]
        level0 = tuple(int(x) for x in rng.integers(1, max_dim + 1, size=sizes[0]))
        if rng.random() < 0.5:
            # favour diagrams with columns of ones
            level0 = tuple(1 if rng.random() < 0.75 else x for x in level0)
        levels = [level0]
        edges = []
        dims = list(level0)
        for p in range(start + period):
            dst = sizes[p + 1] if p + 1 < len(sizes) else sizes[start]
            ones = {i for i, x in enumerate(dims) if x == 1} if constrained else None
            block = _random_block(rng, len(dims), dst, sparse_ones=ones)
            if rng.random() < 0.5:
                block = _thin(rng, block, dims, dst)
            for _ in range(int(rng.integers(0, 3))):
                block = _plant_one(rng, block, dims, dst, constrained)
            edges.append(block)
            nxt = [0] * dst
            for i, j, m in block:
                nxt[j] += m * dims[i]
            if p + 1 < len(sizes):
                levels.append(tuple(nxt))
            dims = nxt
        d = BratteliDiagram(tuple(levels), tuple(edges), (start, period))
        if not validate_diagram(d).ok:
            continue
        horizon = start + 24 * period
        if constrained and not one_out_degree_ok(d, horizon):
            continue
        return d
    raise RuntimeError("generator failed to produce a diagram")


def _plant_one(rng, block, dims, dst, constrained):
    """Make some target the image of a single dimension-one source, with multiplicity one."""
    ones = [i for i, x in enumerate(dims) if x == 1]
    if not ones:
        return block
    i, j = ones[int(rng.integers(len(ones)))], int(rng.integers(dst))
    out = {(a, b): m for a, b, m in block if b != j and not (constrained and a == i)}
    out[i, j] = 1
    others = [a for a in range(len(dims)) if a != i and not (constrained and a in ones)]
    for a in range(len(dims)):
        if not any(aa == a for aa, _ in out):
            targets = [b for b in range(dst) if b != j]
            if not targets:
                return block
            out[a, targets[int(rng.integers(len(targets)))]] = 1
    for b in range(dst):
        if not any(bb == b for _, bb in out):
            if not others:
                return block
            out[others[int(rng.integers(len(others)))], b] = 1
    return tuple((a, b, m) for (a, b), m in sorted(out.items()))


def _thin(rng, block, dims, dst):
    """Keep a single multiplicity-one edge into some targets so dimension one survives."""
    out = dict(((i, j), m) for i, j, m in block)
    for j in range(dst):
        preds = [(i, m) for (i, jj), m in out.items() if jj == j]
        if len(preds) > 1 and rng.random() < 0.5:
            keep = preds[int(rng.integers(len(preds)))][0]
            for i, _ in preds:
                if i != keep and sum(1 for (ii, _), _m in out.items() if ii == i) > 1:
                    del out[i, j]
            if (keep, j) in out:
                out[keep, j] = 1
    return tuple((i, j, m) for (i, j), m in sorted(out.items()))


def random_truncated(rng: np.random.Generator, max_levels: int = 5, max_vertices: int = 3,
                     max_dim: int = 3) -> BratteliDiagram:
    while True:
        n = int(rng.integers(1, max_levels + 1))
        sizes = [int(rng.integers(1, max_vertices + 1)) for _ in range(n)]
        level0 = tuple(int(x) for x in rng.integers(1, max_dim + 1, size=sizes[0]))
        levels, edges, dims = [level0], [], list(level0)
        for p in range(n - 1):
            block = _random_block(rng, len(dims), sizes[p + 1])
            if rng.random() < 0.5:
                block = _thin(rng, block, dims, sizes[p + 1])
            edges.append(block)
            nxt = [0] * sizes[p + 1]
            for i, j, m in block:
                nxt[j] += m * dims[i]
            levels.append(tuple(nxt))
            dims = nxt
        d = BratteliDiagram(tuple(levels), tuple(edges), None)
        if validate_diagram(d).ok:
            return d


# -- brute-force ideal oracle (truncated diagrams) ----------------------------------

def vertex_bits(d: BratteliDiagram) -> dict[tuple[int, int], int]:
    bits, k = {}, 0
    for p, lev in enumerate(d.levels):
        for i in range(len(lev)):
            bits[p, i] = k
            k += 1
    return bits


def brute_force_ideals(d: BratteliDiagram) -> set[int]:
    """Every directed hereditary vertex subset, as bitmasks, by exhaustive search."""
    bits = vertex_bits(d)
    n = len(bits)
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    last = len(d.levels) - 1
    for (p, i), b in bits.items():
        if p == last:
            continue
        succ = reduce(lambda a, j: a | (1 << bits[p + 1, j]), oracle_successors(d, p, i), 0)
        has_v = (masks >> b) & 1 == 1
        covered = (masks & succ) == succ
        ok &= ~has_v | covered     # directed
        ok &= ~covered | has_v     # hereditary
    return {int(m) for m in masks[ok]}


def mask_of(d: BratteliDiagram, s) -> int:
    bits = vertex_bits(d)
    return sum(1 << bits[p, i] for p in range(len(d.levels)) for i in s.at(p))


def truncated_perfect(d: BratteliDiagram, mask: int) -> bool:
    """No one-dimensional block of the ideal at the deepest level."""
    bits = vertex_bits(d)
    last = len(d.levels) - 1
    return not any(mask >> bits[last, i] & 1 and dim == 1 for i, dim in enumerate(d.levels[last]))


# -- character oracle (periodic diagrams) ---------------------------------------------

def oracle_character_count(d: BratteliDiagram, s, horizon_periods: int = 6) -> int | None:
    """Count maximal dimension-one paths inside ``s`` by unrolling.

    A dimension-one vertex has one predecessor, so a path is fixed by any one
    of its deep vertices; counting deep vertices that keep a dimension-one
    continuation for many levels counts the paths.  ``None`` means the count
    kept growing.
    """
    k = lcm(d.period, s.period)
    t = max(d.tail_start, s.tail_start)
    span = 2 * k * (1 + max(len(x) for x in d.levels))
    counts = []
    for n in (t + k * horizon_periods, t + k * 2 * horizon_periods):
        dims = oracle_dims(d, n + span + 1)

        good = {i for i, dim in enumerate(dims[n + span]) if dim == 1 and i in s.at(n + span)}
        for p in range(n + span - 1, n - 1, -1):
            good = {i for i, dim in enumerate(dims[p]) if dim == 1 and i in s.at(p)
                    and any(j in good for j in oracle_successors(d, p, i))}
        counts.append(len(good))
    return counts[0] if counts[0] == counts[1] else None


def oracle_is_ideal(d: BratteliDiagram, s, n_levels: int) -> bool:
    """Directed and hereditary on the first ``n_levels`` levels."""
    for p in range(n_levels):
        for i in range(d.num_vertices(p)):
            succ = oracle_successors(d, p, i)
            inside = all(j in s.at(p + 1) for j in succ)
            if i in s.at(p) and not inside:
                return False
            if inside and i not in s.at(p):
                return False
    return True


# -- ideal-count oracle (periodic diagrams) -----------------------------------------

def oracle_ideal_count(d: BratteliDiagram) -> int:
    """Number of ideals of a periodic diagram.

    An ideal satisfies ``S_p = {v : succ(v) <= S_(p+1)}`` at every level, so
    it is a forward orbit of the one-period map ``F`` on subsets of the level
    ``start``.  Such orbits live in the eventual image of ``F``, where ``F``
    is a bijection, and each point of it extends to exactly one ideal.
    """
    start, period = d.periodic_tail
    n = len(d.levels[start])

    def step(q, subset):
        size = len(d.levels[level_index(d, q)])
        return frozenset(v for v in range(size) if set(oracle_successors(d, q, v)) <= subset)

    def F(subset):
        for q in range(start + period - 1, start - 1, -1):
            subset = step(q, subset)
        return subset

    image = {frozenset(x for x in range(n) if mask >> x & 1) for mask in range(1 << n)}
    while True:
        nxt = {F(x) for x in image}
        if nxt == image:
            return len(image)
        image = nxt
