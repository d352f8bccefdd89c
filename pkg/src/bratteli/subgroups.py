"""Commutator subspaces and normal-subgroup membership at a finite level.

For ``A = M_{n_1} + ... + M_{n_k}`` and the ideal ``I`` spanned by the blocks
in ``S``:

* the closed span of ``[I, I]`` is the traceless part of the ``S`` blocks;
* ``CU_I`` is ``prod_{i in S} SU(n_i)`` with the identity elsewhere;
* ``N_I`` consists of unitaries that are scalar on every block outside ``S``;
* ``Z(CU_I)`` is ``prod_{i in S, n_i >= 2}`` of the ``n_i``-th roots of unity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space, orth

from .diagram import BratteliDiagram
from .errors import CrossCheckError, InputError
from .ideals import LevelSet
from .matrices import (
    AlgebraElement,
    BlockIdeal,
    FiniteDimAlgebra,
    UnitaryElement,
    random_element,
    random_special_unitary,
    random_unitary,
    random_unitary_element,
)

RANK_CUTOFF = 1e-9


def algebra_at_level(d: BratteliDiagram, p: int, s: LevelSet | None = None
                     ) -> tuple[FiniteDimAlgebra, BlockIdeal]:
    if not d.has_level(p):
        raise InputError(f"level {p} out of range")
    A = FiniteDimAlgebra(d.dims(p))
    S = BlockIdeal.full(A) if s is None else BlockIdeal(s.at(p))
    return A, S.check(A)


# -- subspaces -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subspace:
    """Complex subspace of the vectorized algebra, stored as orthonormal columns."""

    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def equals(self, other: "Subspace", tol: float = RANK_CUTOFF) -> bool:
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        return _rank(np.hstack([self.basis, other.basis]), tol) == self.dim

    def support(self, A: FiniteDimAlgebra) -> BlockIdeal:
        """Blocks on which some vector of the subspace is nonzero."""
        out = []
        for i, (off, n) in enumerate(zip(A.offsets(), A.block_dims)):
            if self.dim and np.linalg.norm(self.basis[off:off + n * n]) > RANK_CUTOFF:
                out.append(i)
        return BlockIdeal(out)


def _rank(m: np.ndarray, tol: float = RANK_CUTOFF) -> int:
    if m.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(m, compute_uv=False) > tol))


def _span(vectors: list[np.ndarray], ambient: int, tol: float = RANK_CUTOFF) -> Subspace:
    cols = [v / np.linalg.norm(v) for v in vectors if np.linalg.norm(v) > tol]
    if not cols:
        return Subspace(np.zeros((ambient, 0), complex))
    return Subspace(orth(np.column_stack(cols), rcond=tol))


def _unit(A: FiniteDimAlgebra, block: int, r: int, c: int) -> np.ndarray:
    v = np.zeros(A.dimension, complex)
    n = A.block_dims[block]
    v[A.offsets()[block] + r * n + c] = 1.0
    return v


def traceless_basis(A: FiniteDimAlgebra, S: BlockIdeal) -> Subspace:
    """Analytic description: traceless matrices in the ``S`` blocks, zero elsewhere."""
    vecs = []
    for i in S:
        n = A.block_dims[i]
        for r in range(n):
            for c in range(n):
                if r != c:
                    vecs.append(_unit(A, i, r, c))
        for r in range(n - 1):
            vecs.append(_unit(A, i, r, r) - _unit(A, i, n - 1, n - 1))
    return _span(vecs, A.dimension)


def _generators(A: FiniteDimAlgebra, S: BlockIdeal, rng: np.random.Generator | None):
    """Generating family of ``I``: matrix units, or random elements when ``rng`` is given."""
    if rng is None:
        for i in S:
            n = A.block_dims[i]
            for r in range(n):
                for c in range(n):
                    yield A.devectorize(_unit(A, i, r, c))
    else:
        dim_i = sum(A.block_dims[i] ** 2 for i in S)
        for _ in range(2 * dim_i + 2 if dim_i else 0):
            yield random_element(A, rng, support=S)


def commutator_span(A: FiniteDimAlgebra, S: BlockIdeal, rng: np.random.Generator | None = None,
                    T: BlockIdeal | None = None) -> Subspace:
    """Numeric span of ``[x, y]`` for ``x`` from ``S`` and ``y`` from ``T`` (default ``S``)."""
    S.check(A)
    T = S if T is None else T.check(A)
    xs = list(_generators(A, S, rng))
    ys = xs if T == S else list(_generators(A, T, rng))
    if rng is None:
        pairs = itertools.product(xs, ys)
    else:
        # random families are generic, so pairing them off is enough
        pairs = zip(xs, ys[1:] + ys[:1])
    vecs = [A.vectorize(x.bracket(y)) for x, y in pairs]
    return _span(vecs, A.dimension)


def commutator_subspace(A: FiniteDimAlgebra, S: BlockIdeal, rng: np.random.Generator | None = None
                        ) -> Subspace:
    """Closure of ``[I, I]`` computed analytically and numerically; the two must agree."""
    analytic = traceless_basis(A, S.check(A))
    numeric = commutator_span(A, S, rng)
    if not analytic.equals(numeric):
        raise CrossCheckError(
            f"commutator subspace: analytic dimension {analytic.dim}, numeric {numeric.dim}")
    return analytic


def ideal_subspace(A: FiniteDimAlgebra, S: BlockIdeal) -> Subspace:
    vecs = [_unit(A, i, r, c) for i in S for r in range(A.block_dims[i]) for c in range(A.block_dims[i])]
    return _span(vecs, A.dimension)


def intersect(U: Subspace, V: Subspace, tol: float = RANK_CUTOFF) -> Subspace:
    if U.dim == 0 or V.dim == 0:
        return Subspace(np.zeros((U.ambient, 0), complex))
    coeffs = null_space(np.hstack([U.basis, -V.basis]), rcond=tol)
    if coeffs.shape[1] == 0:
        return Subspace(np.zeros((U.ambient, 0), complex))
    return Subspace(orth(U.basis @ coeffs[: U.dim], rcond=tol))


def check_liecom(A: FiniteDimAlgebra, S: BlockIdeal, rng: np.random.Generator | None = None) -> bool:
    """Whether ``span[A, A]`` meets the ideal in exactly ``span[I, I]``."""
    S.check(A)
    aa = commutator_span(A, BlockIdeal.full(A), rng)
    lhs = intersect(aa, ideal_subspace(A, S))
    rhs = commutator_span(A, S, rng)
    return lhs.equals(rhs)


def trace_kernel(A: FiniteDimAlgebra) -> Subspace:
    """Common kernel of the block-trace functionals."""
    rows = []
    for i, n in enumerate(A.block_dims):
        rows.append(sum(_unit(A, i, r, r) for r in range(n)))
    return Subspace(null_space(np.vstack(rows), rcond=RANK_CUTOFF))


def cuntz_pedersen_check(A: FiniteDimAlgebra, rng: np.random.Generator | None = None) -> bool:
    """``[A, A]`` has dimension ``sum n_i^2 - k`` and equals the kernel of all traces."""
    cs = commutator_subspace(A, BlockIdeal.full(A), rng)
    return cs.dim == A.dimension - len(A.block_dims) and cs.equals(trace_kernel(A))


# -- membership predicates ---------------------------------------------------------

def _require_unitary(u: AlgebraElement, tol: float) -> None:
    for b in u.blocks:
        n = b.shape[0]
        if np.linalg.norm(b @ b.conj().T - np.eye(n), 2) > max(tol, 1e-8):
            raise InputError("expected a unitary element")


def in_CU(A: FiniteDimAlgebra, S: BlockIdeal, u: AlgebraElement, tol: float = 1e-8) -> bool:
    """Membership in ``CU_I``: determinant one on ``S`` blocks, identity elsewhere."""
    S.check(A)
    if u.block_dims != A.block_dims:
        raise InputError("element does not belong to this algebra")
    _require_unitary(u, tol)
    for i, b in enumerate(u.blocks):
        if i in S:
            if abs(np.linalg.det(b) - 1) > tol:
                return False
        elif np.linalg.norm(b - np.eye(b.shape[0]), 2) > tol:
            return False
    return True


def in_N(A: FiniteDimAlgebra, S: BlockIdeal, u: AlgebraElement, tol: float = 1e-8) -> bool:
    """Membership in ``N_I``: the image in ``A/I`` is central, i.e. scalar on blocks outside ``S``."""
    S.check(A)
    if u.block_dims != A.block_dims:
        raise InputError("element does not belong to this algebra")
    _require_unitary(u, tol)
    for i, b in enumerate(u.blocks):
        if i in S:
            continue
        n = b.shape[0]
        if np.linalg.norm(b - np.trace(b) / n * np.eye(n), 2) > tol:
            return False
    return True


def finite_dim_characters(A: FiniteDimAlgebra, S: BlockIdeal) -> int:
    return sum(1 for i in S.check(A) if A.block_dims[i] == 1)


def perfect_block_ideals(A: FiniteDimAlgebra) -> list[BlockIdeal]:
    """Block ideals with ``Id([I, I]) = I``, cross-checked against the character count."""
    out = []
    for r in range(len(A.block_dims) + 1):
        for combo in itertools.combinations(A.blocks, r):
            S = BlockIdeal(combo)
            generated = commutator_subspace(A, S).support(A)
            perfect = generated == S
            if perfect != (finite_dim_characters(A, S) == 0):
                raise CrossCheckError(f"perfectness routes disagree on blocks {sorted(S)}")
            if perfect:
                out.append(S)
    return out


def distinguishing_witness(A: FiniteDimAlgebra, S1: BlockIdeal, S2: BlockIdeal,
                           angle: float = 0.7) -> tuple[UnitaryElement, BlockIdeal] | None:
    """Unitary in ``CU`` of one ideal but not the other.

    Returns the witness and the ideal whose ``CU`` contains it, or ``None`` when
    the ideals differ only on one-dimensional blocks.
    """
    for inside, outside in ((S1, S2), (S2, S1)):
        for i in sorted(inside.indices - outside.indices):
            n = A.block_dims[i]
            if n < 2:
                continue
            blocks = [np.eye(m, dtype=complex) for m in A.block_dims]
            diag = np.ones(n, complex)
            diag[0], diag[1] = np.exp(1j * angle), np.exp(-1j * angle)
            blocks[i] = np.diag(diag)
            return UnitaryElement(tuple(blocks)), inside
    return None


# -- centers -------------------------------------------------------------------------

@dataclass(frozen=True)
class CenterReport:
    """Centers described by root-of-unity orders per block.

    ``z_cu_ideal`` lists ``(block, n)`` for the factors ``mu_n`` of
    ``Z(CU_I)``; ``z_cu_algebra`` does the same for ``Z(CU_A)``.  ``Z(U_A)`` is
    one circle per block.
    """

    z_cu_ideal: tuple[tuple[int, int], ...]
    z_cu_algebra: tuple[tuple[int, int], ...]
    z_u_circles: int
    identity_holds: bool
    central_checked: bool
    unitaries_span: bool

    @property
    def ok(self) -> bool:
        return self.identity_holds and self.central_checked and self.unitaries_span

    @property
    def order_cu_ideal(self) -> int:
        return int(np.prod([n for _, n in self.z_cu_ideal])) if self.z_cu_ideal else 1


def _root_element(A: FiniteDimAlgebra, exps: dict[int, int]) -> UnitaryElement:
    blocks = []
    for i, n in enumerate(A.block_dims):
        k = exps.get(i, 0)
        blocks.append(np.exp(2j * np.pi * k / n) * np.eye(n))
    return UnitaryElement(tuple(blocks))


def center_report(A: FiniteDimAlgebra, S: BlockIdeal, seed: int = 0, max_elements: int = 100_000) -> CenterReport:
    """Describe ``Z(CU_I)`` and ``Z(CU_A)`` and verify ``Z(CU_I) = Z(CU_A) cap CU_I``."""
    S.check(A)
    rng = np.random.default_rng(seed)
    z_a = tuple((i, n) for i, n in enumerate(A.block_dims) if n >= 2)
    z_i = tuple((i, n) for i, n in z_a if i in S)
    if np.prod([n for _, n in z_a]) > max_elements:
        raise InputError("center too large to enumerate")

    blocks_a = [i for i, _ in z_a]
    claimed = set()
    for ks in itertools.product(*[range(n) for _, n in z_i]):
        exps = dict(zip([i for i, _ in z_i], ks))
        claimed.add(tuple(exps.get(i, 0) for i in blocks_a))
    found = set()
    for ks in itertools.product(*[range(n) for _, n in z_a]):
        if in_CU(A, S, _root_element(A, dict(zip(blocks_a, ks))), tol=1e-9):
            found.add(ks)
    identity_holds = claimed == found

    # the claimed elements commute with CU_I, and non-scalar elements of CU_I do not
    central = True
    for ks in claimed:
        z = _root_element(A, dict(zip(blocks_a, ks)))
        for _ in range(3):
            g = UnitaryElement(tuple(random_special_unitary(n, rng) if i in S else np.eye(n, dtype=complex)
                                     for i, n in enumerate(A.block_dims)))
            if z.group_commutator(g).distance(A.identity()) > 1e-9:
                central = False

    span = [A.vectorize(random_unitary_element(A, rng)) for _ in range(2 * A.dimension)]
    spans = _rank(np.column_stack(span)) == A.dimension
    return CenterReport(z_i, z_a, len(A.block_dims), identity_holds, central, spans)


# -- sandwich ------------------------------------------------------------------------

@dataclass(frozen=True)
class SandwichReport:
    trials: int
    commutator_failures: tuple[int, ...] = field(default=())
    normality_failures: tuple[int, ...] = field(default=())

    @property
    def failures(self) -> int:
        return len(self.commutator_failures) + len(self.normality_failures)

    @property
    def ok(self) -> bool:
        return self.failures == 0


def random_N_element(A: FiniteDimAlgebra, S: BlockIdeal, rng: np.random.Generator) -> UnitaryElement:
    blocks = []
    for i, n in enumerate(A.block_dims):
        if i in S:
            blocks.append(random_unitary(n, rng))
        else:
            blocks.append(np.exp(2j * np.pi * rng.random()) * np.eye(n))
    return UnitaryElement(tuple(blocks))


def random_CU_element(A: FiniteDimAlgebra, S: BlockIdeal, rng: np.random.Generator) -> UnitaryElement:
    return UnitaryElement(tuple(random_special_unitary(n, rng) if i in S else np.eye(n, dtype=complex)
                                for i, n in enumerate(A.block_dims)))


def sandwich_check(A: FiniteDimAlgebra, S: BlockIdeal, trials: int = 200, seed: int = 0,
                   tol: float = 1e-8) -> SandwichReport:
    """Commutators of ``N_I`` with ``U_A`` land in ``CU_I``, and ``CU_I`` is normal in ``U_A``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    S.check(A)
    rng = np.random.default_rng(seed)
    comm, norm = [], []
    for t in range(trials):
        u = random_N_element(A, S, rng)
        v = random_unitary_element(A, rng)
        if not in_N(A, S, u, tol) or not in_CU(A, S, u.group_commutator(v), tol):
            comm.append(t)
        w = random_CU_element(A, S, rng)
        if not in_CU(A, S, w, tol) or not in_CU(A, S, v @ w @ v.inverse(), tol):
            norm.append(t)
    return SandwichReport(trials, tuple(comm), tuple(norm))
