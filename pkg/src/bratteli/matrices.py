"""Finite-dimensional C*-algebras as direct sums of full matrix blocks.

Elements are stored block by block.  The norm is the C*-norm of the direct
sum: the largest singular value over all blocks.  Exponentials and
logarithms go through the spectral theorem (``eigh`` for Hermitian blocks,
complex Schur form for unitary ones), never through power series.

Every unitary group here is connected (``U(n)`` is), so the connected
component of the identity is the whole unitary group of the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import schur

from .errors import BranchError, InputError

SELF_ADJOINT_TOL = 1e-12
UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class FiniteDimAlgebra:
    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.block_dims)
        if any(n < 1 for n in dims) or not dims:
            raise InputError(f"block sizes must be positive, got {dims}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def dimension(self) -> int:
        return sum(n * n for n in self.block_dims)

    @property
    def blocks(self) -> range:
        return range(len(self.block_dims))

    def offsets(self) -> list[int]:
        out, pos = [], 0
        for n in self.block_dims:
            out.append(pos)
            pos += n * n
        return out

    def identity(self) -> "UnitaryElement":
        return UnitaryElement.from_blocks([np.eye(n, dtype=complex) for n in self.block_dims])

    def zero(self, self_adjoint: bool = True) -> "AlgebraElement":
        return AlgebraElement.from_blocks([np.zeros((n, n), complex) for n in self.block_dims],
                                          self_adjoint=self_adjoint)

    def vectorize(self, x: "AlgebraElement") -> np.ndarray:
        return np.concatenate([b.ravel() for b in x.blocks])

    def devectorize(self, v: np.ndarray, self_adjoint: bool = False) -> "AlgebraElement":
        out = []
        for off, n in zip(self.offsets(), self.block_dims):
            out.append(v[off:off + n * n].reshape(n, n))
        return AlgebraElement.from_blocks(out, self_adjoint=self_adjoint)


@dataclass(frozen=True)
class BlockIdeal:
    """Ideal of a finite-dimensional algebra: the blocks it contains."""

    indices: frozenset[int]

    def __init__(self, indices: Iterable[int] = ()):
        object.__setattr__(self, "indices", frozenset(int(i) for i in indices))

    def check(self, A: FiniteDimAlgebra) -> "BlockIdeal":
        bad = [i for i in self.indices if not 0 <= i < len(A.block_dims)]
        if bad:
            raise InputError(f"block {bad[0]} out of range for {A.block_dims}")
        return self

    def __contains__(self, i) -> bool:
        return i in self.indices

    def __iter__(self):
        return iter(sorted(self.indices))

    def __len__(self) -> int:
        return len(self.indices)

    @classmethod
    def full(cls, A: FiniteDimAlgebra) -> "BlockIdeal":
        return cls(range(len(A.block_dims)))


def _is_hermitian(b: np.ndarray, tol: float) -> bool:
    return np.linalg.norm(b - b.conj().T, 2) <= tol if b.size else True


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    blocks: tuple[np.ndarray, ...]
    self_adjoint: bool = False

    @classmethod
    def from_blocks(cls, blocks: Sequence, self_adjoint: bool = False, **kw):
        arrs = []
        for b in blocks:
            b = np.array(b, dtype=complex)
            if b.ndim != 2 or b.shape[0] != b.shape[1]:
                raise InputError(f"blocks must be square matrices, got shape {b.shape}")
            arrs.append(b)
        return cls(tuple(arrs), self_adjoint, **kw)

    def __post_init__(self):
        if self.self_adjoint and not all(_is_hermitian(b, SELF_ADJOINT_TOL) for b in self.blocks):
            raise InputError("element flagged self-adjoint is not Hermitian")

    @property
    def block_dims(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    @property
    def algebra(self) -> FiniteDimAlgebra:
        return FiniteDimAlgebra(self.block_dims)

    def norm(self) -> float:
        return max((np.linalg.norm(b, 2) for b in self.blocks if b.size), default=0.0)

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(tuple(b.conj().T for b in self.blocks), self.self_adjoint)

    def _combine(self, other, op):
        if self.block_dims != other.block_dims:
            raise InputError(f"block shapes differ: {self.block_dims} vs {other.block_dims}")
        return tuple(op(x, y) for x, y in zip(self.blocks, other.blocks))

    def __add__(self, other):
        return AlgebraElement(self._combine(other, np.add), self.self_adjoint and other.self_adjoint)

    def __sub__(self, other):
        return AlgebraElement(self._combine(other, np.subtract), self.self_adjoint and other.self_adjoint)

    def __matmul__(self, other):
        return AlgebraElement(self._combine(other, np.matmul))

    def scale(self, c) -> "AlgebraElement":
        sa = self.self_adjoint and np.isreal(c)
        return AlgebraElement(tuple(c * b for b in self.blocks), bool(sa))

    def __neg__(self):
        return self.scale(-1.0)

    def bracket(self, other) -> "AlgebraElement":
        """``[x, y] = xy - yx``."""
        return AlgebraElement(self._combine(other, lambda x, y: x @ y - y @ x))

    def distance(self, other) -> float:
        return (self - other).norm()

    def supported_in(self, S: BlockIdeal, tol: float = 0.0) -> bool:
        return all(np.linalg.norm(b) <= tol for i, b in enumerate(self.blocks) if i not in S)


@dataclass(frozen=True, eq=False)
class UnitaryElement(AlgebraElement):
    tol: float = UNITARY_TOL

    def __post_init__(self):
        for b in self.blocks:
            n = b.shape[0]
            if n and np.linalg.norm(b @ b.conj().T - np.eye(n), 2) > self.tol:
                raise InputError("element is not unitary within tolerance")

    def __matmul__(self, other):
        if isinstance(other, UnitaryElement):
            return UnitaryElement(self._combine(other, np.matmul), tol=max(self.tol, other.tol))
        return super().__matmul__(other)

    def inverse(self) -> "UnitaryElement":
        return UnitaryElement(tuple(b.conj().T for b in self.blocks), tol=self.tol)

    def power(self, k: int) -> "UnitaryElement":
        return UnitaryElement(tuple(np.linalg.matrix_power(b, k) for b in self.blocks), tol=self.tol * max(k, 1))

    def group_commutator(self, other: "UnitaryElement") -> "UnitaryElement":
        """``(u, v) = u v u* v*``."""
        return self @ other @ self.inverse() @ other.inverse()

    def determinants(self) -> list[complex]:
        return [complex(np.linalg.det(b)) for b in self.blocks]


def require_self_adjoint(a: AlgebraElement) -> None:
    if not a.self_adjoint and not all(_is_hermitian(b, SELF_ADJOINT_TOL) for b in a.blocks):
        raise InputError("expected a self-adjoint element")


def exp_element(a: AlgebraElement) -> UnitaryElement:
    """``exp(i a)`` for self-adjoint ``a``, block by block via ``eigh``."""
    require_self_adjoint(a)
    out = []
    for b in a.blocks:
        w, v = np.linalg.eigh((b + b.conj().T) / 2)
        out.append((v * np.exp(1j * w)) @ v.conj().T)
    return UnitaryElement(tuple(out), tol=1e-10)


def log_unitary(u: UnitaryElement, margin: float = 1e-6) -> AlgebraElement:
    """Principal logarithm: self-adjoint ``a`` with ``exp(i a) = u`` and ``||a|| <= pi``.

    Raises :class:`BranchError` when some eigenvalue lies within ``margin`` of -1.
    """
    out = []
    for b in u.blocks:
        t, z = schur(b, output="complex")
        lam = np.diag(t)
        if np.any(np.abs(lam + 1) <= margin):
            raise BranchError("spectrum touches -1; principal logarithm undefined")
        a = (z * np.angle(lam)) @ z.conj().T
        out.append((a + a.conj().T) / 2)
    return AlgebraElement(tuple(out), self_adjoint=True)


# -- seeded random elements ----------------------------------------------------

def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_special_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(n, rng)
    return u / np.linalg.det(u) ** (1 / n)


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def random_self_adjoint(A: FiniteDimAlgebra, rng: np.random.Generator, norm: float | None = None,
                        support: BlockIdeal | None = None) -> AlgebraElement:
    blocks = []
    for i, n in enumerate(A.block_dims):
        if support is not None and i not in support:
            blocks.append(np.zeros((n, n), complex))
        else:
            blocks.append(random_hermitian(n, rng))
    a = AlgebraElement(tuple(blocks), self_adjoint=True)
    if norm is not None and a.norm() > 0:
        a = a.scale(norm / a.norm())
    return a


def random_element(A: FiniteDimAlgebra, rng: np.random.Generator,
                   support: BlockIdeal | None = None) -> AlgebraElement:
    blocks = []
    for i, n in enumerate(A.block_dims):
        if support is not None and i not in support:
            blocks.append(np.zeros((n, n), complex))
        else:
            blocks.append(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return AlgebraElement(tuple(blocks))


def random_unitary_element(A: FiniteDimAlgebra, rng: np.random.Generator) -> UnitaryElement:
    return UnitaryElement(tuple(random_unitary(n, rng) for n in A.block_dims))
