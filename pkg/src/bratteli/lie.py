"""Product formulas of matrix Lie theory, checked on self-adjoint generators.

Self-adjoint ``a`` stands for the Lie algebra element ``ia`` of the unitary
group, so ``exp_element(a) = exp(ia)``.  With that convention:

* Trotter: ``(exp(ia/n) exp(ib/n))^n -> exp(i(a + b))``;
* commutator formula: ``(exp(ia/n) exp(ib/n) exp(-ia/n) exp(-ib/n))^(n^2)
  -> exp([ia, ib]) = exp(-[a, b])``.  Since ``i[a, b]`` is self-adjoint the
  target is ``exp_element(i[a, b])``;
* BCH: ``exp(ia) exp(ib) = exp(ic)`` with ``ic = log(e^X e^Y)`` evaluated as
  a series of nested brackets of ``X = ia`` and ``Y = ib``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, log

import numpy as np

from .errors import DomainError
from .matrices import AlgebraElement, UnitaryElement, exp_element, require_self_adjoint

BCH_WINDOW = 0.5 * log(2)
MAX_BCH_ORDER = 8


def trotter(a: AlgebraElement, b: AlgebraElement, n: int) -> tuple[UnitaryElement, float]:
    if n < 1:
        raise ValueError("n must be >= 1")
    step = exp_element(a.scale(1 / n)) @ exp_element(b.scale(1 / n))
    approx = step.power(n)
    return approx, approx.distance(exp_element(a + b))


def commutator_target(a: AlgebraElement, b: AlgebraElement) -> UnitaryElement:
    """``exp([ia, ib])`` written as ``exp_element(i[a, b])``."""
    c = a.bracket(b).scale(1j)
    return exp_element(AlgebraElement(tuple((x + x.conj().T) / 2 for x in c.blocks), True))


def commutator_formula(a: AlgebraElement, b: AlgebraElement, n: int) -> tuple[UnitaryElement, float]:
    if n < 1:
        raise ValueError("n must be >= 1")
    ua, ub = exp_element(a.scale(1 / n)), exp_element(b.scale(1 / n))
    approx = ua.group_commutator(ub).power(n * n)
    return approx, approx.distance(commutator_target(a, b))


# -- Baker-Campbell-Hausdorff ---------------------------------------------------

Word = tuple[int, ...]


def _mul(p: dict, q: dict, order: int) -> dict:
    out: dict[Word, Fraction] = {}
    for w1, c1 in p.items():
        for w2, c2 in q.items():
            if len(w1) + len(w2) <= order:
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def bch_coefficients(order: int) -> tuple[tuple[Word, Fraction], ...]:
    """Coefficients of ``log(e^X e^Y)`` in the free associative algebra, words up to ``order``.

    Letters are 0 for ``X`` and 1 for ``Y``.
    """
    ex = {(0,) * k: Fraction(1, factorial(k)) for k in range(order + 1)}
    ey = {(1,) * k: Fraction(1, factorial(k)) for k in range(order + 1)}
    w = _mul(ex, ey, order)
    w.pop((), None)
    out: dict[Word, Fraction] = {}
    power = {(): Fraction(1)}
    for m in range(1, order + 1):
        power = _mul(power, w, order)
        for word, c in power.items():
            out[word] = out.get(word, 0) + Fraction((-1) ** (m + 1), m) * c
    return tuple(sorted(((wd, c) for wd, c in out.items() if c), key=lambda t: (len(t[0]), t[0])))


def _left_normed(word: Word, gens: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    acc = gens[word[0]]
    for letter in word[1:]:
        g = gens[letter]
        acc = acc @ g - g @ acc
    return acc


def bch_series_blocks(x: np.ndarray, y: np.ndarray, order: int, nested: bool = True) -> np.ndarray:
    """Truncated ``log(e^x e^y)`` for square matrices.

    With ``nested=True`` each homogeneous part ``P_k`` is evaluated as
    ``(1/k) sum_w c_w [..[[w1, w2], w3].., wk]``, which equals ``P_k`` for Lie
    polynomials; otherwise the words are multiplied out directly.
    """
    gens = (x, y)
    z = np.zeros_like(x)
    for word, c in bch_coefficients(order):
        if nested:
            z = z + (float(c) / len(word)) * _left_normed(word, gens)
        else:
            prod = np.eye(x.shape[0], dtype=complex)
            for letter in word:
                prod = prod @ gens[letter]
            z = z + float(c) * prod
    return z


def bch_truncated(a: AlgebraElement, b: AlgebraElement, order: int) -> AlgebraElement:
    """Self-adjoint ``c`` with ``exp(ic) ~ exp(ia) exp(ib)`` from the BCH series through ``order``."""
    require_self_adjoint(a)
    require_self_adjoint(b)
    if not 1 <= order <= MAX_BCH_ORDER:
        raise DomainError(f"order must be between 1 and {MAX_BCH_ORDER}")
    if a.norm() + b.norm() >= BCH_WINDOW:
        raise DomainError(f"||a|| + ||b|| = {a.norm() + b.norm():.4f} is outside the "
                          f"convergence window ||a|| + ||b|| < log(2)/2")
    out = []
    for xa, xb in zip(a.blocks, b.blocks):
        z = bch_series_blocks(1j * xa, 1j * xb, order)
        c = -1j * z
        out.append((c + c.conj().T) / 2)
    return AlgebraElement(tuple(out), self_adjoint=True)


def bch_residual(a: AlgebraElement, b: AlgebraElement, order: int) -> float:
    return exp_element(bch_truncated(a, b, order)).distance(exp_element(a) @ exp_element(b))
