"""Matrix-level checks run by ``bratteli verify`` and the test suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lie import BCH_WINDOW, bch_residual, bch_truncated, commutator_formula, trotter
from .matrices import (
    BlockIdeal,
    FiniteDimAlgebra,
    exp_element,
    log_unitary,
    random_self_adjoint,
    random_unitary_element,
)
from .subgroups import (
    center_report,
    check_liecom,
    commutator_subspace,
    cuntz_pedersen_check,
    finite_dim_characters,
    sandwich_check,
    traceless_basis,
)

EXACT = 1e-12
TROTTER_NS = (8, 16, 32, 64)
COMMUTATOR_NS = (4, 8, 16, 32)
MAX_CENTER = 4096


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def roundtrip_error(A: FiniteDimAlgebra, rng: np.random.Generator, norm: float = 1.0) -> float:
    a = random_self_adjoint(A, rng, norm=norm)
    return log_unitary(exp_element(a)).distance(a)


def trotter_ratios(a, b, ns=TROTTER_NS) -> list[float] | None:
    """``error(2n)/error(n)``; ``None`` when the pair commutes to machine precision."""
    errs = [trotter(a, b, n)[1] for n in (*ns, 2 * ns[-1])]
    if max(errs) <= EXACT:
        return None
    return [errs[i + 1] / errs[i] for i in range(len(ns))]


def commutator_errors(a, b, ns=COMMUTATOR_NS) -> list[float]:
    return [commutator_formula(a, b, n)[1] for n in ns]


def strictly_decreasing(errs: list[float]) -> bool:
    if max(errs) <= EXACT:
        return True
    return all(y < x for x, y in zip(errs, errs[1:]))


def commutator_det_defect(A: FiniteDimAlgebra, rng: np.random.Generator) -> float:
    u, v = random_unitary_element(A, rng), random_unitary_element(A, rng)
    return max(abs(z - 1) for z in u.group_commutator(v).determinants())


def bch_window_enforced(A: FiniteDimAlgebra, rng: np.random.Generator) -> bool:
    a = random_self_adjoint(A, rng, norm=BCH_WINDOW)
    b = random_self_adjoint(A, rng, norm=0.01)
    if a.norm() == 0:
        return True
    try:
        bch_truncated(a, b, 8)
    except DomainError:
        return True
    return False


def verify_level(A: FiniteDimAlgebra, S: BlockIdeal, trials: int = 20, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    out = []

    rt = max(roundtrip_error(A, rng) for _ in range(trials))
    out.append(CheckResult("exp/log round trip", rt <= 1e-8, f"max error {rt:.2e}"))

    worst_ratio, worst_comm, worst_bch = 0.0, True, 0.0
    for _ in range(trials):
        a, b = random_self_adjoint(A, rng, norm=1.0), random_self_adjoint(A, rng, norm=1.0)
        ratios = trotter_ratios(a, b)
        if ratios is not None:
            worst_ratio = max(worst_ratio, *ratios)
        worst_comm = worst_comm and strictly_decreasing(commutator_errors(a, b))
        a, b = random_self_adjoint(A, rng, norm=0.1), random_self_adjoint(A, rng, norm=0.1)
        worst_bch = max(worst_bch, bch_residual(a, b, 8))
    out.append(CheckResult("Trotter error ratio", worst_ratio <= 0.75, f"worst ratio {worst_ratio:.3f}"))
    out.append(CheckResult("commutator formula", worst_comm, "errors strictly decrease"
                           if worst_comm else "errors not strictly decreasing"))
    out.append(CheckResult("BCH order 8", worst_bch <= 1e-6, f"worst residual {worst_bch:.2e}"))
    out.append(CheckResult("BCH window", bch_window_enforced(A, rng), "domain error outside the window"))

    expected = sum(A.block_dims[i] ** 2 for i in S) - len(S)
    got = commutator_subspace(A, S, rng).dim
    out.append(CheckResult("commutator subspace", got == expected == traceless_basis(A, S).dim,
                           f"dimension {got}, expected {expected}"))
    out.append(CheckResult("[I,A] = [I,I]", check_liecom(A, S, rng), "spans agree"))
    out.append(CheckResult("commutators = trace kernel", cuntz_pedersen_check(A, rng), "spans agree"))

    det = max(commutator_det_defect(A, rng) for _ in range(trials))
    out.append(CheckResult("det of commutators", det <= 1e-9, f"max |det - 1| {det:.2e}"))

    sw = sandwich_check(A, S, trials=trials, seed=seed)
    out.append(CheckResult("sandwich", sw.ok, f"{sw.failures} failure(s) in {sw.trials} trials"))

    if np.prod([n for n in A.block_dims if n >= 2], dtype=float) <= MAX_CENTER:
        cr = center_report(A, S, seed=seed)
        out.append(CheckResult("centers", cr.ok, f"|Z(CU_I)| = {cr.order_cu_ideal}"))
    else:
        out.append(CheckResult("centers", True, "skipped, center too large to enumerate"))

    chars = finite_dim_characters(A, S)
    out.append(CheckResult("characters at level", True, f"{chars} one-dimensional block(s) in the ideal"))
    return out
