import itertools

import numpy as np
import pytest
from helpers import CORPUS

from bratteli.errors import InputError
from bratteli.io import parse_ideal_spec, read_diagram
from bratteli.matrices import BlockIdeal, FiniteDimAlgebra, UnitaryElement, random_unitary_element
from bratteli.subgroups import (
    algebra_at_level,
    center_report,
    check_liecom,
    commutator_subspace,
    cuntz_pedersen_check,
    distinguishing_witness,
    finite_dim_characters,
    ideal_subspace,
    in_CU,
    in_N,
    intersect,
    perfect_block_ideals,
    random_CU_element,
    random_N_element,
    sandwich_check,
    trace_kernel,
)


def test_algebra_at_level():
    d = read_diagram(CORPUS / "cgrow.bd")
    A, S = algebra_at_level(d, 2, parse_ideal_spec(d, "0:1"))
    assert A.block_dims == (1, 7) and sorted(S) == [1]
    with pytest.raises(InputError):
        algebra_at_level(read_diagram(CORPUS / "b3.bd"), -1)


def test_commutator_subspace_dimensions():
    A = FiniteDimAlgebra((1, 2, 3))
    for S, dim in ((BlockIdeal(), 0), (BlockIdeal({0}), 0), (BlockIdeal({1}), 3), (BlockIdeal({0, 1, 2}), 11)):
        assert commutator_subspace(A, S, np.random.default_rng(0)).dim == dim


def test_commutators_land_in_the_ideal():
    A = FiniteDimAlgebra((2, 2))
    S = BlockIdeal({0})
    C = commutator_subspace(A, S)
    assert intersect(C, ideal_subspace(A, S)).dim == C.dim
    assert C.support(A) == S
    assert check_liecom(A, S)


def test_trace_kernel_equals_commutators():
    A = FiniteDimAlgebra((1, 3))
    assert trace_kernel(A).dim == 8
    assert cuntz_pedersen_check(A, np.random.default_rng(2))


def test_su_times_phase_factorization():
    A = FiniteDimAlgebra((2, 3))
    rng = np.random.default_rng(4)
    for _ in range(20):
        u = random_unitary_element(A, rng)
        phases = [det ** (1 / n) for det, n in zip(u.determinants(), A.block_dims)]
        v = UnitaryElement(tuple(b / ph for b, ph in zip(u.blocks, phases)))
        scalar = UnitaryElement(tuple(ph * np.eye(n) for ph, n in zip(phases, A.block_dims)))
        assert in_CU(A, BlockIdeal.full(A), v)
        assert (scalar @ v).distance(u) < 1e-12
        assert in_N(A, BlockIdeal(), scalar)


def test_membership_predicates():
    A = FiniteDimAlgebra((2, 3))
    rng = np.random.default_rng(0)
    S = BlockIdeal({1})
    w = random_CU_element(A, S, rng)
    assert in_CU(A, S, w) and in_N(A, S, w)
    n = random_N_element(A, S, rng)
    assert in_N(A, S, n) and not in_CU(A, S, n)
    assert not in_N(A, S, random_unitary_element(A, rng))
    with pytest.raises(InputError):
        in_CU(A, S, random_unitary_element(FiniteDimAlgebra((3,)), rng))


def test_characters_at_level():
    A = FiniteDimAlgebra((1, 1, 2))
    assert finite_dim_characters(A, BlockIdeal.full(A)) == 2
    assert finite_dim_characters(A, BlockIdeal({2})) == 0


def test_perfect_block_ideals_avoid_ones():
    A = FiniteDimAlgebra((1, 2, 1, 3))
    perfect = perfect_block_ideals(A)
    assert len(perfect) == 4
    assert all(A.block_dims[i] >= 2 for S in perfect for i in S)


def test_witness_is_none_when_only_ones_differ():
    A = FiniteDimAlgebra((1, 2))
    assert distinguishing_witness(A, BlockIdeal({0, 1}), BlockIdeal({1})) is None
    w, inside = distinguishing_witness(A, BlockIdeal({1}), BlockIdeal())
    assert inside == BlockIdeal({1}) and in_CU(A, inside, w) and not in_CU(A, BlockIdeal(), w)


@pytest.mark.parametrize("dims", [(2,), (2, 3), (1, 4), (2, 2, 3)])
def test_center_orders(dims):
    A = FiniteDimAlgebra(dims)
    for r in range(len(dims) + 1):
        for combo in itertools.combinations(range(len(dims)), r):
            rep = center_report(A, BlockIdeal(combo))
            assert rep.ok
            assert rep.order_cu_ideal == int(np.prod([dims[i] for i in combo if dims[i] >= 2]))


def test_sandwich_is_seeded():
    A = FiniteDimAlgebra((2, 3))
    a = sandwich_check(A, BlockIdeal({1}), trials=10, seed=9)
    b = sandwich_check(A, BlockIdeal({1}), trials=10, seed=9)
    assert a == b and a.ok
    with pytest.raises(ValueError):
        sandwich_check(A, BlockIdeal({1}), trials=0)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_single_block_unitaries_split_into_su_and_phase(n):
    A = FiniteDimAlgebra((n,))
    rng = np.random.default_rng(n)
    for _ in range(10):
        u = random_unitary_element(A, rng)
        (det,) = u.determinants()
        v = UnitaryElement((u.blocks[0] / det ** (1 / n),))
        assert in_CU(A, BlockIdeal.full(A), v)


def test_liecom_on_100_draws_up_to_dimension_50():
    for draw in range(100):
        rng = np.random.default_rng(draw)
        while True:
            dims = tuple(int(x) for x in rng.integers(1, 6, size=int(rng.integers(1, 4))))
            if sum(n * n for n in dims) <= 50:
                break
        A = FiniteDimAlgebra(dims)
        S = BlockIdeal(i for i in A.blocks if rng.random() < 0.5)
        assert check_liecom(A, S, rng)
