import numpy as np
import pytest
from helpers import CORPUS, oracle_character_count, oracle_ideal_count, random_periodic, random_truncated

from bratteli.analysis import (
    characters,
    enumerate_ideals,
    high_part,
    is_perfect,
    largest_perfect,
    normal_subgroups_of_VA,
    perfectness_check,
    simplicity_report,
)
from bratteli.diagram import BratteliDiagram
from bratteli.errors import CharactersUndecidable
from bratteli.ideals import closure, empty_set, full_set
from bratteli.io import read_diagram


def load(name):
    return read_diagram(CORPUS / f"{name}.bd")


def test_car_is_simple_and_perfect():
    d = load("car")
    assert characters(d).count == 0
    assert largest_perfect(d) == full_set(d)
    rep = simplicity_report(d)
    assert rep.holds and rep.conclusive


def test_cgrow_character_witness():
    d = load("cgrow")
    rep = characters(d)
    assert rep.count == 1 and not rep.infinite
    (w,) = rep.witnesses
    assert str(w.start) == "0:0" and w.cycle == (0,)
    assert [w.index_at(p) for p in range(4)] == [0, 0, 0, 0]
    assert not w.single_arrow
    # the M-column has no characters
    assert characters(d, closure(d, [(0, 1)])).count == 0


def test_cgrow_single_arrow_reading_diverges():
    v = perfectness_check(load("cgrow"))
    assert v.consistent and v.divergent
    assert not v.perfect and v.strict_path_criterion


def test_swap_has_two_characters_and_only_trivial_subgroup():
    d = load("swap")
    assert characters(d).count == 2
    ns = normal_subgroups_of_VA(d)
    assert [x.label for x in ns] == ["trivial"]
    rep = simplicity_report(d)
    assert rep.holds and "trivial group" in rep.message


def test_alt_period_two():
    d = load("alt")
    lat = enumerate_ideals(d)
    assert len(lat) == 3 and lat.complete
    assert largest_perfect(d) == closure(d, [(0, 1)])


def test_b3_labels():
    ns = normal_subgroups_of_VA(load("b3"))
    labels = [x.label for x in ns]
    assert len(ns) == 8 and labels.count("proper") == 6
    assert labels[0] == "trivial" and labels[-1] == "full"


def test_characters_need_a_periodic_tail():
    d = random_truncated(np.random.default_rng(0))
    with pytest.raises(CharactersUndecidable):
        characters(d)


def test_high_part_drops_dimension_one():
    d = load("cgrow")
    h = high_part(d, full_set(d))
    assert h.at(0) == set() and h.at(1) == {1}


def test_enumeration_cap_marks_incomplete():
    d = load("b3")
    lat = enumerate_ideals(d, cap=4)
    assert lat.capped and not lat.complete and len(lat) <= 4


def test_shallow_seeds_can_be_incomplete():
    # a column that only splits off at level 2
    d = BratteliDiagram(((1,), (2,), (4, 4)), (((0, 0, 2),), ((0, 0, 2), (0, 1, 2)), ((0, 0, 2), (1, 1, 2))), (2, 1))
    lat = enumerate_ideals(d, max_seed_level=0)
    assert len(lat) == 2 and not lat.complete
    full = enumerate_ideals(d)
    assert len(full) == 4 and full.complete


def test_sinks_of_truncations_never_count_as_characters():
    d = random_truncated(np.random.default_rng(7))
    for s in enumerate_ideals(d):
        lp = largest_perfect(d, s)
        assert lp.issubset(s)
        assert all(d.dims(len(d.levels) - 1)[i] > 1 for i in lp.at(len(d.levels) - 1))


@pytest.mark.parametrize("seed", range(60))
def test_largest_perfect_is_perfect_and_maximal(seed):
    d = random_periodic(np.random.default_rng(seed))
    lattice = enumerate_ideals(d)
    for s in lattice:
        lp = largest_perfect(d, s)
        assert is_perfect(d, lp)
        assert all(t.issubset(lp) for t in lattice if t.issubset(s) and is_perfect(d, t))


@pytest.mark.parametrize("seed", range(60))
def test_character_count_matches_unrolled_oracle(seed):
    d = random_periodic(np.random.default_rng(seed + 777))
    for s in enumerate_ideals(d):
        assert characters(d, s).count == oracle_character_count(d, s)


@pytest.mark.parametrize("seed", range(30))
def test_simplicity_matches_definition(seed):
    d = random_periodic(np.random.default_rng(seed))
    rep = simplicity_report(d)
    top = largest_perfect(d)
    perfect = {s for s in enumerate_ideals(d) if is_perfect(d, s)}
    assert rep.holds == (perfect <= {empty_set(d), top})


@pytest.mark.parametrize("name", ["car", "b3", "cgrow", "swap", "alt", "rooted"])
def test_corpus_lattice_sizes_match_oracle(name):
    d = load(name)
    lat = enumerate_ideals(d)
    assert lat.complete and len(lat) == oracle_ideal_count(d)


@pytest.mark.parametrize("seed", range(100))
def test_lattice_size_matches_oracle(seed):
    d = random_periodic(np.random.default_rng(seed + 5000))
    assert len(enumerate_ideals(d)) == oracle_ideal_count(d)


@pytest.mark.parametrize("seed", range(40))
def test_largest_perfect_laws_and_sum_property(seed):
    d = random_periodic(np.random.default_rng(seed + 900))
    lattice = enumerate_ideals(d)
    perfect = [s for s in lattice if is_perfect(d, s)]
    for s in lattice:
        lp = largest_perfect(d, s)
        assert largest_perfect(d, lp) == lp
        assert (lp == s) == is_perfect(d, s)
        for t in lattice:
            if s.issubset(t):
                assert lp.issubset(largest_perfect(d, t))
    for a in perfect:
        for b in perfect:
            assert is_perfect(d, closure(d, a.vertices() + b.vertices()))


@pytest.mark.parametrize("seed", range(40))
def test_witnesses_run_through_ones(seed):
    d = random_periodic(np.random.default_rng(seed + 1300))
    for s in enumerate_ideals(d):
        for w in characters(d, s).witnesses:
            for p in range(w.start.level, w.cycle_start + 3 * len(w.cycle)):
                i = w.index_at(p)
                assert d.dims(p)[i] == 1 and i in s.at(p)
