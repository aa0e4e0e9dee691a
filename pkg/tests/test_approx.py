import random

import pytest

import props
from bifuzzy.approx import (
    FiniteLang,
    ValueLattice,
    brute_force_infimal,
    brute_force_supremal,
    concat,
    included,
    infimal_closed_controllable,
    is_controllable_finite,
    is_prefix_closed,
    lang_from_automaton,
    pr_finite,
    supremal_controllable,
    unit_language,
)
from bifuzzy.errors import LatticeNotClosed, PremiseViolated, SearchSpaceTooLarge
from bifuzzy.ncfd import BOTTOM, TOP, parse_ncfd
from bifuzzy.serialize import parse_finitelang, parse_ucmap
from bifuzzy.supervisory import UncontrollabilityMap
from helpers import FIXTURES, chain_lattice, random_automaton, random_tiny_instance

A = parse_ncfd("1/0.6 + 0.6/0.9")
C = parse_ncfd("1/0.3 + 0.7/0.6")


def test_missing_strings_read_as_bottom():
    k = FiniteLang(2, ("a", "b"), {(): TOP, ("a",): BOTTOM})
    assert k["b"] == BOTTOM
    assert k.degrees == {(): TOP}


def test_horizon_and_alphabet_enforced():
    with pytest.raises(PremiseViolated):
        FiniteLang(1, ("a",), {("a", "a"): TOP})
    with pytest.raises(ValueError):
        FiniteLang(1, ("a",), {("z",): TOP})


def test_automaton_language_is_prefix_closed():
    g = random_automaton(random.Random(1))
    assert is_prefix_closed(lang_from_automaton(g, 3))


def test_prefix_closure_is_extensive_and_idempotent():
    k, _, _, _ = random_tiny_instance(random.Random(2))
    assert included(k, pr_finite(k))
    assert pr_finite(pr_finite(k)) == pr_finite(k)


def test_unit_is_neutral_for_concat():
    k, _, _, _ = random_tiny_instance(random.Random(3))
    one = unit_language(k.alphabet, k.horizon)
    assert concat(one, k) == k and concat(k, one) == k


def test_plant_language_is_controllable():
    _, m, uc, _ = random_tiny_instance(random.Random(4))
    assert is_controllable_finite(m, m, uc) == (True, None)


def test_premises_are_checked():
    k, m, uc, lat = random_tiny_instance(random.Random(5))
    bigger = m.with_degrees({s: TOP for s in m.strings()})
    with pytest.raises(PremiseViolated):
        is_controllable_finite(bigger, m.with_degrees({(): TOP}), uc)
    not_closed = m.with_degrees({("a", "a"): TOP})
    with pytest.raises(PremiseViolated):
        supremal_controllable(k.with_degrees({}), not_closed, uc, lat)


def test_lattice_must_be_closed():
    with pytest.raises(LatticeNotClosed):
        ValueLattice((BOTTOM, TOP, A, ~C))
    with pytest.raises(LatticeNotClosed):
        ValueLattice((A, TOP))
    lat = ValueLattice.generated_by([A, C])
    assert len(lat) == 4


def test_non_lattice_spec_is_rejected():
    k, m, uc, lat = random_tiny_instance(random.Random(6))
    odd = parse_ncfd("0.3/0.1 + 1/0.2")
    if odd in lat:
        pytest.skip("random lattice happened to contain the probe value")
    k = k.with_degrees({(): odd})
    with pytest.raises(LatticeNotClosed):
        supremal_controllable(k, m.with_degrees({s: TOP for s in m.strings()}), uc, lat)


def test_oracle_refuses_large_search():
    rng = random.Random(8)
    lat = chain_lattice(rng)
    m = FiniteLang(4, ("a", "b"), {s: TOP for s in FiniteLang(4, ("a", "b")).strings()})
    with pytest.raises(SearchSpaceTooLarge):
        brute_force_supremal(m, m, UncontrollabilityMap({"a": TOP, "b": BOTTOM}), lat)


def test_example_truncation():
    k = parse_finitelang(FIXTURES / "example2_K_h2.json")
    m = parse_finitelang(FIXTURES / "example2_M_h2.json")
    uc = parse_ucmap(FIXTURES / "example2_uc1.json")
    ok, w = is_controllable_finite(k, m, uc)
    assert not ok and (w.witness, w.event) == (("s1",), "s1")
    lat = ValueLattice.generated_by(list(k.degrees.values()) + list(m.degrees.values()))
    sup = supremal_controllable(k, m, uc, lat)
    inf = infimal_closed_controllable(k, m, uc, lat)
    assert sup == brute_force_supremal(k, m, uc, lat)
    assert inf == brute_force_infimal(k, m, uc, lat)
    assert all(d == C for d in sup.degrees.values())


@pytest.mark.parametrize("seed", range(40))
def test_fixpoints_match_oracles(seed):
    props.check_oracles(random.Random(seed))


@pytest.mark.parametrize("seed", range(15))
def test_language_order_properties(seed):
    props.check_language_order(random.Random(seed))


@pytest.mark.parametrize("seed", range(15))
def test_controllable_closure_properties(seed):
    props.check_union_intersection(random.Random(seed))


@pytest.mark.parametrize("seed", range(15))
def test_extremality(seed):
    props.check_extremality(random.Random(seed))


@pytest.mark.parametrize("seed", range(15))
def test_supremal_properties(seed):
    props.check_supremal_properties(random.Random(seed))


@pytest.mark.parametrize("seed", range(15))
def test_infimal_properties(seed):
    props.check_infimal_properties(random.Random(seed))
