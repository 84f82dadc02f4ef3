import itertools
import math
import random

import pytest

from ratl.bridge import (
    TranslationCapError, abstract, cgs_force_set, cgs_mcheck, concretize, profile_preimage_sizes,
    singleton_roles, translate, tuple_count, verify_force_equality,
)
from ratl.cgs import validate_cgs
from ratl.checker import mcheck
from ratl.core import enumerate_profiles, profile_count, validate
from ratl.formula import bind, parse_formula
from ratl.workbench import gen_autonomous_trains, gen_train_controller, random_formula

from conftest import small_random_model, train_battery


def coalitions(model):
    agents = sorted(model.agents)
    for r in range(len(agents) + 1):
        yield from (frozenset(c) for c in itertools.combinations(agents, r))


def test_translate_example(train2):
    cgs = translate(train2)
    assert cgs.action_counts["q0"] == (2, 2, 1)
    assert cgs.transitions["q0"][(1, 2, 1)] == "q1"
    assert cgs.transitions["q0"][(2, 2, 1)] == "q0"
    assert validate_cgs(cgs) == []


def test_translate_autotrains_hub_degree():
    cgs = translate(gen_autonomous_trains(3))
    assert cgs.tuple_count("q0") == 27
    assert profile_count(gen_autonomous_trains(3), "q0") == 10


def test_translate_cap(train2):
    with pytest.raises(TranslationCapError):
        translate(gen_train_controller(10), cap=1000)
    assert tuple_count(gen_train_controller(10), "q0") == 1024


@pytest.mark.parametrize("seed", range(40))
def test_translate_preserves_structure(seed):
    model = small_random_model(seed)
    cgs = translate(model)
    assert cgs.states == model.states and cgs.labeling == model.labeling
    for q in model.states:
        assert cgs.tuple_count(q) == tuple_count(model, q)
        assert set(cgs.transitions[q].values()) == model.successor_states(q)


def test_abstract_examples(train2):
    assert abstract(train2, "q0", (1, 2, 1)) == ((1, 1), (1,))
    assert abstract(train2, "q0", (), coalition=()) == ((0, 0), (0,))
    assert abstract(train2, "q0", (1, 1), coalition=(1, 2)) == ((2, 0), (0,))
    with pytest.raises(ValueError):
        abstract(train2, "q0", (3, 1, 1))


def test_concretize_examples(train2):
    assert concretize(train2, "q0", ((1, 1), (1,))) == (1, 2, 1)
    assert concretize(train2, "q0", ((0, 0), (1,)), coalition={3}) == (1,)
    model = gen_autonomous_trains(3)
    # the selected role is empty at the hub and contributes nothing
    assert concretize(model, "q0", ((0, 0, 3), (0,), (1,))) == (3, 3, 3, 1)


@pytest.mark.parametrize("seed", range(30))
def test_surjectivity_random(seed):
    model = small_random_model(seed)
    for q in model.states:
        for coalition in coalitions(model):
            for p in enumerate_profiles(model, q, coalition):
                t = concretize(model, q, p, coalition)
                assert abstract(model, q, t, coalition) == p


@pytest.mark.parametrize("seed", range(20))
def test_abstraction_partitions_tuples(seed):
    model = small_random_model(seed)
    for q in model.states:
        for coalition in coalitions(model):
            sizes = profile_preimage_sizes(model, q, coalition)
            assert set(sizes) == set(enumerate_profiles(model, q, coalition))
            d = [model.action_counts[q][model.role_of(q, a)] for a in coalition]
            assert sum(sizes.values()) == math.prod(d)


def test_cgs_mcheck_battery(train2):
    cgs = translate(train2)
    for text in train_battery(2):
        phi = bind(parse_formula(text), train2)
        assert cgs_mcheck(cgs, phi) == mcheck(train2, phi), text


def test_cgs_mcheck_basics(train2):
    cgs = translate(train2)
    assert cgs_mcheck(cgs, parse_formula("grant")) == {"q2"}
    assert cgs_mcheck(cgs, parse_formula("<1,2,3> X request")) == {"q0", "q1"}


def test_singleton_roles():
    cgs = translate(gen_train_controller(2))
    rcgs = singleton_roles(cgs)
    assert validate(rcgs) == []
    assert translate(rcgs) == cgs
    for q in rcgs.states:
        assert profile_count(rcgs, q) == cgs.tuple_count(q)
        for profile in rcgs.transitions[q]:
            assert all(sorted(v) == [0] * (len(v) - 1) + [1] for v in profile)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_force_equality_train(n):
    model = gen_train_controller(n)
    cgs = translate(model)
    for q in model.states:
        for coalition in coalitions(model):
            assert verify_force_equality(model, q, coalition, cgs)


def test_force_equality_grand_coalition(train2):
    cgs = translate(train2)
    for q in train2.states:
        assert all(len(s) == 1 for s in cgs_force_set(cgs, q, train2.agents))
        assert verify_force_equality(train2, q, train2.agents)


@pytest.mark.parametrize("seed", range(60))
def test_translation_preserves_truth_random(seed):
    model = small_random_model(seed)
    cgs = translate(model)
    rng = random.Random(seed)
    for _ in range(4):
        phi = random_formula(rng, model.props, model.n_agents, depth=3)
        assert mcheck(model, phi) == cgs_mcheck(cgs, phi)
