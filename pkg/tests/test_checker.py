import itertools
import random

import pytest

from ratl.checker import (
    StrategyLimitError, WorkTrace, enforce, force_set, mcheck, mcheck_naive, strategy_count,
)
from ratl.core import enumerate_profiles, profile_count
from ratl.formula import Globally, Prop, Until, bind, parse_formula
from ratl.workbench import gen_train_controller, random_formula

from conftest import brute_force_tuples, small_random_model, train_battery, tuple_to_profile


def enforce_by_tuples(model, coalition, q, target):
    """Oracle: fix each agent-level choice of the coalition and check every completion."""
    members = sorted(coalition)
    escaped, choices = set(), set()
    for t in brute_force_tuples(model, q):
        key = tuple(t[a - 1] for a in members)
        choices.add(key)
        if model.delta(q, tuple_to_profile(model, q, t)) not in target:
            escaped.add(key)
    return bool(choices - escaped)


def test_enforce_examples(train2):
    assert enforce(train2, {3}, "q1", frozenset({"q0"}))
    assert not enforce(train2, {1}, "q2", frozenset({"q3"}))
    for q in train2.states:
        assert enforce(train2, set(), q, train2.successor_states(q))


@pytest.mark.parametrize("seed", range(60))
def test_enforce_against_tuple_oracle(seed):
    model = small_random_model(seed)
    rng = random.Random(seed)
    for q in model.states:
        for _ in range(4):
            coalition = {a for a in model.agents if rng.random() < 0.5}
            target = frozenset(s for s in model.states if rng.random() < 0.6)
            expected = enforce_by_tuples(model, coalition, q, target)
            assert enforce(model, coalition, q, target) == expected
            assert enforce(model, coalition, q, target, early_exit=False) == expected


@pytest.mark.parametrize("seed", range(30))
def test_enforce_monotone_in_target(seed):
    model = small_random_model(seed)
    states = model.states
    for q in states:
        for coalition in [set(), set(model.agents), {1}]:
            for r in range(len(states) + 1):
                for small in itertools.combinations(states, r):
                    small = frozenset(small)
                    if enforce(model, coalition, q, small):
                        for extra in states:
                            assert enforce(model, coalition, q, small | {extra})


def test_force_set_examples(train2):
    assert force_set(train2, "q1", {3}) == {frozenset({"q0"}), frozenset({"q1"}), frozenset({"q2"})}
    for q in train2.states:
        assert force_set(train2, q, set()) == {train2.successor_states(q)}
        assert force_set(train2, q, train2.agents) == {
            frozenset({train2.delta(q, p)}) for p in enumerate_profiles(train2, q)}


@pytest.mark.parametrize("seed", range(30))
def test_force_coalition_monotone(seed):
    model = small_random_model(seed)
    agents = sorted(model.agents)
    for q in model.states:
        for r in range(len(agents) + 1):
            for small in itertools.combinations(agents, r):
                for extra in agents:
                    big = set(small) | {extra}
                    weak = force_set(model, q, small)
                    for s in force_set(model, q, big):
                        assert any(s <= w for w in weak)


def test_mcheck_examples(train2):
    everything = frozenset(train2.states)
    assert mcheck(train2, parse_formula("<1,2,3> F in_gate")) == everything
    assert "q0" not in mcheck(train2, parse_formula("<1,2> F in_gate"))
    for p in train2.props:
        assert mcheck(train2, Prop(p)) == {q for q in train2.states if p in train2.labeling[q]}


def test_naive_examples(train2):
    everywhere = frozenset(train2.states)
    always = Globally(frozenset(), Prop("p"))
    model = small_random_model(3)
    model.labeling = {q: frozenset({"p"}) for q in model.states}
    assert mcheck_naive(model, always) == frozenset(model.states)
    # the grand coalition picks the transition itself
    phi = parse_formula("<1,2,3> X grant")
    expected = {q for q in train2.states
                if any("grant" in train2.labeling[train2.delta(q, p)] for p in enumerate_profiles(train2, q))}
    assert mcheck_naive(train2, phi) == expected
    assert mcheck_naive(train2, parse_formula("<1,2,3> F in_gate")) == everywhere


@pytest.mark.parametrize("n", [1, 2, 3])
def test_naive_agrees_on_train_battery(n):
    model = gen_train_controller(n)
    for text in train_battery(n):
        phi = bind(parse_formula(text), model)
        assert mcheck(model, phi) == mcheck_naive(model, phi), text


def test_battery_spot_values(train2):
    assert mcheck(train2, parse_formula("<3> G out_of_gate")) == {"q0", "q1"}
    assert mcheck(train2, parse_formula("<3> X grant")) == {"q1"}
    assert mcheck(train2, parse_formula("<1,2> X in_gate")) == {"q2", "q3"}


def test_naive_limit(train2):
    assert strategy_count(train2, {1}) == 2 * 1 * 2 * 2
    with pytest.raises(StrategyLimitError):
        mcheck_naive(train2, parse_formula("<1> X grant"), limit=7)


@pytest.mark.parametrize("seed", range(120))
def test_naive_agrees_on_random_models(seed):
    model = small_random_model(seed, max_agents=3, max_states=4, max_roles=2)
    rng = random.Random(seed)
    for _ in range(3):
        phi = random_formula(rng, model.props, model.n_agents, depth=3)
        try:
            expected = mcheck_naive(model, phi, limit=20_000)
        except StrategyLimitError:
            continue
        assert mcheck(model, phi) == expected


def _all_subsets(states):
    for r in range(len(states) + 1):
        for s in itertools.combinations(states, r):
            yield frozenset(s)


@pytest.mark.parametrize("seed", range(40))
def test_fixed_points_are_extremal(seed):
    model = small_random_model(seed, max_states=6)
    rng = random.Random(seed)
    coalition = frozenset(a for a in model.agents if rng.random() < 0.5)

    def pre(target):
        return frozenset(q for q in model.states if enforce(model, coalition, q, target))

    p, q = Prop("p"), Prop("q")
    hold, goal = mcheck(model, p), mcheck(model, q)

    always = mcheck(model, Globally(coalition, p))
    assert always == hold & pre(always)
    closed = [s for s in _all_subsets(sorted(hold)) if s <= pre(s)]
    assert always == max(closed, key=len)
    assert all(s <= always for s in closed)

    until = mcheck(model, Until(coalition, p, q))
    assert until == goal | (hold & pre(until))
    fixed = [s for s in _all_subsets(model.states) if s == goal | (hold & pre(s))]
    assert all(until <= s for s in fixed)


@pytest.mark.parametrize("seed", range(30))
def test_loops_terminate_within_state_count(seed):
    model = small_random_model(seed, max_states=6)
    rng = random.Random(seed)
    for _ in range(5):
        coalition = frozenset(a for a in model.agents if rng.random() < 0.5)
        for phi in (Globally(coalition, Prop("p")), Until(coalition, Prop("p"), Prop("q"))):
            trace = WorkTrace()
            mcheck(model, phi, trace=trace)
            assert trace.fixpoint_iterations <= len(model.states)


@pytest.mark.parametrize("seed", range(30))
def test_enforce_work_bound(seed):
    model = small_random_model(seed, max_agents=5)
    trace = WorkTrace()
    rng = random.Random(seed)
    for q in model.states:
        for _ in range(4):
            coalition = {a for a in model.agents if rng.random() < 0.5}
            enforce(model, coalition, q, frozenset(rng.sample(model.states, 1)), trace, early_exit=False)
    for call in trace.calls:
        assert call.visits == call.own_profiles * call.other_profiles
        assert call.visits <= profile_count(model, call.state) ** 2
