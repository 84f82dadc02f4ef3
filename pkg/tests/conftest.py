import itertools
import random

import pytest

from ratl import gen_train_controller
from ratl.workbench import random_model


def brute_force_tuples(model, q):
    """Every complete action tuple at q, built per agent without using roles' vote sets."""
    menus = [range(1, model.action_counts[q][model.role_of(q, a)] + 1)
             for a in range(1, model.n_agents + 1)]
    return itertools.product(*menus)


def tuple_to_profile(model, q, t):
    counts = [[0] * k for k in model.action_counts[q]]
    for agent, action in enumerate(t, start=1):
        counts[model.role_of(q, agent)][action - 1] += 1
    return tuple(tuple(c) for c in counts)


def train_battery(n_trains):
    """Twelve formulas over the train/controller model."""
    trains = ",".join(str(i) for i in range(1, n_trains + 1))
    c = n_trains + 1
    everyone = f"{trains},{c}"
    return [
        f"<{everyone}> F in_gate",
        f"<{trains}> F in_gate",
        f"<{c}> G out_of_gate",
        "<> G !in_gate",
        "<1> X request",
        f"<{c}> X grant",
        f"<{trains}> (out_of_gate U in_gate)",
        f"<{c}> (!grant U request)",
        "!<1> F grant",
        f"<{everyone}> G (request -> <{c}> X grant)",
        f"<> X out_of_gate | <{c}> F in_gate",
        f"<{trains}> G <{everyone}> F in_gate",
    ]


def small_random_model(seed, max_agents=4, max_states=4, max_roles=3, max_actions=3):
    rng = random.Random(seed)
    return random_model(seed, n_agents=rng.randint(1, max_agents), n_states=rng.randint(1, max_states),
                        n_roles=rng.randint(1, max_roles), max_actions=rng.randint(1, max_actions))


@pytest.fixture
def train2():
    return gen_train_controller(2)
