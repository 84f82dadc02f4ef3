"""From role-based structures to classical concurrent game structures and back.

:func:`translate` forgets roles: every agent gets the action menu of its
role, and an action tuple moves wherever the profile counting its votes
moves.  :func:`abstract` is that counting map and :func:`concretize` a
right inverse of it.  :func:`cgs_mcheck` checks formulas on the classical
side so the two semantics can be compared.
"""
from __future__ import annotations

import itertools
import math
import time
from typing import Iterable, Sequence

from .cgs import ActionTuple, Cgs, validate_cgs
from .checker import EnforceCall, WorkTrace, evaluate, force_set
from .core import ModelError, Profile, Rcgs
from .formula import Formula

DEFAULT_TRANSLATION_CAP = 10**7

__all__ = [
    "ActionTuple", "Cgs", "TranslationCapError", "abstract", "cgs_enforce", "cgs_force_set",
    "cgs_mcheck", "concretize", "profile_preimage_sizes", "singleton_roles", "translate", "tuple_count",
    "validate_cgs", "verify_force_equality",
]


class TranslationCapError(RuntimeError):
    pass


def tuple_count(model: Rcgs, q: str) -> int:
    """Number of complete action tuples at ``q`` in ``translate(model)``, without building it."""
    return math.prod(k ** len(members) for members, k in
                     zip(model.role_assignment[q], model.action_counts[q]))


def _members(coalition: Iterable[int] | None, model) -> list[int]:
    return sorted(model.agents if coalition is None else coalition)


def abstract(model: Rcgs, q: str, actions: Sequence[int],
             coalition: Iterable[int] | None = None) -> Profile:
    """Count, per role, how many agents of ``coalition`` pick each action.

    ``actions`` lists one action per coalition member, in ascending agent
    order; the whole agent set is assumed when ``coalition`` is None.
    """
    members = _members(coalition, model)
    if len(actions) != len(members):
        raise ModelError(f"{len(actions)} actions for a coalition of {len(members)} agents")
    counts = [[0] * k for k in model.action_counts[q]]
    for agent, a in zip(members, actions):
        r = model.role_of(q, agent)
        k = model.action_counts[q][r]
        if not 1 <= a <= k:
            raise ModelError(f"agent {agent} has actions 1..{k} at {q!r}, got {a}")
        counts[r][a - 1] += 1
    return tuple(tuple(c) for c in counts)


def concretize(model: Rcgs, q: str, profile: Profile,
               coalition: Iterable[int] | None = None) -> ActionTuple:
    """An action tuple for ``coalition`` whose abstraction is ``profile``.

    Within each role the members, in ascending order, take actions in
    ascending order, as many of each as the vote says.
    """
    members = _members(coalition, model)
    member_set = set(members)
    chosen: dict[int, int] = {}
    for r, vote in enumerate(profile):
        group = sorted(model.role_assignment[q][r] & member_set)
        if sum(vote) != len(group) or len(vote) != model.action_counts[q][r]:
            raise ModelError(f"vote {vote} does not fit role {r + 1} of the coalition at {q!r}")
        slots = [a for a, n in enumerate(vote, start=1) for _ in range(n)]
        chosen.update(zip(group, slots))
    return tuple(chosen[a] for a in members)


def translate(model: Rcgs, cap: int = DEFAULT_TRANSLATION_CAP) -> Cgs:
    """The classical structure with the same states, labels and dynamics.

    Raises TranslationCapError if some state has more than ``cap`` action tuples.
    """
    for q in model.states:
        size = tuple_count(model, q)
        if size > cap:
            raise TranslationCapError(f"state {q} would have {size} action tuples, cap is {cap}")
    action_counts = {}
    transitions = {}
    for q in model.states:
        d = tuple(model.action_counts[q][model.role_of(q, a)] for a in range(1, model.n_agents + 1))
        action_counts[q] = d
        transitions[q] = {
            t: model.delta(q, abstract(model, q, t))
            for t in itertools.product(*(range(1, k + 1) for k in d))
        }
    return Cgs(
        n_agents=model.n_agents,
        states=model.states,
        props=model.props,
        labeling=dict(model.labeling),
        action_counts=action_counts,
        transitions=transitions,
        agent_names=model.agent_names,
    )


def singleton_roles(model: Cgs) -> Rcgs:
    """Give every agent a role of its own; translating back yields ``model``."""
    names = model.agent_names or tuple(f"a{i}" for i in range(1, model.n_agents + 1))
    full = model.expand_defaults()
    transitions = {}
    for q in full.states:
        d = full.action_counts[q]
        transitions[q] = {
            tuple(tuple(int(i == x) for i in range(1, k + 1)) for x, k in zip(t, d)): target
            for t, target in full.transitions[q].items()
        }
    return Rcgs(
        n_agents=model.n_agents,
        roles=tuple(names),
        states=full.states,
        props=full.props,
        labeling=dict(full.labeling),
        role_assignment={q: tuple(frozenset({a}) for a in range(1, model.n_agents + 1)) for q in full.states},
        action_counts=dict(full.action_counts),
        transitions=transitions,
        agent_names=model.agent_names,
    )


def cgs_enforce(model: Cgs, coalition: Iterable[int], q: str, target: frozenset[str],
                trace: WorkTrace | None = None) -> bool:
    """One pass over the complete action tuples at ``q``.

    Tuples extending different coalition choices are disjoint, so each is
    read once and charged to the coalition choice it extends.
    """
    coalition = sorted(coalition)
    idx = [a - 1 for a in coalition]
    escaped = set()
    visits = 0
    for t in model.tuples(q):
        visits += 1
        if model.delta(q, t) not in target:
            escaped.add(tuple(t[i] for i in idx))
    choices = math.prod(model.action_counts[q][i] for i in idx)
    found = len(escaped) < choices
    if trace is not None:
        total = model.tuple_count(q)
        trace.record(EnforceCall(q, frozenset(coalition), visits, choices, total // choices, total, found))
    return found


def cgs_mcheck(model: Cgs, phi: Formula, trace: WorkTrace | None = None) -> frozenset[str]:
    start = time.perf_counter()

    def pre(coalition, target, candidates):
        return frozenset(q for q in candidates if cgs_enforce(model, coalition, q, target, trace))

    result = evaluate(phi, model.states, model.labeling, pre, trace)
    if trace is not None:
        trace.elapsed += time.perf_counter() - start
    return result


def cgs_force_set(model: Cgs, q: str, coalition: Iterable[int]) -> set[frozenset[str]]:
    """Next-state sets reachable by fixing each action choice of ``coalition`` at ``q``."""
    idx = [a - 1 for a in sorted(coalition)]
    outcomes: dict[tuple[int, ...], set[str]] = {}
    for t in model.tuples(q):
        outcomes.setdefault(tuple(t[i] for i in idx), set()).add(model.delta(q, t))
    return {frozenset(s) for s in outcomes.values()}


def verify_force_equality(model: Rcgs, q: str, coalition: Iterable[int],
                          translated: Cgs | None = None,
                          cap: int = DEFAULT_TRANSLATION_CAP) -> bool:
    """Do ``coalition``'s one-step powers at ``q`` agree in ``model`` and its translation?"""
    coalition = frozenset(coalition)
    if translated is None:
        translated = translate(model, cap)
    return force_set(model, q, coalition) == cgs_force_set(translated, q, coalition)


def profile_preimage_sizes(model: Rcgs, q: str, coalition: Iterable[int]) -> dict[Profile, int]:
    """How many coalition action tuples abstract to each A-profile."""
    members = _members(coalition, model)
    d = [model.action_counts[q][model.role_of(q, a)] for a in members]
    sizes: dict[Profile, int] = {}
    for t in itertools.product(*(range(1, k + 1) for k in d)):
        p = abstract(model, q, t, members)
        sizes[p] = sizes.get(p, 0) + 1
    return sizes
