"""Classical concurrent game structures (no roles)."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

ActionTuple = tuple[int, ...]


@dataclass
class Cgs:
    """Concurrent game structure with per-agent action counts.

    ``action_counts[q][a - 1]`` is the number of actions of agent ``a`` at
    ``q``; actions are numbered from 1.  Transition keys are complete
    action tuples.
    """

    n_agents: int
    states: tuple[str, ...]
    props: tuple[str, ...]
    labeling: Mapping[str, frozenset[str]]
    action_counts: Mapping[str, tuple[int, ...]]
    transitions: Mapping[str, Mapping[ActionTuple, str]]
    defaults: Mapping[str, str] = field(default_factory=dict)
    agent_names: tuple[str, ...] | None = None

    @property
    def agents(self) -> frozenset[int]:
        return frozenset(range(1, self.n_agents + 1))

    def delta(self, q: str, t: ActionTuple) -> str:
        table = self.transitions.get(q, {})
        if t in table:
            return table[t]
        if q in self.defaults:
            return self.defaults[q]
        raise KeyError(f"no transition for action tuple {t} at state {q!r}")

    def tuples(self, q: str):
        return itertools.product(*(range(1, d + 1) for d in self.action_counts[q]))

    def tuple_count(self, q: str) -> int:
        return math.prod(self.action_counts[q])

    def expand_defaults(self) -> Cgs:
        transitions = {}
        for q in self.states:
            table = dict(self.transitions.get(q, {}))
            if q in self.defaults:
                for t in self.tuples(q):
                    table.setdefault(t, self.defaults[q])
            transitions[q] = table
        return Cgs(
            n_agents=self.n_agents,
            states=self.states,
            props=self.props,
            labeling=dict(self.labeling),
            action_counts=dict(self.action_counts),
            transitions=transitions,
            defaults={},
            agent_names=self.agent_names,
        )


def validate_cgs(model: Cgs) -> list[str]:
    problems = []
    if model.n_agents < 1:
        problems.append(f"agent count must be at least 1, got {model.n_agents}")
    known = set(model.states)
    for q in model.states:
        extra = set(model.labeling.get(q, ())) - set(model.props)
        if extra:
            problems.append(f"state {q}: undeclared propositions {sorted(extra)}")
        d = model.action_counts.get(q)
        if d is None or len(d) != model.n_agents:
            problems.append(f"state {q}: need an action count for each of {model.n_agents} agents")
            continue
        if any(k < 1 for k in d):
            problems.append(f"state {q}: action counts must be positive, got {d}")
            continue
        table = model.transitions.get(q, {})
        for t, target in table.items():
            if len(t) != len(d) or any(not 1 <= x <= k for x, k in zip(t, d)):
                problems.append(f"state {q}: {t} is not a complete action tuple")
            if target not in known:
                problems.append(f"state {q}: transition target {target!r} is not a state")
        if q in model.defaults:
            if model.defaults[q] not in known:
                problems.append(f"state {q}: default target {model.defaults[q]!r} is not a state")
        elif len(table) < model.tuple_count(q) or any(t not in table for t in model.tuples(q)):
            problems.append(f"state {q}: transition function is not total")
    return problems
