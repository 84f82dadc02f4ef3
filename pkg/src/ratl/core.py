"""Concurrent game structures with roles.

Agents are ``1..n``.  Roles are positional: the ``i``-th entry of every
per-state tuple belongs to role ``i + 1``.  A *vote* is a tuple of
non-negative counts, one per action of a role, and a *profile* is a tuple
of votes, one per role.  Both are plain tuples so they can key the
transition tables directly.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

Vote = tuple[int, ...]
Profile = tuple[Vote, ...]


class ModelError(ValueError):
    """Raised when a model or a profile does not fit the structure it is used with."""


@dataclass
class Rcgs:
    """A role-based concurrent game structure.

    ``role_assignment[q][i]`` is the set of agents holding role ``i + 1`` at
    ``q`` and ``action_counts[q][i]`` the number of actions that role has
    there.  ``transitions[q]`` maps complete profiles to target states; a
    state listed in ``defaults`` sends every unlisted profile to its default.

    Instances are treated as immutable once built.
    """

    n_agents: int
    roles: tuple[str, ...]
    states: tuple[str, ...]
    props: tuple[str, ...]
    labeling: Mapping[str, frozenset[str]]
    role_assignment: Mapping[str, tuple[frozenset[int], ...]]
    action_counts: Mapping[str, tuple[int, ...]]
    transitions: Mapping[str, Mapping[Profile, str]]
    defaults: Mapping[str, str] = field(default_factory=dict)
    agent_names: tuple[str, ...] | None = None

    @property
    def agents(self) -> frozenset[int]:
        return frozenset(range(1, self.n_agents + 1))

    @property
    def n_roles(self) -> int:
        return len(self.roles)

    def role_sizes(self, q: str, coalition: Iterable[int] | None = None) -> tuple[int, ...]:
        """``|A_{r,q}|`` for every role; the whole agent set when ``coalition`` is None."""
        if coalition is None:
            return tuple(len(members) for members in self.role_assignment[q])
        coalition = frozenset(coalition)
        return tuple(len(members & coalition) for members in self.role_assignment[q])

    def role_of(self, q: str, agent: int) -> int:
        """0-based index of the role ``agent`` holds at ``q``."""
        for i, members in enumerate(self.role_assignment[q]):
            if agent in members:
                return i
        raise ModelError(f"agent {agent} holds no role at state {q!r}")

    def delta(self, q: str, profile: Profile) -> str:
        table = self.transitions.get(q, {})
        if profile in table:
            return table[profile]
        if q in self.defaults:
            return self.defaults[q]
        raise ModelError(f"no transition for profile {format_profile(profile)} at state {q!r}")

    def expand_defaults(self) -> Rcgs:
        """Return an equal model whose tables list every complete profile explicitly."""
        transitions = {}
        for q in self.states:
            table = dict(self.transitions.get(q, {}))
            if q in self.defaults:
                for profile in enumerate_profiles(self, q):
                    table.setdefault(profile, self.defaults[q])
            transitions[q] = table
        return Rcgs(
            n_agents=self.n_agents,
            roles=self.roles,
            states=self.states,
            props=self.props,
            labeling=dict(self.labeling),
            role_assignment=dict(self.role_assignment),
            action_counts=dict(self.action_counts),
            transitions=transitions,
            defaults={},
            agent_names=self.agent_names,
        )

    def successor_states(self, q: str) -> frozenset[str]:
        """Every state reachable from ``q`` in one step under some complete profile."""
        return frozenset(self.delta(q, p) for p in enumerate_profiles(self, q))


def enumerate_votes(m: int, k: int) -> list[Vote]:
    """All ways ``m`` agents can spread over ``k`` actions.

    Tuples come out in ascending lexicographic order; there are
    ``comb(m + k - 1, k - 1)`` of them.

    >>> enumerate_votes(2, 2)
    [(0, 2), (1, 1), (2, 0)]
    """
    if k < 1:
        raise ValueError(f"a role needs at least one action, got k={k}")
    if m < 0:
        raise ValueError(f"agent count must be non-negative, got m={m}")
    return list(_votes(m, k))


@functools.lru_cache(maxsize=4096)
def _votes(m: int, k: int) -> tuple[Vote, ...]:
    if k == 1:
        return ((m,),)
    out = []
    for first in range(m + 1):
        for rest in _votes(m - first, k - 1):
            out.append((first,) + rest)
    return tuple(out)


@functools.lru_cache(maxsize=4096)
def profiles_for_sizes(sizes: tuple[int, ...], actions: tuple[int, ...]) -> tuple[Profile, ...]:
    """Cartesian product of vote sets, role 1 varying slowest.

    Profile sets depend only on how many agents each role contributes, so
    this is cached on the counts alone.
    """
    return tuple(itertools.product(*(_votes(m, k) for m, k in zip(sizes, actions))))


def enumerate_profiles(model: Rcgs, q: str, coalition: Iterable[int] | None = None) -> list[Profile]:
    """A-profiles at ``q``; with no coalition, the complete profiles."""
    if q not in model.role_assignment:
        raise ModelError(f"unknown state {q!r}")
    return list(profiles_for_sizes(model.role_sizes(q, coalition), model.action_counts[q]))


def extends(smaller: Profile, larger: Profile) -> bool:
    """True iff ``larger`` dominates ``smaller`` componentwise, i.e. ``larger`` extends ``smaller``."""
    if len(smaller) != len(larger):
        raise ModelError(f"profiles have {len(smaller)} and {len(larger)} roles")
    for v, w in zip(smaller, larger):
        if len(v) != len(w):
            raise ModelError(f"votes {v} and {w} have different arities")
        if any(a > b for a, b in zip(v, w)):
            return False
    return True


def add_profiles(f: Profile, g: Profile) -> Profile:
    return tuple(tuple(a + b for a, b in zip(v, w)) for v, w in zip(f, g))


def complement_sizes(model: Rcgs, q: str, partial: Profile) -> tuple[int, ...]:
    """Per-role number of agents a partial profile leaves unaccounted for.

    Raises ModelError if ``partial`` is not a legal partial profile at ``q``.
    """
    actions = model.action_counts[q]
    sizes = model.role_sizes(q)
    if len(partial) != len(actions):
        raise ModelError(f"profile has {len(partial)} votes, state {q!r} has {len(actions)} roles")
    rest = []
    for r, (vote, k, size) in enumerate(zip(partial, actions, sizes), start=1):
        if len(vote) != k:
            raise ModelError(f"vote {vote} for role {r} at {q!r} needs {k} entries")
        if any(c < 0 for c in vote):
            raise ModelError(f"vote {vote} for role {r} at {q!r} has a negative entry")
        if sum(vote) > size:
            raise ModelError(f"vote {vote} for role {r} at {q!r} counts more than {size} agents")
        rest.append(size - sum(vote))
    return tuple(rest)


def ext(model: Rcgs, q: str, partial: Profile) -> list[Profile]:
    """Complete profiles at ``q`` extending ``partial``.

    Built by adding every profile of the remaining agents to ``partial``;
    the complete profile set is never filtered.
    """
    rest = complement_sizes(model, q, partial)
    return [add_profiles(partial, h) for h in profiles_for_sizes(rest, model.action_counts[q])]


def successors(model: Rcgs, q: str, partial: Profile) -> frozenset[str]:
    return frozenset(model.delta(q, g) for g in ext(model, q, partial))


def profile_count(model: Rcgs, q: str) -> int:
    """``|Prof(q)|`` as an exact product of binomials."""
    return math.prod(
        math.comb(m + k - 1, k - 1) for m, k in zip(model.role_sizes(q), model.action_counts[q])
    )


def is_complete_profile(model: Rcgs, q: str, profile: Profile) -> bool:
    try:
        return not any(complement_sizes(model, q, profile))
    except ModelError:
        return False


def format_vote(vote: Vote) -> str:
    return "(" + ",".join(map(str, vote)) + ")"


def format_profile(profile: Profile) -> str:
    return ";".join(format_vote(v) for v in profile)


_LISTING_LIMIT = 100_000


def validate(model: Rcgs) -> list[str]:
    """Every violated structural constraint, as readable messages.

    An empty list means the model is valid.
    """
    problems: list[str] = []
    if model.n_agents < 1:
        problems.append(f"agent count must be at least 1, got {model.n_agents}")
    if not model.roles:
        problems.append("at least one role is required")
    if not model.states:
        problems.append("at least one state is required")
    if len(set(model.states)) != len(model.states):
        problems.append("duplicate state names")
    if model.agent_names is not None and len(model.agent_names) != model.n_agents:
        problems.append(f"{len(model.agent_names)} agent names for {model.n_agents} agents")
    known = set(model.states)
    props = set(model.props)
    everyone = model.agents

    for q in model.states:
        extra = set(model.labeling.get(q, ())) - props
        if extra:
            problems.append(f"state {q}: undeclared propositions {sorted(extra)}")

        assignment = model.role_assignment.get(q)
        actions = model.action_counts.get(q)
        if assignment is None or len(assignment) != len(model.roles):
            problems.append(f"state {q}: role assignment must list {len(model.roles)} roles")
            continue
        if actions is None or len(actions) != len(model.roles):
            problems.append(f"state {q}: action counts must list {len(model.roles)} roles")
            continue

        seen: dict[int, int] = {}
        for r, members in enumerate(assignment, start=1):
            for a in sorted(members):
                if a not in everyone:
                    problems.append(f"state {q}, role {r}: agent {a} is outside 1..{model.n_agents}")
                elif a in seen:
                    problems.append(f"state {q}: agent {a} is in roles {seen[a]} and {r}")
                else:
                    seen[a] = r
        missing = everyone - set(seen)
        if missing:
            problems.append(f"state {q}: agents {sorted(missing)} hold no role")
        bad_actions = [r for r, k in enumerate(actions, start=1) if k < 1]
        for r in bad_actions:
            problems.append(f"state {q}, role {r}: action count must be positive, got {actions[r - 1]}")
        if bad_actions or missing or len(seen) != sum(len(m) for m in assignment):
            continue

        table = model.transitions.get(q, {})
        for profile, target in table.items():
            if not is_complete_profile(model, q, profile):
                problems.append(f"state {q}: {format_profile(profile)} is not a complete profile")
            if target not in known:
                problems.append(f"state {q}: transition target {target!r} is not a state")
        if q in model.defaults:
            if model.defaults[q] not in known:
                problems.append(f"state {q}: default target {model.defaults[q]!r} is not a state")
        else:
            total = profile_count(model, q)
            covered = sum(1 for p in table if is_complete_profile(model, q, p))
            if covered < total:
                message = f"state {q}: {total - covered} complete profiles have no transition"
                if total <= _LISTING_LIMIT:
                    absent = [p for p in enumerate_profiles(model, q) if p not in table]
                    message += " (" + ", ".join(format_profile(p) for p in absent[:3])
                    message += ", ...)" if len(absent) > 3 else ")"
                problems.append(message)
    for q in set(model.transitions) - known:
        problems.append(f"transition table for unknown state {q!r}")
    return problems
