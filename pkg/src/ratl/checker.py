"""ATL model checking over role-based game structures.

Two engines are provided.  :func:`mcheck` is the usual fixed-point
labelling algorithm with a one-step ``enforce`` test; :func:`mcheck_naive`
enumerates memoryless coalition strategies and inspects the resulting
computations directly, and is only meant for small models.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import Rcgs, add_profiles, enumerate_profiles, profiles_for_sizes, successors
from .formula import (
    And, Const, Eventually, Formula, Globally, Implies, Next, Not, Or, Prop, Until,
)

StateSet = frozenset  # of state names

DEFAULT_NAIVE_LIMIT = 10**6


class StrategyLimitError(RuntimeError):
    pass


@dataclass
class EnforceCall:
    state: str
    coalition: frozenset[int]
    visits: int
    own_profiles: int
    other_profiles: int
    complete_profiles: int
    result: bool


@dataclass
class WorkTrace:
    """Counters collected while checking a formula."""

    enforce_calls: int = 0
    extension_visits: int = 0
    fixpoint_iterations: int = 0
    elapsed: float = 0.0
    calls: list[EnforceCall] = field(default_factory=list)

    def record(self, call: EnforceCall) -> None:
        self.enforce_calls += 1
        self.extension_visits += call.visits
        self.calls.append(call)


def enforce(model: Rcgs, coalition: Iterable[int], q: str, target: frozenset[str],
            trace: WorkTrace | None = None, early_exit: bool = True) -> bool:
    """Can ``coalition`` force the next state at ``q`` into ``target``?

    Tries every A-profile and walks its complete extensions.  With
    ``early_exit`` the inner walk stops at the first extension leaving
    ``target`` and the outer one at the first witness; without it both
    loops run to completion (same answer, worst-case work).
    """
    coalition = frozenset(coalition)
    actions = model.action_counts[q]
    own = model.role_sizes(q, coalition)
    rest = tuple(t - o for t, o in zip(model.role_sizes(q), own))
    mine = profiles_for_sizes(own, actions)
    others = profiles_for_sizes(rest, actions)
    delta = model.delta

    visits = 0
    found = False
    for f in mine:
        forced = True
        for h in others:
            visits += 1
            if delta(q, add_profiles(f, h)) not in target:
                forced = False
                if early_exit:
                    break
        if forced:
            found = True
            if early_exit:
                break
    if trace is not None:
        trace.record(EnforceCall(q, coalition, visits, len(mine), len(others),
                                 math.prod(math.comb(m + k - 1, k - 1)
                                           for m, k in zip(model.role_sizes(q), actions)),
                                 found))
    return found


Pre = Callable[[frozenset, frozenset, Iterable[str]], frozenset]


def evaluate(phi: Formula, states: tuple[str, ...], labeling, pre: Pre,
             trace: WorkTrace | None = None) -> frozenset[str]:
    """Fixed-point evaluation shared by the role-based and classical checkers.

    ``pre(A, target, candidates)`` returns the candidates from which ``A``
    can enforce ``target`` in one step.
    """
    everything = frozenset(states)

    def step(coalition, target, candidates):
        # declaration order keeps enforce calls identical across engines
        return pre(coalition, target, [q for q in states if q in candidates])

    def sat(phi) -> frozenset[str]:
        if isinstance(phi, Prop):
            return frozenset(q for q in states if phi.name in labeling[q])
        if isinstance(phi, Const):
            return everything if phi.value else frozenset()
        if isinstance(phi, Not):
            return everything - sat(phi.arg)
        if isinstance(phi, And):
            return sat(phi.left) & sat(phi.right)
        if isinstance(phi, Or):
            return sat(phi.left) | sat(phi.right)
        if isinstance(phi, Implies):
            return (everything - sat(phi.left)) | sat(phi.right)
        if isinstance(phi, Next):
            return step(phi.coalition, sat(phi.arg), everything)
        if isinstance(phi, Globally):
            # greatest fixed point: shrink until every state can stay inside
            current = everything
            candidate = sat(phi.arg)
            while not current <= candidate:
                if trace is not None:
                    trace.fixpoint_iterations += 1
                current = candidate
                candidate = step(phi.coalition, current, current) & current
            return current
        if isinstance(phi, (Until, Eventually)):
            if isinstance(phi, Until):
                hold, goal = sat(phi.left), sat(phi.right)
            else:
                hold, goal = everything, sat(phi.arg)
            # least fixed point: grow from the goal states
            reached: frozenset[str] = frozenset()
            frontier = goal
            while not frontier <= reached:
                if trace is not None:
                    trace.fixpoint_iterations += 1
                reached = reached | frontier
                frontier = step(phi.coalition, reached, hold - reached)
            return reached
        raise TypeError(f"not a formula: {phi!r}")

    return sat(phi)


def mcheck(model: Rcgs, phi: Formula, trace: WorkTrace | None = None,
           early_exit: bool = True) -> frozenset[str]:
    """The set of states of ``model`` satisfying ``phi``."""
    start = time.perf_counter()

    def pre(coalition, target, candidates):
        return frozenset(q for q in candidates
                         if enforce(model, coalition, q, target, trace, early_exit))

    result = evaluate(phi, model.states, model.labeling, pre, trace)
    if trace is not None:
        trace.elapsed += time.perf_counter() - start
    return result


def force_set(model: Rcgs, q: str, coalition: Iterable[int]) -> set[frozenset[str]]:
    """The next-state sets ``coalition`` can guarantee at ``q``, one per A-profile."""
    return {successors(model, q, f) for f in enumerate_profiles(model, q, coalition)}


def strategy_count(model: Rcgs, coalition: Iterable[int]) -> int:
    coalition = frozenset(coalition)
    return math.prod(len(enumerate_profiles(model, q, coalition)) for q in model.states)


def mcheck_naive(model: Rcgs, phi: Formula, limit: int = DEFAULT_NAIVE_LIMIT) -> frozenset[str]:
    """Satisfaction by brute force over memoryless strategies.

    For each strategy of the formula's coalition the model is cut down to
    the transitions the strategy allows, and the path property is checked
    on that graph by plain search.  Raises StrategyLimitError when a
    coalition has more than ``limit`` strategies.
    """
    states = model.states
    everything = frozenset(states)
    step_cache: dict[tuple[str, frozenset[int]], list[frozenset[str]]] = {}

    def options(q, coalition):
        key = (q, coalition)
        if key not in step_cache:
            step_cache[key] = [successors(model, q, f) for f in enumerate_profiles(model, q, coalition)]
        return step_cache[key]

    def strategic(coalition, holds) -> frozenset[str]:
        coalition = frozenset(coalition)
        per_state = [options(q, coalition) for q in states]
        count = math.prod(len(o) for o in per_state)
        if count > limit:
            raise StrategyLimitError(f"coalition {sorted(coalition)} has {count} strategies, limit is {limit}")
        result: set[str] = set()
        for choice in itertools.product(*per_state):
            graph = dict(zip(states, choice))
            result.update(q for q in states if q not in result and holds(graph, q))
            if len(result) == len(states):
                break
        return frozenset(result)

    def sat(phi) -> frozenset[str]:
        if isinstance(phi, Prop):
            return frozenset(q for q in states if phi.name in model.labeling[q])
        if isinstance(phi, Const):
            return everything if phi.value else frozenset()
        if isinstance(phi, Not):
            return everything - sat(phi.arg)
        if isinstance(phi, And):
            return sat(phi.left) & sat(phi.right)
        if isinstance(phi, Or):
            return sat(phi.left) | sat(phi.right)
        if isinstance(phi, Implies):
            return (everything - sat(phi.left)) | sat(phi.right)
        if isinstance(phi, Next):
            good = sat(phi.arg)
            return strategic(phi.coalition, lambda g, q: g[q] <= good)
        if isinstance(phi, Globally):
            good = sat(phi.arg)
            return strategic(phi.coalition, lambda g, q: _reachable(g, q) <= good)
        if isinstance(phi, Until):
            hold, goal = sat(phi.left), sat(phi.right)
            return strategic(phi.coalition, lambda g, q: _all_paths_until(g, q, hold, goal))
        if isinstance(phi, Eventually):
            goal = sat(phi.arg)
            return strategic(phi.coalition, lambda g, q: _all_paths_until(g, q, everything, goal))
        raise TypeError(f"not a formula: {phi!r}")

    return sat(phi)


def _reachable(graph: dict[str, frozenset[str]], start: str) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        for nxt in graph[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _all_paths_until(graph, start, hold, goal) -> bool:
    """Does every infinite path from ``start`` meet ``goal``, staying in ``hold`` before that?

    A path fails by stepping onto a state in neither set, or by looping
    forever among ``hold`` states that are not goals.
    """
    if start in goal:
        return True
    if start not in hold:
        return False
    # depth-first search over non-goal hold states; a back edge is a bad loop
    on_stack = {start}
    done: set[str] = set()
    stack = [(start, iter(graph[start]))]
    while stack:
        node, it = stack[-1]
        for nxt in it:
            if nxt in goal:
                continue
            if nxt not in hold or nxt in on_stack:
                return False
            if nxt not in done:
                on_stack.add(nxt)
                stack.append((nxt, iter(graph[nxt])))
                break
        else:
            stack.pop()
            on_stack.discard(node)
            done.add(node)
    return True
