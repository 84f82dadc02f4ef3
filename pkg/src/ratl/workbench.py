"""Model generators, size statistics and instrumented checking runs."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .bridge import Cgs, cgs_mcheck, translate, tuple_count
from .checker import WorkTrace, mcheck
from .core import Rcgs, enumerate_profiles, enumerate_votes, profile_count
from .formula import (
    And, Const, Eventually, Formula, Globally, Implies, Next, Not, Or, Prop, Until,
)

TRAIN_PROPS = ("out_of_gate", "in_gate", "request", "grant")


def _train_labels(kind: int) -> frozenset[str]:
    return frozenset([
        {"out_of_gate"},
        {"out_of_gate", "request"},
        {"out_of_gate", "grant"},
        {"in_gate"},
    ][kind])


def gen_train_controller(n_trains: int) -> Rcgs:
    """Train/controller model: ``n_trains`` interchangeable trains and one controller.

    Agents ``1..n_trains`` are trains, agent ``n_trains + 1`` the controller.
    Train actions are numbered so that action 1 is the active one (request
    at q0, enter at q2, order the train in the tunnel out at q3).  The
    controller has reject, wait and grant at q1.  At q3 the trains have
    two actions and the controller one, which is what the transition
    table there needs.
    """
    if n_trains < 1:
        raise ValueError("need at least one train")
    n = n_trains
    trains = frozenset(range(1, n + 1))
    ctr = frozenset({n + 1})
    states = ("q0", "q1", "q2", "q3")
    actions = {"q0": (2, 1), "q1": (1, 3), "q2": (2, 1), "q3": (2, 1)}

    delta = {q: {} for q in states}
    for a in range(n + 1):
        key = ((a, n - a), (1,))
        delta["q0"][key] = "q1" if a >= 1 else "q0"
        delta["q2"][key] = "q0" if a == 0 else "q3" if a == 1 else "q2"
        delta["q3"][key] = "q0" if a >= 1 else "q3"
    for ctr_vote, target in (((1, 0, 0), "q0"), ((0, 1, 0), "q1"), ((0, 0, 1), "q2")):
        delta["q1"][((n,), ctr_vote)] = target

    return Rcgs(
        n_agents=n + 1,
        roles=("train", "ctr"),
        states=states,
        props=TRAIN_PROPS,
        labeling={q: _train_labels(i) for i, q in enumerate(states)},
        role_assignment={q: (trains, ctr) for q in states},
        action_counts=actions,
        transitions=delta,
        agent_names=tuple(f"t{i}" for i in range(1, n + 1)) + ("ctr",),
    )


def gen_autonomous_trains(n_trains: int) -> Rcgs:
    """Trains elect one of themselves, and the winner negotiates alone.

    State ``q0`` is shared; each train ``x`` owns a copy ``q1_x``, ``q2_x``,
    ``q3_x`` of the request/grant/tunnel states.  Roles are ``others``,
    ``selected`` and ``ctr``.  At ``q0`` every train votes for a candidate
    and a strict plurality winner moves the game to its ``q1_x``; ties
    stay at ``q0``.  At ``q1_x`` the controller rejects, waits or grants;
    at ``q2_x`` only the selected train acts (enter or relinquish); at
    ``q3_x`` any other train may order it out.
    """
    if n_trains < 2:
        raise ValueError("need at least two trains")
    n = n_trains
    trains = frozenset(range(1, n + 1))
    ctr = frozenset({n + 1})
    nobody = frozenset()
    states = ["q0"]
    labeling = {"q0": _train_labels(0)}
    assignment = {"q0": (trains, nobody, ctr)}
    actions = {"q0": (n, 1, 1)}
    delta: dict[str, dict] = {"q0": {}}

    for vote in enumerate_votes(n, n):
        top = max(vote)
        winners = [x for x, c in enumerate(vote, start=1) if c == top]
        delta["q0"][(vote, (0,), (1,))] = f"q1_{winners[0]}" if len(winners) == 1 else "q0"

    for x in range(1, n + 1):
        q1, q2, q3 = f"q1_{x}", f"q2_{x}", f"q3_{x}"
        states += [q1, q2, q3]
        roles_here = (trains - {x}, frozenset({x}), ctr)
        for q, kind in ((q1, 1), (q2, 2), (q3, 3)):
            labeling[q] = _train_labels(kind)
            assignment[q] = roles_here
        actions[q1] = (1, 1, 3)
        actions[q2] = (1, 2, 1)
        actions[q3] = (2, 1, 1)
        rest = n - 1
        delta[q1] = {
            ((rest,), (1,), (1, 0, 0)): "q0",
            ((rest,), (1,), (0, 1, 0)): q1,
            ((rest,), (1,), (0, 0, 1)): q2,
        }
        delta[q2] = {
            ((rest,), (1, 0), (1,)): q3,
            ((rest,), (0, 1), (1,)): "q0",
        }
        delta[q3] = {((a, rest - a), (1,), (1,)): "q0" if a >= 1 else q3 for a in range(rest + 1)}

    return Rcgs(
        n_agents=n + 1,
        roles=("others", "selected", "ctr"),
        states=tuple(states),
        props=TRAIN_PROPS,
        labeling=labeling,
        role_assignment=assignment,
        action_counts=actions,
        transitions=delta,
        agent_names=tuple(f"t{i}" for i in range(1, n + 1)) + ("ctr",),
    )


def degree_formula(n: int) -> int:
    """Out-degree of the election hub for ``n`` trains: ``(2n - 1)! / (n! (n - 1)!)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return math.factorial(2 * n - 1) // (math.factorial(n) * math.factorial(n - 1))


def members_power_bound(model: Rcgs, q: str) -> int:
    """``prod_r |R(q,r)| ** A(q,r)``."""
    return math.prod(len(m) ** k for m, k in zip(model.role_assignment[q], model.action_counts[q]))


def actions_power_bound(model: Rcgs, q: str) -> int:
    """``prod_r A(q,r) ** |R(q,r)|``; equal to the translated tuple count."""
    return math.prod(k ** len(m) for m, k in zip(model.role_assignment[q], model.action_counts[q]))


@dataclass
class StateSize:
    state: str
    profiles: int
    members_power: int
    actions_power: int
    tuples: int


@dataclass
class SizeReport:
    rows: list[StateSize]
    paired: bool = False

    @property
    def total_profiles(self) -> int:
        return sum(r.profiles for r in self.rows)

    @property
    def total_tuples(self) -> int:
        return sum(r.tuples for r in self.rows)

    def row(self, state: str) -> StateSize:
        for r in self.rows:
            if r.state == state:
                return r
        raise KeyError(state)

    def violations(self) -> list[str]:
        """States where a profile count exceeds one of its upper bounds."""
        out = []
        for r in self.rows:
            for name in ("members_power", "actions_power", "tuples"):
                if r.profiles > getattr(r, name):
                    out.append(f"{r.state}: profiles {r.profiles} > {name} {getattr(r, name)}")
        return out

    def to_records(self) -> str:
        """Machine-readable form: one ``key=value`` record per line."""
        lines = [
            f"state={r.state} profiles={r.profiles} members_power={r.members_power} "
            f"actions_power={r.actions_power} tuples={r.tuples}"
            for r in self.rows
        ]
        ratio = self.total_tuples / self.total_profiles
        lines.append(f"total profiles={self.total_profiles} tuples={self.total_tuples} ratio={ratio:.6g}"
                     f" paired={'yes' if self.paired else 'no'}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        headers = ("state", "profiles", "|R|^A", "A^|R|", "tuples", "tuples/profiles")
        body = [(r.state, str(r.profiles), str(r.members_power), str(r.actions_power),
                 str(r.tuples), f"{r.tuples / r.profiles:.3g}") for r in self.rows]
        body.append(("total", str(self.total_profiles), "", "", str(self.total_tuples),
                     f"{self.total_tuples / self.total_profiles:.3g}"))
        rows = [headers, *body]
        widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
        lines = []
        for row in rows:
            cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
            lines.append("  ".join(cells).rstrip())
        return "\n".join(lines) + "\n"


def size_report(model: Rcgs, paired: Cgs | None = None) -> SizeReport:
    """Exact per-state sizes of ``model`` and of its classical translation.

    Tuple counts are computed arithmetically unless the translated
    structure is passed in ``paired``, in which case they are read off it.
    """
    rows = []
    for q in model.states:
        tuples = paired.tuple_count(q) if paired is not None else tuple_count(model, q)
        rows.append(StateSize(q, profile_count(model, q), members_power_bound(model, q),
                              actions_power_bound(model, q), tuples))
    return SizeReport(rows, paired=paired is not None)


@dataclass
class Measurement:
    """Work counters for one formula on a model and, optionally, its translation."""

    states: frozenset[str]
    trace: WorkTrace
    cgs_trace: WorkTrace | None = None
    problems: list[str] = field(default_factory=list)

    def to_records(self) -> str:
        lines = [f"enforce_calls={self.trace.enforce_calls} extension_visits={self.trace.extension_visits} "
                 f"fixpoint_iterations={self.trace.fixpoint_iterations} elapsed={self.trace.elapsed:.6f}"]
        if self.cgs_trace is not None:
            lines.append(f"cgs_enforce_calls={self.cgs_trace.enforce_calls} "
                         f"cgs_tuple_visits={self.cgs_trace.extension_visits} elapsed={self.cgs_trace.elapsed:.6f}")
        lines += [f"problem={p}" for p in self.problems]
        return "\n".join(lines) + "\n"


def measure(model: Rcgs, phi: Formula, paired: bool = False, cgs: Cgs | None = None) -> Measurement:
    """Run the fixed-point checker with full (non-short-circuit) enforce loops and count work.

    Every enforce call must stay within ``|Prof(q)|**2`` extension visits.
    When paired with the translated structure the classical checker runs
    too; answers must agree, and each role-based call must visit no more
    extensions than the matching classical call reads tuples.  Breaches
    are listed in ``problems``.
    """
    trace = WorkTrace()
    states = mcheck(model, phi, trace=trace, early_exit=False)
    problems = [
        f"enforce at {c.state} for {sorted(c.coalition)} visited {c.visits} > {c.complete_profiles}**2"
        for c in trace.calls if c.visits > c.complete_profiles ** 2
    ]
    cgs_trace = None
    if paired or cgs is not None:
        cgs = cgs if cgs is not None else translate(model)
        cgs_trace = WorkTrace()
        cgs_states = cgs_mcheck(cgs, phi, trace=cgs_trace)
        if cgs_states != states:
            problems.append(f"classical answer {sorted(cgs_states)} differs from {sorted(states)}")
        elif len(cgs_trace.calls) != len(trace.calls):
            problems.append("classical run made a different number of enforce calls")
        else:
            for mine, theirs in zip(trace.calls, cgs_trace.calls):
                if mine.visits > theirs.visits:
                    problems.append(f"enforce at {mine.state}: {mine.visits} profile visits "
                                    f"> {theirs.visits} tuple visits")
            if trace.extension_visits > cgs_trace.extension_visits:
                problems.append("total profile visits exceed total tuple visits")
    return Measurement(states, trace, cgs_trace, problems)


def random_model(seed, n_agents: int = 3, n_states: int = 3, n_roles: int = 2,
                 max_actions: int = 3, props: tuple[str, ...] = ("p", "q", "r")) -> Rcgs:
    """A seeded random model that passes validation.

    Each agent gets a uniformly random role at each state (roles may be
    empty), each role 1..``max_actions`` actions, each complete profile a
    random target.
    """
    if not (1 <= n_agents <= 6 and 1 <= n_states <= 6 and 1 <= n_roles <= 3 and 1 <= max_actions <= 3):
        raise ValueError("random_model supports up to 6 agents, 6 states, 3 roles and 3 actions")
    rng = random.Random(seed)
    states = tuple(f"s{i}" for i in range(n_states))
    labeling = {q: frozenset(p for p in props if rng.random() < 0.5) for q in states}
    assignment = {}
    actions = {}
    for q in states:
        groups = [set() for _ in range(n_roles)]
        for a in range(1, n_agents + 1):
            groups[rng.randrange(n_roles)].add(a)
        assignment[q] = tuple(frozenset(g) for g in groups)
        actions[q] = tuple(rng.randint(1, max_actions) for _ in range(n_roles))
    model = Rcgs(
        n_agents=n_agents,
        roles=tuple(f"r{i}" for i in range(1, n_roles + 1)),
        states=states,
        props=tuple(props),
        labeling=labeling,
        role_assignment=assignment,
        action_counts=actions,
        transitions={},
    )
    for q in states:
        # bias towards few distinct targets so strategic formulas are not trivially false
        targets = rng.sample(states, rng.randint(1, len(states)))
        model.transitions[q] = {p: rng.choice(targets) for p in enumerate_profiles(model, q)}
    return model


def random_formula(rng: random.Random, props, n_agents: int, depth: int = 3) -> Formula:
    """A random formula with at most ``depth`` nested operators."""
    if depth <= 1 or rng.random() < 0.2:
        return Prop(rng.choice(list(props))) if rng.random() < 0.9 else Const(rng.random() < 0.5)

    def coalition():
        return frozenset(a for a in range(1, n_agents + 1) if rng.random() < 0.5)

    sub = lambda: random_formula(rng, props, n_agents, depth - 1)  # noqa: E731
    kind = rng.randrange(10)
    if kind == 0:
        return Not(sub())
    if kind == 1:
        return And(sub(), sub())
    if kind == 2:
        return Or(sub(), sub())
    if kind == 3:
        return Implies(sub(), sub())
    if kind in (4, 5):
        return Next(coalition(), sub())
    if kind == 6:
        return Globally(coalition(), sub())
    if kind == 7:
        return Eventually(coalition(), sub())
    return Until(coalition(), sub(), sub())
