"""Text format for RCGS and CGS models.

A file starts with a header line naming the format version and the kind
of structure, followed by global declarations and one block per state::

    atl-model 1 kind = rcgs
    agents 3
    agent-names t1 t2 ctr
    roles train ctr
    props out_of_gate in_gate request grant

    state q0
      labels { out_of_gate }
      role train { 1, 2 } actions 2
      role ctr { 3 } actions 1
      (0,2);(1) -> q0
      default -> q1

A CGS file uses ``kind = cgs``, drops ``roles``, and gives each state an
``actions d1 d2 ...`` line with per-agent action counts; its transition
keys are 1-based action tuples such as ``(1,2,1) -> q1``.

``#`` starts a comment.  ``default -> q`` sends every unlisted key to ``q``
and is expanded when the file is loaded.
"""
from __future__ import annotations

import re

from .cgs import Cgs, validate_cgs
from .core import ModelError, Rcgs, enumerate_profiles, format_profile, validate

FORMAT_VERSION = 1

_TOKEN = re.compile(r"\s+|(?P<sym>->|[{}(),;=])|(?P<word>[A-Za-z0-9_.']+(?:-[A-Za-z0-9_.']+)*)")
_SYMBOLS = {"->", "{", "}", "(", ")", ",", ";", "="}


class ModelSyntaxError(ModelError):
    """A problem in a model file, located by 1-based line and column."""

    def __init__(self, message: str, line: int, col: int = 1):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, column {col}: {message}")


class ModelValidationError(ModelError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid model:\n  " + "\n  ".join(problems))


class _Line:
    def __init__(self, number: int, text: str):
        self.number = number
        self.tokens: list[tuple[str, int]] = []
        body = text.split("#", 1)[0]
        pos = 0
        while pos < len(body):
            m = _TOKEN.match(body, pos)
            if m is None:
                raise ModelSyntaxError(f"unexpected character {body[pos]!r}", number, pos + 1)
            if m.lastgroup:
                self.tokens.append((m.group(), pos + 1))
            pos = m.end()
        self.i = 0

    def error(self, message: str, at: int | None = None):
        i = self.i if at is None else at
        col = self.tokens[i][1] if i < len(self.tokens) else (
            self.tokens[-1][1] + len(self.tokens[-1][0]) if self.tokens else 1)
        raise ModelSyntaxError(message, self.number, col)

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, what: str = "a token") -> str:
        if self.i >= len(self.tokens):
            self.error(f"expected {what}, found end of line")
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        here = self.i
        if self.take(repr(value)) != value:
            self.error(f"expected {value!r}, found {self.tokens[here][0]!r}", here)

    def name(self, what: str = "a name") -> str:
        here = self.i
        tok = self.take(what)
        if tok in _SYMBOLS:
            self.error(f"expected {what}, found {tok!r}", here)
        return tok

    def integer(self, what: str = "an integer") -> int:
        here = self.i
        tok = self.take(what)
        if not (tok.isascii() and tok.isdigit()):
            self.error(f"expected {what}, found {tok!r}", here)
        if len(tok) > 6:
            self.error(f"{what} {tok} is too large", here)
        return int(tok)

    def rest_names(self, what: str) -> list[str]:
        out = []
        while self.peek() is not None:
            out.append(self.name(what))
        return out

    def done(self) -> None:
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r}")

    def name_set(self, what: str) -> list[str]:
        self.expect("{")
        items = []
        while self.peek() != "}":
            if self.peek() is None:
                self.error("expected '}'")
            if self.peek() == "," and items:
                self.take()
                continue
            items.append(self.name(what))
        self.take()
        return items

    def tuple_(self) -> tuple[int, ...]:
        self.expect("(")
        values = [self.integer("a count")]
        while self.peek() == ",":
            self.take()
            values.append(self.integer("a count"))
        self.expect(")")
        return tuple(values)


def _lines(text: str) -> list[_Line]:
    lines = [_Line(i, raw) for i, raw in enumerate(text.splitlines(), start=1)]
    return [ln for ln in lines if ln.tokens]


def _read_header(lines: list[_Line]) -> str:
    if not lines:
        raise ModelSyntaxError("empty model file", 1)
    ln = lines[0]
    if ln.peek() != "atl-model":
        ln.error("first line must be 'atl-model <version> kind = rcgs|cgs'")
    ln.take()
    here = ln.i
    version = ln.integer("a format version")
    if version != FORMAT_VERSION:
        ln.error(f"unsupported format version {version}", here)
    if ln.name("'kind'") != "kind":
        ln.error("expected 'kind'", ln.i - 1)
    ln.expect("=")
    here = ln.i
    kind = ln.name("a model kind")
    if kind not in ("rcgs", "cgs"):
        ln.error(f"unknown model kind {kind!r}", here)
    ln.done()
    return kind


def model_kind(text: str) -> str:
    """'rcgs' or 'cgs', read from the header line."""
    return _read_header(_lines(text))


class _Reader:
    """Shared parsing of global declarations and state blocks."""

    def __init__(self, text: str, kind: str):
        self.lines = _lines(text)
        found = _read_header(self.lines)
        if found != kind:
            raise ModelSyntaxError(f"expected kind = {kind}, file declares kind = {found}", self.lines[0].number)
        self.kind = kind
        self.n_agents: int | None = None
        self.agent_names: tuple[str, ...] | None = None
        self.roles: tuple[str, ...] | None = None
        self.props: tuple[str, ...] | None = None
        self.states: list[str] = []
        self.state_line: dict[str, int] = {}
        self.labeling: dict[str, frozenset[str]] = {}
        self.defaults: dict[str, str] = {}
        self.targets: list[tuple[str, _Line, int]] = []

    def globals_(self, ln: _Line, keyword: str) -> bool:
        if keyword == "agents":
            if self.n_agents is not None:
                ln.error("agent count declared twice", 0)
            self.n_agents = ln.integer("an agent count")
            if self.n_agents < 1:
                ln.error("agent count must be at least 1", 1)
        elif keyword == "agent-names":
            self.agent_names = tuple(ln.rest_names("an agent name"))
        elif keyword == "roles" and self.kind == "rcgs":
            self.roles = tuple(ln.rest_names("a role name"))
            if not self.roles:
                ln.error("at least one role is required")
            if len(set(self.roles)) != len(self.roles):
                ln.error("duplicate role name", 1)
        elif keyword == "props":
            self.props = tuple(ln.rest_names("a proposition name"))
            if len(set(self.props)) != len(self.props):
                ln.error("duplicate proposition name", 1)
        else:
            return False
        ln.done()
        return True

    def require_globals(self, ln: _Line) -> None:
        if self.n_agents is None:
            raise ModelSyntaxError("'agents' must be declared before the first state", ln.number)
        if self.kind == "rcgs" and self.roles is None:
            raise ModelSyntaxError("'roles' must be declared before the first state", ln.number)
        if self.props is None:
            self.props = ()
        if self.agent_names is not None and len(self.agent_names) != self.n_agents:
            raise ModelSyntaxError(
                f"{len(self.agent_names)} agent names for {self.n_agents} agents", ln.number)

    def start_state(self, ln: _Line) -> str:
        here = ln.i
        q = ln.name("a state name")
        ln.done()
        if q in self.state_line:
            ln.error(f"state {q!r} declared twice (first on line {self.state_line[q]})", here)
        self.states.append(q)
        self.state_line[q] = ln.number
        self.labeling[q] = frozenset()
        return q

    def labels(self, ln: _Line, q: str) -> None:
        start = ln.i
        names = ln.name_set("a proposition name")
        ln.done()
        unknown = [p for p in names if p not in self.props]
        if unknown:
            ln.error(f"undeclared proposition {unknown[0]!r}", start)
        self.labeling[q] = frozenset(names)

    def default(self, ln: _Line, q: str) -> None:
        ln.expect("->")
        here = ln.i
        target = ln.name("a target state")
        ln.done()
        if q in self.defaults:
            ln.error("default declared twice", 0)
        self.defaults[q] = target
        self.targets.append((target, ln, here))

    def arrow_target(self, ln: _Line) -> str:
        ln.expect("->")
        here = ln.i
        target = ln.name("a target state")
        ln.done()
        self.targets.append((target, ln, here))
        return target

    def check_targets(self) -> None:
        for target, ln, at in self.targets:
            if target not in self.state_line:
                ln.error(f"unknown state {target!r}", at)


def parse_model(text: str, check: bool = True) -> Rcgs:
    """Parse an RCGS file.

    Syntax problems, unknown names, and votes of the wrong length or total
    raise ModelSyntaxError with a line and column.  With ``check`` the
    result must also pass :func:`ratl.core.validate` (otherwise
    ModelValidationError); defaults are then expanded.
    """
    rd = _Reader(text, "rcgs")
    assignment: dict[str, list] = {}
    actions: dict[str, list] = {}
    transitions: dict[str, dict] = {}
    q = None
    for ln in rd.lines[1:]:
        keyword = ln.take()
        if q is None and rd.globals_(ln, keyword):
            continue
        if keyword == "state":
            if q is None:
                rd.require_globals(ln)
            elif None in assignment[q]:
                _missing_role(ln, rd, q, assignment[q])
            q = rd.start_state(ln)
            assignment[q] = [None] * len(rd.roles)
            actions[q] = [None] * len(rd.roles)
            transitions[q] = {}
        elif q is None:
            ln.error(f"unexpected {keyword!r} outside a state block", 0)
        elif keyword == "labels":
            rd.labels(ln, q)
        elif keyword == "role":
            if transitions[q] or q in rd.defaults:
                ln.error("roles must be declared before transitions", 0)
            here = ln.i
            role = ln.name("a role name")
            if role not in rd.roles:
                ln.error(f"unknown role {role!r}", here)
            r = rd.roles.index(role)
            if assignment[q][r] is not None:
                ln.error(f"role {role!r} declared twice in state {q!r}", here)
            members = [a for _, a in _numbers_in_set(ln)]
            ln.expect("actions")
            here = ln.i
            k = ln.integer("an action count")
            if k < 1:
                ln.error("action count must be positive", here)
            ln.done()
            assignment[q][r] = frozenset(members)
            actions[q][r] = k
        elif keyword == "default":
            rd.default(ln, q)
        elif keyword == "(":
            if None in assignment[q]:
                _missing_role(ln, rd, q, assignment[q])
            ln.i = 0
            profile = []
            for r in range(len(rd.roles)):
                if r:
                    ln.expect(";")
                here = ln.i
                vote = ln.tuple_()
                if len(vote) != actions[q][r]:
                    ln.error(f"vote for role {rd.roles[r]!r} needs {actions[q][r]} entries, got {len(vote)}", here)
                size = len(assignment[q][r])
                if sum(vote) != size:
                    ln.error(f"vote for role {rd.roles[r]!r} sums to {sum(vote)}, role has {size} agents", here)
                profile.append(vote)
            profile = tuple(profile)
            if profile in transitions[q]:
                ln.error(f"duplicate transition for {format_profile(profile)}", 0)
            transitions[q][profile] = rd.arrow_target(ln)
        else:
            ln.error(f"unknown keyword {keyword!r}", 0)
    if q is None:
        raise ModelSyntaxError("model declares no states", rd.lines[-1].number)
    if None in assignment[q]:
        _missing_role(rd.lines[-1], rd, q, assignment[q])
    rd.check_targets()

    model = Rcgs(
        n_agents=rd.n_agents,
        roles=rd.roles,
        states=tuple(rd.states),
        props=rd.props,
        labeling=rd.labeling,
        role_assignment={s: tuple(assignment[s]) for s in rd.states},
        action_counts={s: tuple(actions[s]) for s in rd.states},
        transitions=transitions,
        defaults=rd.defaults,
        agent_names=rd.agent_names,
    )
    if not check:
        return model
    problems = validate(model)
    if problems:
        raise ModelValidationError(problems)
    return model.expand_defaults()


def _numbers_in_set(ln: _Line):
    ln.expect("{")
    while ln.peek() != "}":
        if ln.peek() is None:
            ln.error("expected '}'")
        if ln.peek() == ",":
            ln.take()
            continue
        here = ln.i
        yield here, ln.integer("an agent number")
    ln.take()


def _missing_role(ln: _Line, rd: _Reader, q: str, assigned: list) -> None:
    missing = [rd.roles[r] for r, a in enumerate(assigned) if a is None]
    raise ModelSyntaxError(f"state {q!r} does not declare role {missing[0]!r}", ln.number)


def _names_line(keyword: str, names) -> str:
    return " ".join([keyword, *names]) if names else keyword


def serialize_model(model: Rcgs) -> str:
    """Canonical text for ``model``: every transition listed, no defaults."""
    out = [
        f"atl-model {FORMAT_VERSION} kind = rcgs",
        f"agents {model.n_agents}",
    ]
    if model.agent_names is not None:
        out.append(_names_line("agent-names", model.agent_names))
    out.append(_names_line("roles", model.roles))
    out.append(_names_line("props", model.props))
    for q in model.states:
        out.append("")
        out.append(f"state {q}")
        out.append("  labels { " + ", ".join(p for p in model.props if p in model.labeling[q]) + " }")
        for name, members, k in zip(model.roles, model.role_assignment[q], model.action_counts[q]):
            out.append(f"  role {name} {{ " + ", ".join(map(str, sorted(members))) + f" }} actions {k}")
        for profile in enumerate_profiles(model, q):
            out.append(f"  {format_profile(profile)} -> {model.delta(q, profile)}")
    return "\n".join(out).replace("{  }", "{ }") + "\n"


def parse_cgs(text: str, check: bool = True) -> Cgs:
    """Parse a CGS file (``kind = cgs``); same conventions as :func:`parse_model`."""
    rd = _Reader(text, "cgs")
    actions: dict[str, tuple[int, ...]] = {}
    transitions: dict[str, dict] = {}
    q = None
    for ln in rd.lines[1:]:
        keyword = ln.take()
        if q is None and rd.globals_(ln, keyword):
            continue
        if keyword == "state":
            if q is None:
                rd.require_globals(ln)
            elif q not in actions:
                raise ModelSyntaxError(f"state {q!r} has no 'actions' line", ln.number)
            q = rd.start_state(ln)
            transitions[q] = {}
        elif q is None:
            ln.error(f"unexpected {keyword!r} outside a state block", 0)
        elif keyword == "labels":
            rd.labels(ln, q)
        elif keyword == "actions":
            if q in actions:
                ln.error("actions declared twice", 0)
            counts = []
            while ln.peek() is not None:
                here = ln.i
                k = ln.integer("an action count")
                if k < 1:
                    ln.error("action count must be positive", here)
                counts.append(k)
            if len(counts) != rd.n_agents:
                ln.error(f"need {rd.n_agents} action counts, got {len(counts)}", 0)
            actions[q] = tuple(counts)
        elif keyword == "default":
            rd.default(ln, q)
        elif keyword == "(":
            if q not in actions:
                ln.error("'actions' must come before transitions", 0)
            ln.i = 0
            t = ln.tuple_()
            if len(t) != rd.n_agents:
                ln.error(f"action tuple needs {rd.n_agents} entries, got {len(t)}", 0)
            for a, (x, k) in enumerate(zip(t, actions[q]), start=1):
                if not 1 <= x <= k:
                    ln.error(f"agent {a} has actions 1..{k}, got {x}", 0)
            if t in transitions[q]:
                ln.error(f"duplicate transition for {t}", 0)
            transitions[q][t] = rd.arrow_target(ln)
        else:
            ln.error(f"unknown keyword {keyword!r}", 0)
    if q is None:
        raise ModelSyntaxError("model declares no states", rd.lines[-1].number)
    if q not in actions:
        raise ModelSyntaxError(f"state {q!r} has no 'actions' line", rd.lines[-1].number)
    rd.check_targets()

    model = Cgs(
        n_agents=rd.n_agents,
        states=tuple(rd.states),
        props=rd.props,
        labeling=rd.labeling,
        action_counts=actions,
        transitions=transitions,
        defaults=rd.defaults,
        agent_names=rd.agent_names,
    )
    if not check:
        return model
    problems = validate_cgs(model)
    if problems:
        raise ModelValidationError(problems)
    return model.expand_defaults()


def serialize_cgs(model: Cgs) -> str:
    out = [
        f"atl-model {FORMAT_VERSION} kind = cgs",
        f"agents {model.n_agents}",
    ]
    if model.agent_names is not None:
        out.append(_names_line("agent-names", model.agent_names))
    out.append(_names_line("props", model.props))
    for q in model.states:
        out.append("")
        out.append(f"state {q}")
        out.append("  labels { " + ", ".join(p for p in model.props if p in model.labeling[q]) + " }")
        out.append("  actions " + " ".join(map(str, model.action_counts[q])))
        for t in model.tuples(q):
            out.append("  (" + ",".join(map(str, t)) + f") -> {model.delta(q, t)}")
    return "\n".join(out).replace("{  }", "{ }") + "\n"
