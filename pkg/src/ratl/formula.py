"""ATL formulas: AST, parser and printer.

Concrete syntax (ASCII is canonical)::

    phi ::= name | true | false | ( phi )
          | ! phi | phi & phi | phi | phi | phi -> phi
          | <i,j,...> X phi | <...> G phi | <...> F phi
          | <...> ( phi U phi )

Precedence from tight to loose is ``!`` and the temporal operators, then
``&``, ``|`` and ``->`` (right associative).  ``<<A>>`` and the Unicode
brackets ``⟨⟨A⟩⟩`` are accepted for coalitions, as are ``¬ ∧ ∨ →`` and
``◯ □ ◇ 𝒰``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class BindError(ValueError):
    pass


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next:
    coalition: frozenset[int]
    arg: Formula


@dataclass(frozen=True)
class Globally:
    coalition: frozenset[int]
    arg: Formula


@dataclass(frozen=True)
class Eventually:
    coalition: frozenset[int]
    arg: Formula


@dataclass(frozen=True)
class Until:
    coalition: frozenset[int]
    left: Formula
    right: Formula


Formula = Union[Prop, Const, Not, And, Or, Implies, Next, Globally, Eventually, Until]
Strategic = (Next, Globally, Eventually, Until)

KEYWORDS = {"X", "G", "F", "U", "true", "false"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|<<|>>|[<>(),!&|]|→|¬|∧|∨|⟨⟨|⟩⟩|⟨|⟩|◯|□|◇|𝒰)
    """,
    re.VERBOSE,
)

_ALIASES = {
    "¬": "!", "∧": "&", "∨": "|", "→": "->",
    "<<": "<", ">>": ">", "⟨⟨": "<", "⟩⟩": ">", "⟨": "<", "⟩": ">",
    "◯": "X", "□": "G", "◇": "F", "𝒰": "U",
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        value = m.group()
        if kind == "op":
            value = _ALIASES.get(value, value)
            if value in KEYWORDS:
                kind = "ident"
        if kind != "ws":
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        found = "end of input" if tok[0] == "end" else repr(tok[1])
        raise FormulaSyntaxError(f"{message}, found {found}", tok[2], self.text)

    def expect(self, value: str) -> None:
        if self.peek()[1] != value or self.peek()[0] == "end":
            self.error(f"expected {value!r}")
        self.advance()

    def parse(self) -> Formula:
        phi = self.implication()
        if self.peek()[0] != "end":
            if self.peek()[1] == "U":
                self.error("'U' must appear as <A> (phi U psi)")
            self.error("unexpected token")
        return phi

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[1] == "|":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek()[1] == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "!":
            self.advance()
            return Not(self.unary())
        if value == "<":
            return self.strategic()
        if value == "(":
            self.advance()
            phi = self.implication()
            self.expect(")")
            return phi
        if kind == "ident":
            if value == "true":
                self.advance()
                return Const(True)
            if value == "false":
                self.advance()
                return Const(False)
            if value in KEYWORDS:
                self.error(f"operator {value!r} needs a coalition in front")
            self.advance()
            return Prop(value)
        self.error("expected a formula")

    def coalition(self) -> frozenset[int]:
        self.expect("<")
        members = []
        if self.peek()[1] != ">":
            while True:
                kind, value, pos = self.advance()
                if kind != "num":
                    self.error("malformed coalition: expected an agent number", (kind, value, pos))
                members.append(int(value))
                if self.peek()[1] == ",":
                    self.advance()
                    continue
                break
        if self.peek()[1] != ">":
            self.error("malformed coalition: expected ',' or '>'")
        self.advance()
        return frozenset(members)

    def strategic(self) -> Formula:
        coalition = self.coalition()
        kind, value, pos = self.peek()
        if value in ("X", "G", "F") and kind == "ident":
            self.advance()
            arg = self.unary()
            return {"X": Next, "G": Globally, "F": Eventually}[value](coalition, arg)
        if value == "(":
            self.advance()
            left = self.implication()
            if self.peek()[1] != "U":
                self.error("expected 'U' inside coalition scope")
            self.advance()
            right = self.implication()
            self.expect(")")
            return Until(coalition, left, right)
        self.error("unknown operator after coalition, expected X, G, F or (phi U psi)")


def parse_formula(text: str) -> Formula:
    """Parse ATL concrete syntax into a Formula.

    >>> parse_formula("<1> (a U b)")
    Until(coalition=frozenset({1}), left=Prop(name='a'), right=Prop(name='b'))
    """
    try:
        return _Parser(text).parse()
    except RecursionError:
        raise FormulaSyntaxError("formula nested too deeply", 0, text) from None


def _coalition_text(coalition: frozenset[int]) -> str:
    return "<" + ",".join(str(a) for a in sorted(coalition)) + ">"


def to_text(phi: Formula) -> str:
    """Print ``phi`` in canonical ASCII; binary connectives are always parenthesized."""
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Not):
        return "!" + to_text(phi.arg)
    if isinstance(phi, And):
        return f"({to_text(phi.left)} & {to_text(phi.right)})"
    if isinstance(phi, Or):
        return f"({to_text(phi.left)} | {to_text(phi.right)})"
    if isinstance(phi, Implies):
        return f"({to_text(phi.left)} -> {to_text(phi.right)})"
    if isinstance(phi, Until):
        return f"{_coalition_text(phi.coalition)} ({to_text(phi.left)} U {to_text(phi.right)})"
    op = {Next: "X", Globally: "G", Eventually: "F"}[type(phi)]
    return f"{_coalition_text(phi.coalition)} {op} {to_text(phi.arg)}"


def subformulas(phi: Formula):
    """Yield ``phi`` and all its subformulas, parents first."""
    yield phi
    for name in ("arg", "left", "right"):
        child = getattr(phi, name, None)
        if child is not None:
            yield from subformulas(child)


def depth(phi: Formula) -> int:
    children = [getattr(phi, n) for n in ("arg", "left", "right") if getattr(phi, n, None) is not None]
    return 1 + max((depth(c) for c in children), default=0)


def bind(phi: Formula, model) -> Formula:
    """Check coalitions and propositions of ``phi`` against ``model``.

    Works for any structure with ``n_agents`` and ``props``; returns ``phi``.
    """
    props = set(model.props)
    for sub in subformulas(phi):
        if isinstance(sub, Prop) and sub.name not in props:
            raise BindError(f"unknown proposition {sub.name!r}")
        coalition = getattr(sub, "coalition", None)
        if coalition is not None:
            bad = sorted(a for a in coalition if not 1 <= a <= model.n_agents)
            if bad:
                raise BindError(f"agents {bad} outside 1..{model.n_agents} in {to_text(sub)}")
    return phi


__all__ = [
    "And", "BindError", "Const", "Eventually", "Formula", "FormulaSyntaxError", "Globally",
    "Implies", "Next", "Not", "Or", "Prop", "Until", "bind", "depth", "parse_formula",
    "subformulas", "to_text",
]
