"""Abstract syntax, parser and printer for FO/MSO sentences about graphs.

Grammar (lowest to highest precedence)::

    formula  := iff
    iff      := implies ('<->' implies)*          left-assoc
    implies  := or ('->' implies)?                right-assoc
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '!' unary
              | ('exists' | 'forall') VAR unary
              | ('existsSet' | 'forallSet') SETVAR unary
              | '(' formula ')'
              | 'true' | 'false'
              | atom
    atom     := VAR '~' VAR | VAR '=' VAR | SETVAR '(' VAR ')'

First-order variables start with a lower-case letter, set variables with an
upper-case letter; ``exists X`` on a set variable is a set quantifier.  A
quantifier binds a single unary formula, so ``exists x A & B`` reads as
``(exists x A) & B``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass


class LogicSyntaxError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} at position {pos}")


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Adj(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class Eq(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class Mem(Formula):
    X: str
    x: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsSet(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallSet(Formula):
    var: str
    body: Formula


QUANTIFIERS = (Exists, Forall, ExistsSet, ForallSet)
Sentence = Formula


def is_set_var(name: str) -> bool:
    return name[:1].isupper()


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, Const):
        return set()
    if isinstance(f, (Adj, Eq)):
        return {f.x, f.y}
    if isinstance(f, Mem):
        return {f.X, f.x}
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or)):
        return set().union(*(free_variables(p) for p in f.parts))
    if isinstance(f, (Implies, Iff)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def check_sentence(f: Formula) -> Formula:
    free = free_variables(f)
    if free:
        raise LogicSyntaxError(f"unbound variable(s): {', '.join(sorted(free))}")
    return f


# ----------------------------------------------------------------------------
# printer

_BINARY = (And, Or, Implies, Iff)


def _wrap(f: Formula) -> str:
    s = to_text(f)
    return f"({s})" if isinstance(f, _BINARY) else s


def to_text(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Adj):
        return f"{f.x} ~ {f.y}"
    if isinstance(f, Eq):
        return f"{f.x} = {f.y}"
    if isinstance(f, Mem):
        return f"{f.X}({f.x})"
    if isinstance(f, Not):
        inner = to_text(f.body)
        return f"!({inner})" if isinstance(f.body, (_BINARY, Adj, Eq)) else f"!{inner}"
    if isinstance(f, And):
        return " & ".join(_wrap(p) for p in f.parts)
    if isinstance(f, Or):
        return " | ".join(_wrap(p) for p in f.parts)
    if isinstance(f, Implies):
        return f"{_wrap(f.left)} -> {_wrap(f.right)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.left)} <-> {_wrap(f.right)}"
    if isinstance(f, (Exists, ExistsSet)):
        return f"exists {f.var} {_wrap(f.body)}"
    if isinstance(f, (Forall, ForallSet)):
        return f"forall {f.var} {_wrap(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


# ----------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(<->|->|[~=!&|()]|[A-Za-z_][A-Za-z0-9_]*)")
_KEYWORDS = {"exists", "forall", "existsSet", "forallSet", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise LogicSyntaxError(f"unexpected character {text[bad]!r}", bad)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.end = len(text)

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else self.end

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise LogicSyntaxError("unexpected end of input", self.pos())
        if expected is not None and tok != expected:
            raise LogicSyntaxError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def ident(self, want_set: bool | None = None) -> str:
        p = self.pos()
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok in _KEYWORDS:
            raise LogicSyntaxError(f"expected a variable, found {tok!r}", p)
        if want_set is True and not is_set_var(tok):
            raise LogicSyntaxError(f"{tok!r} is not a set variable", p)
        if want_set is False and is_set_var(tok):
            raise LogicSyntaxError(f"{tok!r} is a set variable, expected a vertex variable", p)
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() is not None:
            raise LogicSyntaxError(f"unexpected {self.peek()!r}", self.pos())
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.implies())
        return f

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("exists", "forall"):
            self.take()
            var = self.ident()
            body = self.unary()
            if is_set_var(var):
                return (ExistsSet if tok == "exists" else ForallSet)(var, body)
            return (Exists if tok == "exists" else Forall)(var, body)
        if tok in ("existsSet", "forallSet"):
            self.take()
            var = self.ident(want_set=True)
            return (ExistsSet if tok == "existsSet" else ForallSet)(var, self.unary())
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        return self.atom()

    def atom(self) -> Formula:
        p = self.pos()
        name = self.ident()
        if is_set_var(name):
            self.take("(")
            x = self.ident(want_set=False)
            self.take(")")
            return Mem(name, x)
        op = self.peek()
        if op not in ("~", "="):
            raise LogicSyntaxError(f"expected '~' or '=' after {name!r}", self.pos() if op is not None else p)
        self.take()
        other = self.ident(want_set=False)
        return Adj(name, other) if op == "~" else Eq(name, other)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


def parse_sentence(text: str) -> Formula:
    """Parse a closed FO/MSO sentence; raises LogicSyntaxError on any problem."""
    f = parse_formula(text)
    _check_scopes(f, text)
    return f


def _check_scopes(f: Formula, text: str):
    # position is the first textual occurrence of the offending name
    free = free_variables(f)
    if free:
        name = sorted(free)[0]
        m = re.search(rf"\b{re.escape(name)}\b", text)
        raise LogicSyntaxError(f"unbound variable {name!r}", m.start() if m else None)
