"""Abstract and concrete syntax for the explicit-knowledge language and its
extension with primitive awareness / explicit-knowledge operators.

The AST has seven node kinds: Top, Atom, Not, And, Know, Aware, ExplicitKnow.
Disjunction and implication are parser sugar, rewritten to Not/And at parse
time so there is a single canonical AST for evaluation.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache


class Lang(enum.Enum):
    """Language tag: L is the explicit-knowledge fragment (no Aware/ExplicitKnow
    grammar nodes), LKA additionally has primitive Aware, with ExplicitKnow
    defined from it."""

    L = "L"
    LKA = "LKA"


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Formula):
    __slots__ = ("_h", "_at")


@dataclass(frozen=True)
class Atom(Formula):
    __slots__ = ("name", "_h", "_at")
    name: str


@dataclass(frozen=True)
class Not(Formula):
    __slots__ = ("child", "_h", "_at")
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    __slots__ = ("left", "right", "_h", "_at")
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    __slots__ = ("agent", "child", "_h", "_at")
    agent: str
    child: Formula


@dataclass(frozen=True)
class Aware(Formula):
    __slots__ = ("agent", "child", "_h", "_at")
    agent: str
    child: Formula


@dataclass(frozen=True)
class ExplicitKnow(Formula):
    __slots__ = ("agent", "child", "_h", "_at")
    agent: str
    child: Formula


# Evaluator memo tables hash the same subterms many millions of times, so
# node hashes are computed once and stored on the instance.
_HASH_PARTS = {
    Top: lambda f: (0,),
    Atom: lambda f: (1, f.name),
    Not: lambda f: (2, f.child),
    And: lambda f: (3, f.left, f.right),
    Know: lambda f: (4, f.agent, f.child),
    Aware: lambda f: (5, f.agent, f.child),
    ExplicitKnow: lambda f: (6, f.agent, f.child),
}


def _cached_hash(self):
    try:
        return object.__getattribute__(self, "_h")
    except AttributeError:
        pass
    h = hash(_HASH_PARTS[type(self)](self))
    object.__setattr__(self, "_h", h)
    return h


for _cls in _HASH_PARTS:
    _cls.__hash__ = _cached_hash


TOP = Top()


def lnot(f: Formula) -> Formula:
    return Not(f)


def land(f: Formula, g: Formula) -> Formula:
    return And(f, g)


def lor(f: Formula, g: Formula) -> Formula:
    return Not(And(Not(f), Not(g)))


def implies(f: Formula, g: Formula) -> Formula:
    return Not(And(f, Not(g)))


def iff(f: Formula, g: Formula) -> Formula:
    return And(implies(f, g), implies(g, f))


def conj(formulas) -> Formula:
    """Conjunction of a list; TOP for the empty list."""
    formulas = list(formulas)
    if not formulas:
        return TOP
    out = formulas[0]
    for f in formulas[1:]:
        out = And(out, f)
    return out


def atoms_of(f: Formula) -> frozenset:
    """The set of atom names occurring in f, memoized on the node."""
    try:
        return object.__getattribute__(f, "_at")
    except AttributeError:
        pass
    if isinstance(f, Atom):
        out = frozenset((f.name,))
    elif isinstance(f, (Not, Know, Aware, ExplicitKnow)):
        out = atoms_of(f.child)
    elif isinstance(f, And):
        out = atoms_of(f.left) | atoms_of(f.right)
    else:
        out = frozenset()
    object.__setattr__(f, "_at", out)
    return out


def agents_of(f: Formula) -> frozenset:
    if isinstance(f, (Know, Aware, ExplicitKnow)):
        return frozenset((f.agent,)) | agents_of(f.child)
    if isinstance(f, Not):
        return agents_of(f.child)
    if isinstance(f, And):
        return agents_of(f.left) | agents_of(f.right)
    return frozenset()


def depth_of(f: Formula) -> int:
    if isinstance(f, (Top, Atom)):
        return 0
    if isinstance(f, And):
        return 1 + max(depth_of(f.left), depth_of(f.right))
    return 1 + depth_of(f.child)


def in_language(f: Formula, lang: Lang) -> bool:
    """True iff f uses only grammar nodes of lang."""
    if isinstance(f, (Aware, ExplicitKnow)):
        return lang is Lang.LKA and in_language(f.child, lang)
    if isinstance(f, (Not, Know)):
        return in_language(f.child, lang)
    if isinstance(f, And):
        return in_language(f.left, lang) and in_language(f.right, lang)
    return True


_EXPAND_MEMO = {}


def expand_defined(f: Formula, lang: Lang) -> Formula:
    """Rewrite defined operators to grammar primitives of lang.

    Under L, Aware(a, g) is the classical abbreviation
    K_a g or K_a not K_a g, expressed through Not/And; ExplicitKnow is first
    unfolded to Aware-and-Know and then the Aware part is unfolded too.
    Under LKA only ExplicitKnow is defined, as Aware-and-Know.
    Results are memoized so expansions share structure.
    """
    key = (f, lang)
    got = _EXPAND_MEMO.get(key)
    if got is None:
        got = _expand_defined(f, lang)
        _EXPAND_MEMO[key] = got
    return got


def _expand_defined(f, lang):
    if isinstance(f, (Top, Atom)):
        return f
    if isinstance(f, Not):
        return Not(expand_defined(f.child, lang))
    if isinstance(f, And):
        return And(expand_defined(f.left, lang), expand_defined(f.right, lang))
    if isinstance(f, Know):
        return Know(f.agent, expand_defined(f.child, lang))
    if isinstance(f, ExplicitKnow):
        g = expand_defined(f.child, lang)
        return expand_defined(And(Aware(f.agent, g), Know(f.agent, g)), lang)
    if isinstance(f, Aware):
        g = expand_defined(f.child, lang)
        if lang is Lang.LKA:
            return Aware(f.agent, g)
        k = Know(f.agent, g)
        return lor(k, Know(f.agent, Not(k)))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# concrete syntax


def to_text(f: Formula) -> str:
    """Canonical text form; round-trips through parse()."""
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + to_text(f.child)
    if isinstance(f, And):
        return f"({to_text(f.left)} & {to_text(f.right)})"
    if isinstance(f, Know):
        return f"K{{{f.agent}}} {to_text(f.child)}"
    if isinstance(f, Aware):
        return f"A{{{f.agent}}} {to_text(f.child)}"
    if isinstance(f, ExplicitKnow):
        return f"X{{{f.agent}}} {to_text(f.child)}"
    raise TypeError(f"not a formula: {f!r}")


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<modal>[KAX]\{(?P<agent>[^{}\s]+)\})
  | (?P<top>T\b)
  | (?P<atom>[a-z][a-zA-Z0-9_]*)
  | (?P<arrow>->)
  | (?P<op>[~&|()])
    """,
    re.VERBOSE,
)

_MODAL_NODE = {"K": Know, "A": Aware, "X": ExplicitKnow}


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            if m.group("modal"):
                tokens.append(("modal", (m.group("modal")[0], m.group("agent")), pos))
            elif m.group("top"):
                tokens.append(("top", "T", pos))
            elif m.group("atom"):
                tokens.append(("atom", m.group("atom"), pos))
            elif m.group("arrow"):
                tokens.append(("arrow", "->", pos))
            else:
                tokens.append((m.group("op"), m.group("op"), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over the precedence chain -> < | < & < unary."""

    def __init__(self, tokens, lang):
        self.tokens = tokens
        self.lang = lang
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse_formula(self):
        left = self.parse_or()
        if self.peek()[0] == "arrow":
            self.advance()
            right = self.parse_formula()  # right associative
            return implies(left, right)
        return left

    def parse_or(self):
        out = self.parse_and()
        while self.peek()[0] == "|":
            self.advance()
            out = lor(out, self.parse_and())
        return out

    def parse_and(self):
        out = self.parse_unary()
        while self.peek()[0] == "&":
            self.advance()
            out = And(out, self.parse_unary())
        return out

    def parse_unary(self):
        kind, value, pos = self.peek()
        if kind == "~":
            self.advance()
            return Not(self.parse_unary())
        if kind == "modal":
            self.advance()
            letter, agent = value
            if letter in ("A", "X") and self.lang is Lang.L:
                raise ParseError(
                    f"operator {letter}{{{agent}}} is not a grammar primitive of L", pos
                )
            return _MODAL_NODE[letter](agent, self.parse_unary())
        if kind == "top":
            self.advance()
            return TOP
        if kind == "atom":
            self.advance()
            return Atom(value)
        if kind == "(":
            self.advance()
            inner = self.parse_formula()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {value!r}", pos)


def parse(text: str, lang: Lang = Lang.LKA) -> Formula:
    parser = _Parser(_tokenize(text), lang)
    f = parser.parse_formula()
    end = parser.advance()
    if end[0] != "end":
        raise ParseError(f"trailing input {end[1]!r}", end[2])
    return f


# ---------------------------------------------------------------------------
# bounded enumeration


@lru_cache(maxsize=256)
def _enumerate_cached(atoms, agents, depth, lang):
    atoms = sorted(atoms)
    agents = sorted(agents)
    out = [TOP] + [Atom(p) for p in atoms]
    exact = {0: list(out)}  # formulas of AST depth exactly d
    for d in range(1, depth + 1):
        prev = exact[d - 1]
        level = [Not(f) for f in prev]
        n = len(out)
        index = {id(f): i for i, f in enumerate(out)}
        # ordered left <= right by enumeration index, at least one child of
        # depth exactly d-1, so each pair appears at exactly one level
        prev_ids = {id(f) for f in prev}
        for i in range(n):
            for j in range(i, n):
                if id(out[i]) in prev_ids or id(out[j]) in prev_ids:
                    level.append(And(out[i], out[j]))
        for a in agents:
            level.extend(Know(a, f) for f in prev)
        if lang is Lang.LKA:
            for a in agents:
                level.extend(Aware(a, f) for f in prev)
        exact[d] = level
        out = out + level
    return tuple(out)


def enumerate_formulas(atoms, agents, depth: int, lang: Lang = Lang.L):
    """Deterministic, duplicate-free sequence of all formulas of AST depth at
    most `depth` over the given atoms and agents.

    Ordered by depth, then node kind (Top, atoms, Not, And, Know, Aware), then
    by the enumeration indices of the subformulas; And arguments are ordered
    (left index <= right index) to skip commutative duplicates. The depth-d
    sequence is a prefix of the depth-(d+1) sequence. Purely syntactic:
    semantically redundant formulas are kept.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if not atoms or not agents:
        raise ValueError("atoms and agents must be nonempty")
    return list(_enumerate_cached(frozenset(atoms), frozenset(agents), depth, lang))
