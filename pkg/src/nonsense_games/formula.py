"""Propositional formulas: AST, parser, printer and occurrence utilities.

Grammar (precedence from low to high)::

    impl  ::= disj ( '->' impl )?          right-assoc, desugared to ~a | b
    disj  ::= conj ( '|' conj )*           left-assoc
    conj  ::= unary ( '&' unary )*         left-assoc
    unary ::= ('~' | '!') unary | atom | '(' impl ')'
    atom  ::= [a-z][a-z0-9_]*

Unicode ``¬ ∧ ∨ →`` are accepted as aliases of ``~ & | ->``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Union

from .errors import ParseError

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")

Path = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        if not ATOM_RE.fullmatch(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True, slots=True)
class Not:
    child: Formula

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True, slots=True)
class And:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True, slots=True)
class Or:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return to_string(self)


Formula = Union[Atom, Not, And, Or]
Binary = (And, Or)


class Occurrence(NamedTuple):
    """A subformula together with the tree path at which it occurs."""

    path: Path
    formula: Formula


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, Not):
        return (f.child,)
    return (f.left, f.right)


def at(f: Formula, path: Path) -> Formula:
    """Return the subformula of ``f`` at ``path`` (0 = left/only child, 1 = right)."""
    node = f
    for step in path:
        kids = children(node)
        if step >= len(kids):
            raise IndexError(f"path {path} leaves the formula tree")
        node = kids[step]
    return node


def subformulas(f: Formula) -> list[Occurrence]:
    """All subformula occurrences of ``f`` in pre-order, ``f`` first."""
    out: list[Occurrence] = []
    stack: list[Occurrence] = [Occurrence((), f)]
    while stack:
        occ = stack.pop()
        out.append(occ)
        kids = children(occ.formula)
        for i in reversed(range(len(kids))):
            stack.append(Occurrence(occ.path + (i,), kids[i]))
    return out


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(o.formula.name for o in subformulas(f) if isinstance(o.formula, Atom))


def leaves(f: Formula) -> list[Occurrence]:
    """Atom occurrences in left-to-right order."""
    return [o for o in subformulas(f) if isinstance(o.formula, Atom)]


def depth(f: Formula) -> int:
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def size(f: Formula) -> int:
    return len(subformulas(f))


def negation_parity(f: Formula, path: Path) -> bool:
    """True when an odd number of negations sit strictly above ``path``."""
    flipped = False
    node = f
    for step in path:
        if isinstance(node, Not):
            flipped = not flipped
        node = children(node)[step]
    return flipped


# -- printing ---------------------------------------------------------------

_ASCII = {"not": "~", "and": " & ", "or": " | "}
_UNICODE = {"not": "¬", "and": " ∧ ", "or": " ∨ "}


def to_string(f: Formula, *, unicode: bool = False, outer_parens: bool = True) -> str:
    """Canonical fully-parenthesized rendering; ``parse(to_string(f)) == f``.

    With ``outer_parens=False`` the outermost binary connective is left bare,
    e.g. ``(p ∨ q) ∨ (r ∧ q)``.
    """
    sym = _UNICODE if unicode else _ASCII

    def go(node: Formula) -> str:
        if isinstance(node, Atom):
            return node.name
        if isinstance(node, Not):
            return sym["not"] + go(node.child)
        op = sym["and"] if isinstance(node, And) else sym["or"]
        return f"({go(node.left)}{op}{go(node.right)})"

    text = go(f)
    if not outer_parens and isinstance(f, Binary):
        text = text[1:-1]
    return text


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<imp>->|→)|(?P<not>[~!¬])|(?P<and>[&∧])|(?P<or>[|∨])"
    r"|(?P<lp>\()|(?P<rp>\))|(?P<atom>[a-z][a-z0-9_]*))"
)


class _Tok(NamedTuple):
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None or m.lastgroup is None:
            raise ParseError(i, "a connective, parenthesis or atom", text[i])
        start = m.start(m.lastgroup)
        toks.append(_Tok(m.lastgroup, m.group(m.lastgroup), start))
        i = m.end()
    toks.append(_Tok("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def impl(self) -> Formula:
        lhs = self.disj()
        if self.take("imp"):
            return Or(Not(lhs), self.impl())
        return lhs

    def disj(self) -> Formula:
        node = self.conj()
        while self.take("or"):
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.take("and"):
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        tok = self.tok
        if self.take("not"):
            return Not(self.unary())
        if self.take("atom"):
            return Atom(tok.text)
        if self.take("lp"):
            inner = self.impl()
            if not self.take("rp"):
                raise ParseError(self.tok.pos, "')'", self.tok.text or "end of input")
            return inner
        raise ParseError(tok.pos, "an atom, '~' or '('", tok.text or "end of input")


def parse(text: str) -> Formula:
    """Parse surface syntax into a :data:`Formula`.

    >>> to_string(parse("(p|q)|(r&q)"))
    '((p | q) | (r & q))'
    >>> parse("p -> q")
    Or(left=Not(child=Atom(name='p')), right=Atom(name='q'))
    """
    if not text.strip():
        raise ParseError(0, "a formula", "empty input")
    p = _Parser(text)
    f = p.impl()
    if p.tok.kind != "eof":
        raise ParseError(p.tok.pos, "end of input", p.tok.text)
    return f


def iter_paths(f: Formula) -> Iterator[Path]:
    for occ in subformulas(f):
        yield occ.path
