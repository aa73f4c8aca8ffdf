"""Modal formulas: syntax tree, text syntax, and the named schemes.

Grammar (ASCII)::

    imp   := or ("->" imp)?                    right associative
    or    := and ("|" and)*                    left associative
    and   := unary ("&" unary)*                left associative
    unary := ("~" | "<>" | "[]" | "<*>" | "[*]") unary | atom
    atom  := var | "T" | "F" | "(" imp ")"
    var   := [a-z][a-zA-Z0-9_]*

``<*>φ`` and ``[*]φ`` are sugar and are expanded on parsing to ``φ | <>φ``
and ``φ & []φ``.  The tree therefore only has nine node kinds.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import ParseError


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Var(Formula):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Top(Formula):
    def __str__(self):
        return "T"


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    def __str__(self):
        return "F"


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Dia(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Box(Formula):
    arg: Formula


TOP = Top()
BOT = Bot()


def DiaStar(phi: Formula) -> Formula:
    return Or(phi, Dia(phi))


def BoxStar(phi: Formula) -> Formula:
    return And(phi, Box(phi))


def conj(parts: Sequence[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``T``."""
    if not parts:
        return TOP
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def variables(phi: Formula) -> frozenset[str]:
    found = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            found.add(f.name)
        elif isinstance(f, (Not, Dia, Box)):
            stack.append(f.arg)
        elif isinstance(f, (And, Or, Imp)):
            stack.append(f.left)
            stack.append(f.right)
    return frozenset(found)


def depth(phi: Formula) -> int:
    if isinstance(phi, (Var, Top, Bot)):
        return 0
    if isinstance(phi, (Not, Dia, Box)):
        return 1 + depth(phi.arg)
    return 1 + max(depth(phi.left), depth(phi.right))


def count_dia(phi: Formula) -> int:
    if isinstance(phi, Dia):
        return 1 + count_dia(phi.arg)
    if isinstance(phi, (Not, Box)):
        return count_dia(phi.arg)
    if isinstance(phi, (And, Or, Imp)):
        return count_dia(phi.left) + count_dia(phi.right)
    return 0


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<op><\*>|\[\*\]|<>|\[\]|->|[~&|()])|(?P<const>[TF])(?![a-zA-Z0-9_])"
    r"|(?P<var>[a-z][a-zA-Z0-9_]*))"
)

_UNARY = {"~": Not, "<>": Dia, "[]": Box, "<*>": DiaStar, "[*]": BoxStar}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", pos)

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[1] == "|":
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek()[1] == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "op" and val in _UNARY:
            self.take()
            return _UNARY[val](self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, val, pos = self.take()
        if kind == "var":
            return Var(val)
        if kind == "const":
            return TOP if val == "T" else BOT
        if kind == "op" and val == "(":
            inner = self.imp()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"expected a formula, found {found}", pos)


def parse(text: str) -> Formula:
    """Parse ``text`` into a :class:`Formula`.

    Raises :class:`ParseError` (carrying the offending offset) on malformed
    or empty input.
    """
    p = _Parser(text)
    if p.peek()[0] == "end":
        raise ParseError("empty formula", 0)
    phi = p.imp()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return phi


# --------------------------------------------------------------- printing

_IMP, _OR, _AND, _UNARY_PREC, _ATOM = 1, 2, 3, 4, 5


def _star(phi: Formula) -> tuple[str, Formula] | None:
    if isinstance(phi, Or) and isinstance(phi.right, Dia) and phi.right.arg == phi.left:
        return "<*>", phi.left
    if isinstance(phi, And) and isinstance(phi.right, Box) and phi.right.arg == phi.left:
        return "[*]", phi.left
    return None


def _fmt(phi: Formula, sugar: bool) -> tuple[str, int]:
    if isinstance(phi, Var):
        return phi.name, _ATOM
    if isinstance(phi, Top):
        return "T", _ATOM
    if isinstance(phi, Bot):
        return "F", _ATOM
    if sugar:
        star = _star(phi)
        if star is not None:
            op, arg = star
            return op + _wrap(arg, _UNARY_PREC, sugar), _UNARY_PREC
    if isinstance(phi, Not):
        return "~" + _wrap(phi.arg, _UNARY_PREC, sugar), _UNARY_PREC
    if isinstance(phi, Dia):
        return "<>" + _wrap(phi.arg, _UNARY_PREC, sugar), _UNARY_PREC
    if isinstance(phi, Box):
        return "[]" + _wrap(phi.arg, _UNARY_PREC, sugar), _UNARY_PREC
    if isinstance(phi, And):
        return (_wrap(phi.left, _AND, sugar) + " & " + _wrap(phi.right, _AND + 1, sugar)), _AND
    if isinstance(phi, Or):
        return (_wrap(phi.left, _OR, sugar) + " | " + _wrap(phi.right, _OR + 1, sugar)), _OR
    if isinstance(phi, Imp):
        return (_wrap(phi.left, _IMP + 1, sugar) + " -> " + _wrap(phi.right, _IMP, sugar)), _IMP
    raise TypeError(f"not a formula: {phi!r}")


def _wrap(phi: Formula, need: int, sugar: bool) -> str:
    text, prec = _fmt(phi, sugar)
    return text if prec >= need else f"({text})"


def to_text(phi: Formula, sugar: bool = False) -> str:
    """Render ``phi`` with parentheses only where precedence requires.

    With ``sugar=True`` subterms of the shape ``φ | <>φ`` and ``φ & []φ``
    are printed as ``<*>φ`` and ``[*]φ``.
    """
    return _fmt(phi, sugar)[0]


# ---------------------------------------------------------------- schemes

def fresh_vars(k: int, prefix: str = "p") -> list[Var]:
    return [Var(f"{prefix}{i}") for i in range(k)]


def _check_arity(n: int, args: Sequence[Formula]):
    if n < 0:
        raise ValueError(f"scheme index must be >= 0, got {n}")
    if len(args) != n + 1:
        raise ValueError(f"scheme of index {n} takes {n + 1} formulas, got {len(args)}")


def scheme_P(n: int, args: Sequence[Formula]) -> Formula:
    """The path formula <>(a1 & <>(a2 & ... & <>(an & <>a0)...)); ``<>a0`` for n = 0."""
    _check_arity(n, args)
    out: Formula = Dia(args[0])
    for i in range(n, 0, -1):
        out = Dia(And(args[i], out))
    return out


def scheme_D(n: int, args: Sequence[Formula]) -> Formula:
    """Pairwise disjointness of ``args``: conjunction of ~(ai & aj) for i < j."""
    _check_arity(n, args)
    parts = [Not(And(args[i], args[j])) for i in range(n + 1) for j in range(i + 1, n + 1)]
    return conj(parts)


def scheme_C(n: int, args: Sequence[Formula] | None = None) -> Formula:
    """The circumference scheme of index ``n``; fresh variables p0..pn by default."""
    if args is None:
        args = fresh_vars(n + 1)
    _check_arity(n, args)
    a0 = args[0]
    return Imp(BoxStar(scheme_D(n, args)),
               Imp(Dia(a0), Dia(And(a0, Not(scheme_P(n, args))))))


_p, _q = Var("p"), Var("q")

_AXIOMS = {
    "K": Imp(Box(Imp(_p, _q)), Imp(Box(_p), Box(_q))),
    "4": Imp(Dia(Dia(_p)), Dia(_p)),
    "T": Imp(Box(_p), _p),
    "D": Dia(TOP),
    "E": Or(Box(BOT), Dia(Box(BOT))),
    "Loeb": Imp(Box(Imp(Box(_p), _p)), Box(_p)),
    "Grz": Imp(Box(Imp(Box(Imp(_p, Box(_p))), _p)), Box(_p)),
    "M": Imp(Box(Dia(_p)), Dia(Box(_p))),
    "M_dia": Dia(Or(Box(_p), Box(Not(_p)))),
    "M_star": DiaStar(Or(BoxStar(_p), BoxStar(Not(_p)))),
}

AXIOM_NAMES = tuple(_AXIOMS)


def named_axiom(name: str) -> Formula:
    try:
        return _AXIOMS[name]
    except KeyError:
        raise ValueError(f"unknown axiom {name!r}; known: {', '.join(AXIOM_NAMES)}") from None


# ------------------------------------------------------------ random terms

def random_formula(rng: random.Random, max_depth: int,
                   names: Sequence[str] = ("p", "q"), const_weight: float = 0.1) -> Formula:
    """Random formula of depth at most ``max_depth`` over ``names``."""
    if max_depth <= 0 or rng.random() < 0.2:
        if rng.random() < const_weight:
            return rng.choice((TOP, BOT))
        return Var(rng.choice(names))
    kind = rng.randrange(6)
    sub = max_depth - 1
    if kind == 0:
        return Not(random_formula(rng, sub, names, const_weight))
    if kind == 1:
        return Dia(random_formula(rng, sub, names, const_weight))
    if kind == 2:
        return Box(random_formula(rng, sub, names, const_weight))
    cls = (And, Or, Imp)[kind - 3]
    return cls(random_formula(rng, sub, names, const_weight),
               random_formula(rng, sub, names, const_weight))
