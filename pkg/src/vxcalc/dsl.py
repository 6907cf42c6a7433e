"""A small expression language for states.

Grammar (whitespace is insignificant)::

    expr    := sum [ '_(' int ')' expr ]        # n-th product, right associative
    sum     := term ( '+' term )*
    term    := factor+
    factor  := number | var [ '^' int ] | mode | '|0>' | 'd' '(' expr ')' | '(' expr ')'
    mode    := ('a' | 'b' | 'h') '[' int ']' '(' int ')'
    number  := ['-'] digits [ '/' digits ]

Factors act right to left on the rightmost one, which must be a state
(``|0>``, ``d(...)`` or a parenthesised expression); if it is not, ``|0>`` is
appended.  A variable acts as multiplication by that coordinate and modes use
the conformal index: ``a[1](-1)|0>`` is the vector field d/dx1.  The product
``u _(n) v`` uses the n-th product index.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .fock import KIND_CODES, KIND_NAMES, FockSpace, GeneratorTable, State, translate
from .products import act


class DslSyntaxError(ValueError):
    def __init__(self, message: str, column: int, text: str):
        self.column = column
        self.text = text
        super().__init__(f"syntax error at column {column}: {message}\n  {text}\n  {' ' * column}^")


class DslEvalError(ValueError):
    pass


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    power: int = 1


@dataclass(frozen=True)
class Mode:
    kind: str
    index: int
    n: int


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class Deriv:
    arg: "Expr"


@dataclass(frozen=True)
class Group:
    arg: "Expr"


Factor = Union[Num, Var, Mode, Vacuum, Deriv, Group]


@dataclass(frozen=True)
class Term:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Product:
    left: Sum
    n: int
    right: "Expr"


Expr = Union[Sum, Product]


# -- lexer ------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<vac>\|0>)
  | (?P<prod>_\()
  | (?P<num>-?\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[-+()\[\]^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise DslSyntaxError(message, tok.pos, self.text)

    def take(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = repr(text) if text is not None else kind
            got = "end of input" if t.kind == "end" else repr(t.text)
            self.error(f"expected {want}, found {got}")
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def integer(self) -> int:
        t = self.take("num")
        if "/" in t.text:
            self.error("expected an integer", t)
        return int(t.text)

    def expr(self) -> Expr:
        left = self.sum()
        if self.at("prod"):
            self.i += 1
            n = self.integer()
            self.take("op", ")")
            return Product(left, n, self.expr())
        return left

    def sum(self) -> Sum:
        terms = [self.term()]
        while self.at("op", "+"):
            self.i += 1
            terms.append(self.term())
        return Sum(tuple(terms))

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("num", "ident", "vac") or (t.kind == "op" and t.text == "(")

    def term(self) -> Term:
        if not self._starts_factor():
            got = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            self.error(f"expected a term, found {got}")
        factors = []
        while self._starts_factor():
            factors.append(self.factor())
        return Term(tuple(factors))

    def factor(self) -> Factor:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(Fraction(t.text))
        if t.kind == "vac":
            self.i += 1
            return Vacuum()
        if t.kind == "op":  # '('
            self.i += 1
            e = self.expr()
            self.take("op", ")")
            return Group(e)
        self.i += 1
        name = t.text
        if self.at("op", "["):
            if name not in ("a", "b", "h"):
                self.error(f"unknown generator kind {name!r}", t)
            self.i += 1
            index = self.integer()
            self.take("op", "]")
            self.take("op", "(")
            n = self.integer()
            self.take("op", ")")
            if index < 1:
                self.error("generator indices start at 1", t)
            return Mode(name, index, n)
        if name == "d" and self.at("op", "("):
            self.i += 1
            e = self.expr()
            self.take("op", ")")
            return Deriv(e)
        power = 1
        if self.at("op", "^"):
            self.i += 1
            power = self.integer()
        return Var(name, power)


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    if not p.at("end"):
        p.error(f"unexpected {p.tok.text!r}")
    return e


# -- printer ------------------------------------------------------------------

def to_text(node) -> str:
    if isinstance(node, Product):
        return f"{to_text(node.left)} _({node.n}) {to_text(node.right)}"
    if isinstance(node, Sum):
        return " + ".join(to_text(t) for t in node.terms)
    if isinstance(node, Term):
        return " ".join(to_text(f) for f in node.factors)
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name if node.power == 1 else f"{node.name}^{node.power}"
    if isinstance(node, Mode):
        return f"{node.kind}[{node.index}]({node.n})"
    if isinstance(node, Vacuum):
        return "|0>"
    if isinstance(node, Deriv):
        return f"d({to_text(node.arg)})"
    if isinstance(node, Group):
        return f"({to_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation --------------------------------------------------------------

def _is_state_factor(f) -> bool:
    return isinstance(f, (Vacuum, Deriv, Group))


def evaluate(node, space) -> State:
    """Evaluate an expression to a state of ``space`` (a FockSpace or module)."""
    if isinstance(space, GeneratorTable):
        space = FockSpace(space)
    ring = space.ring
    if isinstance(node, Product):
        left = evaluate(node.left, space)
        right = evaluate(node.right, space)
        return act(space, left, node.n, right)
    if isinstance(node, Sum):
        out = State(ring)
        for t in node.terms:
            out = out + evaluate(t, space)
        return out
    if isinstance(node, Term):
        factors = list(node.factors)
        if factors and _is_state_factor(factors[-1]):
            state = evaluate(factors.pop(), space)
        else:
            state = State.vacuum(ring)
        for f in reversed(factors):
            state = _apply_factor(f, state, space)
        return state
    if isinstance(node, Vacuum):
        return State.vacuum(ring)
    if isinstance(node, Deriv):
        return translate(evaluate(node.arg, space))
    if isinstance(node, Group):
        return evaluate(node.arg, space)
    return _apply_factor(node, State.vacuum(ring), space)


def _apply_factor(f, state: State, space) -> State:
    ring = space.ring
    if isinstance(f, Num):
        return state * f.value
    if isinstance(f, Var):
        if f.name not in ring.names:
            raise DslEvalError(f"unknown variable {f.name!r}; chart variables are {', '.join(ring.names)}")
        return state.times_poly(ring.var(f.name, f.power))
    if isinstance(f, Mode):
        kind = KIND_CODES[f.kind]
        try:
            space.table.check(kind, f.index - 1)
        except KeyError as exc:
            raise DslEvalError(str(exc.args[0])) from None
        return space.mode(kind, f.index - 1, f.n, state)
    raise DslEvalError(f"{to_text(f)} is a state and cannot act on another state; use _(n)")


def parse_state(text: str, space) -> State:
    return evaluate(parse_expr(text), space)


def state_to_text(s: State) -> str:
    """Render a state in DSL syntax (parses back to the same state)."""
    if not s.terms:
        return "0 |0>"
    parts = []
    for (mono, exp), c in s.sorted_terms():
        bits = [str(c)] if c != 1 else []
        for name, e in zip(s.ring.names, exp):
            if e:
                bits.append(name if e == 1 else f"{name}^{e}")
        for kind, i, n in mono:
            bits.append(f"{KIND_NAMES[kind]}[{i + 1}]({n})")
        bits.append("|0>")
        parts.append(" ".join(bits))
    return " + ".join(parts)
