"""
formula.py - elimdist: Prenex First-Order Formulas on Graphs

Core Idea: "Quantifiers in Front, Atoms Behind"
===============================================
Every property we measure distances to is a prenex sentence: a run of
quantifiers followed by a quantifier-free matrix over two kinds of atoms,

    x = y      (same vertex)
    x ~ y      (adjacent vertices)

    A u A v E w ((u = v) | (u ~ v) | ((u ~ w) & (v ~ w)))
    '--prefix--' '-------------- matrix ---------------'

The prefix decides how hard the property is. Maximal runs of one quantifier
kind are blocks; their number is the level, the first block's kind the side:

    | Prefix            | Blocks       | Class |
    |-------------------|--------------|-------|
    | (none)            | -            | S0    |
    | A x A y           | [A]          | P1    |
    | A u A v E w       | [A][E]       | P2    |
    | E x A y E z       | [E][A][E]    | S3    |

The unbreakable-graph solvers need the S3 shape E x... A y... E z...
with every block non-empty, so padding with fresh dummy variables
(`_d0`, `_d1`, ...) is an explicit operation here.

Concrete syntax (whitespace tolerant, LL(1), "#" starts a comment):

    formula := free? quant* expr
    free    := "[" IDENT ("," IDENT)* "]"
    quant   := ("A" | "E") IDENT
    expr    := iff
    iff     := impl ("<->" impl)*
    impl    := or ("->" or)*
    or      := and ("|" and)*
    and     := not ("&" not)*
    not     := "!" not | atom | "(" expr ")"
    atom    := IDENT ("=" | "~") IDENT

Chains of "->" and "<->" associate to the right; "&" and "|" chains become
one n-ary node. "A" and "E" are reserved.
"""

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Union

from . import config
from .errors import FormulaSyntaxError, PreconditionError


# =============================================================================
# AST
# =============================================================================

class QuantKind(Enum):
    FORALL = "A"
    EXISTS = "E"


@dataclass(frozen=True)
class Quantifier:
    kind: QuantKind
    variable: str


@dataclass(frozen=True)
class Equal:
    left: str
    right: str


@dataclass(frozen=True)
class Adjacent:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    operand: "Matrix"


@dataclass(frozen=True)
class And:
    operands: tuple

    def __post_init__(self):
        if len(self.operands) < 2:
            raise PreconditionError("And needs at least two operands")


@dataclass(frozen=True)
class Or:
    operands: tuple

    def __post_init__(self):
        if len(self.operands) < 2:
            raise PreconditionError("Or needs at least two operands")


@dataclass(frozen=True)
class Implies:
    left: "Matrix"
    right: "Matrix"


@dataclass(frozen=True)
class Iff:
    left: "Matrix"
    right: "Matrix"


Matrix = Union[Equal, Adjacent, Not, And, Or, Implies, Iff]


def matrix_variables(m: Matrix) -> set[str]:
    if isinstance(m, (Equal, Adjacent)):
        return {m.left, m.right}
    if isinstance(m, Not):
        return matrix_variables(m.operand)
    if isinstance(m, (And, Or)):
        out = set()
        for op in m.operands:
            out |= matrix_variables(op)
        return out
    return matrix_variables(m.left) | matrix_variables(m.right)


@dataclass(frozen=True)
class Formula:
    prefix: tuple
    matrix: Matrix
    free_vars: tuple = ()

    def __post_init__(self):
        bound = [q.variable for q in self.prefix]
        if len(set(bound)) != len(bound):
            raise PreconditionError(f"duplicate bound variable in prefix {bound}")
        if len(set(self.free_vars)) != len(self.free_vars):
            raise PreconditionError(f"duplicate free variable {list(self.free_vars)}")
        clash = set(bound) & set(self.free_vars)
        if clash:
            raise PreconditionError(f"variables both free and bound: {sorted(clash)}")
        unbound = matrix_variables(self.matrix) - set(bound) - set(self.free_vars)
        if unbound:
            raise PreconditionError(f"unbound variables: {sorted(unbound)}")

    @property
    def is_sentence(self) -> bool:
        return not self.free_vars

    @property
    def bound_vars(self) -> tuple:
        return tuple(q.variable for q in self.prefix)

    @property
    def variables(self) -> tuple:
        return self.free_vars + self.bound_vars


class Side(Enum):
    SIGMA = "S"
    PI = "P"


@dataclass(frozen=True)
class PrefixClass:
    side: Side
    level: int

    def __str__(self):
        return f"{self.side.value}{self.level}"


# =============================================================================
# Parser
# =============================================================================

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<op><->|->|[|&!()=~\[\],])"
    r"|(?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)"
)

_RESERVED = {"A", "E"}


@dataclass
class _Token:
    kind: str        # "op", "ident" or "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("op", "ident"):
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        return FormulaSyntaxError(message, tok.line, tok.column)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def ident(self) -> str:
        tok = self.tok
        if tok.kind != "ident":
            raise self.error(f"expected a variable, found {tok.text or 'end of input'!r}")
        if tok.text in _RESERVED:
            raise self.error(f"{tok.text!r} is reserved for quantifiers")
        self.i += 1
        return tok.text

    def formula(self) -> Formula:
        free = []
        if self.accept("["):
            free.append(self.ident())
            while self.accept(","):
                free.append(self.ident())
            self.expect("]")
        seen = set(free)
        prefix = []
        while self.tok.kind == "ident" and self.tok.text in _RESERVED:
            kind = QuantKind(self.tok.text)
            self.i += 1
            var_tok = self.tok
            var = self.ident()
            if var in seen:
                raise self.error(f"variable {var!r} bound twice", var_tok)
            seen.add(var)
            prefix.append(Quantifier(kind, var))
        matrix = self.expr(seen)
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after formula")
        return Formula(tuple(prefix), matrix, tuple(free))

    def expr(self, scope) -> Matrix:
        return self._right_chain("<->", Iff, lambda: self._right_chain("->", Implies, lambda: self._or(scope)))

    def _right_chain(self, op, node, sub):
        left = sub()
        if self.accept(op):
            return node(left, self._right_chain(op, node, sub))
        return left

    def _or(self, scope) -> Matrix:
        parts = [self._and(scope)]
        while self.accept("|"):
            parts.append(self._and(scope))
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def _and(self, scope) -> Matrix:
        parts = [self._not(scope)]
        while self.accept("&"):
            parts.append(self._not(scope))
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def _not(self, scope) -> Matrix:
        if self.accept("!"):
            return Not(self._not(scope))
        if self.accept("("):
            inner = self.expr(scope)
            self.expect(")")
            return inner
        tok = self.tok
        if tok.kind == "ident" and tok.text in _RESERVED:
            raise self.error("quantifier inside the matrix; formulas must be prenex")
        left = self.ident()
        if self.accept("="):
            atom = Equal
        elif self.accept("~"):
            atom = Adjacent
        else:
            raise self.error(f"expected '=' or '~' after {left!r}")
        right = self.ident()
        for var in (left, right):
            if var not in scope:
                raise self.error(f"unbound variable {var!r}", tok)
        return atom(left, right)


def parse_formula(text: str) -> Formula:
    return _Parser(text).formula()


def load_formula(path: str | Path) -> Formula:
    return parse_formula(Path(path).read_text(encoding="utf-8"))


# =============================================================================
# Rendering
# =============================================================================

def render_matrix(m: Matrix) -> str:
    if isinstance(m, Equal):
        return f"({m.left} = {m.right})"
    if isinstance(m, Adjacent):
        return f"({m.left} ~ {m.right})"
    if isinstance(m, Not):
        return "!" + render_matrix(m.operand)
    if isinstance(m, And):
        return "(" + " & ".join(render_matrix(op) for op in m.operands) + ")"
    if isinstance(m, Or):
        return "(" + " | ".join(render_matrix(op) for op in m.operands) + ")"
    if isinstance(m, Implies):
        return f"({render_matrix(m.left)} -> {render_matrix(m.right)})"
    return f"({render_matrix(m.left)} <-> {render_matrix(m.right)})"


def render_formula(f: Formula) -> str:
    parts = []
    if f.free_vars:
        parts.append("[" + ", ".join(f.free_vars) + "]")
    parts.extend(f"{q.kind.value} {q.variable}" for q in f.prefix)
    parts.append(render_matrix(f.matrix))
    return " ".join(parts)


# =============================================================================
# Prefix classes and quantifier surgery
# =============================================================================

def quantifier_blocks(f: Formula) -> list[tuple[QuantKind, tuple]]:
    blocks = []
    for q in f.prefix:
        if blocks and blocks[-1][0] == q.kind:
            blocks[-1] = (q.kind, blocks[-1][1] + (q.variable,))
        else:
            blocks.append((q.kind, (q.variable,)))
    return blocks


def prefix_class(f: Formula) -> PrefixClass:
    blocks = quantifier_blocks(f)
    if not blocks:
        return PrefixClass(Side.SIGMA, 0)
    side = Side.SIGMA if blocks[0][0] == QuantKind.EXISTS else Side.PI
    return PrefixClass(side, len(blocks))


def strip_quantifiers(f: Formula, variables) -> Formula:
    variables = tuple(variables)
    if f.bound_vars[:len(variables)] != variables:
        raise PreconditionError(
            f"{list(variables)} is not a leading block of the prefix {list(f.bound_vars)}"
        )
    return Formula(f.prefix[len(variables):], f.matrix, f.free_vars + variables)


def fresh_names(f: Formula, count: int) -> list[str]:
    taken = set(f.variables)
    names, i = [], 0
    while len(names) < count:
        name = f"{config.DUMMY_PREFIX}{i}"
        if name not in taken:
            names.append(name)
        i += 1
    return names


def insert_dummy(f: Formula, index: int, kind: QuantKind) -> Formula:
    """Insert a quantifier over an unused variable at prefix position `index`."""
    if not 0 <= index <= len(f.prefix):
        raise PreconditionError(f"prefix position {index} out of range")
    (name,) = fresh_names(f, 1)
    prefix = f.prefix[:index] + (Quantifier(kind, name),) + f.prefix[index:]
    return Formula(prefix, f.matrix, f.free_vars)


_SIGMA3_SHAPE = (QuantKind.EXISTS, QuantKind.FORALL, QuantKind.EXISTS)


def _sigma3_slots(f: Formula) -> list[int] | None:
    """Slot (0, 1 or 2 of E/A/E) for each block, or None if f is not in S3."""
    slots, nxt = [], 0
    for kind, _ in quantifier_blocks(f):
        while nxt < 3 and _SIGMA3_SHAPE[nxt] != kind:
            nxt += 1
        if nxt == 3:
            return None
        slots.append(nxt)
        nxt += 1
    return slots


def is_sigma3(f: Formula) -> bool:
    return _sigma3_slots(f) is not None


@dataclass(frozen=True)
class Sigma3Form:
    """A S3 formula split as E x.. A y.. E z.. chi, each block non-empty."""
    formula: Formula
    x_vars: tuple
    y_vars: tuple
    z_vars: tuple

    @property
    def r(self) -> int:
        return len(self.x_vars)

    @property
    def s(self) -> int:
        return len(self.y_vars)

    @cached_property
    def phi_x(self) -> Formula:
        return strip_quantifiers(self.formula, self.x_vars)

    @cached_property
    def phi_xy(self) -> Formula:
        return strip_quantifiers(self.formula, self.x_vars + self.y_vars)


def pad_to_sigma3(f: Formula) -> Formula:
    return sigma3_form(f).formula


def sigma3_form(f: Formula) -> Sigma3Form:
    slots = _sigma3_slots(f)
    if slots is None:
        raise PreconditionError(f"formula of class {prefix_class(f)} is not in S3")
    blocks = dict(zip(slots, (vars_ for _, vars_ in quantifier_blocks(f))))
    dummies = iter(fresh_names(f, 3 - len(blocks)))
    filled = [blocks.get(slot) or (next(dummies),) for slot in range(3)]
    prefix = tuple(
        Quantifier(_SIGMA3_SHAPE[slot], var) for slot in range(3) for var in filled[slot]
    )
    padded = Formula(prefix, f.matrix, f.free_vars)
    return Sigma3Form(padded, *filled)


# =============================================================================
# Catalog
# =============================================================================

CATALOG = {
    "triangle_free": "A x A y A z ((x = y) | (y = z) | (x = z) | !(x ~ y) | !(y ~ z) | !(x ~ z))",
    "diameter_le_2": "A u A v E w ((u = v) | (u ~ v) | ((u ~ w) & (v ~ w)))",
    # some vertex within distance two has degree at most one
    "hardness_dist2_degree1": (
        "A x E y1 E y2 A z1 A z2 A z3 A z4 A z5 A z6 ("
        "(((x ~ z1) & (x ~ z2)) -> (z1 = z2))"
        " | ((x ~ y1) & (((y1 ~ z3) & (y1 ~ z4)) -> (z3 = z4)))"
        " | ((x ~ y1) & (y1 ~ y2) & (((y2 ~ z5) & (y2 ~ z6)) -> (z5 = z6))))"
    ),
    "nonadjacent_pair": "E u E v (!(u = v) & !(u ~ v))",
    "all_equal": "A x A y (x = y)",
}


def catalog_formula(name: str) -> Formula:
    if name not in CATALOG:
        raise PreconditionError(f"unknown catalog formula {name!r}; known: {sorted(CATALOG)}")
    return parse_formula(CATALOG[name])
