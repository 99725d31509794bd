"""Immutable expression trees over time/space/Wiener/parameter symbols.

Nodes are frozen dataclasses, so structural equality and hashing come for
free and every operation on them is pure.  Construction through the helper
functions (``add``, ``mul``, ...) or Python operators builds *raw* trees;
canonicalisation happens in :func:`sdesym.expr.simplify.simplify`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

FUNCTION_NAMES = ("exp", "log", "sin", "cos", "sqrt", "abs")


class SymbolKind(enum.IntEnum):
    TIME = 0
    SPACE = 1
    WIENER = 2
    PARAM = 3


@dataclass(frozen=True, slots=True)
class Symbol:
    """A base variable: t, x<i>, w<k> or a named parameter."""

    kind: SymbolKind
    index: int = 0
    name: str = ""

    def __post_init__(self):
        if self.kind in (SymbolKind.SPACE, SymbolKind.WIENER) and self.index < 1:
            raise ValueError("space/Wiener indices are 1-based")
        if self.kind is SymbolKind.PARAM and not self.name:
            raise ValueError("parameter symbols need a name")

    @property
    def text(self) -> str:
        if self.kind is SymbolKind.TIME:
            return "t"
        if self.kind is SymbolKind.SPACE:
            return f"x{self.index}"
        if self.kind is SymbolKind.WIENER:
            return f"w{self.index}"
        return self.name

    def sort_key(self):
        return (int(self.kind), self.index, self.name)

    def __repr__(self):
        return f"Symbol({self.text})"


T = Symbol(SymbolKind.TIME)


def x_sym(i: int) -> Symbol:
    return Symbol(SymbolKind.SPACE, i)


def w_sym(k: int) -> Symbol:
    return Symbol(SymbolKind.WIENER, k)


def param(name: str) -> Symbol:
    return Symbol(SymbolKind.PARAM, 0, name)


def symbol_from_text(text: str) -> Symbol:
    """Map canonical text back to a Symbol (t, x<i>, w<k>, else parameter)."""
    if text == "t":
        return T
    if len(text) > 1 and text[0] in "xw" and text[1:].isdigit() and text[1] != "0":
        i = int(text[1:])
        return x_sym(i) if text[0] == "x" else w_sym(i)
    return param(text)


class Expr:
    """Base class for expression nodes; supports operator construction."""

    __slots__ = ()

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, Neg(as_expr(other))))

    def __rsub__(self, other):
        return Add((as_expr(other), Neg(self)))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Mul((self, Pow(as_expr(other), Rat(-1))))

    def __rtruediv__(self, other):
        return Mul((as_expr(other), Pow(self, Rat(-1))))

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        from .render import render

        return render(self, "plain")


@dataclass(frozen=True, slots=True)
class Rat(Expr):
    """Exact rational literal, normalised with positive denominator."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("rational literal with zero denominator")
        g = math.gcd(self.num, self.den)
        num, den = self.num // g, self.den // g
        if den < 0:
            num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __repr__(self):
        return f"Rat({self.num})" if self.den == 1 else f"Rat({self.num}/{self.den})"


@dataclass(frozen=True, slots=True)
class Dec(Expr):
    """Decimal (floating) literal; contaminates a subtree to float arithmetic."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError("decimal literals must be finite")
        if v == 0.0:
            v = 0.0  # normalise -0.0
        object.__setattr__(self, "value", v)

    def __repr__(self):
        return f"Dec({self.value!r})"


@dataclass(frozen=True, slots=True)
class Sym(Expr):
    symbol: Symbol

    def __repr__(self):
        return f"Sym({self.symbol.text})"


@dataclass(frozen=True, slots=True)
class Add(Expr):
    terms: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("sums need at least two terms")


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    factors: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("products need at least two factors")


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True, slots=True)
class Fun(Expr):
    """Application of a registered one-argument function."""

    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTION_NAMES:
            raise ValueError(f"unknown function {self.name!r}")


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Unk(Expr):
    """Opaque unknown-function node with a derivative multi-index.

    ``params`` are the formal argument symbols; ``args`` the actual argument
    expressions (equal to the params for plain placeholders).  ``deriv[j]``
    counts derivatives taken with respect to the j-th formal argument.
    """

    name: str
    params: tuple[Symbol, ...]
    args: tuple[Expr, ...]
    deriv: tuple[int, ...]

    def __post_init__(self):
        if len(self.params) != len(self.args) or len(self.params) != len(self.deriv):
            raise ValueError("params, args and deriv must have equal length")
        if any(d < 0 for d in self.deriv):
            raise ValueError("derivative multi-index must be non-negative")
        if len(set(self.params)) != len(self.params):
            raise ValueError("duplicate formal argument")


def unknown(name: str, params: Iterable[Symbol]) -> Unk:
    """Fresh unknown-function placeholder applied to its own formal symbols."""
    ps = tuple(params)
    return Unk(name, ps, tuple(Sym(p) for p in ps), (0,) * len(ps))


ZERO = Rat(0)
ONE = Rat(1)
MINUS_ONE = Rat(-1)
HALF = Rat(1, 2)

Number = Union[Rat, Dec]


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not expressions")
    if isinstance(v, int):
        return Rat(v)
    if isinstance(v, Fraction):
        return Rat(v.numerator, v.denominator)
    if isinstance(v, float):
        return Dec(v)
    if isinstance(v, Symbol):
        return Sym(v)
    raise TypeError(f"cannot convert {v!r} to Expr")


def num(p, q: int = 1) -> Expr:
    if q != 1:
        return Rat(p, q)
    return as_expr(p)


def add(*terms) -> Expr:
    ts = [as_expr(t) for t in terms]
    if not ts:
        return ZERO
    if len(ts) == 1:
        return ts[0]
    return Add(tuple(ts))


def mul(*factors) -> Expr:
    fs = [as_expr(f) for f in factors]
    if not fs:
        return ONE
    if len(fs) == 1:
        return fs[0]
    return Mul(tuple(fs))


def pow_(base, exponent) -> Expr:
    return Pow(as_expr(base), as_expr(exponent))


def exp(a) -> Expr:
    return Fun("exp", as_expr(a))


def log(a) -> Expr:
    return Fun("log", as_expr(a))


def sin(a) -> Expr:
    return Fun("sin", as_expr(a))


def cos(a) -> Expr:
    return Fun("cos", as_expr(a))


def sqrt(a) -> Expr:
    return Fun("sqrt", as_expr(a))


def abs_(a) -> Expr:
    return Fun("abs", as_expr(a))


def is_zero(e: Expr) -> bool:
    return (isinstance(e, Rat) and e.num == 0) or (isinstance(e, Dec) and e.value == 0.0)


def is_one(e: Expr) -> bool:
    return (isinstance(e, Rat) and e.num == 1 and e.den == 1) or (
        isinstance(e, Dec) and e.value == 1.0
    )


def is_number(e: Expr) -> bool:
    return isinstance(e, (Rat, Dec))


def is_integer_rat(e: Expr) -> bool:
    return isinstance(e, Rat) and e.den == 1


def number_value(e: Expr):
    """Fraction for Rat, float for Dec."""
    if isinstance(e, Rat):
        return e.value
    if isinstance(e, Dec):
        return e.value
    raise TypeError(f"{e!r} is not a numeric literal")


def walk(e: Expr) -> Iterator[Expr]:
    """Depth-first iteration over all nodes of the tree."""
    yield e
    if isinstance(e, Add):
        for t in e.terms:
            yield from walk(t)
    elif isinstance(e, Mul):
        for f in e.factors:
            yield from walk(f)
    elif isinstance(e, Pow):
        yield from walk(e.base)
        yield from walk(e.exponent)
    elif isinstance(e, (Fun, Neg)):
        yield from walk(e.arg)
    elif isinstance(e, Unk):
        for a in e.args:
            yield from walk(a)


def free_symbols(e: Expr) -> set[Symbol]:
    out: set[Symbol] = set()
    for n in walk(e):
        if isinstance(n, Sym):
            out.add(n.symbol)
    return out


def unknown_names(e: Expr) -> set[str]:
    return {n.name for n in walk(e) if isinstance(n, Unk)}


def contains_unknowns(e: Expr) -> bool:
    return any(isinstance(n, Unk) for n in walk(e))


_RANK = {Rat: 0, Dec: 1, Sym: 2, Unk: 3, Fun: 4, Pow: 5, Add: 6, Mul: 7, Neg: 8}


def sort_key(e: Expr):
    """Total deterministic structural ordering used for canonical forms.

    Within one rank the shapes of the key tuples agree, so heterogeneous
    comparisons never occur.
    """
    if isinstance(e, Rat):
        return (0, e.value)
    if isinstance(e, Dec):
        return (1, Fraction(e.value))
    if isinstance(e, Sym):
        return (2, e.symbol.sort_key())
    if isinstance(e, Unk):
        return (
            3,
            e.name,
            e.deriv,
            tuple(p.sort_key() for p in e.params),
            tuple(sort_key(a) for a in e.args),
        )
    if isinstance(e, Fun):
        return (4, e.name, sort_key(e.arg))
    if isinstance(e, Pow):
        return (5, sort_key(e.base), sort_key(e.exponent))
    if isinstance(e, Add):
        return (6, tuple(sort_key(t) for t in e.terms))
    if isinstance(e, Mul):
        return (7, tuple(sort_key(f) for f in e.factors))
    if isinstance(e, Neg):
        return (8, sort_key(e.arg))
    raise TypeError(f"not an expression: {e!r}")
