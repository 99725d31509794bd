"""Tokenizer and recursive-descent parser for the expression grammar.

    expr  := term (("+"|"-") term)*
    term  := unary (("*"|"/") unary)*
    unary := "-" unary | pow
    pow   := atom ("^" unary)?
    atom  := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

``t``, ``x<i>`` and ``w<k>`` are reserved symbols; every other identifier is
a parameter or a registered function name.  The parser desugars ``a - b`` to
``a + (-1)*b`` and ``a / b`` to ``a * b^-1`` (integer literal ratios fold to
exact rationals), folds unary minus into numeric literals, and flattens
chains of ``+`` and ``*`` into n-ary nodes, so the mapping from text to tree
stays unique.  Applications of unregistered names build unknown-function
nodes only for names passed in ``unknowns``; a ``__d<arg>`` suffix on such a
name marks one derivative with respect to that argument.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .nodes import (
    Add,
    Dec,
    Expr,
    FUNCTION_NAMES,
    Fun,
    Mul,
    Pow,
    Rat,
    Sym,
    Unk,
    is_number,
    symbol_from_text,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int, expected: Sequence[str] = ()):
        self.offset = len(text[:pos].encode("utf-8"))
        self.expected = tuple(expected)
        detail = f"{message} at offset {self.offset}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            at = pos + (len(text[pos:]) - len(rest))
            raise ParseError(f"unexpected character {rest[0]!r}", text, at)
        for kind in ("num", "ident", "op"):
            v = m.group(kind)
            if v is not None:
                toks.append(_Tok(kind, v, m.start(kind)))
                break
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


def _negate(e: Expr) -> Expr:
    if isinstance(e, Rat):
        return Rat(-e.num, e.den)
    if isinstance(e, Dec):
        return Dec(-e.value)
    if isinstance(e, Mul):
        if is_number(e.factors[0]):
            return Mul((_negate(e.factors[0]),) + e.factors[1:])
        return Mul((Rat(-1),) + e.factors)
    return Mul((Rat(-1), e))


def _number(text: str) -> Expr:
    if re.fullmatch(r"\d+", text):
        return Rat(int(text))
    return Dec(float(text))


_ATOM_EXPECTED = ("number", "identifier", "'('", "'-'")


class _Parser:
    def __init__(self, text: str, unknowns: frozenset[str]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.unknowns = unknowns

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.cur
        self.i += 1
        return t

    def at_op(self, *ops: str) -> bool:
        return self.cur.kind == "op" and self.cur.text in ops

    def expect_op(self, op: str):
        if not self.at_op(op):
            raise ParseError(
                f"unexpected {self.cur.text!r}" if self.cur.kind != "end" else "unexpected end of input",
                self.text,
                self.cur.pos,
                (f"'{op}'",),
            )
        self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.cur.kind != "end":
            raise ParseError(
                f"unexpected {self.cur.text!r}", self.text, self.cur.pos, ("end of input",)
            )
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.at_op("+", "-"):
            op = self.advance().text
            t = self.term()
            terms.append(t if op == "+" else _negate(t))
        if len(terms) == 1:
            return terms[0]
        flat: list[Expr] = []
        for t in terms:
            flat.extend(t.terms) if isinstance(t, Add) else flat.append(t)
        return Add(tuple(flat))

    def term(self) -> Expr:
        factors = [self.unary()]
        while self.at_op("*", "/"):
            op = self.advance().text
            u = self.unary()
            if op == "/":
                if (
                    len(factors) == 1
                    and isinstance(factors[0], Rat)
                    and isinstance(u, Rat)
                    and u.num != 0
                ):
                    v = factors[0].value / u.value
                    factors[0] = Rat(v.numerator, v.denominator)
                    continue
                u = Pow(u, Rat(-1))
            factors.append(u)
        if len(factors) == 1:
            return factors[0]
        flat: list[Expr] = []
        for f in factors:
            flat.extend(f.factors) if isinstance(f, Mul) else flat.append(f)
        return Mul(tuple(flat))

    def unary(self) -> Expr:
        if self.at_op("-"):
            self.advance()
            return _negate(self.unary())
        return self.pow()

    def pow(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "num":
            self.advance()
            return _number(tok.text)
        if tok.kind == "ident":
            self.advance()
            if self.at_op("("):
                return self.call(tok)
            return Sym(symbol_from_text(tok.text))
        if self.at_op("("):
            self.advance()
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(
            f"unexpected {tok.text!r}" if tok.kind != "end" else "unexpected end of input",
            self.text,
            tok.pos,
            _ATOM_EXPECTED,
        )

    def call(self, name_tok: _Tok) -> Expr:
        self.expect_op("(")
        args = [self.expr()]
        while self.at_op(","):
            self.advance()
            args.append(self.expr())
        self.expect_op(")")
        name = name_tok.text
        if name in FUNCTION_NAMES:
            if len(args) != 1:
                raise ParseError(
                    f"function {name!r} takes one argument, got {len(args)}",
                    self.text,
                    name_tok.pos,
                )
            return Fun(name, args[0])
        base, seps = _split_deriv_suffix(name)
        if base in self.unknowns:
            if not all(isinstance(a, Sym) for a in args):
                raise ParseError(
                    f"arguments of unknown function {base!r} must be plain symbols",
                    self.text,
                    name_tok.pos,
                )
            syms = tuple(a.symbol for a in args)
            if len(set(syms)) != len(syms):
                raise ParseError(
                    f"duplicate argument in unknown function {base!r}", self.text, name_tok.pos
                )
            deriv = [0] * len(syms)
            for s in seps:
                target = symbol_from_text(s)
                if target not in syms:
                    raise ParseError(
                        f"derivative marker {s!r} does not name an argument of {base!r}",
                        self.text,
                        name_tok.pos,
                    )
                deriv[syms.index(target)] += 1
            return Unk(base, syms, tuple(args), tuple(deriv))
        raise ParseError(f"unknown function name {name!r}", self.text, name_tok.pos)


def _split_deriv_suffix(name: str) -> tuple[str, list[str]]:
    parts = name.split("__d")
    return parts[0], parts[1:]


def parse(text: str, unknowns: Iterable[str] = ()) -> Expr:
    """Parse ``text`` into the unique raw AST under the declared precedence."""
    return _Parser(text, frozenset(unknowns)).parse()
