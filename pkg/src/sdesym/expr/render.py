"""Rendering of expression trees as plain text (re-parseable) or LaTeX.

Plain output of a canonical tree parses back to the identical tree: the
grammar's literal folding (negative numbers, integer ratios) mirrors the
coefficient placement used by the canonical form.  Unknown-function nodes
render with ``__d<arg>`` derivative suffixes, one per derivative order.
"""

from __future__ import annotations

from .nodes import (
    Add,
    Dec,
    Expr,
    Fun,
    Mul,
    Neg,
    Pow,
    Rat,
    Sym,
    Unk,
    is_number,
    number_value,
)

# precedence levels: sum < product < unary minus < power < atom
_SUM, _PROD, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


def render(e: Expr, fmt: str = "plain") -> str:
    if fmt == "plain":
        return _plain(e, _SUM)
    if fmt == "latex":
        return _latex(e, _SUM)
    raise ValueError(f"unknown format {fmt!r} (expected 'plain' or 'latex')")


def _paren(s: str, level: int, context: int) -> str:
    return f"({s})" if level < context else s


def _num_plain(e: Expr) -> tuple[str, int]:
    if isinstance(e, Rat):
        if e.den == 1:
            return str(e.num), _ATOM if e.num >= 0 else _UNARY
        return f"{e.num}/{e.den}", _PROD
    v = e.value
    return repr(v), _ATOM if v >= 0 else _UNARY


def _plain(e: Expr, context: int) -> str:
    if is_number(e):
        s, level = _num_plain(e)
        return _paren(s, level, context)
    if isinstance(e, Sym):
        return e.symbol.text
    if isinstance(e, Neg):
        return _paren("-" + _plain(e.arg, _POW), _UNARY, context)
    if isinstance(e, Add):
        parts = [_plain(e.terms[0], _SUM)]
        for t in e.terms[1:]:
            neg = _negated_term(t)
            if neg is not None:
                parts.append(" - " + _plain(neg, _PROD))
            else:
                parts.append(" + " + _plain(t, _PROD))
        return _paren("".join(parts), _SUM, context)
    if isinstance(e, Mul):
        parts = []
        for i, f in enumerate(e.factors):
            if i == 0 and is_number(f) and number_value(f) == -1 and len(e.factors) > 1:
                parts.append("-")
                continue
            # a leading numeric coefficient may sit at term level: the
            # parser folds "-1/2*x" into Mul(Rat(-1,2), x) exactly
            ctx = _PROD if i == 0 and is_number(f) else (_UNARY if i == 0 else _POW)
            s = _plain(f, ctx)
            if parts and parts[-1] != "-":
                parts.append("*")
            parts.append(s)
        body = "".join(parts)
        level = _UNARY if body.startswith("-") else _PROD
        return _paren(body, level, context)
    if isinstance(e, Pow):
        b = _plain(e.base, _ATOM)
        x = e.exponent
        if is_number(x) and isinstance(x, Rat) and x.den == 1 and x.num >= 0:
            xs = _plain(x, _POW)
        else:
            xs = "(" + _plain(x, _SUM) + ")"
        return _paren(f"{b}^{xs}", _POW, context)
    if isinstance(e, Fun):
        return f"{e.name}({_plain(e.arg, _SUM)})"
    if isinstance(e, Unk):
        name = e.name
        for j, n in enumerate(e.deriv):
            name += f"__d{e.params[j].text}" * n
        args = ", ".join(_plain(a, _SUM) for a in e.args)
        return f"{name}({args})"
    raise TypeError(f"not an expression: {e!r}")


def _negated_term(t: Expr) -> Expr | None:
    """For rendering ``a - b``: strip a negative leading coefficient."""
    if is_number(t) and number_value(t) < 0:
        if isinstance(t, Rat):
            return Rat(-t.num, t.den)
        return Dec(-t.value)
    if isinstance(t, Mul) and is_number(t.factors[0]) and number_value(t.factors[0]) < 0:
        c = t.factors[0]
        nc = Rat(-c.num, c.den) if isinstance(c, Rat) else Dec(-c.value)
        rest = t.factors[1:]
        if isinstance(nc, Rat) and nc.num == 1 and nc.den == 1:
            return rest[0] if len(rest) == 1 else Mul(rest)
        return Mul((nc,) + rest)
    if isinstance(t, Neg):
        return t.arg
    return None


_GREEK = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "pi", "rho", "sigma",
    "tau", "upsilon", "phi", "chi", "psi", "omega",
}
_GREEK_ALT = {"phi": r"\varphi"}


def _name_latex(name: str) -> str:
    stem, sub = name, ""
    while stem and stem[-1].isdigit():
        sub = stem[-1] + sub
        stem = stem[:-1]
    if stem in _GREEK_ALT:
        stem = _GREEK_ALT[stem]
    elif stem in _GREEK:
        stem = "\\" + stem
    return f"{stem}_{{{sub}}}" if sub else stem


def _sym_latex(s) -> str:
    return _name_latex(s.text)


def _latex(e: Expr, context: int) -> str:
    if isinstance(e, Rat):
        if e.den == 1:
            s = str(e.num)
            return _paren_latex(s, _ATOM if e.num >= 0 else _UNARY, context)
        sign = "-" if e.num < 0 else ""
        s = f"{sign}\\frac{{{abs(e.num)}}}{{{e.den}}}"
        return _paren_latex(s, _ATOM if e.num >= 0 else _UNARY, context)
    if isinstance(e, Dec):
        return _paren_latex(repr(e.value), _ATOM if e.value >= 0 else _UNARY, context)
    if isinstance(e, Sym):
        return _sym_latex(e.symbol)
    if isinstance(e, Neg):
        return _paren_latex("-" + _latex(e.arg, _POW), _UNARY, context)
    if isinstance(e, Add):
        parts = [_latex(e.terms[0], _SUM)]
        for t in e.terms[1:]:
            neg = _negated_term(t)
            if neg is not None:
                parts.append(" - " + _latex(neg, _PROD))
            else:
                parts.append(" + " + _latex(t, _PROD))
        return _paren_latex("".join(parts), _SUM, context)
    if isinstance(e, Mul):
        parts = []
        for i, f in enumerate(e.factors):
            if i == 0 and is_number(f) and number_value(f) == -1 and len(e.factors) > 1:
                parts.append("-")
                continue
            parts.append(_latex(f, _UNARY if i == 0 else _POW))
        body = " ".join(p for p in parts if p != "-")
        if parts and parts[0] == "-":
            body = "-" + body
        level = _UNARY if body.startswith("-") else _PROD
        return _paren_latex(body, level, context)
    if isinstance(e, Pow):
        x = e.exponent
        if isinstance(x, Rat) and x.num < 0:
            inner = Pow(e.base, Rat(-x.num, x.den))
            return f"\\frac{{1}}{{{_latex(inner, _SUM)}}}"
        b = _latex(e.base, _ATOM)
        return _paren_latex(f"{b}^{{{_latex(x, _SUM)}}}", _POW, context)
    if isinstance(e, Fun):
        if e.name == "abs":
            return f"\\left|{_latex(e.arg, _SUM)}\\right|"
        if e.name == "sqrt":
            return f"\\sqrt{{{_latex(e.arg, _SUM)}}}"
        return f"\\{e.name}\\left({_latex(e.arg, _SUM)}\\right)"
    if isinstance(e, Unk):
        prefix = ""
        for j, n in enumerate(e.deriv):
            if n == 1:
                prefix += f"\\partial_{{{_sym_latex(e.params[j])}}}"
            elif n > 1:
                prefix += f"\\partial_{{{_sym_latex(e.params[j])}}}^{{{n}}}"
        args = ", ".join(_latex(a, _SUM) for a in e.args)
        body = f"{prefix}{_name_latex(e.name)}\\left({args}\\right)"
        return _paren_latex(body, _PROD if prefix else _ATOM, context)
    raise TypeError(f"not an expression: {e!r}")


def _paren_latex(s: str, level: int, context: int) -> str:
    return f"\\left({s}\\right)" if level < context else s
