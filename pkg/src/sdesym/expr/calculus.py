"""Exact differentiation and substitution."""

from __future__ import annotations

from .nodes import (
    Add,
    Dec,
    Expr,
    Fun,
    Mul,
    Neg,
    ONE,
    Pow,
    Rat,
    Sym,
    Symbol,
    SymbolKind,
    Unk,
    ZERO,
    abs_,
    as_expr,
    free_symbols,
    is_number,
    log,
)
from .simplify import simplify


def diff(e: Expr, s: Symbol, order: int = 1) -> Expr:
    """Partial derivative of ``e`` with respect to ``s``, simplified.

    Unknown-function nodes obey the chain rule over their arguments; for the
    common placeholder case (arguments are the formal symbols themselves)
    this reduces to incrementing the derivative multi-index in the position
    of ``s`` and to zero when ``s`` is not among the arguments.
    """
    out = e
    for _ in range(order):
        out = simplify(_d(out, s))
    return out


def _d(e: Expr, s: Symbol) -> Expr:
    if isinstance(e, (Rat, Dec)):
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.symbol == s else ZERO
    if isinstance(e, Neg):
        return Neg(_d(e.arg, s))
    if isinstance(e, Add):
        return Add(tuple(_d(t, s) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        fs = e.factors
        for i in range(len(fs)):
            terms.append(Mul(tuple(fs[:i]) + (_d(fs[i], s),) + tuple(fs[i + 1 :])))
        return Add(tuple(terms)) if len(terms) > 1 else terms[0]
    if isinstance(e, Pow):
        b, p = e.base, e.exponent
        db, dp = _d(b, s), _d(p, s)
        if is_number(p):
            # p * b^(p-1) * db
            return Mul((p, Pow(b, Add((p, Rat(-1)))), db))
        # b^p * (dp*log b + p*db/b)
        return Mul(
            (e, Add((Mul((dp, log(b))), Mul((p, db, Pow(b, Rat(-1))))))),
        )
    if isinstance(e, Fun):
        u, du = e.arg, _d(e.arg, s)
        if e.name == "exp":
            return Mul((e, du))
        if e.name == "log":
            return Mul((du, Pow(u, Rat(-1))))
        if e.name == "sin":
            return Mul((Fun("cos", u), du))
        if e.name == "cos":
            return Neg(Mul((Fun("sin", u), du)))
        if e.name == "sqrt":
            return Mul((Rat(1, 2), Pow(u, Rat(-1, 2)), du))
        if e.name == "abs":
            # u/|u| * du; differentiable away from u = 0
            return Mul((u, Pow(abs_(u), Rat(-1)), du))
        raise ValueError(e.name)
    if isinstance(e, Unk):
        terms = []
        for j, a in enumerate(e.args):
            da = _d(a, s)
            bumped = Unk(
                e.name,
                e.params,
                e.args,
                e.deriv[:j] + (e.deriv[j] + 1,) + e.deriv[j + 1 :],
            )
            terms.append(Mul((bumped, da)))
        if not terms:
            return ZERO
        return Add(tuple(terms)) if len(terms) > 1 else terms[0]
    raise TypeError(f"not an expression: {e!r}")


class BindingError(ValueError):
    """Raised for arity/argument mismatches of unknown-function bindings."""


def substitute(e: Expr, bindings: dict) -> Expr:
    """Capture-free substitution, simplified.

    Keys may be :class:`Symbol` (replace a base variable) or ``str`` (bind an
    unknown function).  An unknown-function binding maps the function name to
    an expression over the node's formal argument symbols; nodes carrying a
    derivative multi-index receive the correspondingly differentiated binding
    with the formal symbols replaced by the node's actual arguments.
    """
    sym_map: dict[Symbol, Expr] = {}
    unk_map: dict[str, Expr] = {}
    for k, v in bindings.items():
        if isinstance(k, Symbol):
            sym_map[k] = as_expr(v)
        elif isinstance(k, str):
            unk_map[k] = as_expr(v)
        else:
            raise TypeError(f"binding key must be Symbol or str, got {k!r}")
    return simplify(_subst(e, sym_map, unk_map))


def _subst(e: Expr, sym_map: dict, unk_map: dict) -> Expr:
    if isinstance(e, (Rat, Dec)):
        return e
    if isinstance(e, Sym):
        return sym_map.get(e.symbol, e)
    if isinstance(e, Neg):
        return Neg(_subst(e.arg, sym_map, unk_map))
    if isinstance(e, Add):
        return Add(tuple(_subst(t, sym_map, unk_map) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(_subst(f, sym_map, unk_map) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(_subst(e.base, sym_map, unk_map), _subst(e.exponent, sym_map, unk_map))
    if isinstance(e, Fun):
        return Fun(e.name, _subst(e.arg, sym_map, unk_map))
    if isinstance(e, Unk):
        args = tuple(_subst(a, sym_map, unk_map) for a in e.args)
        if e.name not in unk_map:
            return Unk(e.name, e.params, args, e.deriv)
        body = unk_map[e.name]
        extra = free_symbols(body) - set(e.params)
        # free parameters are fine; stray base variables are an argument mismatch
        bad = [s for s in extra if s.kind is not SymbolKind.PARAM]
        if bad:
            raise BindingError(
                f"binding for {e.name!r} uses base variables "
                f"{sorted(s.text for s in bad)} that are not declared arguments"
            )
        d = body
        for j, n in enumerate(e.deriv):
            for _ in range(n):
                d = _d(d, e.params[j])
        replace = {p: a for p, a in zip(e.params, args)}
        return _subst(d, replace, {})
    raise TypeError(f"not an expression: {e!r}")
