"""Canonical simplification.

The canonical form is:

* sums and products flattened, children sorted by the structural order;
* like terms collected with exact rational (or float, once a decimal
  appears) coefficients, a single leading numeric coefficient per product;
* powers of identical bases merged by adding exponents, integer powers of
  numbers folded exactly over rationals;
* a fixed finite rewrite set for exp/log and sqrt/power
  (sqrt u -> u^(1/2), exp(a)exp(b) -> exp(a+b), exp(u)^c -> exp(c u),
  exp(0) -> 1, log(1) -> 0, log(exp u) -> u, exp(log u) -> u,
  sin/cos/abs parity on negative-leading arguments);
* purely numeric subtrees folded, exactly when rational.

Products of sums are *not* expanded; cancellation happens at the like-term
level only, and the probabilistic zero test covers the rest.
"""

from __future__ import annotations

import math
from fractions import Fraction

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
    Unk,
    ZERO,
    is_integer_rat,
    is_number,
    is_one,
    is_zero,
    number_value,
    sort_key,
)

# exact folding limits: keep integer powers/roots from exploding
_MAX_POW_EXP = 128
_MAX_ROOT_BASE = 10**12


def simplify(e: Expr) -> Expr:
    """Return the canonical form of ``e``.  Idempotent."""
    if isinstance(e, (Rat, Dec, Sym)):
        return e
    if isinstance(e, Neg):
        return _mul([Rat(-1), simplify(e.arg)])
    if isinstance(e, Add):
        return _add([simplify(t) for t in e.terms])
    if isinstance(e, Mul):
        return _mul([simplify(f) for f in e.factors])
    if isinstance(e, Pow):
        return _pow(simplify(e.base), simplify(e.exponent))
    if isinstance(e, Fun):
        return _fun(e.name, simplify(e.arg))
    if isinstance(e, Unk):
        return Unk(e.name, e.params, tuple(simplify(a) for a in e.args), e.deriv)
    raise TypeError(f"not an expression: {e!r}")


def _num_add(a, b):
    """Sum of two numeric literals; Dec contaminates."""
    if isinstance(a, Rat) and isinstance(b, Rat):
        v = a.value + b.value
        return Rat(v.numerator, v.denominator)
    return Dec(float(number_value(a)) + float(number_value(b)))


def _num_mul(a, b):
    if isinstance(a, Rat) and isinstance(b, Rat):
        v = a.value * b.value
        return Rat(v.numerator, v.denominator)
    return Dec(float(number_value(a)) * float(number_value(b)))


def _split_coeff(t: Expr) -> tuple[Expr, Expr | None]:
    """Decompose a canonical term into (numeric coefficient, rest-or-None)."""
    if is_number(t):
        return t, None
    if isinstance(t, Mul) and is_number(t.factors[0]):
        rest = t.factors[1:]
        return t.factors[0], rest[0] if len(rest) == 1 else Mul(rest)
    return ONE, t


def _join_coeff(coeff: Expr, rest: Expr | None) -> Expr | None:
    if rest is None:
        return coeff if not is_zero(coeff) else None
    if is_zero(coeff):
        return None
    if is_one(coeff):
        return rest
    if isinstance(rest, Mul):
        return Mul((coeff,) + rest.factors)
    return Mul((coeff, rest))


def _add(terms: list[Expr]) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    numeric: Expr = ZERO
    buckets: dict[Expr, Expr] = {}
    order: list[Expr] = []
    for t in flat:
        coeff, rest = _split_coeff(t)
        if rest is None:
            numeric = _num_add(numeric, coeff)
            continue
        if rest in buckets:
            buckets[rest] = _num_add(buckets[rest], coeff)
        else:
            buckets[rest] = coeff
            order.append(rest)
    out: list[Expr] = []
    for rest in order:
        t = _join_coeff(buckets[rest], rest)
        if t is not None:
            out.append(t)
    out.sort(key=sort_key)
    if not is_zero(numeric) or not out:
        out.insert(0, numeric)
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return Add(tuple(out))


def _as_base_exp(f: Expr) -> tuple[Expr, Expr]:
    if isinstance(f, Pow):
        return f.base, f.exponent
    return f, ONE


def _mul(factors: list[Expr]) -> Expr:
    flat: list[Expr] = []
    for f in factors:
        if isinstance(f, Mul):
            flat.extend(f.factors)
        else:
            flat.append(f)
    # distribute over sums so cancellation happens at the like-term level
    adds = [f for f in flat if isinstance(f, Add)]
    if adds:
        rest = [f for f in flat if not isinstance(f, Add)]
        products = [rest]
        for a in adds:
            products = [p + [term] for p in products for term in a.terms]
        return _add([_mul(p) for p in products])
    coeff: Expr = ONE
    exp_args: list[Expr] = []  # arguments of exp-factors, merged additively
    bases: list[Expr] = []
    exps: dict[Expr, list[Expr]] = {}
    for f in flat:
        if is_number(f):
            coeff = _num_mul(coeff, f)
            continue
        if isinstance(f, Fun) and f.name == "exp":
            exp_args.append(f.arg)
            continue
        b, e = _as_base_exp(f)
        if b in exps:
            exps[b].append(e)
        else:
            exps[b] = [e]
            bases.append(b)
    if is_zero(coeff):
        return coeff if isinstance(coeff, Rat) else Dec(0.0)
    out: list[Expr] = []
    for b in bases:
        e = _add(exps[b])
        p = _pow(b, e)
        if is_number(p):
            coeff = _num_mul(coeff, p)
        elif isinstance(p, Fun) and p.name == "exp":
            exp_args.append(p.arg)
        elif isinstance(p, Mul):
            # e.g. distributed power re-entered; merge factors conservatively
            for g in p.factors:
                if is_number(g):
                    coeff = _num_mul(coeff, g)
                else:
                    out.append(g)
        elif not is_one(p):
            out.append(p)
    if exp_args:
        ea = _fun("exp", _add(exp_args))
        if is_number(ea):
            coeff = _num_mul(coeff, ea)
        else:
            out.append(ea)
    if is_zero(coeff):
        return coeff if isinstance(coeff, Rat) else Dec(0.0)
    out.sort(key=sort_key)
    if not out:
        return coeff
    if any(isinstance(f, Add) for f in out):
        # a merged power or exp re-entered as a sum; distribute again
        return _mul([coeff, *out])
    if not is_one(coeff) or isinstance(coeff, Dec):
        if isinstance(coeff, Dec) and coeff.value == 1.0:
            pass
        else:
            out.insert(0, coeff)
    if len(out) == 1:
        return out[0]
    return Mul(tuple(out))


def _int_root(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0 or n > _MAX_ROOT_BASE:
        return None
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


def _pow(b: Expr, e: Expr) -> Expr:
    if is_number(e):
        v = number_value(e)
        if v == 0:
            return ONE
        if v == 1:
            return b
    if is_one(b):
        return ONE
    if isinstance(b, Rat) and isinstance(e, Rat):
        if e.den == 1 and abs(e.num) <= _MAX_POW_EXP:
            if e.num > 0:
                val = b.value**e.num
                return Rat(val.numerator, val.denominator)
            if b.num != 0:
                val = b.value**e.num
                return Rat(val.numerator, val.denominator)
            return Pow(b, e)  # 0 ** negative: kept, domain error at eval
        if e.den > 1 and b.num >= 0 and abs(e.num) <= _MAX_POW_EXP:
            rn = _int_root(b.num, e.den)
            rd = _int_root(b.den, e.den)
            if rn is not None and rd is not None and rd != 0:
                return _pow(Rat(rn, rd), Rat(e.num))
            return Pow(b, e)
        return Pow(b, e)
    if is_number(b) and is_number(e) and (isinstance(b, Dec) or isinstance(e, Dec)):
        bv, ev = float(number_value(b)), float(number_value(e))
        try:
            r = bv**ev
        except (OverflowError, ValueError, ZeroDivisionError):
            return Pow(b, e)
        if isinstance(r, float) and math.isfinite(r):
            return Dec(r)
        return Pow(b, e)
    if isinstance(b, Pow) and is_integer_rat(e):
        return _pow(b.base, _mul([b.exponent, e]))
    if isinstance(b, Mul) and is_integer_rat(e):
        return _mul([_pow(f, e) for f in b.factors])
    if isinstance(b, Fun) and b.name == "exp":
        return _fun("exp", _mul([e, b.arg]))
    return Pow(b, e)


def _negative_leading(a: Expr) -> Expr | None:
    """If ``a`` has a negative numeric leading coefficient, return -a."""
    if is_number(a) and number_value(a) < 0:
        return _num_mul(Rat(-1), a)
    if isinstance(a, Mul) and is_number(a.factors[0]) and number_value(a.factors[0]) < 0:
        return _mul([_num_mul(Rat(-1), a.factors[0]), *a.factors[1:]])
    return None


def _fun(name: str, a: Expr) -> Expr:
    if name == "sqrt":
        return _pow(a, Rat(1, 2))
    if name == "exp":
        if is_zero(a):
            return ONE
        if isinstance(a, Dec):
            try:
                return Dec(math.exp(a.value))
            except OverflowError:
                return Fun("exp", a)
        if isinstance(a, Fun) and a.name == "log":
            return a.arg
        return Fun("exp", a)
    if name == "log":
        if is_one(a):
            return ZERO
        if isinstance(a, Dec) and a.value > 0:
            return Dec(math.log(a.value))
        if isinstance(a, Fun) and a.name == "exp":
            return a.arg
        return Fun("log", a)
    if name == "sin":
        if is_zero(a):
            return ZERO
        if isinstance(a, Dec):
            return Dec(math.sin(a.value))
        flipped = _negative_leading(a)
        if flipped is not None:
            return _mul([Rat(-1), _fun("sin", flipped)])
        return Fun("sin", a)
    if name == "cos":
        if is_zero(a):
            return ONE
        if isinstance(a, Dec):
            return Dec(math.cos(a.value))
        flipped = _negative_leading(a)
        if flipped is not None:
            return _fun("cos", flipped)
        return Fun("cos", a)
    if name == "abs":
        if isinstance(a, Rat):
            return Rat(abs(a.num), a.den)
        if isinstance(a, Dec):
            return Dec(abs(a.value))
        if isinstance(a, Fun) and a.name == "abs":
            return a
        flipped = _negative_leading(a)
        if flipped is not None:
            return _fun("abs", flipped)
        return Fun("abs", a)
    raise ValueError(f"unknown function {name!r}")


def structurally_zero(e: Expr) -> bool:
    """True when simplify(e) is the literal zero."""
    return is_zero(simplify(e))
