"""Self-contained symbolic expression engine."""

from .nodes import (
    Add,
    Dec,
    Expr,
    FUNCTION_NAMES,
    Fun,
    Mul,
    Neg,
    Pow,
    Rat,
    Sym,
    Symbol,
    SymbolKind,
    T,
    Unk,
    ZERO,
    ONE,
    HALF,
    abs_,
    add,
    as_expr,
    contains_unknowns,
    cos,
    exp,
    free_symbols,
    is_number,
    is_zero,
    log,
    mul,
    num,
    param,
    pow_,
    sin,
    sort_key,
    sqrt,
    symbol_from_text,
    unknown,
    unknown_names,
    w_sym,
    walk,
    x_sym,
)
from .simplify import simplify, structurally_zero
from .calculus import BindingError, diff, substitute
from .parser import ParseError, parse
from .render import render
from .numeric import (
    DomainError,
    EvalError,
    UnboundSymbolError,
    UnresolvedUnknownError,
    ZeroStatus,
    ZeroTestPolicy,
    ZeroVerdict,
    eval_at,
    sample_points,
    zero_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]
