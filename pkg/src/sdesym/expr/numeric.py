"""IEEE-double evaluation and the probabilistic zero test.

Evaluation keeps purely rational subtrees exact (``fractions.Fraction``)
and converts on contact with floats.  The zero test first tries symbolic
cancellation; failing that it samples a fixed Halton sequence over a box,
rejecting points where a denominator gets too small, so verdicts are
deterministic for a given expression and policy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

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
    Symbol,
    SymbolKind,
    Unk,
    contains_unknowns,
    free_symbols,
    is_number,
    is_zero,
    number_value,
)
from .render import render
from .simplify import simplify


class EvalError(ValueError):
    pass


class DomainError(EvalError):
    """Evaluation hit a singular point; carries the offending subtree."""

    def __init__(self, subtree: Expr, reason: str):
        self.subtree = subtree
        self.reason = reason
        super().__init__(f"{reason} in {render(subtree)}")


class UnboundSymbolError(EvalError):
    pass


class UnresolvedUnknownError(EvalError):
    pass


def eval_at(e: Expr, point: dict[Symbol, float]) -> float:
    """Evaluate ``e`` at ``point`` (every free symbol must be bound)."""
    return float(_ev(e, point, None))


class _Reject(Exception):
    pass


def _ev(e: Expr, point: dict, denom_threshold: float | None):
    if isinstance(e, Rat):
        return e.value
    if isinstance(e, Dec):
        return e.value
    if isinstance(e, Sym):
        try:
            return point[e.symbol]
        except KeyError:
            raise UnboundSymbolError(f"symbol {e.symbol.text} is not bound") from None
    if isinstance(e, Neg):
        return -_ev(e.arg, point, denom_threshold)
    if isinstance(e, Add):
        total = Fraction(0)
        for t in e.terms:
            total = total + _ev(t, point, denom_threshold)
        return total
    if isinstance(e, Mul):
        total = Fraction(1)
        for f in e.factors:
            total = total * _ev(f, point, denom_threshold)
        return total
    if isinstance(e, Pow):
        b = _ev(e.base, point, denom_threshold)
        x = _ev(e.exponent, point, denom_threshold)
        negative_exp = (isinstance(x, Fraction) and x < 0) or (
            isinstance(x, float) and x < 0
        )
        if negative_exp:
            if b == 0:
                raise DomainError(e, "division by zero")
            if denom_threshold is not None and abs(b) < denom_threshold:
                raise _Reject
        if isinstance(b, Fraction) and isinstance(x, Fraction) and x.denominator == 1:
            if abs(x.numerator) <= 128:
                return b**x.numerator
            b, x = float(b), float(x)
        bf, xf = float(b), float(x)
        if bf < 0 and (not isinstance(x, Fraction) or x.denominator != 1):
            xr = float(x)
            if xr != int(xr):
                raise DomainError(e, "fractional power of a negative base")
            xf = xr
        try:
            r = bf**xf
        except OverflowError:
            raise DomainError(e, "overflow") from None
        except ZeroDivisionError:
            raise DomainError(e, "division by zero") from None
        if isinstance(r, complex):
            raise DomainError(e, "fractional power of a negative base")
        return r
    if isinstance(e, Fun):
        v = float(_ev(e.arg, point, denom_threshold))
        try:
            if e.name == "exp":
                return math.exp(v)
            if e.name == "log":
                if v <= 0:
                    raise DomainError(e, "log of a non-positive value")
                return math.log(v)
            if e.name == "sin":
                return math.sin(v)
            if e.name == "cos":
                return math.cos(v)
            if e.name == "sqrt":
                if v < 0:
                    raise DomainError(e, "square root of a negative value")
                return math.sqrt(v)
            if e.name == "abs":
                return abs(v)
        except OverflowError:
            raise DomainError(e, "overflow") from None
        raise ValueError(e.name)
    if isinstance(e, Unk):
        raise UnresolvedUnknownError(
            f"cannot evaluate unresolved unknown function {e.name!r}"
        )
    raise TypeError(f"not an expression: {e!r}")


class ZeroStatus(enum.Enum):
    PROVED_ZERO = "proved-zero"
    NUMERICALLY_ZERO = "numerically-zero"
    NONZERO = "nonzero"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ZeroVerdict:
    status: ZeroStatus
    samples: int = 0
    max_residual: float = 0.0
    witness: dict[Symbol, float] | None = None
    value: float = 0.0
    reason: str = ""

    @property
    def is_zero(self) -> bool:
        return self.status in (ZeroStatus.PROVED_ZERO, ZeroStatus.NUMERICALLY_ZERO)

    def describe(self) -> str:
        if self.status is ZeroStatus.PROVED_ZERO:
            return "proved-zero"
        if self.status is ZeroStatus.NUMERICALLY_ZERO:
            return f"numerically-zero (samples={self.samples}, max|r|={self.max_residual:.3g})"
        if self.status is ZeroStatus.NONZERO:
            pt = ", ".join(f"{s.text}={v:.6g}" for s, v in sorted(
                self.witness.items(), key=lambda kv: kv[0].sort_key()))
            return f"nonzero (value={self.value:.6g} at {pt or 'every point'})"
        return f"inconclusive ({self.reason})"


_DEFAULT_BOX = {
    SymbolKind.TIME: (0.1, 2.0),
    SymbolKind.SPACE: (-2.0, 2.0),
    SymbolKind.WIENER: (-2.0, 2.0),
    SymbolKind.PARAM: (-2.0, 2.0),
}


@dataclass(frozen=True)
class ZeroTestPolicy:
    samples: int = 64
    tol_abs: float = 1e-9
    tol_rel: float = 1e-9
    denom_threshold: float = 0.1
    box: dict = field(default_factory=lambda: dict(_DEFAULT_BOX))

    def with_tolerance(self, tol: float) -> "ZeroTestPolicy":
        return ZeroTestPolicy(self.samples, tol, tol, self.denom_threshold, dict(self.box))


def _primes(n: int) -> list[int]:
    out, c = [], 2
    while len(out) < n:
        if all(c % p for p in out):
            out.append(c)
        c += 1
    return out


def _halton(index: int, base: int) -> float:
    f, r = 1.0, 0.0
    while index > 0:
        f /= base
        r += f * (index % base)
        index //= base
    return r


_HALTON_OFFSET = 17  # skip the degenerate leading runs of the sequence


def sample_points(symbols: list[Symbol], count: int, box: dict) -> list[dict[Symbol, float]]:
    """Deterministic quasi-random points in the policy box."""
    bases = _primes(max(1, len(symbols)))
    points = []
    for i in range(count):
        pt = {}
        for d, s in enumerate(symbols):
            lo, hi = box[s.kind]
            u = _halton(_HALTON_OFFSET + i, bases[d])
            pt[s] = lo + u * (hi - lo)
        points.append(pt)
    return points


def zero_test(e: Expr, policy: ZeroTestPolicy | None = None) -> ZeroVerdict:
    """Decide whether ``e`` vanishes identically.

    Symbolic cancellation gives ``PROVED_ZERO``; otherwise the expression is
    sampled at quasi-random points, points with near-singular denominators
    are rejected, and the first clear violation yields ``NONZERO`` with a
    witness.
    """
    policy = policy or ZeroTestPolicy()
    s = simplify(e)
    if is_zero(s):
        return ZeroVerdict(ZeroStatus.PROVED_ZERO)
    if contains_unknowns(s):
        raise UnresolvedUnknownError(
            "zero_test requires an expression without unknown-function nodes"
        )
    syms = sorted(free_symbols(s), key=lambda q: q.sort_key())
    evaluated = 0
    max_res = 0.0
    for pt in sample_points(syms, policy.samples, policy.box):
        try:
            if isinstance(s, Add):
                vals = [float(_ev(t, pt, policy.denom_threshold)) for t in s.terms]
                v = math.fsum(vals)
                scale = sum(abs(u) for u in vals)
            else:
                v = float(_ev(s, pt, policy.denom_threshold))
                scale = abs(v)
        except (_Reject, DomainError):
            continue
        except OverflowError:
            continue
        evaluated += 1
        tol = policy.tol_abs + policy.tol_rel * scale
        if not math.isfinite(v) or abs(v) > tol:
            return ZeroVerdict(ZeroStatus.NONZERO, witness=pt, value=v)
        max_res = max(max_res, abs(v))
    if evaluated < max(1, policy.samples // 4):
        return ZeroVerdict(
            ZeroStatus.INCONCLUSIVE,
            samples=evaluated,
            reason=f"only {evaluated} of {policy.samples} sample points were evaluable",
        )
    return ZeroVerdict(ZeroStatus.NUMERICALLY_ZERO, samples=evaluated, max_residual=max_res)
