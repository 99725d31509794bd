"""SDE data model, the Ito Laplacian, Misawa fields and form conversion.

An :class:`SdeModel` holds either an Ito system
``dx^i = f^i(x,t) dt + sigma^i_k(x,t) dw^k`` or the Stratonovich system with
drift ``b`` and the same diffusion matrix.  The second-order operator
``laplacian`` includes the mixed x-w block

    Delta u = sum_k u_{w^k w^k} + sum_{j,k} (sigma sigma^T)^{jk} u_{x^j x^k}
              + 2 sum_{j,k} sigma^j_k u_{x^j w^k},

which is what Ito's formula produces for functions that depend on the
driving Wiener processes as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .expr import (
    Expr,
    HALF,
    Rat,
    Symbol,
    SymbolKind,
    T,
    ZERO,
    as_expr,
    diff,
    free_symbols,
    mul,
    simplify,
    w_sym,
    x_sym,
)
from .expr.nodes import add

ITO = "ito"
STRATONOVICH = "stratonovich"


@dataclass(frozen=True)
class SdeModel:
    """An SDE in Ito or Stratonovich form.

    ``drift`` holds f (Ito) or b (Stratonovich); ``sigma`` is the n x m
    diffusion matrix; ``params`` maps declared parameter names to optional
    numeric values used for evaluation.
    """

    form: str
    n: int
    m: int
    drift: tuple[Expr, ...]
    sigma: tuple[tuple[Expr, ...], ...]
    params: dict[str, float | None] = field(default_factory=dict)

    def __post_init__(self):
        if self.form not in (ITO, STRATONOVICH):
            raise ValueError(f"form must be {ITO!r} or {STRATONOVICH!r}")
        object.__setattr__(self, "drift", tuple(as_expr(e) for e in self.drift))
        object.__setattr__(
            self, "sigma", tuple(tuple(as_expr(e) for e in row) for row in self.sigma)
        )

    @property
    def space_symbols(self) -> tuple[Symbol, ...]:
        return tuple(x_sym(i) for i in range(1, self.n + 1))

    @property
    def wiener_symbols(self) -> tuple[Symbol, ...]:
        return tuple(w_sym(k) for k in range(1, self.m + 1))

    def param_values(self) -> dict[Symbol, float]:
        from .expr import param

        return {param(k): v for k, v in self.params.items() if v is not None}


@dataclass(frozen=True)
class VectorFieldCandidate:
    """Candidate symmetry generator: tau d_t + phi^i d_i + h^k dhat_k."""

    tau: Expr
    phi: tuple[Expr, ...]
    h: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "tau", as_expr(self.tau))
        object.__setattr__(self, "phi", tuple(as_expr(e) for e in self.phi))
        object.__setattr__(self, "h", tuple(as_expr(e) for e in self.h))

    @classmethod
    def simple(cls, phi) -> "VectorFieldCandidate":
        phi = tuple(as_expr(e) for e in (phi if isinstance(phi, (tuple, list)) else (phi,)))
        return cls(ZERO, phi, ())

    def is_simple(self) -> bool:
        from .expr import is_zero

        return is_zero(simplify(self.tau)) and all(is_zero(simplify(h)) for h in self.h)


@dataclass(frozen=True)
class JetField:
    """First-order differential operator a d_t + b^i d_i + c^k dhat_k."""

    dt: Expr
    dx: tuple[Expr, ...]
    dw: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "dt", as_expr(self.dt))
        object.__setattr__(self, "dx", tuple(as_expr(e) for e in self.dx))
        object.__setattr__(self, "dw", tuple(as_expr(e) for e in self.dw))

    def apply(self, u: Expr) -> Expr:
        """Apply the operator to a function of (t, x, w)."""
        terms = [mul(self.dt, diff(u, T))]
        for i, c in enumerate(self.dx, start=1):
            terms.append(mul(c, diff(u, x_sym(i))))
        for k, c in enumerate(self.dw, start=1):
            terms.append(mul(c, diff(u, w_sym(k))))
        return simplify(add(*terms))

    def is_zero(self) -> bool:
        from .expr import is_zero

        return (
            is_zero(simplify(self.dt))
            and all(is_zero(simplify(c)) for c in self.dx)
            and all(is_zero(simplify(c)) for c in self.dw)
        )

    def simplified(self) -> "JetField":
        return JetField(
            simplify(self.dt),
            tuple(simplify(c) for c in self.dx),
            tuple(simplify(c) for c in self.dw),
        )


def validate_model(model: SdeModel) -> list[str]:
    """Return a list of invariant violations (empty when the model is valid)."""
    out = []
    if model.n < 1:
        out.append("dimension: n must be >= 1")
    if model.m < 1:
        out.append("wiener: m must be >= 1")
    if len(model.drift) != model.n:
        out.append(f"drift: expected {model.n} components, got {len(model.drift)}")
    if len(model.sigma) != model.n:
        out.append(f"sigma: expected {model.n} rows, got {len(model.sigma)}")
    for i, row in enumerate(model.sigma, start=1):
        if len(row) != model.m:
            out.append(f"sigma.{i}: expected {model.m} columns, got {len(row)}")

    def check_expr(label: str, e: Expr):
        for s in sorted(free_symbols(e), key=lambda q: q.sort_key()):
            if s.kind is SymbolKind.WIENER:
                out.append(f"{label}: drift/diffusion must not reference Wiener symbols ({s.text})")
            elif s.kind is SymbolKind.SPACE and s.index > model.n:
                out.append(f"{label}: space index {s.text} exceeds dimension {model.n}")
            elif s.kind is SymbolKind.PARAM and s.name not in model.params:
                out.append(f"{label}: undeclared parameter {s.name!r}")

    for i, e in enumerate(model.drift, start=1):
        check_expr(f"drift.{i}", e)
    for i, row in enumerate(model.sigma, start=1):
        for k, e in enumerate(row, start=1):
            check_expr(f"sigma.{i}.{k}", e)
    return out


def ito_laplacian(u: Expr, model: SdeModel) -> Expr:
    """Second-order operator of Ito's formula (w, x and mixed blocks)."""
    terms = []
    for k in range(1, model.m + 1):
        terms.append(diff(diff(u, w_sym(k)), w_sym(k)))
    for j in range(1, model.n + 1):
        for k in range(1, model.n + 1):
            a_jk = add(*[mul(model.sigma[j - 1][l], model.sigma[k - 1][l]) for l in range(model.m)])
            terms.append(mul(a_jk, diff(diff(u, x_sym(j)), x_sym(k))))
    for j in range(1, model.n + 1):
        for k in range(1, model.m + 1):
            terms.append(mul(Rat(2), model.sigma[j - 1][k - 1], diff(diff(u, x_sym(j)), w_sym(k))))
    return simplify(add(*terms))


def misawa_fields(model: SdeModel) -> tuple[JetField, tuple[JetField, ...]]:
    """Y_0 = d_t + drift^j d_j and Y_k = dhat_k + sigma^j_k d_j."""
    zero_w = (ZERO,) * model.m
    y0 = JetField(Rat(1), model.drift, zero_w)
    ys = []
    for k in range(1, model.m + 1):
        dw = tuple(Rat(1) if l == k else ZERO for l in range(1, model.m + 1))
        ys.append(JetField(ZERO, tuple(model.sigma[j][k - 1] for j in range(model.n)), dw))
    return y0, tuple(ys)


def ito_differential(F: Expr, model: SdeModel) -> tuple[Expr, tuple[Expr, ...]]:
    """Ito formula: dF = (Y_0 + 1/2 Delta)(F) dt + Y_k(F) dw^k."""
    if model.form != ITO:
        raise ValueError("ito_differential requires a model in Ito form")
    y0, ys = misawa_fields(model)
    drift_part = simplify(add(y0.apply(F), mul(HALF, ito_laplacian(F, model))))
    return drift_part, tuple(yk.apply(F) for yk in ys)


def drift_correction(model: SdeModel) -> tuple[Expr, ...]:
    """rho^i = 1/2 sum_{j,k} sigma^j_k d(sigma^i_k)/dx^j."""
    out = []
    for i in range(model.n):
        terms = []
        for j in range(model.n):
            for k in range(model.m):
                terms.append(mul(model.sigma[j][k], diff(model.sigma[i][k], x_sym(j + 1))))
        out.append(simplify(mul(HALF, add(*terms))) if terms else ZERO)
    return tuple(out)


def convert(model: SdeModel, target: str) -> SdeModel:
    """Convert between Ito and Stratonovich form (f = b + rho, same sigma)."""
    if target not in (ITO, STRATONOVICH):
        raise ValueError(f"target must be {ITO!r} or {STRATONOVICH!r}")
    if target == model.form:
        return model
    rho = drift_correction(model)
    if target == ITO:  # b -> f = b + rho
        new = tuple(simplify(add(b, r)) for b, r in zip(model.drift, rho))
    else:  # f -> b = f - rho
        new = tuple(simplify(add(f, mul(Rat(-1), r))) for f, r in zip(model.drift, rho))
    return replace(model, form=target, drift=new)
