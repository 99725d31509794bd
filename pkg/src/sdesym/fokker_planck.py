"""Fokker-Planck coefficients and the symmetry-consistency conditions.

For an Ito model the density transport equation is written as

    d_t u + A^{ij} d2_{ij} u + B^i d_i u + C u = 0,
    A = -(1/2) sigma sigma^T,  B^i = f^i + 2 d_j A^{ij},
    C = d_i f^i + d2_{ij} A^{ij}.

``gamma_lambda`` and ``fp_residuals`` express when a deterministic
generator tau(t) d_t + xi^i(x,t) d_i (with multiplier beta on u) maps
solutions to solutions.  The bilinear brace used throughout is the
commutator of the x-components,

    {a, b}^i = a^j d_j b^i - b^j d_j a^i,

the unique choice under which Lambda = 0 together with Gamma = 0
characterises the generators that are symmetries of the Ito system.
``delta_term`` measures the discrepancy between the determining systems of
an Ito equation and of its Stratonovich partner; for candidates that solve
the diffusion block it vanishes identically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import (
    Expr,
    HALF,
    Rat,
    SymbolKind,
    T,
    ZERO,
    as_expr,
    diff,
    free_symbols,
    simplify,
    x_sym,
)
from .expr.nodes import add, mul
from .sde import ITO, SdeModel, VectorFieldCandidate, drift_correction, ito_laplacian


@dataclass(frozen=True)
class FokkerPlanckCoeffs:
    A: tuple[tuple[Expr, ...], ...]
    B: tuple[Expr, ...]
    C: Expr


@dataclass(frozen=True)
class FpCandidate:
    """Deterministic density-equation symmetry ansatz (no Wiener dependence)."""

    tau: Expr
    xi: tuple[Expr, ...]
    beta: Expr = ZERO

    def __post_init__(self):
        object.__setattr__(self, "tau", as_expr(self.tau))
        object.__setattr__(self, "xi", tuple(as_expr(e) for e in self.xi))
        object.__setattr__(self, "beta", as_expr(self.beta))
        for label, e in (("tau", self.tau), ("beta", self.beta), *((f"xi.{i+1}", x) for i, x in enumerate(self.xi))):
            for s in free_symbols(e):
                if s.kind is SymbolKind.WIENER:
                    raise ValueError(f"{label} must not depend on Wiener variables ({s.text})")


def _require_ito(model: SdeModel, what: str):
    if model.form != ITO:
        raise ValueError(f"{what} requires a model in Ito form")


def fp_coefficients(model: SdeModel) -> FokkerPlanckCoeffs:
    _require_ito(model, "fp_coefficients")
    n, m = model.n, model.m
    xs = model.space_symbols
    A = tuple(
        tuple(
            simplify(mul(Rat(-1, 2), add(*[mul(model.sigma[i][k], model.sigma[j][k]) for k in range(m)])))
            for j in range(n)
        )
        for i in range(n)
    )
    B = tuple(
        simplify(add(model.drift[i], *[mul(Rat(2), diff(A[i][j], xs[j])) for j in range(n)]))
        for i in range(n)
    )
    C = simplify(
        add(
            *[diff(model.drift[i], xs[i]) for i in range(n)],
            *[diff(diff(A[i][j], xs[i]), xs[j]) for i in range(n) for j in range(n)],
        )
    )
    return FokkerPlanckCoeffs(A, B, C)


def _brace(a: tuple[Expr, ...], b: tuple[Expr, ...], n: int) -> tuple[Expr, ...]:
    """{a,b}^i = a^j d_j b^i - b^j d_j a^i."""
    xs = [x_sym(i) for i in range(1, n + 1)]
    return tuple(
        simplify(
            add(
                *[mul(a[j], diff(b[i], xs[j])) for j in range(n)],
                *[mul(Rat(-1), b[j], diff(a[i], xs[j])) for j in range(n)],
            )
        )
        for i in range(n)
    )


def gamma_lambda(
    model: SdeModel, cand: FpCandidate
) -> tuple[tuple[tuple[Expr, ...], ...], tuple[Expr, ...]]:
    """Gamma (n x m, space-major) and Lambda (n) of the consistency system."""
    _require_ito(model, "gamma_lambda")
    n, m = model.n, model.m
    xs = model.space_symbols
    tau_t = diff(cand.tau, T)
    gamma = tuple(
        tuple(
            simplify(
                add(
                    *[mul(model.sigma[q][j], diff(cand.xi[i], xs[q])) for q in range(n)],
                    *[mul(Rat(-1), cand.xi[q], diff(model.sigma[i][j], xs[q])) for q in range(n)],
                    mul(Rat(-1), cand.tau, diff(model.sigma[i][j], T)),
                    mul(Rat(-1, 2), model.sigma[i][j], tau_t),
                )
            )
            for j in range(m)
        )
        for i in range(n)
    )
    A = fp_coefficients(model).A
    brace = _brace(model.drift, cand.xi, n)
    lam = tuple(
        simplify(
            mul(
                Rat(-1),
                add(
                    diff(add(cand.xi[i], mul(Rat(-1), cand.tau, model.drift[i])), T),
                    brace[i],
                    *[
                        mul(Rat(-1), A[p][q], diff(diff(cand.xi[i], xs[p]), xs[q]))
                        for p in range(n)
                        for q in range(n)
                    ],
                ),
            )
        )
        for i in range(n)
    )
    return gamma, lam


@dataclass(frozen=True)
class FpResiduals:
    """The three blocks of the density-symmetry system; all must vanish."""

    sigma_gamma: tuple[tuple[Expr, ...], ...]  # n x n, symmetric
    lambda_block: tuple[Expr, ...]  # n
    transport: Expr

    def labeled(self) -> list[tuple[str, Expr]]:
        out = []
        n = len(self.sigma_gamma)
        for i in range(n):
            for k in range(i, n):
                out.append((f"sigma-gamma.{i+1}.{k+1}", self.sigma_gamma[i][k]))
        for i, e in enumerate(self.lambda_block, start=1):
            out.append((f"lambda.{i}", e))
        out.append(("transport", self.transport))
        return out


def fp_residuals(model: SdeModel, cand: FpCandidate) -> FpResiduals:
    _require_ito(model, "fp_residuals")
    n, m = model.n, model.m
    xs = model.space_symbols
    gamma, lam = gamma_lambda(model, cand)
    A = fp_coefficients(model).A
    sigma_gamma = tuple(
        tuple(
            simplify(
                add(
                    *[mul(model.sigma[i][j], gamma[k][j]) for j in range(m)],
                    *[mul(model.sigma[k][j], gamma[i][j]) for j in range(m)],
                )
            )
            for k in range(n)
        )
        for i in range(n)
    )
    lam_block = tuple(
        simplify(
            add(
                lam[i],
                *[mul(Rat(2), A[i][k], diff(cand.beta, xs[k])) for k in range(n)],
                *[
                    mul(Rat(2), A[i][p], diff(diff(cand.xi[k], xs[p]), xs[k]))
                    for p in range(n)
                    for k in range(n)
                ],
            )
        )
        for i in range(n)
    )
    g = simplify(add(cand.beta, *[diff(cand.xi[q], xs[q]) for q in range(n)]))
    transport = simplify(
        add(
            diff(g, T),
            *[mul(model.drift[i], diff(g, xs[i])) for i in range(n)],
            *[
                mul(Rat(-1), A[i][k], diff(diff(g, xs[i]), xs[k]))
                for i in range(n)
                for k in range(n)
            ],
        )
    )
    return FpResiduals(sigma_gamma, lam_block, transport)


def delta_term(model: SdeModel, candidate: VectorFieldCandidate) -> tuple[Expr, ...]:
    """Ito-vs-Stratonovich discrepancy
    delta^i = phi^j d_j rho^i - rho^j d_j phi^i - (1/2) Delta phi^i."""
    _require_ito(model, "delta_term")
    n = model.n
    xs = model.space_symbols
    rho = drift_correction(model)
    return tuple(
        simplify(
            add(
                *[mul(candidate.phi[j], diff(rho[i], xs[j])) for j in range(n)],
                *[mul(Rat(-1), rho[j], diff(candidate.phi[i], xs[j])) for j in range(n)],
                mul(Rat(-1, 2), ito_laplacian(candidate.phi[i], model)),
            )
        )
        for i in range(n)
    )


def proposition_identity_residual(model: SdeModel, cand: FpCandidate) -> tuple[Expr, ...]:
    """Left-minus-right of the claimed identity

        A^{mk} d2_{mk} xi^i + d_t(tau rho^i) - {rho, xi}^i
            = (1/2) sum_j [ sigma^k_j d_k Gamma^i_j + Gamma^k_j d_k sigma^i_j ].

    The claim does not survive scrutiny for general xi; the residual is
    returned so callers can probe and pin the outcome.
    """
    _require_ito(model, "proposition_identity_residual")
    n, m = model.n, model.m
    xs = model.space_symbols
    A = fp_coefficients(model).A
    rho = drift_correction(model)
    gamma, _ = gamma_lambda(model, cand)
    brace = _brace(rho, cand.xi, n)
    out = []
    for i in range(n):
        commutators = []
        for j in range(m):
            commutators.append(
                add(
                    *[mul(model.sigma[k][j], diff(gamma[i][j], xs[k])) for k in range(n)],
                    *[mul(gamma[k][j], diff(model.sigma[i][j], xs[k])) for k in range(n)],
                )
            )
        out.append(
            simplify(
                add(
                    *[
                        mul(A[p][q], diff(diff(cand.xi[i], xs[p]), xs[q]))
                        for p in range(n)
                        for q in range(n)
                    ],
                    diff(mul(cand.tau, rho[i]), T),
                    mul(Rat(-1), brace[i]),
                    *[mul(Rat(-1, 2), c) for c in commutators],
                )
            )
        )
    return tuple(out)
