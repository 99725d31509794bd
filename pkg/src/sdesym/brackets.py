"""Lie brackets on (t, x, w), bracket-form determining residuals, the
second-order obstruction to Ito closure, and pairwise closure checks."""

from __future__ import annotations

from dataclasses import dataclass

from .expr import (
    Expr,
    HALF,
    Rat,
    T,
    ZERO,
    ZeroStatus,
    ZeroTestPolicy,
    ZeroVerdict,
    diff,
    simplify,
    substitute,
    x_sym,
    zero_test,
)
from .expr.nodes import add, is_zero, mul
from .sde import ITO, JetField, STRATONOVICH, SdeModel, VectorFieldCandidate, ito_laplacian, misawa_fields
from .determining import CheckReport, Variant, VariantMismatchError, check, infer_variant


def lie_bracket(v1: JetField, v2: JetField) -> JetField:
    """Commutator [v1, v2]; coefficients v1(v2^c) - v2(v1^c) per coordinate."""
    if len(v1.dx) != len(v2.dx) or len(v1.dw) != len(v2.dw):
        raise ValueError("bracket of fields over different spaces")
    dt = simplify(add(v1.apply(v2.dt), mul(Rat(-1), v2.apply(v1.dt))))
    dx = tuple(
        simplify(add(v1.apply(v2.dx[i]), mul(Rat(-1), v2.apply(v1.dx[i]))))
        for i in range(len(v1.dx))
    )
    dw = tuple(
        simplify(add(v1.apply(v2.dw[k]), mul(Rat(-1), v2.apply(v1.dw[k]))))
        for k in range(len(v1.dw))
    )
    return JetField(dt, dx, dw)


def jet_sum(a: JetField, b: JetField, coeff: Expr = Rat(1)) -> JetField:
    """a + coeff * b, simplified componentwise."""
    return JetField(
        simplify(add(a.dt, mul(coeff, b.dt))),
        tuple(simplify(add(x, mul(coeff, y))) for x, y in zip(a.dx, b.dx)),
        tuple(simplify(add(x, mul(coeff, y))) for x, y in zip(a.dw, b.dw)),
    )


def z_field(phi: tuple[Expr, ...], model: SdeModel) -> JetField:
    """Z = (Delta phi^j) d_j with the model's second-order operator."""
    if model.form != ITO:
        raise ValueError("z_field requires a model in Ito form")
    return JetField(ZERO, tuple(ito_laplacian(p, model) for p in phi), (ZERO,) * model.m)


def _y_field(phi: tuple[Expr, ...], m: int, h: tuple[Expr, ...] = ()) -> JetField:
    return JetField(ZERO, phi, tuple(h) if h else (ZERO,) * m)


def bracket_residuals(
    model: SdeModel,
    candidate: VectorFieldCandidate,
    form: str | None = None,
) -> list[tuple[str, JetField]]:
    """Residual fields of the commutator form of the determining equations.

    Ito, simple candidate:          [X, Y] + (1/2) Z and [Xhat_k, Y];
    Stratonovich, simple candidate: [Y_mu, Y] for mu = 0..m;
    Stratonovich with tau = tau(t): [Z_0, Z] - tau_t (d_t + b^i d_i) and
                                    [Z_k, Z] - (1/2) tau_t sigma^i_k d_i.
    All residuals vanish exactly when the corresponding determining system
    is satisfied.
    """
    form = form or model.form
    if form != model.form:
        raise VariantMismatchError(f"model is in {model.form} form, bracket form {form} requested")
    tau_zero = is_zero(simplify(candidate.tau))
    h_zero = all(is_zero(simplify(hk)) for hk in candidate.h) if candidate.h else True
    if model.form == ITO:
        if not (tau_zero and h_zero):
            raise VariantMismatchError("Ito bracket residuals are defined for simple candidates")
        y0, ys = misawa_fields(model)
        y = _y_field(candidate.phi, model.m)
        x = JetField(Rat(1), model.drift, (ZERO,) * model.m)
        z = z_field(candidate.phi, model)
        out = [("drift", jet_sum(lie_bracket(x, y), z, HALF))]
        for k, yk in enumerate(ys, start=1):
            out.append((f"diffusion.{k}", lie_bracket(yk, y)))
        return out
    # Stratonovich
    y0, ys = misawa_fields(model)
    if tau_zero and h_zero:
        y = _y_field(candidate.phi, model.m)
        out = [("mu.0", lie_bracket(y0, y))]
        for k, yk in enumerate(ys, start=1):
            out.append((f"mu.{k}", lie_bracket(yk, y)))
        return out
    if not h_zero:
        raise VariantMismatchError("Stratonovich bracket residuals do not support Wiener action")
    # time-acting candidate Z = tau(t) d_t + phi^i d_i
    zc = JetField(candidate.tau, candidate.phi, (ZERO,) * model.m)
    tau_t = diff(candidate.tau, T)
    out = []
    rhs0 = JetField(tau_t, tuple(mul(tau_t, b) for b in model.drift), (ZERO,) * model.m)
    out.append(("mu.0", jet_sum(lie_bracket(y0, zc), rhs0, Rat(-1))))
    for k, yk in enumerate(ys, start=1):
        rhs = JetField(
            ZERO,
            tuple(mul(HALF, tau_t, model.sigma[i][k - 1]) for i in range(model.n)),
            (ZERO,) * model.m,
        )
        out.append((f"mu.{k}", jet_sum(lie_bracket(yk, zc), rhs, Rat(-1))))
    return out


def w_term(xi: tuple[Expr, ...], eta: tuple[Expr, ...], model: SdeModel) -> JetField:
    """Obstruction W to Ito closure, via its defining rearrangement

        W = (1/2) ( Z_[xi,eta] - [Y_xi, Z_eta] + [Y_eta, Z_xi] ).

    W = 0 makes the bracket of two simple symmetries a symmetry again.
    """
    if model.form != ITO:
        raise ValueError("w_term requires a model in Ito form")
    n = model.n
    xs = [x_sym(i) for i in range(1, n + 1)]
    phi_bracket = tuple(
        simplify(
            add(
                *[mul(xi[j], diff(eta[i], xs[j])) for j in range(n)],
                *[mul(Rat(-1), eta[j], diff(xi[i], xs[j])) for j in range(n)],
            )
        )
        for i in range(n)
    )
    z_b = z_field(phi_bracket, model)
    y_xi = _y_field(tuple(xi), model.m)
    y_eta = _y_field(tuple(eta), model.m)
    z_xi = z_field(tuple(xi), model)
    z_eta = z_field(tuple(eta), model)
    inner = jet_sum(jet_sum(z_b, lie_bracket(y_xi, z_eta), Rat(-1)), lie_bracket(y_eta, z_xi))
    return JetField(
        simplify(mul(HALF, inner.dt)),
        tuple(simplify(mul(HALF, c)) for c in inner.dx),
        tuple(simplify(mul(HALF, c)) for c in inner.dw),
    )


def field_zero_test(
    field: JetField, model: SdeModel, policy: ZeroTestPolicy | None = None
) -> ZeroVerdict:
    """Zero-test a jet field componentwise; worst component verdict wins."""
    values = model.param_values()
    worst = ZeroVerdict(ZeroStatus.PROVED_ZERO)
    rank = {
        ZeroStatus.PROVED_ZERO: 0,
        ZeroStatus.NUMERICALLY_ZERO: 1,
        ZeroStatus.INCONCLUSIVE: 2,
        ZeroStatus.NONZERO: 3,
    }
    for c in (field.dt, *field.dx, *field.dw):
        e = substitute(c, values) if values else c
        v = zero_test(e, policy)
        if rank[v.status] > rank[worst.status]:
            worst = v
    return worst


@dataclass(frozen=True)
class PairResult:
    i: int
    j: int
    bracket: VectorFieldCandidate
    report: CheckReport
    w_witness: ZeroVerdict | None = None


@dataclass(frozen=True)
class ClosureReport:
    field_reports: tuple[CheckReport, ...]
    pair_results: tuple[PairResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.is_symmetry for r in self.field_reports) and all(
            p.report.is_symmetry for p in self.pair_results
        )

    def failing_pairs(self) -> list[PairResult]:
        return [p for p in self.pair_results if not p.report.is_symmetry]


def closure_check(
    model: SdeModel,
    fields: list[VectorFieldCandidate],
    form: str | None = None,
    policy: ZeroTestPolicy | None = None,
) -> ClosureReport:
    """Verify each field, then re-check every pairwise bracket.

    Fields must be time-preserving (tau = 0).  Fields that fail their own
    verification are reported (precondition violation) and the pair results
    stay attributable; in the Ito case a failing pair carries the witness of
    the nonzero second-order obstruction term.
    """
    form = form or model.form
    for c in fields:
        if not is_zero(simplify(c.tau)):
            raise VariantMismatchError("closure_check requires time-preserving fields (tau = 0)")
    field_reports = tuple(check(model, c, infer_variant(model, c), policy) for c in fields)
    pairs = []
    for i in range(len(fields)):
        for j in range(i + 1, len(fields)):
            a, b = fields[i], fields[j]
            ya = _y_field(a.phi, model.m, a.h)
            yb = _y_field(b.phi, model.m, b.h)
            br = lie_bracket(ya, yb)
            cand = VectorFieldCandidate(ZERO, br.dx, br.dw)
            rep = check(model, cand, infer_variant(model, cand), policy)
            witness = None
            if model.form == ITO and not rep.is_symmetry:
                witness = field_zero_test(w_term(a.phi, b.phi, model), model, policy)
            pairs.append(PairResult(i, j, cand, rep, witness))
    return ClosureReport(field_reports, tuple(pairs))
