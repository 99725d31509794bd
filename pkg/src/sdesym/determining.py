"""Determining-equation systems for symmetries of Ito and Stratonovich SDEs.

For an Ito model every variant is produced from the single master system

    L(phi^i) - X(f^i) - f^i L(tau) - sigma^i_k L(h^k)                    = 0
    Y_k(phi^i) - X(sigma^i_k) - f^i Y_k(tau) - sigma^i_m Y_k(h^m)
        - (1/2)(d_t tau) sigma^i_k                                       = 0

with X = tau d_t + phi^j d_j, Misawa fields Y_0, Y_k and L = Y_0 + Delta/2;
restricting the arguments of (tau, phi, h) yields the special classes.  The
sign convention is the one the simple-symmetry systems are usually displayed
in (drift residual starts with +d_t phi); multiplying by -1 gives the same
solution set.

For a Stratonovich model the master system (tau = tau(t), no Wiener action):

    d_t phi^i + b^j d_j phi^i - phi^j d_j b^i - tau d_t b^i
        - (d_t tau) b^i                                                  = 0
    dhat_k phi^i + sigma^j_k d_j phi^i - phi^j d_j sigma^i_k
        - tau d_t sigma^i_k - (1/2)(d_t tau) sigma^i_k                   = 0

``specialization_residual`` re-derives the widely printed special-case
displays independently and returns their term differences against the
master route; a handful of printed rows carry transcription slips which the
tests pin as closed-form drifts rather than zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .expr import (
    Expr,
    HALF,
    Rat,
    Symbol,
    SymbolKind,
    T,
    ZERO,
    ZeroStatus,
    ZeroTestPolicy,
    ZeroVerdict,
    contains_unknowns,
    diff,
    free_symbols,
    render,
    simplify,
    substitute,
    unknown,
    w_sym,
    x_sym,
    zero_test,
)
from .expr.nodes import add, is_zero, mul
from .sde import (
    ITO,
    JetField,
    STRATONOVICH,
    SdeModel,
    VectorFieldCandidate,
    ito_laplacian,
    misawa_fields,
)

_XT = frozenset({SymbolKind.SPACE, SymbolKind.TIME})
_ALL = frozenset({SymbolKind.SPACE, SymbolKind.TIME, SymbolKind.WIENER})
_T = frozenset({SymbolKind.TIME})
_TW = frozenset({SymbolKind.TIME, SymbolKind.WIENER})


class Variant(enum.Enum):
    ITO_SIMPLE_DET = "ito-simple-det"
    ITO_SIMPLE_RANDOM = "ito-simple-random"
    ITO_FIBER_PRESERVING_DET = "ito-fiber-preserving-det"
    ITO_W_SYMMETRY = "ito-w-symmetry"
    ITO_RANDOM_TIME_NO_H = "ito-random-time-no-h"
    ITO_TAU_T = "ito-tau-t"
    ITO_TAU_T_NO_H = "ito-tau-t-no-h"
    ITO_GENERAL = "ito-general"
    STRAT_SIMPLE_DET = "strat-simple-det"
    STRAT_SIMPLE_RANDOM = "strat-simple-random"
    STRAT_DET_TIME = "strat-det-time"
    STRAT_RANDOM_TIME = "strat-random-time"

    @classmethod
    def from_token(cls, token: str) -> "Variant":
        for v in cls:
            if v.value == token:
                return v
        raise ValueError(f"unknown variant {token!r}")

    @property
    def form(self) -> str:
        return ITO if self.value.startswith("ito") else STRATONOVICH


# allowed argument kinds: None means the component must vanish identically
_VARIANT_ARGS: dict[Variant, tuple[frozenset | None, frozenset, frozenset | None]] = {
    Variant.ITO_SIMPLE_DET: (None, _XT, None),
    Variant.ITO_SIMPLE_RANDOM: (None, _ALL, None),
    Variant.ITO_FIBER_PRESERVING_DET: (_T, _XT, None),
    Variant.ITO_W_SYMMETRY: (_T, _XT, _TW),
    Variant.ITO_RANDOM_TIME_NO_H: (_TW, _ALL, None),
    Variant.ITO_TAU_T: (_T, _ALL, _ALL),
    Variant.ITO_TAU_T_NO_H: (_T, _ALL, None),
    Variant.ITO_GENERAL: (_ALL, _ALL, _ALL),
    Variant.STRAT_SIMPLE_DET: (None, _XT, None),
    Variant.STRAT_SIMPLE_RANDOM: (None, _ALL, None),
    Variant.STRAT_DET_TIME: (_T, _XT, None),
    Variant.STRAT_RANDOM_TIME: (_T, _ALL, None),
}

_KIND_LABEL = {
    SymbolKind.TIME: "t",
    SymbolKind.SPACE: "x",
    SymbolKind.WIENER: "w",
}


class VariantMismatchError(ValueError):
    """Model form or candidate argument usage conflicts with the variant."""


def _check_args(label: str, e: Expr, allowed: frozenset | None, model: SdeModel):
    if allowed is None:
        if not is_zero(simplify(e)):
            raise VariantMismatchError(f"{label} must vanish for this variant")
        return
    for s in sorted(free_symbols(e), key=lambda q: q.sort_key()):
        if s.kind is SymbolKind.PARAM:
            continue
        if s.kind not in allowed:
            names = "".join(sorted(_KIND_LABEL[k] for k in allowed))
            raise VariantMismatchError(
                f"{label} may only depend on ({names}) but uses {s.text}"
            )
        if s.kind is SymbolKind.SPACE and s.index > model.n:
            raise VariantMismatchError(f"{label} uses {s.text} beyond dimension n={model.n}")
        if s.kind is SymbolKind.WIENER and s.index > model.m:
            raise VariantMismatchError(f"{label} uses {s.text} beyond Wiener dimension m={model.m}")


def _placeholder_args(model: SdeModel, allowed: frozenset) -> tuple[Symbol, ...]:
    args: list[Symbol] = []
    if SymbolKind.SPACE in allowed:
        args.extend(model.space_symbols)
    if SymbolKind.TIME in allowed:
        args.append(T)
    if SymbolKind.WIENER in allowed:
        args.extend(model.wiener_symbols)
    return tuple(args)


def _resolve_candidate(
    model: SdeModel, candidate: VectorFieldCandidate | None, variant: Variant
) -> tuple[Expr, tuple[Expr, ...], tuple[Expr, ...], dict]:
    tau_allowed, phi_allowed, h_allowed = _VARIANT_ARGS[variant]
    placeholders: dict[str, Expr] = {}
    if candidate is None:
        if tau_allowed is None:
            tau: Expr = ZERO
        else:
            tau = unknown("tau", _placeholder_args(model, tau_allowed))
            placeholders["tau"] = tau
        phi = []
        for i in range(1, model.n + 1):
            u = unknown(f"phi{i}", _placeholder_args(model, phi_allowed))
            placeholders[f"phi{i}"] = u
            phi.append(u)
        h = []
        for k in range(1, model.m + 1):
            if h_allowed is None:
                h.append(ZERO)
            else:
                u = unknown(f"h{k}", _placeholder_args(model, h_allowed))
                placeholders[f"h{k}"] = u
                h.append(u)
        return tau, tuple(phi), tuple(h), placeholders
    if len(candidate.phi) != model.n:
        raise VariantMismatchError(
            f"candidate has {len(candidate.phi)} phi components, model dimension is {model.n}"
        )
    h = tuple(candidate.h) if candidate.h else (ZERO,) * model.m
    if len(h) != model.m:
        raise VariantMismatchError(
            f"candidate has {len(h)} h components, model Wiener dimension is {model.m}"
        )
    _check_args("tau", candidate.tau, tau_allowed, model)
    for i, p in enumerate(candidate.phi, start=1):
        _check_args(f"phi.{i}", p, phi_allowed, model)
    for k, hk in enumerate(h, start=1):
        _check_args(f"h.{k}", hk, h_allowed, model)
    return candidate.tau, tuple(candidate.phi), h, placeholders


@dataclass(frozen=True)
class DeterminingSystem:
    """Residual expressions of one symmetry-class variant; all must vanish."""

    variant: Variant
    model: SdeModel
    drift_residuals: tuple[Expr, ...]
    diffusion_residuals: tuple[tuple[Expr, ...], ...]
    placeholders: dict = field(default_factory=dict)

    def labeled_residuals(self) -> list[tuple[str, Expr]]:
        out = [(f"drift.{i}", r) for i, r in enumerate(self.drift_residuals, start=1)]
        for i, row in enumerate(self.diffusion_residuals, start=1):
            for k, r in enumerate(row, start=1):
                out.append((f"diffusion.{i}.{k}", r))
        return out

    def render_lines(self, fmt: str = "plain") -> list[str]:
        if fmt == "latex":
            return [f"{render(r, 'latex')} = 0" for _, r in self.labeled_residuals()]
        return [f"{label}: {render(r)} = 0" for label, r in self.labeled_residuals()]


def build_system(
    model: SdeModel,
    candidate: VectorFieldCandidate | None,
    variant: Variant,
) -> DeterminingSystem:
    """Build the determining system; ``candidate=None`` uses placeholders."""
    if model.form != variant.form:
        raise VariantMismatchError(
            f"variant {variant.value} needs a model in {variant.form} form, got {model.form}"
        )
    tau, phi, h, placeholders = _resolve_candidate(model, candidate, variant)
    if model.form == ITO:
        drift, diffusion = _ito_master(model, tau, phi, h)
    else:
        drift, diffusion = _strat_master(model, tau, phi, h)
    return DeterminingSystem(variant, model, drift, diffusion, placeholders)


def _ito_master(model, tau, phi, h):
    y0, ys = misawa_fields(model)
    x_cand = JetField(tau, phi, (ZERO,) * model.m)

    def L(u):
        return simplify(add(y0.apply(u), mul(HALF, ito_laplacian(u, model))))

    l_tau = L(tau)
    l_h = [L(hk) for hk in h]
    tau_t = diff(tau, T)
    drift = []
    for i in range(model.n):
        f_i = model.drift[i]
        r = add(
            L(phi[i]),
            mul(Rat(-1), x_cand.apply(f_i)),
            mul(Rat(-1), f_i, l_tau),
            *[mul(Rat(-1), model.sigma[i][k], l_h[k]) for k in range(model.m)],
        )
        drift.append(simplify(r))
    yk_tau = [yk.apply(tau) for yk in ys]
    yk_h = [[yk.apply(hm) for hm in h] for yk in ys]
    diffusion = []
    for i in range(model.n):
        row = []
        for k in range(model.m):
            s_ik = model.sigma[i][k]
            r = add(
                ys[k].apply(phi[i]),
                mul(Rat(-1), x_cand.apply(s_ik)),
                mul(Rat(-1), model.drift[i], yk_tau[k]),
                *[mul(Rat(-1), model.sigma[i][m_], yk_h[k][m_]) for m_ in range(model.m)],
                mul(Rat(-1, 2), tau_t, s_ik),
            )
            row.append(simplify(r))
        diffusion.append(tuple(row))
    return tuple(drift), tuple(diffusion)


def _strat_master(model, tau, phi, h):
    if any(not is_zero(simplify(hk)) for hk in h):
        raise VariantMismatchError("Stratonovich variants do not support Wiener action")
    tau_t = diff(tau, T)
    xs = model.space_symbols
    drift = []
    for i in range(model.n):
        b_i = model.drift[i]
        r = add(
            diff(phi[i], T),
            *[mul(model.drift[j], diff(phi[i], xs[j])) for j in range(model.n)],
            *[mul(Rat(-1), phi[j], diff(b_i, xs[j])) for j in range(model.n)],
            mul(Rat(-1), tau, diff(b_i, T)),
            mul(Rat(-1), tau_t, b_i),
        )
        drift.append(simplify(r))
    diffusion = []
    for i in range(model.n):
        row = []
        for k in range(model.m):
            s_ik = model.sigma[i][k]
            r = add(
                diff(phi[i], w_sym(k + 1)),
                *[mul(model.sigma[j][k], diff(phi[i], xs[j])) for j in range(model.n)],
                *[mul(Rat(-1), phi[j], diff(s_ik, xs[j])) for j in range(model.n)],
                mul(Rat(-1), tau, diff(s_ik, T)),
                mul(Rat(-1, 2), tau_t, s_ik),
            )
            row.append(simplify(r))
        diffusion.append(tuple(row))
    return tuple(drift), tuple(diffusion)


@dataclass(frozen=True)
class CheckReport:
    """Aggregated verdict of a candidate against a determining system."""

    verdict: str  # 'symmetry' | 'not-symmetry' | 'inconclusive'
    residuals: tuple[tuple[str, ZeroVerdict], ...]
    exact: bool
    worst: tuple[str, ZeroVerdict] | None = None

    @property
    def is_symmetry(self) -> bool:
        return self.verdict == "symmetry"

    def confidence(self) -> str:
        return "exact" if self.exact else "numeric"


def check(
    model: SdeModel,
    candidate: VectorFieldCandidate,
    variant: Variant,
    policy: ZeroTestPolicy | None = None,
) -> CheckReport:
    """Substitute a concrete candidate and zero-test every residual."""
    for label, e in (("tau", candidate.tau), *((f"phi.{i+1}", p) for i, p in enumerate(candidate.phi)), *((f"h.{k+1}", hk) for k, hk in enumerate(candidate.h))):
        if contains_unknowns(e):
            raise VariantMismatchError(f"candidate component {label} contains unknown functions")
    system = build_system(model, candidate, variant)
    values = model.param_values()
    results = []
    for label, r in system.labeled_residuals():
        e = substitute(r, values) if values else r
        results.append((label, zero_test(e, policy)))
    return _aggregate(results)


def _aggregate(results) -> CheckReport:
    nonzero = [(l, v) for l, v in results if v.status is ZeroStatus.NONZERO]
    inconclusive = [(l, v) for l, v in results if v.status is ZeroStatus.INCONCLUSIVE]
    exact = all(v.status is ZeroStatus.PROVED_ZERO for _, v in results)
    if nonzero:
        worst = max(nonzero, key=lambda lv: abs(lv[1].value))
        return CheckReport("not-symmetry", tuple(results), False, worst)
    if inconclusive:
        return CheckReport("inconclusive", tuple(results), False, inconclusive[0])
    return CheckReport("symmetry", tuple(results), exact)


@dataclass(frozen=True)
class WActionReport:
    ok: bool
    matrix: tuple[tuple[Expr, ...], ...]
    failures: tuple[str, ...]


def validate_w_action(candidate: VectorFieldCandidate, model: SdeModel) -> WActionReport:
    """Check h^k = B^k_l w^l with B antisymmetric (Wiener measure preserved).

    Operationally: each h^k is linear in w with no w-free part, and the
    matrix B^k_l = dhat_l h^k satisfies B + B^T = 0 after simplification.
    """
    m = model.m
    h = tuple(candidate.h) if candidate.h else (ZERO,) * m
    failures = []
    if len(h) != m:
        return WActionReport(False, (), (f"expected {m} h components, got {len(h)}",))
    ws = model.wiener_symbols
    for k, hk in enumerate(h, start=1):
        for a in range(m):
            for b in range(m):
                if not is_zero(simplify(diff(diff(hk, ws[a]), ws[b]))):
                    failures.append(f"h.{k} is not linear in w ({ws[a].text}, {ws[b].text})")
        const = simplify(substitute(hk, {w: ZERO for w in ws}))
        if not is_zero(const):
            failures.append(f"h.{k} has a w-free part {render(const)}")
    B = tuple(tuple(diff(h[k], ws[l]) for l in range(m)) for k in range(m))
    for k in range(m):
        for l in range(m):
            s = simplify(add(B[k][l], B[l][k]))
            if not is_zero(s):
                failures.append(
                    f"B.{k+1}.{l+1} + B.{l+1}.{k+1} = {render(s)} (B not antisymmetric)"
                )
    return WActionReport(not failures, B, tuple(failures))


def infer_variant(model: SdeModel, candidate: VectorFieldCandidate) -> Variant:
    """Most specific variant consistent with the candidate's argument usage."""
    tau0 = is_zero(simplify(candidate.tau))
    h = tuple(candidate.h) if candidate.h else ()
    h0 = all(is_zero(simplify(hk)) for hk in h) if h else True

    def kinds(es):
        out = set()
        for e in es:
            out |= {s.kind for s in free_symbols(e) if s.kind is not SymbolKind.PARAM}
        return out

    phi_k = kinds(candidate.phi)
    tau_k = kinds([candidate.tau])
    h_k = kinds(h)
    if model.form == ITO:
        if tau0 and h0:
            return Variant.ITO_SIMPLE_DET if phi_k <= _XT else Variant.ITO_SIMPLE_RANDOM
        if h0:
            if tau_k <= _T:
                return (
                    Variant.ITO_FIBER_PRESERVING_DET
                    if phi_k <= _XT
                    else Variant.ITO_TAU_T_NO_H
                )
            if tau_k <= _TW:
                return Variant.ITO_RANDOM_TIME_NO_H
            return Variant.ITO_GENERAL
        if tau_k <= _T and phi_k <= _XT and h_k <= _TW and not tau0:
            return Variant.ITO_W_SYMMETRY
        if tau_k <= _T and not (tau0 and not h0):
            return Variant.ITO_TAU_T if not tau0 else Variant.ITO_GENERAL
        return Variant.ITO_GENERAL
    if tau0 and h0:
        return Variant.STRAT_SIMPLE_DET if phi_k <= _XT else Variant.STRAT_SIMPLE_RANDOM
    if h0 and tau_k <= _T:
        return Variant.STRAT_DET_TIME if phi_k <= _XT else Variant.STRAT_RANDOM_TIME
    raise VariantMismatchError(
        "no Stratonovich variant supports this candidate (Wiener action or general time change)"
    )


# ---------------------------------------------------------------------------
# printed special-case displays, used only to validate the master route


def specialization_residual(
    model: SdeModel,
    candidate: VectorFieldCandidate | None,
    variant: Variant,
) -> list[tuple[str, Expr]]:
    """Differences between the master-built system and the printed display.

    Returns one labelled expression per residual slot.  For most variants
    every difference simplifies to zero; the drift rows of the general and
    tau(t)/tau(t,w) displays are known to drift by closed-form terms (the
    displays' second-order terms carry sign slips), which callers can pin.
    """
    if variant.form != ITO:
        raise VariantMismatchError("specialization displays exist for Ito variants only")
    master = build_system(model, candidate, variant)
    tau, phi, h, _ = _resolve_candidate(model, candidate, variant)
    printed_drift, printed_diffusion = _printed_system(model, tau, phi, h, variant)
    out = []
    for i in range(model.n):
        d = simplify(add(master.drift_residuals[i], mul(Rat(-1), printed_drift[i])))
        out.append((f"drift.{i+1}", d))
    for i in range(model.n):
        for k in range(model.m):
            d = simplify(
                add(master.diffusion_residuals[i][k], mul(Rat(-1), printed_diffusion[i][k]))
            )
            out.append((f"diffusion.{i+1}.{k+1}", d))
    return out


def _printed_system(model, tau, phi, h, variant):
    """Literal transcriptions of the special-case displays.

    Rows whose published orientation is opposite to the simple-system
    convention enter negated, so that agreement means difference zero.
    """
    n, m = model.n, model.m
    f = model.drift
    sg = model.sigma
    xs = model.space_symbols
    ws = model.wiener_symbols
    tau_t = diff(tau, T)
    lap = lambda u: ito_laplacian(u, model)

    def d_x(u, j):
        return diff(u, xs[j])

    def d_w(u, k):
        return diff(u, ws[k])

    simple_drift = lambda i: add(
        diff(phi[i], T),
        *[mul(f[j], d_x(phi[i], j)) for j in range(n)],
        *[mul(Rat(-1), phi[j], d_x(f[i], j)) for j in range(n)],
        mul(HALF, lap(phi[i])),
    )
    simple_diff = lambda i, k, with_w: add(
        d_w(phi[i], k) if with_w else ZERO,
        *[mul(sg[j][k], d_x(phi[i], j)) for j in range(n)],
        *[mul(Rat(-1), phi[j], d_x(sg[i][k], j)) for j in range(n)],
    )

    V = Variant
    if variant is V.ITO_SIMPLE_DET:
        drift = [simple_drift(i) for i in range(n)]
        diffusion = [[simple_diff(i, k, False) for k in range(m)] for i in range(n)]
    elif variant is V.ITO_SIMPLE_RANDOM:
        drift = [simple_drift(i) for i in range(n)]
        diffusion = [[simple_diff(i, k, True) for k in range(m)] for i in range(n)]
    elif variant is V.ITO_FIBER_PRESERVING_DET:
        drift = [
            add(
                diff(phi[i], T),
                mul(Rat(-1), diff(mul(tau, f[i]), T)),
                *[mul(f[j], d_x(phi[i], j)) for j in range(n)],
                *[mul(Rat(-1), phi[j], d_x(f[i], j)) for j in range(n)],
                mul(HALF, lap(phi[i])),
            )
            for i in range(n)
        ]
        # published row reads tau ds/dt + phi ds - s dphi = -(1/2) tau_t s; negated
        diffusion = [
            [
                mul(
                    Rat(-1),
                    add(
                        mul(tau, diff(sg[i][k], T)),
                        *[mul(phi[j], d_x(sg[i][k], j)) for j in range(n)],
                        *[mul(Rat(-1), sg[j][k], d_x(phi[i], j)) for j in range(n)],
                        mul(HALF, tau_t, sg[i][k]),
                    ),
                )
                for k in range(m)
            ]
            for i in range(n)
        ]
    elif variant is V.ITO_W_SYMMETRY:
        drift = [
            add(
                diff(phi[i], T),
                mul(Rat(-1), diff(mul(tau, f[i]), T)),
                *[mul(f[j], d_x(phi[i], j)) for j in range(n)],
                *[mul(Rat(-1), phi[j], d_x(f[i], j)) for j in range(n)],
                *[mul(Rat(-1), sg[i][k], diff(h[k], T)) for k in range(m)],
                *[mul(Rat(-1, 2), sg[i][k], lap(h[k])) for k in range(m)],
                mul(HALF, lap(phi[i])),
            )
            for i in range(n)
        ]
        diffusion = [
            [
                mul(
                    Rat(-1),
                    add(
                        mul(tau, diff(sg[i][k], T)),
                        *[mul(phi[j], d_x(sg[i][k], j)) for j in range(n)],
                        *[mul(Rat(-1), sg[j][k], d_x(phi[i], j)) for j in range(n)],
                        *[mul(sg[i][m_], d_w(h[m_], k)) for m_ in range(m)],
                        mul(HALF, tau_t, sg[i][k]),
                    ),
                )
                for k in range(m)
            ]
            for i in range(n)
        ]
    elif variant is V.ITO_RANDOM_TIME_NO_H:
        # the published drift row carries +tau d_t f; the master route gives
        # -tau d_t f, so this display drifts by 2 tau d_t f
        drift = [
            add(
                diff(phi[i], T),
                *[mul(f[j], d_x(phi[i], j)) for j in range(n)],
                *[mul(Rat(-1), phi[j], d_x(f[i], j)) for j in range(n)],
                mul(tau, diff(f[i], T)),
                mul(Rat(-1), f[i], tau_t),
                mul(Rat(-1, 2), f[i], lap(tau)),
                mul(HALF, lap(phi[i])),
            )
            for i in range(n)
        ]
        diffusion = [
            [
                add(
                    d_w(phi[i], k),
                    *[mul(sg[j][k], d_x(phi[i], j)) for j in range(n)],
                    *[mul(Rat(-1), phi[j], d_x(sg[i][k], j)) for j in range(n)],
                    mul(Rat(-1), tau, diff(sg[i][k], T)),
                    mul(Rat(-1), f[i], d_w(tau, k)),
                    mul(Rat(-1, 2), tau_t, sg[i][k]),
                )
                for k in range(m)
            ]
            for i in range(n)
        ]
    elif variant in (V.ITO_TAU_T, V.ITO_GENERAL):
        # published with L split as Y_0 + Delta/2 but a sign slip on the
        # second-order terms of tau and h; enters in negated orientation
        y0, ys = misawa_fields(model)
        x_cand = JetField(tau, phi, (ZERO,) * m)
        drift = []
        for i in range(n):
            r = add(
                x_cand.apply(f[i]),
                mul(Rat(-1), y0.apply(phi[i])),
                mul(f[i], y0.apply(tau)) if variant is V.ITO_GENERAL else mul(f[i], tau_t),
                *[mul(sg[i][k], y0.apply(h[k])) for k in range(m)],
                mul(Rat(-1, 2), lap(phi[i])),
                mul(Rat(-1, 2), f[i], lap(tau)) if variant is V.ITO_GENERAL else ZERO,
                *[mul(Rat(-1, 2), sg[i][k], lap(h[k])) for k in range(m)],
            )
            drift.append(mul(Rat(-1), r))
        diffusion = []
        for i in range(n):
            row = []
            for k in range(m):
                r = add(
                    x_cand.apply(sg[i][k]),
                    mul(Rat(-1), ys[k].apply(phi[i])),
                    mul(f[i], ys[k].apply(tau)) if variant is V.ITO_GENERAL else ZERO,
                    *[mul(sg[i][m_], ys[k].apply(h[m_])) for m_ in range(m)],
                    mul(HALF, tau_t, sg[i][k]),
                )
                row.append(mul(Rat(-1), r))
            diffusion.append(row)
    elif variant is V.ITO_TAU_T_NO_H:
        drift = [
            add(
                diff(phi[i], T),
                *[mul(f[j], d_x(phi[i], j)) for j in range(n)],
                *[mul(Rat(-1), phi[j], d_x(f[i], j)) for j in range(n)],
                mul(Rat(-1), tau, diff(f[i], T)),
                mul(Rat(-1), tau_t, f[i]),
                mul(HALF, lap(phi[i])),
            )
            for i in range(n)
        ]
        diffusion = [
            [
                add(
                    d_w(phi[i], k),
                    *[mul(sg[j][k], d_x(phi[i], j)) for j in range(n)],
                    *[mul(Rat(-1), phi[j], d_x(sg[i][k], j)) for j in range(n)],
                    mul(Rat(-1), tau, diff(sg[i][k], T)),
                    mul(Rat(-1, 2), tau_t, sg[i][k]),
                )
                for k in range(m)
            ]
            for i in range(n)
        ]
    else:
        raise VariantMismatchError(f"no printed display table for {variant.value}")
    return [simplify(d) for d in drift], [[simplify(r) for r in row] for row in diffusion]
