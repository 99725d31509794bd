"""Line-oriented ``key: value`` files for models and candidates.

Model files::

    # comment
    sde.form: ito | stratonovich
    sde.dim: n
    sde.wiener: m
    sde.drift.<i>: <expr>        # i = 1..n
    sde.sigma.<i>.<k>: <expr>    # i = 1..n, k = 1..m
    param.<name>: <decimal>      # optional numeric binding

Candidate files::

    candidate.variant: <variant token>      # optional
    candidate.tau: <expr>                   # optional, default 0
    candidate.phi.<i>: <expr>
    candidate.h.<k>: <expr>                 # optional, default 0
    candidate.fp.tau / candidate.fp.xi.<i> / candidate.fp.beta

Lists of candidates use ``candidate.<idx>.phi.<i>`` and friends.
"""

from __future__ import annotations

from pathlib import Path

from .expr import Expr, ParseError, SymbolKind, ZERO, free_symbols, parse, render
from .sde import SdeModel, VectorFieldCandidate
from .fokker_planck import FpCandidate


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _pairs(text: str):
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise FormatError(f"expected 'key: value', got {line!r}", ln)
        key, _, value = line.partition(":")
        yield ln, key.strip(), value.strip()


def _parse_expr(value: str, ln: int) -> Expr:
    try:
        return parse(value)
    except ParseError as exc:
        raise FormatError(f"bad expression {value!r}: {exc}", ln) from exc


def parse_model_text(text: str) -> SdeModel:
    form = None
    n = m = None
    drift: dict[int, Expr] = {}
    sigma: dict[tuple[int, int], Expr] = {}
    params: dict[str, float | None] = {}
    for ln, key, value in _pairs(text):
        parts = key.split(".")
        if parts[0] == "sde":
            if parts[1:] == ["form"]:
                if value not in ("ito", "stratonovich"):
                    raise FormatError(f"sde.form must be ito|stratonovich, got {value!r}", ln)
                form = value
            elif parts[1:] == ["dim"]:
                n = int(value)
            elif parts[1:] == ["wiener"]:
                m = int(value)
            elif len(parts) == 3 and parts[1] == "drift":
                drift[int(parts[2])] = _parse_expr(value, ln)
            elif len(parts) == 4 and parts[1] == "sigma":
                sigma[(int(parts[2]), int(parts[3]))] = _parse_expr(value, ln)
            else:
                raise FormatError(f"unknown model key {key!r}", ln)
        elif parts[0] == "param" and len(parts) == 2:
            params[parts[1]] = float(value) if value else None
        else:
            raise FormatError(f"unknown key {key!r}", ln)
    if form is None or n is None or m is None:
        raise FormatError("missing one of sde.form / sde.dim / sde.wiener")
    missing = [i for i in range(1, n + 1) if i not in drift]
    if missing:
        raise FormatError(f"missing drift components {missing}")
    missing_s = [(i, k) for i in range(1, n + 1) for k in range(1, m + 1) if (i, k) not in sigma]
    if missing_s:
        raise FormatError(f"missing sigma entries {missing_s}")
    extra_d = [i for i in drift if not 1 <= i <= n]
    extra_s = [ik for ik in sigma if not (1 <= ik[0] <= n and 1 <= ik[1] <= m)]
    if extra_d or extra_s:
        raise FormatError(f"indices out of range: drift {extra_d}, sigma {extra_s}")
    # parameters used in expressions are implicitly declared
    for e in list(drift.values()) + list(sigma.values()):
        for s in free_symbols(e):
            if s.kind is SymbolKind.PARAM and s.name not in params:
                params[s.name] = None
    return SdeModel(
        form=form,
        n=n,
        m=m,
        drift=tuple(drift[i] for i in range(1, n + 1)),
        sigma=tuple(tuple(sigma[(i, k)] for k in range(1, m + 1)) for i in range(1, n + 1)),
        params=params,
    )


def render_model_text(model: SdeModel) -> str:
    lines = [
        f"sde.form: {model.form}",
        f"sde.dim: {model.n}",
        f"sde.wiener: {model.m}",
    ]
    for i, e in enumerate(model.drift, start=1):
        lines.append(f"sde.drift.{i}: {render(e)}")
    for i, row in enumerate(model.sigma, start=1):
        for k, e in enumerate(row, start=1):
            lines.append(f"sde.sigma.{i}.{k}: {render(e)}")
    for name in sorted(model.params):
        v = model.params[name]
        lines.append(f"param.{name}: {v if v is not None else ''}".rstrip())
    return "\n".join(lines) + "\n"


def _collect_candidate(fields: dict, where: str) -> VectorFieldCandidate:
    phi_idx = sorted(i for (kind, i) in fields if kind == "phi")
    if not phi_idx:
        raise FormatError(f"{where}: no phi components")
    if phi_idx != list(range(1, len(phi_idx) + 1)):
        raise FormatError(f"{where}: phi indices must be 1..n, got {phi_idx}")
    h_idx = sorted(i for (kind, i) in fields if kind == "h")
    if h_idx and h_idx != list(range(1, len(h_idx) + 1)):
        raise FormatError(f"{where}: h indices must be 1..m, got {h_idx}")
    tau = fields.get(("tau", 0), ZERO)
    phi = tuple(fields[("phi", i)] for i in phi_idx)
    h = tuple(fields[("h", i)] for i in h_idx)
    return VectorFieldCandidate(tau, phi, h)


def parse_candidate_text(text: str) -> tuple[list[VectorFieldCandidate], str | None]:
    """Parse one or more candidates; returns (candidates, variant token)."""
    variant = None
    groups: dict[int, dict] = {}
    for ln, key, value in _pairs(text):
        parts = key.split(".")
        if parts[0] != "candidate":
            raise FormatError(f"unknown key {key!r}", ln)
        parts = parts[1:]
        if parts and parts[0].isdigit():
            idx = int(parts[0])
            parts = parts[1:]
        else:
            idx = 0
        if parts == ["variant"]:
            variant = value
            continue
        if parts and parts[0] == "fp":
            raise FormatError("candidate.fp.* keys belong to density candidates", ln)
        fields = groups.setdefault(idx, {})
        if parts == ["tau"]:
            fields[("tau", 0)] = _parse_expr(value, ln)
        elif len(parts) == 2 and parts[0] in ("phi", "h"):
            fields[(parts[0], int(parts[1]))] = _parse_expr(value, ln)
        else:
            raise FormatError(f"unknown candidate key {key!r}", ln)
    if not groups:
        raise FormatError("no candidate components found")
    out = []
    for idx in sorted(groups):
        out.append(_collect_candidate(groups[idx], f"candidate {idx}" if idx else "candidate"))
    return out, variant


def parse_fp_candidate_text(text: str) -> FpCandidate:
    tau = ZERO
    beta = ZERO
    xi: dict[int, Expr] = {}
    for ln, key, value in _pairs(text):
        parts = key.split(".")
        if parts[:2] != ["candidate", "fp"]:
            raise FormatError(f"unknown key {key!r} (expected candidate.fp.*)", ln)
        parts = parts[2:]
        if parts == ["tau"]:
            tau = _parse_expr(value, ln)
        elif parts == ["beta"]:
            beta = _parse_expr(value, ln)
        elif len(parts) == 2 and parts[0] == "xi":
            xi[int(parts[1])] = _parse_expr(value, ln)
        else:
            raise FormatError(f"unknown candidate key {key!r}", ln)
    idx = sorted(xi)
    if not idx or idx != list(range(1, len(idx) + 1)):
        raise FormatError(f"xi indices must be 1..n, got {idx}")
    return FpCandidate(tau, tuple(xi[i] for i in idx), beta)


def load_model(path) -> SdeModel:
    return parse_model_text(Path(path).read_text(encoding="utf-8"))


def load_candidates(path) -> tuple[list[VectorFieldCandidate], str | None]:
    return parse_candidate_text(Path(path).read_text(encoding="utf-8"))


def load_candidate(path) -> tuple[VectorFieldCandidate, str | None]:
    cands, variant = load_candidates(path)
    if len(cands) != 1:
        raise FormatError(f"expected a single candidate, found {len(cands)}")
    return cands[0], variant


def load_fp_candidate(path) -> FpCandidate:
    return parse_fp_candidate_text(Path(path).read_text(encoding="utf-8"))
