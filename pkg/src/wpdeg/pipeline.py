"""Dispatch a problem document to the classification routes and collect the results.

Every command produces an :class:`Outcome`.  Its exit code depends only on
its content, so text and JSON output always agree on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .centralfibre import classify_central, dual_complex, e1_page, e2_page, fn_grn_central
from .clemensschmid import graded_slice
from .documents import ProblemDocument, to_jsonable
from .errors import ConsistencyError, InconsistentInputError, InputError, InternalConsistencyError
from .hodge import check_polarized_mhs
from .nodal import adjunction, classify_nodal
from .orbit import (
    alpha_weight,
    check_finite_nilpotency,
    classify,
    orbit_polynomial,
    quadrature_crosscheck,
    recheck_witness,
)
from .report import Check, Classification, Report, Verdict

EXIT_FINITE = 0
EXIT_INFINITE = 3
EXIT_INPUT = 1
EXIT_CONSISTENCY = 2


def report_to_json(rep: Report) -> dict:
    return {
        "title": rep.title,
        "passed": rep.passed,
        "checks": [
            {"name": c.name, "status": c.status, "detail": c.detail, "witness": to_jsonable(c.witness)}
            for c in rep.checks
        ],
        "info": to_jsonable(rep.info),
    }


def report_from_json(d: dict) -> Report:
    status = {"pass": True, "FAIL": False, "n/a": None}
    checks = tuple(Check(c["name"], status[c["status"]], c["detail"], c["witness"]) for c in d["checks"])
    return Report(d["title"], checks, dict(d["info"]))


@dataclass
class Outcome:
    command: str
    mode: str = ""
    verdict: Verdict | None = None
    witness: Any = None
    sections: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    error: str | None = None
    error_kind: str | None = None  # "input" or "consistency"
    strict: bool = False

    @property
    def exit_code(self) -> int:
        if self.error_kind == "input":
            return EXIT_INPUT
        if self.error_kind == "consistency":
            return EXIT_CONSISTENCY
        if self.strict and self.warnings:
            return EXIT_CONSISTENCY
        if self.verdict is Verdict.INFINITE:
            return EXIT_INFINITE
        return EXIT_FINITE

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "command": self.command,
            "mode": self.mode,
            "verdict": None if self.verdict is None else self.verdict.value,
            "witness": to_jsonable(self.witness),
            "sections": to_jsonable(self.sections),
            "reports": [report_to_json(r) for r in self.reports],
            "warnings": list(self.warnings),
            "error": self.error,
            "error_kind": self.error_kind,
            "strict": self.strict,
            "exit_code": self.exit_code,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Outcome":
        out = cls(
            command=d["command"],
            mode=d["mode"],
            verdict=None if d["verdict"] is None else Verdict(d["verdict"]),
            witness=d["witness"],
            sections=d["sections"],
            reports=[report_from_json(r) for r in d["reports"]],
            warnings=list(d["warnings"]),
            error=d["error"],
            error_kind=d["error_kind"],
            strict=d["strict"],
        )
        if out.exit_code != d["exit_code"]:
            raise ValueError("exit code does not match the report content")
        return out


def failure(command: str, exc: Exception, strict: bool = False) -> Outcome:
    kind = "consistency" if isinstance(exc, (ConsistencyError, AssertionError)) else "input"
    return Outcome(command, error=f"{type(exc).__name__}: {exc}", error_kind=kind, strict=strict)


def guarded(fn, command: str, *args, strict: bool = False, **kw) -> Outcome:
    """Run ``fn`` and turn library errors into an outcome with the right exit code."""
    try:
        out = fn(*args, **kw)
    except (InputError, ConsistencyError, InternalConsistencyError) as exc:
        return failure(command, exc, strict)
    except ValueError as exc:
        return failure(command, InputError(str(exc)), strict)
    out.strict = strict
    return out


# ---------------------------------------------------------------------------
# building blocks


def _wf_section(prob) -> dict:
    wf = prob.weight_filtration()
    n = prob.weight_n
    return {
        "graded_ranks": {str(l): wf.graded_rank(l) for l in range(2 * n + 1)},
        "W": {str(l): wf[l] for l in range(-1, 2 * n + 1)},
        "alpha_weight": alpha_weight(prob, wf),
    }


def _poly_section(prob) -> dict:
    poly = orbit_polynomial(prob)
    return {
        "C": list(poly.C),
        "coefficients": list(poly.coefficients),
        "p": str(poly),
        "degree": poly.degree,
        "leading_sign": poly.leading_sign,
    }


def _orbit_route(prob, out: Outcome, quadrature: bool) -> Classification:
    out.sections["weight_filtration"] = _wf_section(prob)
    out.sections["orbit_polynomial"] = _poly_section(prob)
    cls = classify(prob)
    if not recheck_witness(prob, cls):
        raise InternalConsistencyError("classification witness does not re-verify")
    pmhs = None
    if prob.F is not None:
        pmhs = check_polarized_mhs(prob.mixed_hodge())
        out.reports.append(pmhs)
        if not pmhs.passed:
            names = ", ".join(c.name for c in pmhs.failures())
            out.warnings.append(f"limiting data fails the polarized mixed Hodge checker ({names})")
        elif pmhs.info.get("orientation") == -1:
            out.warnings.append("primitive pieces are negatively polarized; generator orientation flipped")
    nil = check_finite_nilpotency(prob, cls, pmhs)
    out.reports.append(nil)
    if not nil.passed:
        raise InternalConsistencyError("finite distance but N^(n-1) != 0 on a polarized limit")
    if quadrature:
        g = quadrature_crosscheck(prob)
        out.sections["quadrature"] = {
            "y0": g.y0,
            "y_max": list(g.y_maxes),
            "integrals": list(g.integrals),
            "slope": g.slope,
            "expected_slope": g.expected_slope,
            "verdict_finite": g.verdict_finite,
        }
        out.warnings.extend(g.notes)
    return cls


def _fibre_route(model, out: Outcome) -> Classification:
    e1 = e1_page(model)
    e2 = e2_page(e1)
    out.sections["central_fibre"] = {
        "dual_complex": {str(p): [list(m) for m in ms] for p, ms in dual_complex(model).items()},
        "fn_grn": fn_grn_central(model),
        "E2_betti": list(e2.betti()),
        "unavailable": [list(t) for t in e2.unavailable],
    }
    return classify_central(model)


def _nodal_route(cfg, out: Outcome):
    adj = adjunction(cfg)
    out.sections["adjunction"] = {
        "k_i": adj.k_i,
        "K_Xprime": str(adj.K_Xprime),
        "K_proper_transform": str(adj.K_proper_transform),
        "section_exists": adj.section_exists,
        "transcript": list(adj.transcript),
    }
    cls, model = classify_nodal(cfg)
    fibre_cls = _fibre_route(model, out)
    if fibre_cls.verdict is not cls.verdict:
        raise InternalConsistencyError("nodal verdict disagrees with its own central-fibre model")
    return cls, model


# ---------------------------------------------------------------------------
# commands


def run_classify(doc: ProblemDocument, quadrature: bool = False) -> Outcome:
    out = Outcome("classify", doc.mode)
    if doc.mode == "monodromy":
        cls = _orbit_route(doc.orbit, out, quadrature)
    elif doc.mode == "central_fibre":
        cls = _fibre_route(doc.fibre, out)
    elif doc.mode == "nodal":
        cls, _ = _nodal_route(doc.nodal, out)
    else:
        cls = _orbit_route(doc.orbit, out, quadrature)
        if doc.fibre is not None:
            model = doc.fibre
            fcls = _fibre_route(model, out)
        else:
            fcls, model = _nodal_route(doc.nodal, out)
        sl = graded_slice(doc.orbit, model)
        out.reports.append(sl.as_report())
        if fcls.verdict is not cls.verdict:
            raise InconsistentInputError(
                f"orbit data gives {cls.verdict} distance but the central fibre gives {fcls.verdict}"
            )
        out.sections["fibre_witness"] = fcls.witness
    out.verdict = cls.verdict
    out.witness = {"route": cls.route, **cls.witness}
    return out


def run_weight_filtration(doc: ProblemDocument) -> Outcome:
    if doc.orbit is None:
        raise InputError(f"mode {doc.mode!r} carries no monodromy data")
    out = Outcome("wf", doc.mode)
    prob = doc.orbit
    out.sections["weight_filtration"] = _wf_section(prob)
    from .monodromy import lefschetz_decomposition

    lef = lefschetz_decomposition(prob.weight_filtration(), prob.op)
    out.sections["primitive_ranks"] = {str(l): lef.primitive_rank(l) for l in range(2 * prob.weight_n + 1)}
    return out


def run_orbit(doc: ProblemDocument, quadrature: bool = False) -> Outcome:
    if doc.orbit is None:
        raise InputError(f"mode {doc.mode!r} carries no monodromy data")
    out = Outcome("orbit", doc.mode)
    cls = _orbit_route(doc.orbit, out, quadrature)
    out.verdict = cls.verdict
    out.witness = {"route": cls.route, **cls.witness}
    return out


def run_spectral(doc: ProblemDocument) -> Outcome:
    out = Outcome("spectral", doc.mode)
    if doc.fibre is not None:
        model = doc.fibre
    elif doc.nodal is not None:
        _, model = classify_nodal(doc.nodal)
    else:
        raise InputError(f"mode {doc.mode!r} carries no central-fibre data")
    e1 = e1_page(model)
    e2 = e2_page(e1)
    out.sections["E1"] = {f"{p},{q}": v for (p, q), v in sorted(e1.terms.items())}
    out.sections["E2"] = {f"{p},{q}": v for (p, q), v in sorted(e2.terms.items())}
    out.sections["H_dims"] = list(e2.betti())
    out.sections["graded"] = {
        str(m): {str(k): v for k, v in parts.items()} for m, parts in e2.graded_cohomology().items()
    }
    out.sections["unavailable"] = [list(t) for t in e2.unavailable]
    out.sections["fn_grn"] = fn_grn_central(model)
    return out


def run_nodal(doc: ProblemDocument) -> Outcome:
    if doc.nodal is None:
        raise InputError(f"mode {doc.mode!r} carries no nodal configuration")
    out = Outcome("nodal", doc.mode)
    cls, _ = _nodal_route(doc.nodal, out)
    out.verdict = cls.verdict
    out.witness = {"route": cls.route, **cls.witness}
    return out
