"""Full decision pipeline: validate, J-nice test, Gram feasibility and soliton check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .algebra import LieBracket, ValidationReport, validate
from .feasibility import FeasibilityResult, solve_positive
from .representatives import Representative, pencil_representative
from .ricci import RicciData, SolitonDecomposition, ricci_data, soliton_decomposition
from .serialize import SCHEMA_VERSION, bracket_to_spec, exact_str, matrix_json
from .weights import DIAGONALITY_EVIDENCE, INCONCLUSIVE, JNiceStatus, WeightList, gram_matrix, jnice_status, weight_support

MINIMAL_METRIC_EXISTS = "MinimalMetricExists"
NO_MINIMAL_METRIC = "NoMinimalMetric"
ABELIAN_FLAT = "AbelianFlat"
INCONCLUSIVE_VERDICT = "Inconclusive"
INVALID = "InvalidAlgebra"

DEFAULT_SAMPLES = 32
DEFAULT_SEED = 0


@dataclass
class AnalysisReport:
    bracket: LieBracket
    name: str = ""
    params: dict = field(default_factory=dict)
    validation: ValidationReport | None = None
    weights: WeightList | None = None
    gram: list[list[int]] | None = None
    jnice: JNiceStatus | None = None
    representative: Representative | None = None
    feasibility: FeasibilityResult | None = None
    ricci: RicciData | None = None
    soliton: SolitonDecomposition | None = None
    verdict: str = INCONCLUSIVE_VERDICT
    notes: list[str] = field(default_factory=list)

    @property
    def jnice_method(self) -> str:
        if self.jnice is None:
            return "none"
        if self.representative is not None:
            return f"{self.jnice.status}@{self.representative.method}"
        return self.jnice.status

    @property
    def existence(self) -> bool | None:
        if self.verdict in (MINIMAL_METRIC_EXISTS, ABELIAN_FLAT):
            return True
        if self.verdict == NO_MINIMAL_METRIC:
            return False
        return None

    @property
    def canonical_minimal(self) -> bool | None:
        if self.verdict == ABELIAN_FLAT:
            return True
        return self.soliton.exists if self.soliton is not None else None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"schema_version": SCHEMA_VERSION}
        out["input"] = bracket_to_spec(self.bracket, self.name, self.params)
        out["verdict"] = self.verdict
        out["validation"] = self.validation.to_dict() if self.validation else None
        out["weights"] = (
            [{"weight": list(r.weight), "source": list(r.source)} for r in self.weights] if self.weights else None
        )
        out["gram"] = self.gram
        if self.jnice is not None:
            out["jnice"] = {**self.jnice.to_dict(), "method": self.jnice_method}
        else:
            out["jnice"] = None
        if self.representative is not None:
            rep = self.representative
            out["representative"] = {
                "method": rep.method,
                "bracket": bracket_to_spec(rep.bracket)["brackets"],
                "g": matrix_json(rep.g) if rep.g is not None else None,
            }
        out["feasibility"] = self.feasibility.to_dict() if self.feasibility else None
        if self.ricci is not None:
            out["ricci"] = {
                "scal": exact_str(self.ricci.scal),
                "tr_ric_c_squared": exact_str(self.ricci.ric_c_norm2),
                "ric_c": matrix_json(self.ricci.ric_c),
            }
        else:
            out["ricci"] = None
        if self.soliton is not None:
            s = self.soliton
            out["soliton"] = {
                "exists": s.exists,
                "c": exact_str(s.c) if s.exists else None,
                "D": matrix_json(s.D) if s.exists else None,
            }
        else:
            out["soliton"] = None
        out["notes"] = list(self.notes)
        return out


def _resolve_jnice(mu: LieBracket, samples: int, seed: int):
    """J-nice status of mu, or of an orbit representative when mu's own test is inconclusive."""
    status = jnice_status(mu, samples=samples, seed=seed)
    if status.conclusive:
        return status, None, mu
    rep = pencil_representative(mu)
    if rep is None:
        return status, None, mu
    rep_status = jnice_status(rep.bracket, samples=samples, seed=seed)
    if not rep_status.conclusive:
        return status, None, mu
    return rep_status, rep, rep.bracket


def analyze(
    mu: LieBracket,
    *,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    name: str = "",
    params: dict | None = None,
) -> AnalysisReport:
    report = AnalysisReport(mu, name=name, params=dict(params or {}))
    report.validation = validate(mu)
    if not report.validation.valid:
        report.verdict = INVALID
        report.notes.append("bracket is not a nilpotent Lie algebra with integrable standard J")
        return report
    report.ricci = ricci_data(mu)
    if mu.is_zero():
        report.verdict = ABELIAN_FLAT
        report.notes.append("zero bracket: the flat metric is trivially minimal (c = 0, D = 0)")
        return report
    report.soliton = soliton_decomposition(mu)
    status, rep, target = _resolve_jnice(mu, samples, seed)
    report.jnice = status
    report.representative = rep
    if rep is not None:
        report.notes.append(f"criterion applied to an orbit representative ({rep.method}); g . mu is recorded")
    report.weights = weight_support(target)
    report.gram = gram_matrix(report.weights)
    report.feasibility = solve_positive(report.gram)
    if status.status == INCONCLUSIVE:
        report.verdict = INCONCLUSIVE_VERDICT
        report.notes.append("no J-nice subspace found; the Gram criterion does not apply")
        return report
    if status.status == DIAGONALITY_EVIDENCE:
        report.notes.append("criterion applied under probabilistic J-nice evidence")
    report.verdict = MINIMAL_METRIC_EXISTS if report.feasibility.feasible else NO_MINIMAL_METRIC
    if report.soliton.exists and not report.feasibility.feasible:
        # the canonical metric is itself minimal, so infeasibility would be a contradiction
        raise ArithmeticError("soliton found but the Gram criterion reports infeasible")
    return report
