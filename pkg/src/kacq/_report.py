"""Comparison reports for truncated series."""

from __future__ import annotations

from dataclasses import dataclass

from .series import CoeffPoly, Monomial, Series


@dataclass(frozen=True)
class VerificationReport:
    lhs_label: str
    rhs_label: str
    truncation: int  # max d2 compared
    passed: bool
    first_discrepancy: tuple[Monomial, CoeffPoly, CoeffPoly] | None = None

    def __post_init__(self):
        if self.passed != (self.first_discrepancy is None):
            raise ValueError("passed must hold exactly when there is no discrepancy")

    def to_json(self) -> dict:
        out = {"lhs": self.lhs_label, "rhs": self.rhs_label, "max_d2": self.truncation, "pass": self.passed}
        if self.first_discrepancy is not None:
            m, a, b = self.first_discrepancy
            out["first_discrepancy"] = {
                "finite": list(m.finite),
                "d2": m.d2,
                "lhs": a.to_json(),
                "rhs": b.to_json(),
            }
        return out

    def __bool__(self) -> bool:
        return self.passed


def compare(lhs: Series, rhs: Series, max_d2: int | None = None, lhs_label: str = "lhs",
            rhs_label: str = "rhs") -> VerificationReport:
    """Exact coefficientwise comparison of all monomials with ``d2 <= max_d2``."""
    if lhs.spec.rank != rhs.spec.rank:
        raise ValueError("cannot compare series of different rank")
    if max_d2 is None:
        max_d2 = min(lhs.spec.max_d2, rhs.spec.max_d2)
    keys = {m for m in lhs.monomials() if m.d2 <= max_d2} | {m for m in rhs.monomials() if m.d2 <= max_d2}
    for m in sorted(keys, key=lambda m: (m.d2, m.finite)):
        a, b = lhs[m], rhs[m]
        if a != b:
            return VerificationReport(lhs_label, rhs_label, max_d2, False, (m, a, b))
    return VerificationReport(lhs_label, rhs_label, max_d2, True)
