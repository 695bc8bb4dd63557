"""Matching algebraic levels against a numerical spectrum."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


@dataclass
class ComparisonReport:
    tolerance: float
    relative: bool
    matches: list[dict] = field(default_factory=list)
    unmatched: list[float] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.unmatched and all(m["within"] for m in self.matches)

    @property
    def residuals(self) -> list[float]:
        return [m["residual"] for m in self.matches]

    def as_dict(self) -> dict:
        return {"tolerance": self.tolerance, "relative": self.relative, "ok": self.ok,
                "matches": self.matches, "unmatched": self.unmatched}


def compare(algebraic: Sequence[float], numeric: Sequence[float], shift: float = 0.0,
            tol: float = 1e-6, relative: bool = True) -> ComparisonReport:
    """Greedy nearest matching of each algebraic level to an unused numeric one.

    ``shift`` is added to the numeric values first (``E = E1 + E0``).  The
    residual is ``|a - n|``, divided by ``max(1, |a|)`` when ``relative``.
    """
    pool = [(float(v) + shift, i) for i, v in enumerate(numeric)]
    report = ComparisonReport(tol, relative)
    for a in sorted(float(v) for v in algebraic):
        if not pool:
            report.unmatched.append(a)
            continue
        k = min(range(len(pool)), key=lambda j: abs(pool[j][0] - a))
        val, idx = pool.pop(k)
        res = abs(val - a)
        if relative:
            res /= max(1.0, abs(a))
        report.matches.append({"algebraic": a, "numeric": val, "numeric_index": idx,
                               "residual": res, "within": res <= tol})
    return report
