"""The three physical cases as recurrence chains with their invariant spaces.

A case yields one or more chains.  Each chain carries the algebraic
operator, the grading offsets of its series, and the finite space the
truncated series lives in, so truncation polynomials can be compared with
restriction matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import hamiltonians as ham
from . import recurrence as rec
from .exactnum import Poly, as_rational, charpoly, format_scalar
from .spaces import MonomialSpace, TwoComponentSpace, restrict
from .weylop import DiffOperator, GenExponent, MatrixOperator

CASES = ("polypot", "lame", "bose-hubbard")

PARAM_NAMES = {
    "polypot": ("m", "p2", "p1", "kappa0"),
    "lame": ("m", "delta", "k2"),
    "bose-hubbard": ("alpha", "M"),
}


class CaseError(ValueError):
    pass


def make_params(case: str, values: dict):
    """Build the parameter object of a case from exact values (missing keys use defaults)."""
    vals = {k: v for k, v in values.items() if v is not None}
    try:
        if case == "polypot":
            m = vals.pop("m", 2)
            return ham.PolyPotParams(_int(m, "m"), **{k: vals[k] for k in ("p2", "p1", "kappa0")
                                                      if k in vals})
        if case == "lame":
            return ham.LameParams(_int(vals.get("m", 1), "m"), vals.get("delta", Fraction(1, 2)),
                                  vals.get("k2", Fraction(1, 3)))
        if case == "bose-hubbard":
            alpha = vals.get("alpha", Fraction(1))
            if "bosons" in vals:
                if "M" in vals:
                    raise CaseError("give either M or the boson number, not both")
                return ham.BoseHubbardParams.from_boson_number(alpha, _int(vals["bosons"], "bosons"))
            return ham.BoseHubbardParams(alpha, vals.get("M", Fraction(2)))
    except ham.ParameterError as exc:
        raise CaseError(str(exc)) from exc
    raise CaseError(f"unknown case {case!r}; expected one of {CASES}")


def _int(v, name) -> int:
    q = as_rational(v) if not isinstance(v, int) else Fraction(v)
    if q.denominator != 1:
        raise CaseError(f"{name} must be an integer")
    return int(q)


def param_dict(case: str, p) -> dict[str, str]:
    return {k: format_scalar(getattr(p, k)) for k in PARAM_NAMES[case]}


@dataclass
class Chain:
    label: str
    system: rec.RecurrenceSystem
    operator: DiffOperator | MatrixOperator
    space: MonomialSpace | TwoComponentSpace | None

    def basis_index(self, n: int, i: int):
        """Index of series level n, component i in the space basis (None if outside)."""
        e = self.system.offsets[i] + n
        if isinstance(self.space, TwoComponentSpace):
            if e.denominator != 1 or not 0 <= e <= self.space.bound(i):
                return None
            return self.space.basis().index((i, int(e)))
        ge = GenExponent(e)
        return self.space.index(ge) if self.space.contains(ge) else None


def chains(case: str, p, search: int = 400) -> list[Chain]:
    """All truncating chains of a case (empty when nothing truncates)."""
    if case == "polypot":
        res = ham.build_polypot_pipeline(p)
        return [Chain("det", rec.derive_recurrence(res.tilde, [0, 1]), res.tilde, res.space)]
    if case == "lame":
        res = ham.build_lame_pipeline(p)
        return [Chain("det", rec.derive_recurrence(res.tilde, [0, 0]), res.tilde, res.space)]
    if case == "bose-hubbard":
        out = []
        for s in (Fraction(0), Fraction(1, 2)):
            op = ham.build_bosehubbard_reduced(ham.BoseHubbardParams(p.alpha, p.M, s)).t_form()
            for b0 in (Fraction(0), Fraction(1, 2)):
                sys = rec.derive_recurrence(op, [b0])
                try:
                    nstar = sys.degeneracy_levels(search)[0]
                except rec.NoDegeneracy:
                    continue
                space = MonomialSpace.from_exponents([GenExponent(b0 + j) for j in range(nstar)])
                out.append(Chain(f"s={s},b0={b0}", sys, op, space))
        return out
    raise CaseError(f"unknown case {case!r}; expected one of {CASES}")


def bh_chain_system(p, s, b0) -> rec.RecurrenceSystem:
    """Recurrence of one BH chain, whether or not it truncates."""
    op = ham.build_bosehubbard_reduced(ham.BoseHubbardParams(p.alpha, p.M, s)).t_form()
    return rec.derive_recurrence(op, [b0])


@dataclass
class OracleResult:
    label: str
    truncation: Poly
    charpoly: Poly
    proportional: bool
    series_eigenvector: bool

    def as_dict(self) -> dict:
        return {"chain": self.label, "truncation_polynomial": self.truncation.format("E"),
                "restriction_charpoly": self.charpoly.format("E"),
                "proportional": self.proportional,
                "series_eigenvector": self.series_eigenvector}


def oracle_check(chain: Chain) -> OracleResult:
    """Truncation determinant against the characteristic polynomial of the restriction."""
    tr = rec.truncation_polynomial(chain.system)
    M = restrict(chain.operator, chain.space)
    cp = charpoly(M)
    P = tr.polynomial
    prop = P.degree == cp.degree and P.degree >= 0 and P.monic() == cp.monic()
    series = rec.series_eigenvector_check(tr, M, chain.basis_index)
    return OracleResult(chain.label, P, cp, prop, series)
