"""Physical potentials of the three systems and their algebraic levels.

The numerical side evaluates each physical Hamiltonian directly on a grid;
the algebraic side comes from truncation polynomials of the recurrences.
The two meet in :func:`verify_case`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import hamiltonians as ham
from .. import recurrence as rec
from ..cases import bh_chain_system
from ..exactnum import Poly, QuadExt, root_values
from ..weylop import DiffOperator
from .compare import ComparisonReport, compare
from .elliptic import jacobi, ellipk
from .fd import GridProblem, Spectrum, box_for_potential, rayleigh_quotient, solve_spectrum

CASES = ("polypot", "lame", "bose-hubbard")


def rational_polynomial(p: Poly) -> Poly:
    """``p`` itself when rational, else ``p`` times its surd conjugate (a rational multiple)."""
    if p.is_rational():
        return p
    conj = p.map_coeffs(lambda c: c.conjugate() if isinstance(c, QuadExt) else c)
    prod = p * conj
    return prod.map_coeffs(lambda c: c.rat if isinstance(c, QuadExt) else c)


@dataclass
class AlgebraicLevels:
    """Exact truncation polynomials with their real roots."""

    polynomials: list[tuple[str, Poly]]
    levels: list[float]

    def as_dict(self) -> dict:
        return {"polynomials": [{"label": lab, "polynomial": p.format("E")}
                                for lab, p in self.polynomials],
                "levels": self.levels}


def _levels_from(polys: list[tuple[str, Poly]]) -> AlgebraicLevels:
    vals = []
    for _lab, p in polys:
        vals.extend(root_values(rational_polynomial(p)))
    return AlgebraicLevels(polys, sorted(vals))


# ---------------------------------------------------------------------------
# sextic system

def polypot_recurrence(p: ham.PolyPotParams) -> rec.RecurrenceSystem:
    return rec.derive_recurrence(ham.build_polypot_pipeline(p).tilde, [0, 1])


def polypot_algebraic(p: ham.PolyPotParams) -> AlgebraicLevels:
    tr = rec.truncation_polynomial(polypot_recurrence(p))
    return _levels_from([("det", tr.polynomial)])


def _laurent_evaluator(op: DiffOperator):
    """Float evaluator of the zeroth-order part; checks the rest is ``-d^2``."""
    coeffs = []
    for (e, k), c in op.terms.items():
        if e.a_count:
            raise ValueError("formal exponent in a physical potential")
        val = float(c.constant_value())
        if k == 0:
            coeffs.append((float(e.offset), val))
        elif not (k == 2 and e.offset == 0 and val == -1):
            raise ValueError("kinetic part is not -d^2")
    return lambda x: sum(c * np.power(x, q) for q, c in coeffs) + 0 * x


def _entry_evaluator(op: DiffOperator):
    coeffs = []
    for (e, k), c in op.terms.items():
        if k != 0:
            raise ValueError("off-diagonal entries must be multiplications")
        coeffs.append((float(e.offset), float(c.constant_value())))
    return lambda x: sum(c * np.power(x, q) for q, c in coeffs) + 0 * x


def polypot_potential(p: ham.PolyPotParams):
    H = ham.polypot_physical(p)
    v11, v22 = _laurent_evaluator(H[0, 0]), _laurent_evaluator(H[1, 1])
    v12 = _entry_evaluator(H[0, 1])
    return lambda y: (v11(y), v12(y), v22(y))


def polypot_problem(p: ham.PolyPotParams, level: float, N: int = 4000) -> GridProblem:
    pot = polypot_potential(p)
    half = box_for_potential(lambda y: np.minimum(pot(y)[0], pot(y)[2]) - abs(pot(y)[1]), level)
    return GridProblem(-half, half, N, pot, channels=2)


# ---------------------------------------------------------------------------
# coupled Lame system

def lame_recurrence(p: ham.LameParams) -> rec.RecurrenceSystem:
    return rec.derive_recurrence(ham.build_lame_pipeline(p).tilde, [0, 0])


def lame_algebraic(p: ham.LameParams) -> AlgebraicLevels:
    tr = rec.truncation_polynomial(lame_recurrence(p))
    return _levels_from([("det", tr.polynomial)])


def lame_potential(p: ham.LameParams):
    k2 = float(p.k2)
    A, C, delta = float(p.A), float(p.C), float(p.delta)
    two_theta_k = 2 * math.sqrt(float(p.theta_sq)) * math.sqrt(k2)

    def pot(z):
        sn, cn, dn = jacobi(z, k2)
        return (A * k2 * sn ** 2 + delta * (1 + k2) / 2,
                two_theta_k * cn * dn,
                C * k2 * sn ** 2 - delta * (1 + k2) / 2)
    return pot


def lame_problem(p: ham.LameParams, N: int = 2000) -> GridProblem:
    return GridProblem(0.0, 4 * ellipk(float(p.k2)), N, lame_potential(p), channels=2,
                       boundary="periodic")


# ---------------------------------------------------------------------------
# Bose-Hubbard

# (s, b0): series z^s t^(b0 + j) with t = (z + 2)/2
BH_CHAINS = ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(1, 2)),
             (Fraction(1, 2), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)))


def bh_truncating_chains(p: ham.BoseHubbardParams) -> list[tuple[Fraction, Fraction, rec.RecurrenceSystem]]:
    out = []
    for s, b0 in BH_CHAINS:
        sys = bh_chain_system(p, s, b0)
        try:
            sys.degeneracy_levels(search=400)
        except rec.NoDegeneracy:
            continue
        out.append((s, b0, sys))
    return out


def bh_algebraic(p: ham.BoseHubbardParams) -> AlgebraicLevels:
    polys = []
    for s, b0, sys in bh_truncating_chains(p):
        tr = rec.truncation_polynomial(sys)
        polys.append((f"s={s},b0={b0}", tr.polynomial))
    return _levels_from(polys)


def bh_potential(p: ham.BoseHubbardParams):
    """``cosh^2/gamma - (n+1) cosh - 1/gamma - gamma (n/2)(n/2 - 1)`` with ``gamma = alpha^2``."""
    g = float(p.alpha) ** 2
    a = float(p.alpha)
    n = float(p.boson_number)
    return lambda x: (np.cosh(a * x) ** 2 / g - (n + 1) * np.cosh(a * x) - 1 / g
                      - g * (n / 2) * (n / 2 - 1))


def bh_problem(p: ham.BoseHubbardParams, level: float, N: int = 4000) -> GridProblem:
    V = bh_potential(p)
    half = box_for_potential(V, level)
    return GridProblem(-half, half, N, V)


# ---------------------------------------------------------------------------

@dataclass
class CaseVerification:
    case: str
    params: dict
    algebraic: AlgebraicLevels
    spectrum: Spectrum
    shift: float
    report: ComparisonReport
    grids: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"case": self.case, "params": self.params,
                "algebraic": self.algebraic.levels,
                "numeric": self.spectrum.values.tolist(),
                "residuals": self.report.residuals,
                "tolerance": self.report.tolerance,
                "grids": self.grids,
                "matches": self.report.matches,
                "unmatched": self.report.unmatched,
                "ok": self.report.ok}


def verify_case(case: str, params, levels: int | None = None, N: int | None = None,
                tol: float = 1e-6, estimate_order: bool = False) -> CaseVerification:
    """Compare algebraic levels with the lowest ``levels`` numerical ones."""
    if case == "polypot":
        alg = polypot_algebraic(params)
        prob = polypot_problem(params, max(alg.levels), N or 4000)
        shift = 0.0
        pdict = {"m": str(params.m), "p2": str(params.p2), "p1": str(params.p1),
                 "kappa0": str(params.kappa0)}
    elif case == "lame":
        alg = lame_algebraic(params)
        prob = lame_problem(params, N or 2000)
        shift = 0.0
        pdict = {"m": str(params.m), "delta": str(params.delta), "k2": str(params.k2)}
    elif case == "bose-hubbard":
        alg = bh_algebraic(params)
        prob = bh_problem(params, max(alg.levels), N or 4000)
        shift = float(params.E0)
        pdict = {"alpha": str(params.alpha), "M": str(params.M)}
    else:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")
    spec = _covering_spectrum(prob, alg.levels, shift, levels, estimate_order)
    report = compare(alg.levels, spec.values, shift=shift, tol=tol)
    return CaseVerification(case, pdict, alg, spec, shift, report, sorted(spec.raw))


def _covering_spectrum(prob: GridProblem, algebraic: list[float], shift: float,
                       levels: int | None, estimate_order: bool) -> Spectrum:
    """Fixed ``levels`` when given, else enough levels to pass the top algebraic one."""
    if levels:
        return solve_spectrum(prob, levels, estimate_order=estimate_order)
    count = 2 * len(algebraic) + 4
    top = max(algebraic)
    while True:
        spec = solve_spectrum(prob, count, estimate_order=estimate_order)
        if spec.values[-1] + shift > top + 1.0 or 2 * count >= prob.N // 2:
            return spec
        count *= 2


# ---------------------------------------------------------------------------
# eigenfunctions rebuilt from truncated series

def _poly_at(p: Poly, E: float) -> float:
    return float(np.polyval(p.float_coeffs()[::-1], E)) if not p.is_zero() else 0.0


def numeric_series(tr: rec.Truncation, E: float) -> dict[tuple[int, int], float]:
    """Series coefficients at a float root: null vector of ``K(E)``, then the
    levels below each component's degeneracy level."""
    K = np.array([[_poly_at(e, E) for e in row] for row in tr.matrix])
    _u, _s, vt = np.linalg.svd(K)
    theta = vt[-1]
    gen = tr.generated
    out = {}
    for i, nstar in enumerate(tr.degeneracies):
        for n in range(gen.start, nstar):
            if not gen.system.valid(n, i):
                continue
            form = gen.component(n, i)
            out[(n, i)] = sum(_poly_at(form.coeff(k), E) * theta[k] for k in range(len(theta)))
    return out


def _component_poly(coeffs: dict, comp: int, offset: Fraction):
    """``x -> sum_n c_n x^(offset + n)`` for one component."""
    terms = [(float(offset + n), c) for (n, i), c in coeffs.items() if i == comp]
    return lambda x: sum(c * np.power(x, q) for q, c in terms) + 0 * x


def _component_deriv(coeffs: dict, comp: int, offset: Fraction):
    terms = [(float(offset + n), c) for (n, i), c in coeffs.items() if i == comp and offset + n != 0]
    return lambda x: sum(q * c * np.power(x, q - 1) for q, c in terms) + 0 * x


def _interleave(a, b):
    out = np.empty(2 * len(a))
    out[0::2], out[1::2] = a, b
    return out


def reconstructed_state(case: str, params, E: float, prob: GridProblem, chain=None):
    """Physical wavefunction on ``prob``'s grid for the algebraic level ``E``."""
    y = prob.grid()
    if case == "polypot":
        tr = rec.truncation_polynomial(polypot_recurrence(params))
        c = numeric_series(tr, E)
        x = y * y
        u, v = _component_poly(c, 0, Fraction(0))(x), _component_poly(c, 1, Fraction(1))(x)
        dv = _component_deriv(c, 1, Fraction(1))(x)
        k0, p2, p1 = float(params.kappa0), float(params.p2), float(params.p1)
        phi = np.exp(-p2 * y ** 4 / 2 - p1 * y * y)
        return _interleave(phi * (u + k0 * dv), phi * v)
    if case == "lame":
        tr = rec.truncation_polynomial(lame_recurrence(params))
        c = numeric_series(tr, E)
        sn, cn, dn = jacobi(y, float(params.k2))
        x = sn * sn
        u, v = _component_poly(c, 0, Fraction(0))(x), _component_poly(c, 1, Fraction(0))(x)
        kap = float(params.kappa)
        return _interleave(u + kap * x * v, cn * dn * v)
    if case == "bose-hubbard":
        s, b0, sys = chain
        tr = rec.truncation_polynomial(sys)
        c = numeric_series(tr, E)
        a = float(params.alpha)
        z = np.cosh(a * y) - 1
        t = (z + 2) / 2
        zs = np.sign(y) * np.sqrt(z) if s else np.ones_like(z)
        return np.exp(-(z + 1) / a ** 2) * zs * _component_poly(c, 0, b0)(t)
    raise ValueError(f"unknown case {case!r}")


def rayleigh_check(case: str, params, N: int | None = None) -> list[dict]:
    """Richardson-extrapolated Rayleigh quotient of each rebuilt eigenfunction."""
    out = []
    if case == "bose-hubbard":
        items = []
        for s, b0, sys in bh_truncating_chains(params):
            tr = rec.truncation_polynomial(sys)
            items += [(E, (s, b0, sys)) for E in root_values(rational_polynomial(tr.polynomial))]
        shift = float(params.E0)
        top = max(E for E, _ in items)
        prob = bh_problem(params, top, N or 4000)
    else:
        alg = polypot_algebraic(params) if case == "polypot" else lame_algebraic(params)
        items = [(E, None) for E in alg.levels]
        shift = 0.0
        prob = polypot_problem(params, max(alg.levels), N or 4000) if case == "polypot" \
            else lame_problem(params, N or 2000)
    for E, chain in items:
        vals = []
        for pr in (prob, prob.refined()):
            psi = reconstructed_state(case, params, E, pr, chain)
            vals.append(rayleigh_quotient(pr, psi) + shift)
        extrap = vals[1] + (vals[1] - vals[0]) / 3
        out.append({"level": E, "rayleigh": extrap, "residual": abs(extrap - E) / max(1.0, abs(E))})
    return out
