"""Three-term (vector) recurrences attached to banded operators.

A series ``sum_n sum_i V_n[i] x^(e_i + n)`` (component ``i`` carrying the
staggering offset ``e_i``) solves ``H psi = E psi`` iff

    C(n) V_(n+1) = (E + A(n)) V_n + B(n) V_(n-1)

where the matrices are read off from the action of ``H`` on
``x^(e_i + a)`` with ``a`` a formal level.  Unknown coefficients are carried
as linear forms in free parameters whose coefficients are polynomials in
``E``; the truncation conditions then give a determinant ``P(E)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactnum import Poly, RationalFunction, adjugate, det, format_scalar, inv, to_scalar
from .weylop import DiffOperator, GenExponent

E_VAR = Poly([0, 1])
N_VAR = Poly([0, 1])


class BandwidthError(ValueError):
    """The operator is not three-term in the requested grading."""


class NoDegeneracy(ValueError):
    """No level where the lower coefficient vanishes was found."""


def _shift_poly(p: Poly, k) -> Poly:
    """``p(n + k)`` as a polynomial in n."""
    return p.compose(Poly([k, 1]))


def _eval_matrix(mat, n):
    return [[e(Fraction(n)) for e in row] for row in mat]


@dataclass
class RecurrenceSystem:
    dim: int
    offsets: list[Fraction]
    C: list[list[Poly]]          # polynomials in n
    A: list[list[Poly]]
    B: list[list[Poly]]
    normalization: str = "raw"
    lower: list[Fraction] = field(default_factory=list)

    def __post_init__(self):
        if not self.lower:
            self.lower = [e - (e.numerator // e.denominator) for e in self.offsets]

    def valid(self, n: int, i: int) -> bool:
        """Does the basis element of component ``i`` at level ``n`` exist?"""
        return self.offsets[i] + n >= self.lower[i]

    def first_level(self, i: int) -> int:
        e = self.offsets[i]
        return int(self.lower[i] - e)

    def C_at(self, n):
        return _eval_matrix(self.C, n)

    def A_at(self, n):
        return _eval_matrix(self.A, n)

    def B_at(self, n):
        return _eval_matrix(self.B, n)

    def degeneracy_levels(self, search: int = 2000) -> list[int]:
        """First ``n >= 1`` with ``B(n)[i][i] = 0``, per component."""
        out = []
        for i in range(self.dim):
            entry = self.B[i][i]
            for n in range(1, search + 1):
                if entry(Fraction(n)) == 0:
                    out.append(n)
                    break
            else:
                raise NoDegeneracy(f"component {i} never degenerates up to n = {search}")
        return out

    def as_dict(self) -> dict:
        fmt = (lambda mat: [[e.format("n") for e in row] for row in mat])
        return {"dim": self.dim, "offsets": [str(e) for e in self.offsets],
                "C": fmt(self.C), "A": fmt(self.A), "B": fmt(self.B),
                "normalization": self.normalization}


def banded_action(H, offsets: Sequence) -> dict[int, list[list[Poly]]]:
    """``{s: M_s}`` where ``M_s[r][i]`` (a polynomial in the level a) is the
    coefficient sending component i at level a to component r at level a+s."""
    offsets = [Fraction(e) for e in offsets]
    d = len(offsets)
    if isinstance(H, DiffOperator):
        if d != 1:
            raise ValueError("scalar operator needs one offset")
        entry = (lambda r, i: H)
    else:
        if d != 2:
            raise ValueError("2x2 operator needs two offsets")
        entry = (lambda r, i: H[r, i])
    out: dict[int, list[list[Poly]]] = {}
    for i in range(d):
        src = GenExponent(offsets[i], 1)
        for r in range(d):
            for e, c in entry(r, i).apply_to_monomial(src):
                if e.a_count != 1:
                    raise BandwidthError("image left the graded family")
                s = e.offset - offsets[r]
                if s.denominator != 1:
                    raise BandwidthError(f"fractional level shift {s}")
                s = int(s)
                mat = out.setdefault(s, [[Poly() for _ in range(d)] for _ in range(d)])
                mat[r][i] = mat[r][i] + c
    return {s: m for s, m in sorted(out.items()) if any(e for row in m for e in row)}


def derive_recurrence(H, offsets: Sequence) -> RecurrenceSystem:
    action = banded_action(H, offsets)
    if any(abs(s) > 1 for s in action):
        raise BandwidthError(f"level shifts {sorted(action)} exceed a three-term band")
    d = len(offsets)
    zero = [[Poly() for _ in range(d)] for _ in range(d)]
    Mm, M0, Mp = action.get(-1, zero), action.get(0, zero), action.get(1, zero)
    C = [[_shift_poly(e, 1) for e in row] for row in Mm]
    A = [[-e for e in row] for row in M0]
    B = [[-_shift_poly(e, -1) for e in row] for row in Mp]
    return RecurrenceSystem(d, [Fraction(e) for e in offsets], C, A, B)


# ---------------------------------------------------------------------------
# linear forms in free parameters with coefficients in Q[E]

class LinForm:
    """``sum_k c_k theta_k`` with ``c_k`` polynomials in E."""

    __slots__ = ("c",)

    def __init__(self, c: dict[int, Poly] | None = None):
        self.c = {k: v for k, v in (c or {}).items() if v}

    @classmethod
    def param(cls, k: int) -> "LinForm":
        return cls({k: Poly([1])})

    def __add__(self, other: "LinForm") -> "LinForm":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, Poly()) + v
        return LinForm(out)

    def __neg__(self):
        return LinForm({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, p) -> "LinForm":
        p = p if isinstance(p, Poly) else Poly([p])
        return LinForm({k: v * p for k, v in self.c.items()})

    def coeff(self, k: int) -> Poly:
        return self.c.get(k, Poly())

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.c == other.c

    def format(self) -> str:
        if not self.c:
            return "0"
        return " + ".join(f"({v.format('E')})*t{k}" for k, v in sorted(self.c.items()))

    def __repr__(self):
        return f"LinForm({self.format()})"


@dataclass
class Generated:
    system: RecurrenceSystem
    start: int
    levels: list[list[LinForm | None]]      # levels[n - start][i]
    params: list[tuple[int, int]]           # (level, component) of each free parameter
    constraints: list[LinForm]

    def V(self, n: int) -> list[LinForm | None]:
        return self.levels[n - self.start]

    def component(self, n: int, i: int) -> LinForm:
        v = self.V(n)[i]
        return LinForm() if v is None else v

    @property
    def top(self) -> int:
        return self.start + len(self.levels) - 1

    def scalar_polys(self) -> list[Poly]:
        """For one free parameter: the coefficient polynomials ``P_n(E)``."""
        if len(self.params) != 1 or self.system.dim != 1:
            raise ValueError("scalar_polys needs a scalar system with one free parameter")
        return [self.component(n, 0).coeff(0) for n in range(self.start, self.top + 1)]


def generate(sys: RecurrenceSystem, upto: int, initial: dict | None = None) -> Generated:
    """Solve the recurrence up to level ``upto``.

    Free parameters appear wherever the leading coefficient leaves a basis
    coefficient undetermined.  ``initial`` may pin parameters by
    (level, component) to constants or polynomials in E.
    """
    d = sys.dim
    start = min(sys.first_level(i) for i in range(d))
    values: dict[tuple[int, int], LinForm] = {}
    params: list[tuple[int, int]] = []
    constraints: list[LinForm] = []
    initial = initial or {}

    def free_up_to(level: int):
        for n in range(start, level + 1):
            for i in range(d):
                if sys.valid(n, i) and (n, i) not in values:
                    key = (n, i)
                    if key in initial:
                        values[key] = _const_form(initial[key], params)
                    else:
                        values[key] = LinForm.param(len(params))
                        params.append(key)

    def known(n, i) -> LinForm | None:
        if not sys.valid(n, i):
            return LinForm()
        return values.get((n, i))

    for N in range(start - 1, upto):
        free_up_to(N)
        Cn, An, Bn = sys.C_at(N), sys.A_at(N), sys.B_at(N)
        rows = []
        for r in range(d):
            if not sys.valid(N, r):
                continue
            # C V_{N+1} - (E + A) V_N - B V_{N-1} = 0
            unknown: dict[int, object] = {}
            rest = LinForm()
            for i in range(d):
                if Cn[r][i] != 0 and sys.valid(N + 1, i):
                    unknown[i] = Cn[r][i]
                mid = Poly([-An[r][i]]) - (E_VAR if r == i else Poly())
                if mid and sys.valid(N, i):
                    rest = rest + known(N, i).scale(mid)
                if Bn[r][i] != 0 and sys.valid(N - 1, i):
                    rest = rest + known(N - 1, i).scale(-Bn[r][i])
            rows.append([unknown, rest])
        # eliminate on the level N+1 unknowns, leftmost pivot first
        used: dict[int, int] = {}
        for i in range(d):
            piv_row = next((rw for rw in rows if id(rw) not in used and rw[0].get(i, 0) != 0), None)
            if piv_row is None:
                continue
            used[id(piv_row)] = i
            pc = piv_row[0][i]
            for rw in rows:
                if rw is piv_row or rw[0].get(i, 0) == 0:
                    continue
                f = rw[0][i] / pc
                for k, v in piv_row[0].items():
                    rw[0][k] = rw[0].get(k, 0) - f * v
                rw[0] = {k: v for k, v in rw[0].items() if v != 0}
                rw[1] = rw[1] - piv_row[1].scale(f)
        # back-substitute pivots from the last one
        pivots = []
        for rw in rows:
            if id(rw) in used:
                pivots.append((used[id(rw)], rw))
            elif not rw[0]:
                if not rw[1].is_zero():
                    constraints.append(rw[1])
        for i, rw in sorted(pivots, key=lambda t: -t[0]):
            # rw reads  sum_k c_k V_(N+1)[k] + rest = 0
            expr = -rw[1]
            for k, v in rw[0].items():
                if k == i:
                    continue
                if (N + 1, k) not in values:
                    values[(N + 1, k)] = LinForm.param(len(params))
                    params.append((N + 1, k))
                expr = expr - values[(N + 1, k)].scale(v)
            values[(N + 1, i)] = expr.scale(inv(rw[0][i]))
    free_up_to(upto)
    levels = []
    for n in range(start, upto + 1):
        levels.append([values.get((n, i)) if sys.valid(n, i) else None for i in range(d)])
    return Generated(sys, start, levels, params, constraints)


def _const_form(v, params) -> LinForm:
    """A pinned initial value: a constant multiple of a fresh unit parameter."""
    k = len(params)
    params.append(("pinned", k))
    return LinForm({k: v if isinstance(v, Poly) else Poly([to_scalar(v)])})


# ---------------------------------------------------------------------------
# truncation

@dataclass
class Truncation:
    polynomial: Poly
    matrix: list[list[Poly]]
    conditions: list[tuple[int, int]]   # (level, component)
    degeneracies: list[int]
    generated: Generated


def truncation_polynomial(sys: RecurrenceSystem, extra: int = 0) -> Truncation:
    levels = sys.degeneracy_levels()
    conds = [(n, i) for i, n in enumerate(levels)]
    gen = generate(sys, max(levels) + 1 + extra)
    p = len(gen.params)
    if p != len(conds):
        raise ValueError(f"{len(conds)} truncation conditions for {p} free parameters")
    K = [[gen.component(n, i).coeff(k) for k in range(p)] for (n, i) in conds]
    return Truncation(det(K), K, conds, levels, gen)


@dataclass
class FactorizationReport:
    holds: bool
    window_end: int
    checked_levels: list[int]
    failures: list[int]

    def as_dict(self) -> dict:
        return {"holds": self.holds, "window_end": self.window_end,
                "checked_levels": self.checked_levels, "failures": self.failures}


def factorization_check(sys: RecurrenceSystem, J: int = 5, N: int | None = None) -> FactorizationReport:
    """Check that every level beyond the truncation window lies in the ideal
    cut out by the truncation polynomial.

    Scalar case: ``P_(N+j)`` divisible by ``P_N`` for ``j = 1..J``; ``N``
    defaults to the degeneracy level and may be given explicitly for
    systems without one.  Vector case: each entry of ``L_n adj(K)`` is
    divisible by ``det K``, where ``L_n`` is the matrix of the level-n
    linear forms.
    """
    if sys.dim == 1:
        if N is None:
            N = sys.degeneracy_levels()[0]
        gen = generate(sys, N + J)
        polys = {n: gen.component(n, 0).coeff(0) for n in range(gen.start, gen.top + 1)}
        checked = list(range(N + 1, N + J + 1))
        if polys[N].degree < 1:
            return FactorizationReport(False, N, checked, checked)
        failures = [n for n in checked if polys[n] % polys[N]]
        return FactorizationReport(not failures, N, checked, failures)
    tr = truncation_polynomial(sys, extra=J + 1)
    window = max(tr.degeneracies) if N is None else N
    gen, P, K = tr.generated, tr.polynomial, tr.matrix
    checked = list(range(window + 1, window + J + 1))
    if P.degree < 1:
        return FactorizationReport(False, window, checked, checked)
    adj = adjugate(K)
    p = len(gen.params)
    failures = []
    for n in checked:
        ok = True
        for i in range(sys.dim):
            if not sys.valid(n, i):
                continue
            form = gen.component(n, i)
            for col in range(p):
                acc = Poly()
                for k in range(p):
                    acc = acc + form.coeff(k) * adj[k][col]
                if acc % P:
                    ok = False
        if not ok:
            failures.append(n)
    return FactorizationReport(not failures, window, checked, failures)


def scalar_divisibility(polys: Sequence[Poly], N: int, J: int) -> list[bool]:
    """``P_(N+j) mod P_N == 0`` for ``j = 1..J``."""
    return [not (polys[N + j] % polys[N]) for j in range(1, J + 1)]


# ---------------------------------------------------------------------------
# normalisations

def rescale(sys: RecurrenceSystem, rho: RationalFunction) -> dict:
    """Recurrence for ``P_n`` when ``V_n = lambda_n P_n`` and ``rho(n) = lambda_(n+1)/lambda_n``.

    Returns ``{"C", "A", "B"}`` as matrices of rational functions in n.
    """
    rho_prev = RationalFunction(rho.num.compose(Poly([-1, 1])), rho.den.compose(Poly([-1, 1])))
    C = [[RationalFunction.poly(e) * rho for e in row] for row in sys.C]
    A = [[RationalFunction.poly(e) for e in row] for row in sys.A]
    B = [[RationalFunction.poly(e) / rho_prev for e in row] for row in sys.B]
    return {"C": C, "A": A, "B": B}


def monic_scalar(sys: RecurrenceSystem) -> RecurrenceSystem:
    """``W_(n+1) = (E + A(n)) W_n + C(n-1) B(n) W_(n-1)`` with ``W_n = prod_(k<n) C(k) V_n``."""
    if sys.dim != 1:
        raise ValueError("monic normalisation is for scalar systems")
    C = sys.C[0][0]
    B = [[sys.B[0][0] * _shift_poly(C, -1)]]
    return RecurrenceSystem(1, sys.offsets, [[Poly([1])]], sys.A, B, "monic", list(sys.lower))


def hankel_determinants(sys: RecurrenceSystem, count: int) -> list:
    """Moment determinants of the functional attached to a monic scalar
    recurrence ``W_(n+1) = (E - b_n) W_n - l_n W_(n-1)`` (``mu_0 = 1``)."""
    if sys.dim != 1 or sys.C[0][0] != Poly([1]):
        raise ValueError("needs a monic scalar recurrence")
    start = sys.first_level(0)
    lam = [-sys.B[0][0](Fraction(start + j)) for j in range(1, count)]
    out, acc = [Fraction(1)], Fraction(1)
    prod = Fraction(1)
    for j in range(count - 1):
        prod = prod * lam[j]
        acc = acc * prod
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# series against restriction matrices

def series_eigenvector_check(tr: Truncation, restriction, basis_map) -> bool:
    """Check ``(M - E) v == 0`` modulo ``P(E)`` for the truncated series.

    ``basis_map(n, i)`` returns the index of level n, component i in the
    basis of the restriction matrix (or None if outside the space).  The
    parameter vector is taken from a column of ``adj(K)`` that is nonzero
    modulo ``P``.
    """
    P = tr.polynomial
    if P.degree < 1:
        return False
    gen, K = tr.generated, tr.matrix
    adj = adjugate(K)
    p = len(gen.params)
    col = next((c for c in range(p) if any(adj[k][c] % P for k in range(p))), None)
    if col is None:
        return False
    theta = [adj[k][col] for k in range(p)]
    dim = len(restriction)
    v = [Poly() for _ in range(dim)]
    for n in range(gen.start, gen.top + 1):
        for i in range(gen.system.dim):
            idx = basis_map(n, i)
            form = gen.V(n)[i]
            if form is None:
                continue
            val = Poly()
            for k in range(p):
                val = val + form.coeff(k) * theta[k]
            val = val % P
            if idx is None:
                if val:
                    return False
                continue
            v[idx] = val
    if all(not e for e in v):
        return False
    for r in range(dim):
        acc = -(E_VAR * v[r])
        for c in range(dim):
            acc = acc + v[c] * restriction[r][c]
        if acc % P:
            return False
    return True


def format_levels(gen: Generated) -> list[dict]:
    rows = []
    for n in range(gen.start, gen.top + 1):
        rows.append({"level": n, "components": [None if f is None else
                                                {str(k): f.coeff(k).format("E") for k in sorted(f.c)}
                                                for f in gen.V(n)]})
    return rows


def poly_coeff_strings(p: Poly) -> list[str]:
    return [format_scalar(c) for c in p.coeffs]


# ---------------------------------------------------------------------------
# normal forms used for comparison with published closed forms

def _rf_compose(rf: RationalFunction, inner: Poly) -> RationalFunction:
    return RationalFunction(rf.num.compose(inner), rf.den.compose(inner))


def _as_rf(e) -> RationalFunction:
    return e if isinstance(e, RationalFunction) else RationalFunction.poly(e)


@dataclass
class Comparison:
    name: str
    holds: bool
    mismatches: list[dict]

    def as_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "mismatches": self.mismatches}


def compare_matrix_functions(name: str, derived, printed, levels: Sequence[int]) -> Comparison:
    """Entrywise comparison of two matrix-valued functions of n on ``levels``."""
    mism = []
    for n in levels:
        dm, pm = derived(Fraction(n)), printed(Fraction(n))
        for i, (drow, prow) in enumerate(zip(dm, pm)):
            for j, (a, b) in enumerate(zip(drow, prow)):
                if a != b:
                    mism.append({"n": n, "entry": [i, j], "derived": format_scalar(a),
                                 "printed": format_scalar(b)})
    return Comparison(name, not mism, mism)


def evaluate_rf_matrix(mat) -> callable:
    return lambda n: [[_as_rf(e)(n) for e in row] for row in mat]


def lame_normalized(sys: RecurrenceSystem) -> dict:
    """Lame recurrence for ``P_n`` with ``V_n = (-1)^n / (2n)! P_n``."""
    rho = RationalFunction(Poly([-1]), Poly([1, 2]) * Poly([2, 2]))
    return rescale(sys, rho)


def lame_printed_A(p, n):
    k2, d, m, kap = p.k2, p.delta, p.m, p.kappa
    return [[-(k2 + 1) * (4 * n * n + d / 2), -kap * (-8 * n + d + 4 * m + 1)],
            [-kap * (d + 4 * m + 3), -(k2 + 1) * (4 * n * n + 2 * n + 1 - d / 2)]]


def lame_printed_B(p, n):
    k2, m = p.k2, p.m
    return [[4 * k2 * (n - m - 1) * (n + m - Fraction(1, 2)), Fraction(0)],
            [Fraction(0), 4 * k2 * (n - m - 1) * (n + m + Fraction(3, 2))]]


def lame_printed_P1(p):
    """Constant part of the matrix sending ``P_0`` to ``P_1`` (``P_1 = (E + this) P_0``)."""
    k2, d, m, kap = p.k2, p.delta, p.m, p.kappa
    return [[-d / 2 * (1 + k2), -kap * (d + 4 * m + 1)],
            [-kap * (d + 4 * m + 3), -4 * (1 + k2) * (1 - d / 2)]]


def polypot_printed_B(p, n):
    return [[8 * p.p2 * (n - p.m - 1), Fraction(0)], [Fraction(0), 8 * p.p2 * (n - p.m)]]


def bh_r_form(sys: RecurrenceSystem) -> dict[str, RationalFunction]:
    """Rewrite a half-step chain in ``R_n`` form.

    Level ``j`` of the chain with offset ``b0`` is ``n = 2 (j + b0)``, and
    ``R_n = n! V_j``.  The result reads
    ``lead(n) R_(n+2) = (E + mid(n)) R_n + low(n) R_(n-2)``.
    """
    b0 = sys.offsets[0]
    j_of_n = Poly([-b0, Fraction(1, 2)])
    nn = Poly([0, 1])
    lead = RationalFunction(sys.C[0][0].compose(j_of_n), (nn + 2) * (nn + 1))
    mid = RationalFunction.poly(sys.A[0][0].compose(j_of_n))
    low = RationalFunction.poly(sys.B[0][0].compose(j_of_n) * nn * (nn - 1))
    return {"lead": lead, "mid": mid, "low": low}


def bh_split_form(r_form: dict, parity: int) -> dict[str, RationalFunction]:
    """Index the R-form by ``P_n = R_(2n)`` (parity 0) or ``Q_n = R_(2n+1)`` (parity 1),
    written as ``lead P_n = (E + mid) P_(n-1) + low P_(n-2)``."""
    shift = Poly([parity - 2, 2])
    return {k: _rf_compose(v, shift) for k, v in r_form.items()}


def bh_r_form_printed(p) -> dict[str, RationalFunction]:
    a, M, s = p.alpha, p.M, p.s
    nn = Poly([0, 1])
    mid = nn * nn * (a * a / 4) + nn * (s * a * a) + nn + Poly([s * s - M * M - 2 * M / a])
    low = nn * (nn - 1) * (Poly([2 * M / a - 1 / (a * a) - 2]) - nn)
    return {"lead": RationalFunction(a * a / 4), "mid": RationalFunction.poly(mid),
            "low": RationalFunction.poly(low)}


def bh_split_printed(p, parity: int) -> dict[str, RationalFunction]:
    a, M, s = p.alpha, p.M, p.s
    nn = Poly([0, 1])
    c = Poly([s * s - M * M - 2 * M / a])
    twoMa = 2 * M / a - 1 / (a * a)
    if parity == 0:
        mid = (nn * nn - nn * 2 + 1 + nn * (2 * s) - 2 * s) * (a * a) + nn * 2 - 2 + c
        low = (nn - 1) * (nn * 2 - 3) * (Poly([twoMa]) - nn * 2) * 2
    else:
        mid = (nn * nn - nn + Fraction(1, 4) + nn * (2 * s) - 2 * s) * (a * a) + nn * 2 - 1 + c
        low = (nn - 1) * (nn * 2 - 1) * (Poly([twoMa - 1]) - nn * 2) * 2
    return {"lead": RationalFunction(a * a / 4), "mid": RationalFunction.poly(mid),
            "low": RationalFunction.poly(low)}


def compare_forms(name: str, derived: dict, printed: dict) -> Comparison:
    mism = [{"part": k, "derived": derived[k].format("n"), "printed": printed[k].format("n")}
            for k in ("lead", "mid", "low") if derived[k] != printed[k]]
    return Comparison(name, not mism, mism)
