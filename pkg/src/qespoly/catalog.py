"""Named operator families and checks of their algebraic relations.

Families
--------
``j``       sl(2) generators on polynomials of degree <= n
``k_a``     their conjugates ``x^a j x^-a``
``J``       the three second-order operators preserving ``P_n + x^a P_m``
``K``       ``D(D-1)...(D-n)``, killing ``P_n``
``Kprime``  ``(D-a)(D-a-1)...(D-a-m)``, killing ``x^a P_m``
``q_low``, ``q_bar``  maps between ``P_n`` and ``P_m``
``Q``, ``Qbar``       sector-exchanging operators built from them
``Wplus``, ``Wminus`` exchanging operators for integer ``a = k``
``S``       three operators on ``P_n + sqrt(p2) P_(n-1)``
``Stilde``  ``S`` conjugated by ``sqrt(1 - lam x)``, on ``P_n + f P_n``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import Poly, RationalFunction, to_scalar
from .spaces import (FOperator, FRing, MonomialSpace, TwoComponentSpace, check_invariance,
                     fop_commutator, p2_poly)
from .transforms import affine_substitute, multiplication, substitute_power
from .weylop import (A_VAR, DiffOperator, GenExponent, anticommutator, commutator, compose,
                     power_conjugate, taylor_shift, to_D_poly)

FAMILIES = ("j", "k_a", "J", "K", "Kprime", "q_low", "q_bar", "Q", "Qbar",
            "Wplus", "Wminus", "S", "Stilde")


class DomainError(ValueError):
    """Parameters outside the admissible domain of a family."""


@dataclass(frozen=True)
class CatalogSpec:
    family: str
    n: int = 0
    m: int = 0
    a: object = None          # None means formal
    eps: str = "+"           # "+", "0", "-" for j, k_a, J
    alpha: int = 0           # index of q, Q families
    index: int = 1           # 1, 2, 3 for S, Stilde
    lam: object = Fraction(-1)


def _a_coeff(a) -> Poly:
    """The exponent parameter as a coefficient polynomial in ``a``."""
    return A_VAR if a is None else Poly([to_scalar(a)])


def _a_exponent(a) -> GenExponent:
    return GenExponent(0, 1) if a is None else GenExponent(to_scalar(a))


D = DiffOperator.D
x = DiffOperator.x
d = DiffOperator.d
const = DiffOperator.const


# ---------------------------------------------------------------------------
# sl(2) and the deformed algebra

def j_op(eps: str, n: int = 0) -> DiffOperator:
    if eps == "+":
        return x() @ (D() - const(n))
    if eps == "0":
        return D() - const(Fraction(n, 2))
    if eps == "-":
        return d()
    raise DomainError(f"unknown generator {eps!r}")


def k_op(eps: str, n: int = 0, a=None) -> DiffOperator:
    """``x^a j_eps(n) x^-a``."""
    return power_conjugate(j_op(eps, n), _a_exponent(a))


def J_op(eps: str, n: int, m: int, a=None) -> DiffOperator:
    ac = _a_coeff(a)
    if eps == "+":
        return x() @ (D() - const(n)) @ (D() - const(m) - const(ac))
    if eps == "0":
        return D() - const(Fraction(m + n + 1, 2))
    if eps == "-":
        return (D() + const(1) - const(ac)) @ d()
    raise DomainError(f"unknown generator {eps!r}")


def K_op(n: int) -> DiffOperator:
    return DiffOperator.D_shifted_product(range(n + 1))


def Kprime_op(m: int, a=None) -> DiffOperator:
    ac = _a_coeff(a)
    return DiffOperator.D_shifted_product([ac + i for i in range(m + 1)])


def q_low_op(alpha: int, n: int, m: int) -> DiffOperator:
    delta = abs(m - n)
    if not 0 <= alpha <= delta:
        raise DomainError("need 0 <= alpha <= |m - n|")
    return x(alpha)


def q_bar_op(alpha: int, n: int, m: int) -> DiffOperator:
    delta, p = abs(m - n), max(m, n)
    if not 0 <= alpha <= delta:
        raise DomainError("need 0 <= alpha <= |m - n|")
    shifts = [p + 1 - delta + j for j in range(alpha)]
    return DiffOperator.D_shifted_product(shifts) @ d(delta - alpha)


def Q_op(alpha: int, n: int, m: int, a=None) -> DiffOperator:
    """Maps ``P_n + x^a P_m`` into ``P_n`` (kills ``P_n``)."""
    inner = q_low_op(alpha, n, m) if n >= m else q_bar_op(alpha, n, m)
    e = _a_exponent(a)
    return inner @ DiffOperator({(-e, 0): Poly([1])}) @ K_op(n)


def Qbar_op(alpha: int, n: int, m: int, a=None) -> DiffOperator:
    """Maps ``P_n + x^a P_m`` into ``x^a P_m`` (kills ``x^a P_m``)."""
    inner = q_bar_op(alpha, n, m) if n >= m else q_low_op(alpha, n, m)
    e = _a_exponent(a)
    return DiffOperator({(e, 0): Poly([1])}) @ inner @ Kprime_op(m, a)


def _check_w_domain(n: int, m: int, k) -> int:
    if k is None or Fraction(k).denominator != 1:
        raise DomainError("W operators need an integer exponent a = k")
    k = int(k)
    if not (n <= k and m - k >= n):
        raise DomainError("W operators need n <= k and m - k >= n")
    return k


def Wplus_op(n: int, m: int, k) -> DiffOperator:
    k = _check_w_domain(n, m, k)
    return x(k) @ DiffOperator.D_shifted_product([k + m - j for j in range(k)])


def Wminus_op(n: int, m: int, k) -> DiffOperator:
    k = _check_w_domain(n, m, k)
    shifts = list(range(n + 1)) + [k + n + i for i in range(1, k - n)]
    return x(-k) @ DiffOperator.D_shifted_product(shifts)


def kernel_product(power, shifts) -> DiffOperator:
    """``x^power prod (D - s)``: the building block of higher-jump operators."""
    return DiffOperator.x(power) @ DiffOperator.D_shifted_product(shifts)


# ---------------------------------------------------------------------------
# S family

def _affine_data(lam: Fraction):
    """``x = h u + beta`` maps ``(1-x)(1-lam x)`` onto ``c (1 - u^2)``."""
    if lam in (0, 1):
        raise DomainError("lambda must differ from 0 and 1")
    inv_lam = 1 / lam
    beta = (1 + inv_lam) / 2
    h = (inv_lam - 1) / 2
    c = -lam * h * h
    return h, beta, c


def S_parts(index: int, N, lam=-1) -> tuple[DiffOperator | None, DiffOperator | None]:
    """``(plain, fpart)`` with ``S = plain + f o fpart`` and ``f^2 = (1-x)(1-lam x)``.

    For ``lam = -1`` these are ``N x + p2 d``, ``f (N - x d)`` and ``f d``.
    Other ``lam`` are reached through the affine map of ``_affine_data``;
    the f-odd members are rescaled by ``sqrt(c)`` to keep rational data.
    """
    N, lam = to_scalar(N), to_scalar(lam)
    canon = {
        1: (x() * N + multiplication(p2_poly(-1)) @ d(), None),
        2: (None, const(N) - x() @ d()),
        3: (None, d()),
    }
    if index not in canon:
        raise DomainError("S index is 1, 2 or 3")
    plain, fpart = canon[index]
    if lam == -1:
        return plain, fpart
    h, beta, _c = _affine_data(lam)
    # operators in u rewritten in x through u = (x - beta)/h
    back = (lambda op: None if op is None else affine_substitute(op, 1 / h, -beta / h))
    return back(plain), back(fpart)


def S_op(index: int, n: int, lam=-1, N=None) -> FOperator:
    lam = to_scalar(lam)
    ring = FRing(p2_poly(lam))
    plain, fpart = S_parts(index, n if N is None else N, lam)
    return FOperator.from_parts(ring, plain, fpart)


def ratio_ring(lam) -> FRing:
    lam = to_scalar(lam)
    return FRing(RationalFunction(Poly([1, -1]), Poly([1, -lam])))


def Stilde_op(index: int, n: int, lam=-1) -> FOperator:
    """``(1 - lam x)^(-1/2) S (1 - lam x)^(1/2)`` with ``N = n + 1/2``."""
    lam = to_scalar(lam)
    S = S_op(index, n, lam, N=Fraction(2 * n + 1, 2))
    ell = RationalFunction(Poly([-lam / 2]), Poly([1, -lam]))
    conj = S.conjugate(ell)
    # sqrt(p2) = (1 - lam x) * sqrt((1-x)/(1-lam x))
    return conj.change_ring(ratio_ring(lam), RationalFunction(Poly([1, -lam])))


# ---------------------------------------------------------------------------
# dispatch

def build(spec: CatalogSpec):
    f, n, m, a = spec.family, spec.n, spec.m, spec.a
    if n < 0 or m < -1:
        raise DomainError("need n >= 0 and m >= -1")
    if f == "j":
        return j_op(spec.eps, n)
    if f == "k_a":
        return k_op(spec.eps, n, a)
    if f == "J":
        return J_op(spec.eps, n, m, a)
    if f == "K":
        return K_op(n)
    if f == "Kprime":
        return Kprime_op(m, a)
    if f == "q_low":
        return q_low_op(spec.alpha, n, m)
    if f == "q_bar":
        return q_bar_op(spec.alpha, n, m)
    if f == "Q":
        return Q_op(spec.alpha, n, m, a)
    if f == "Qbar":
        return Qbar_op(spec.alpha, n, m, a)
    if f == "Wplus":
        return Wplus_op(n, m, a)
    if f == "Wminus":
        return Wminus_op(n, m, a)
    if f == "S":
        if m != n - 1:
            raise DomainError("S operators need m = n - 1")
        return S_op(spec.index, n, spec.lam)
    if f == "Stilde":
        if m != n:
            raise DomainError("Stilde operators need m = n")
        return Stilde_op(spec.index, n, spec.lam)
    raise DomainError(f"unknown family {f!r}")


def declared_space(spec: CatalogSpec):
    """The space each family is designed to preserve."""
    f = spec.family
    if f in ("j", "K"):
        return MonomialSpace(spec.n)
    if f == "k_a":
        return MonomialSpace.from_exponents(
            [_a_exponent(spec.a) + i for i in range(spec.n + 1)])
    if f in ("J", "Kprime", "Q", "Qbar", "Wplus", "Wminus"):
        return MonomialSpace(spec.n, spec.m, spec.a)
    if f == "S":
        return TwoComponentSpace(spec.n, spec.n - 1, "sqrtP2", spec.lam)
    if f == "Stilde":
        return TwoComponentSpace(spec.n, spec.n, "sqrtRatio", spec.lam)
    if f in ("q_low", "q_bar"):
        return None
    raise DomainError(f"unknown family {f!r}")


def family_specs(family: str, n: int, m: int, a=None, lam=-1) -> list[CatalogSpec]:
    """All members of a family at the given parameters."""
    if family in ("j", "k_a", "J"):
        return [CatalogSpec(family, n, m, a, eps=e) for e in ("+", "0", "-")]
    if family in ("q_low", "q_bar", "Q", "Qbar"):
        return [CatalogSpec(family, n, m, a, alpha=al) for al in range(abs(m - n) + 1)]
    if family in ("S", "Stilde"):
        mm = n - 1 if family == "S" else n
        return [CatalogSpec(family, n, mm, a, index=i, lam=to_scalar(lam)) for i in (1, 2, 3)]
    return [CatalogSpec(family, n, m, a)]


# ---------------------------------------------------------------------------
# relations

@dataclass
class RelationReport:
    name: str
    holds: bool
    scope: str                     # "algebra" or "on V"
    residual: object = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        res = self.residual
        if isinstance(res, DiffOperator):
            res = res.term_list()
        elif isinstance(res, FOperator):
            res = res.format()
        return {"relation": self.name, "holds": self.holds, "scope": self.scope,
                "residual": res, "details": self.details}


@dataclass
class AlgebraFitResult:
    """``[J+, J-] = alpha J0^3 + beta J0^2 + gamma J0 + delta``; entries are polynomials in a."""

    coefficients: list[Poly]
    residual: DiffOperator

    @property
    def alpha(self):
        return self._get(3)

    @property
    def beta(self):
        return self._get(2)

    @property
    def gamma(self):
        return self._get(1)

    @property
    def delta(self):
        return self._get(0)

    def _get(self, i):
        return self.coefficients[i] if i < len(self.coefficients) else Poly()

    def as_dict(self) -> dict:
        return {name: self._get(i).format("a")
                for name, i in (("alpha", 3), ("beta", 2), ("gamma", 1), ("delta", 0))}


class NoCubicFit(ArithmeticError):
    pass


def fit_D_polynomial(op: DiffOperator, center) -> list[Poly]:
    """Write a degree-preserving operator as a polynomial in ``D - center``."""
    coeffs = to_D_poly(op)
    if coeffs is None:
        raise NoCubicFit("operator is not a polynomial in D")
    c = center if isinstance(center, Poly) else Poly([to_scalar(center)])
    return taylor_shift(coeffs, c)


def J0_polynomial_operator(coeffs: list[Poly], n: int, m: int) -> DiffOperator:
    J0 = J_op("0", n, m)
    out, power = DiffOperator(), DiffOperator.identity()
    for c in coeffs:
        out = out + power * c
        power = power @ J0
    return out


def fit_casimir_polynomial(n: int, m: int, a=None) -> AlgebraFitResult:
    comm = commutator(J_op("+", n, m, a), J_op("-", n, m, a))
    coeffs = fit_D_polynomial(comm, Fraction(m + n + 1, 2))
    if len(coeffs) > 4:
        raise NoCubicFit(f"[J+, J-] has degree {len(coeffs) - 1} in J0")
    residual = comm - J0_polynomial_operator(coeffs, n, m)
    return AlgebraFitResult(coeffs, residual)


def zero_on_space(op: DiffOperator, V: MonomialSpace) -> bool:
    return all(not image for _e, image in V.images(op))


def _report_on_V(name, residual: DiffOperator, V: MonomialSpace, **details) -> RelationReport:
    if residual.is_zero():
        return RelationReport(name, True, "algebra", residual, details)
    return RelationReport(name, zero_on_space(residual, V), "on V", residual, details)


def _require_equal(n, m, name):
    if n != m:
        raise DomainError(f"relation {name} is stated for n = m")


RELATIONS = (
    "J0_Jplus", "J0_Jminus", "nlalgebra",
    "QQ_nilpotent", "QbarQbar_nilpotent",
    "Q_Jminus", "Q_Jplus", "Qbar_Jminus", "Qbar_Jplus",
    "Q_D", "Qbar_D", "Q_D_shifted", "Qbar_D_shifted", "anticommutator_QQbar",
    "W_k_n_plus_1", "Wplus_Jplus", "Wplus_Jminus",
    "so3", "so3_tilde",
)


def verify_relation(name: str, n: int = 2, m: int = 2, a=None, lam=-1) -> RelationReport:
    V = MonomialSpace(n, m, a)
    ac = _a_coeff(a)
    if name == "J0_Jplus":
        res = commutator(J_op("0", n, m, a), J_op("+", n, m, a)) - J_op("+", n, m, a)
        return _report_on_V(name, res, V)
    if name == "J0_Jminus":
        res = commutator(J_op("0", n, m, a), J_op("-", n, m, a)) + J_op("-", n, m, a)
        return _report_on_V(name, res, V)
    if name == "nlalgebra":
        fit = fit_casimir_polynomial(n, m, a)
        return RelationReport(name, fit.residual.is_zero(), "algebra", fit.residual, fit.as_dict())
    if name in ("QQ_nilpotent", "QbarQbar_nilpotent"):
        make = Q_op if name == "QQ_nilpotent" else Qbar_op
        delta = abs(m - n)
        bad = []
        for al in range(delta + 1):
            for be in range(delta + 1):
                prod = compose(make(al, n, m, a), make(be, n, m, a))
                if not zero_on_space(prod, V):
                    bad.append([al, be])
        return RelationReport(name, not bad, "on V", None, {"failing_pairs": bad})
    if name in ("Q_Jminus", "Q_Jplus", "Qbar_Jminus", "Qbar_Jplus"):
        _require_equal(n, m, name)
        Q, Qb = Q_op(0, n, m, a), Qbar_op(0, n, m, a)
        if name == "Q_Jminus":
            res = commutator(Q, J_op("-", n, m, a)) - compose(j_op("-"), Q) * (ac * 2 - n - 1)
        elif name == "Q_Jplus":
            res = commutator(Q, J_op("+", n, m, a)) - compose(j_op("+", n), Q) * (ac * 2 + n + 1)
        elif name == "Qbar_Jminus":
            res = commutator(Qb, J_op("-", n, m, a)) + compose(k_op("-", n, a), Qb) * (ac * 2 + n + 1)
        else:
            res = commutator(Qb, J_op("+", n, m, a)) + compose(k_op("+", n, a), Qb) * (ac * 2 - n - 1)
        return _report_on_V(name, res, V)
    if name in ("Q_D", "Qbar_D", "Q_D_shifted", "Qbar_D_shifted"):
        _require_equal(n, m, name)
        barred = name.startswith("Qbar")
        Q = Qbar_op(0, n, m, a) if barred else Q_op(0, n, m, a)
        comm = commutator(Q, D())
        sgn = 1 if barred else -1
        if name.endswith("shifted"):
            # [Q, D] = (D + a) Q and [Qbar, D] = (D - a) Qbar
            rhs = compose(D() + const(ac * (-sgn)), Q)
        else:
            # [Q, D] = a Q and [Qbar, D] = -a Qbar
            rhs = Q * (ac * (-sgn))
        return _report_on_V(name, comm - rhs, V)
    if name == "anticommutator_QQbar":
        _require_equal(n, m, name)
        ac_op = anticommutator(Q_op(0, n, m, a), Qbar_op(0, n, m, a))
        coeffs = fit_D_polynomial(ac_op, Fraction(m + n + 1, 2))
        res = ac_op - J0_polynomial_operator(coeffs, n, m)
        return RelationReport(name, res.is_zero(), "algebra", res,
                              {"J0_coefficients": [c.format("a") for c in coeffs]})
    if name == "W_k_n_plus_1":
        k = n + 1
        wp = Wplus_op(n, m, k) - j_op("+", m + n + 1) ** (n + 1)
        wm = Wminus_op(n, m, k) - j_op("-") ** (n + 1)
        res = wp + wm
        return RelationReport(name, wp.is_zero() and wm.is_zero(), "algebra", res,
                              {"Wplus_residual": wp.term_list(), "Wminus_residual": wm.term_list()})
    if name in ("Wplus_Jplus", "Wplus_Jminus"):
        if n != 0:
            raise DomainError("these commutators are stated for k = 2, n = 0")
        W = Wplus_op(0, m, 2)
        if name == "Wplus_Jplus":
            comm = commutator(W, J_op("+", 0, m, 2))
            rhs = x(3) @ DiffOperator.D_shifted_product([m + 2, m + 1, m]) * -2
        else:
            comm = commutator(W, J_op("-", 0, m, 2))
            rhs = x() @ D() @ DiffOperator.D_shifted_product(
                [m + 2, Fraction(2, 3) * (m + 2)]) * -6
        res = comm - rhs
        return RelationReport(name, res.is_zero(), "algebra", res)
    if name in ("so3", "so3_tilde"):
        table = so3_structure(n, lam, tilde=(name == "so3_tilde"))
        ok = all(v is not None for v in table.values())
        antisym = ok and all(table[(i, j)] == (k, -c) for (j, i), (k, c) in table.items())
        details = {f"[{i},{j}]": (None if v is None else {"k": v[0], "c": str(v[1])})
                   for (i, j), v in table.items()}
        return RelationReport(name, ok and antisym, "algebra", None, details)
    raise DomainError(f"unknown relation {name!r}")


def so3_structure(n: int, lam=-1, tilde: bool = False) -> dict[tuple[int, int], tuple[int, Fraction] | None]:
    """``[S_i, S_j] = c S_k`` for ``i != j``; value ``(k, c)`` or None if no such c."""
    make = Stilde_op if tilde else S_op
    ops = {i: make(i, n, lam) for i in (1, 2, 3)}
    out = {}
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i == j:
                continue
            k = 6 - i - j
            comm = fop_commutator(ops[i], ops[j])
            out[(i, j)] = _proportionality(comm, ops[k])
            if out[(i, j)] is not None:
                out[(i, j)] = (k, out[(i, j)])
    return out


def _proportionality(A: FOperator, B: FOperator):
    """The constant c with A = c B, or None."""
    if B.is_zero():
        return None
    k = next(iter(B.coeffs))
    b = B.coeffs[k]
    a = A.coeffs.get(k)
    if a is None:
        return Fraction(0) if A.is_zero() else None
    for num, den in ((a.plain, b.plain), (a.fpart, b.fpart)):
        if not den.is_zero():
            ratio = num / den
            if not ratio.is_polynomial() or ratio.num.degree > 0:
                return None
            c = ratio.num.constant_value() if ratio.num else Fraction(0)
            return c if A == B * c else None
    return None


# ---------------------------------------------------------------------------
# Lame half-integer ansatz and reduced spaces

def lame_halfinteger_solution(n: int, k2) -> TwoComponentSpace:
    """Space of ``p_n + cn dn p_(n-1)`` in ``x = sn^2``, i.e. ``P_n + f P_(n-1)``
    with ``f^2 = (1-x)(1-k^2 x)``."""
    k2 = to_scalar(k2)
    if not 0 < k2 < 1:
        raise DomainError("need 0 < k^2 < 1")
    if n < 1:
        raise DomainError("need n >= 1")
    return TwoComponentSpace(n, n - 1, "sqrtP2", k2)


def reduced_space_exponents(kind: str, n: int, m: int, a: int) -> list[Fraction]:
    """Exponents spanning the reduced spaces after ``y = x^(a-1)`` or ``y = x^a``.

    ``kind='a-1'``: ``V^(1)(s=0, 1/(a-1))`` in ``y = x^(a-1)``;
    ``kind='a'``:   ``V^(1)(s=n, 1/a)`` in ``y = x^a``.
    """
    c = Fraction(a - 1) if kind == "a-1" else Fraction(a)
    nn = 0 if kind == "a-1" else n
    if c == 0:
        raise DomainError("the substitution power must be nonzero")
    V = MonomialSpace(nn, m, 1 / c)
    return sorted({e.offset * c for e in V.basis})


def reduced_space_operator(op: DiffOperator, kind: str, a: int) -> DiffOperator:
    """Carry an operator built with exponent ``1/c`` over to ``x`` via ``y = x^c``."""
    c = Fraction(a - 1) if kind == "a-1" else Fraction(a)
    return substitute_power(op.specialize_a(1 / c), c)


def verify_reduced_space(kind: str, n: int, m: int, a: int) -> bool:
    exps = reduced_space_exponents(kind, n, m, a)
    space = MonomialSpace.from_exponents([GenExponent(e) for e in exps])
    nn = 0 if kind == "a-1" else n
    for eps in ("+", "0", "-"):
        op = reduced_space_operator(J_op(eps, nn, m), kind, a)
        if not check_invariance(op, space).invariant:
            return False
    return True
