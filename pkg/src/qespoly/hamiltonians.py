"""The three physical systems in physical and algebraic form.

* sextic 2x2 polynomial potential on the line (variable y, then x = y^2);
* coupled Lame system on the period cell (variable z, then x = sn^2 z);
* Bose-Hubbard cosh potential (variable x, then z = cosh(alpha x) - 1).

Every algebraic form is produced by running the gauge / variable / matrix
conjugation pipeline from :mod:`qespoly.transforms`; printed closed forms
are built separately so the two can be compared term by term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .catalog import j_op
from .exactnum import Poly, QuadExt, RationalFunction, Scalar, as_rational, to_scalar
from .spaces import FRing, TwoComponentSpace
from .transforms import (GaugeFactor, VariableChange, affine_substitute, conjugate_matrix,
                         conjugate_scalar, multiplication, pullback_second_derivative,
                         substitute_power)
from .weylop import DiffOperator, GenExponent, MatrixOperator, power_conjugate

D = DiffOperator.D
d = DiffOperator.d
xop = DiffOperator.x
const = DiffOperator.const


class ParameterError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sextic polynomial potential

@dataclass(frozen=True)
class PolyPotParams:
    m: int
    p2: Fraction = Fraction(1)
    p1: Fraction = Fraction(0)
    kappa0: Fraction = Fraction(1, 2)
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("p2", "p1", "kappa0", "epsilon"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.p2 <= 0:
            raise ParameterError("p2 must be positive")
        if self.m < 0:
            raise ParameterError("m must be non-negative")


def polypot_scalar_part(p: PolyPotParams) -> Poly:
    """Coefficient of the identity in M6 as a polynomial in y (without the 1/y^2 term)."""
    p2, p1, m, eps = p.p2, p.p1, p.m, p.epsilon
    return Poly([0, 0, 4 * p1 * p1 - 8 * m * p2 + 2 * (1 - 2 * eps) * p2, 0,
                 8 * p1 * p2, 0, 4 * p2 * p2])


def polypot_physical(p: PolyPotParams) -> MatrixOperator:
    """``H(y) = -d^2 + M6(y)`` (plus ``eps(eps-1)/y^2`` when eps != 0)."""
    s = multiplication(polypot_scalar_part(p))
    if p.epsilon:
        s = s + DiffOperator.x(-2, coeff=p.epsilon * (p.epsilon - 1))
    sig3 = multiplication(Poly([4 * p.p1, 0, 8 * p.p2]))
    off = const(-8 * p.m * p.p2 * p.kappa0)
    kin = -d(2)
    return MatrixOperator([[kin + s + sig3, off], [off, kin + s - sig3]])


def polypot_gauge(p: PolyPotParams) -> GaugeFactor:
    """``phi = y^eps exp(-(p2/2) y^4 - p1 y^2)``."""
    return GaugeFactor.from_laurent({-1: p.epsilon, 1: -2 * p.p1, 3: -2 * p.p2})


def polypot_P(p: PolyPotParams) -> tuple[MatrixOperator, MatrixOperator]:
    """``P = 1 + kappa0 d sigma_+`` and its inverse (sigma_+ is nilpotent)."""
    k = p.kappa0
    one, zero = DiffOperator.identity(), DiffOperator()
    P = MatrixOperator([[one, d() * k], [zero, one]])
    Pinv = MatrixOperator([[one, d() * (-k)], [zero, one]])
    return P, Pinv


@dataclass
class PipelineResult:
    physical: MatrixOperator
    gauged: MatrixOperator        # after phi-conjugation, in y
    hat: MatrixOperator           # after x = y^2
    tilde: MatrixOperator         # after P-conjugation
    space: TwoComponentSpace


def build_polypot_pipeline(p: PolyPotParams) -> PipelineResult:
    if p.m < 2:
        raise ParameterError("the sextic system needs m >= 2")
    H = polypot_physical(p)
    g = polypot_gauge(p)
    gauged = H.map_entries(lambda e: conjugate_scalar(e, g))
    hat = gauged.map_entries(lambda e: substitute_power(e, Fraction(1, 2)))
    P, Pinv = polypot_P(p)
    tilde = conjugate_matrix(hat, P, Pinv)
    return PipelineResult(H, gauged, hat, tilde, TwoComponentSpace(p.m - 2, p.m))


def build_polypot_algebraic(p: PolyPotParams) -> tuple[MatrixOperator, TwoComponentSpace]:
    res = build_polypot_pipeline(p)
    return res.tilde, res.space


def polypot_closed_form(p: PolyPotParams, kappa=None) -> MatrixOperator:
    """The closed form of the algebraic sextic operator (eps = p1 = 0).

    ``kappa`` is the constant appearing in the ``sigma_+ d^2`` term; by
    default it is ``kappa0``.
    """
    p2, m, k0 = p.p2, p.m, p.kappa0
    kappa = k0 if kappa is None else to_scalar(kappa)
    kin = -(xop() @ d(2) * 4 + d() * 2)
    s3 = d() * (8 * p2 * m * k0 * k0)
    return MatrixOperator([
        [kin + s3 + j_op("+", m - 2) * (8 * p2), d(2) * (4 * k0 * (1 + 2 * m * p2 * kappa * kappa))],
        [const(-8 * m * p2 * k0), kin - s3 + j_op("+", m) * (8 * p2)],
    ])


# ---------------------------------------------------------------------------
# coupled Lame system

@dataclass(frozen=True)
class LameParams:
    m: int
    delta: Fraction
    k2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", as_rational(self.delta))
        object.__setattr__(self, "k2", as_rational(self.k2))
        if self.m < 0:
            raise ParameterError("m must be non-negative")
        if not 0 < self.k2 < 1:
            raise ParameterError("need 0 < k^2 < 1")
        if (4 * self.m + 3) ** 2 <= self.delta ** 2:
            raise ParameterError("need (4m+3)^2 > delta^2")

    @property
    def A(self) -> Fraction:
        return 4 * self.m ** 2 + 6 * self.m + 3 - self.delta

    @property
    def C(self) -> Fraction:
        return 4 * self.m ** 2 + 6 * self.m + 3 + self.delta

    @property
    def R(self) -> Fraction:
        return (4 * self.m + 3 - self.delta) / (4 * self.m + 3 + self.delta)

    @property
    def kappa(self) -> Scalar:
        """``kappa = k sqrt(R)`` in Q(sqrt(k^2 R))."""
        return QuadExt.sqrt(self.k2 * self.R)

    @property
    def theta_sq(self) -> Fraction:
        return ((4 * self.m + 3) ** 2 - self.delta ** 2) / 4

    @property
    def two_theta_k(self) -> Scalar:
        """``2 theta k``, which equals ``(4m+3+delta) kappa`` exactly."""
        return (4 * self.m + 3 + self.delta) * self.kappa

    def F(self) -> Poly:
        """``cn^2 dn^2 = (1-x)(1-k^2 x)`` in ``x = sn^2``."""
        return Poly([1, -1]) * Poly([1, -self.k2])


def lame_kinetic(p: LameParams) -> DiffOperator:
    """``-d^2/dz^2`` pulled back to ``x = sn^2``."""
    sigma = Poly([0, 4]) * p.F()
    return -pullback_second_derivative(VariableChange(sigma))


@dataclass
class LamePipeline:
    kinetic: DiffOperator
    ring: FRing
    gauged: MatrixOperator      # after diag(1, cn dn)
    tilde: MatrixOperator       # after the (1, kappa x; 0, 1) conjugation
    space: TwoComponentSpace


def build_lame_pipeline(p: LameParams) -> LamePipeline:
    T = lame_kinetic(p)
    F = p.F()
    ring = FRing(F)
    k2, delta = p.k2, p.delta
    V11 = multiplication(Poly([delta * (1 + k2) / 2, p.A * k2]))
    V22 = multiplication(Poly([-delta * (1 + k2) / 2, p.C * k2]))
    coupling = ring.element(0, p.two_theta_k)        # 2 theta k cn dn
    f = ring.f()
    f_inv = ring.element(0, RationalFunction(1, F))  # f / F
    # G^{-1} H G with G = diag(1, f)
    e12 = coupling * f
    e21 = f_inv * coupling
    for e in (e12, e21):
        if not e.fpart.is_zero() or not e.plain.is_polynomial():
            raise ArithmeticError("off-diagonal entries left the polynomial sector")
    g22 = GaugeFactor(RationalFunction(F.derivative() * Fraction(1, 2), F))
    gauged = MatrixOperator([
        [T + V11, multiplication(e12.plain)],
        [multiplication(e21.plain), conjugate_scalar(T + V22, g22)],
    ])
    kap = p.kappa
    one, zero = DiffOperator.identity(), DiffOperator()
    U = MatrixOperator([[one, xop() * kap], [zero, one]])
    Uinv = MatrixOperator([[one, xop() * (-kap)], [zero, one]])
    tilde = conjugate_matrix(gauged, U, Uinv)
    return LamePipeline(T, ring, gauged, tilde, TwoComponentSpace(p.m, p.m))


def build_lame_algebraic(p: LameParams) -> tuple[MatrixOperator, TwoComponentSpace]:
    res = build_lame_pipeline(p)
    return res.tilde, res.space


def lame_closed_form(p: LameParams) -> MatrixOperator:
    """The four closed-form entries of the algebraic Lame operator."""
    m, k2, delta, kap = p.m, p.k2, p.delta, p.kappa
    Dm = D() - const(m)
    half = Fraction(1, 2)
    tail = -((const(1) + D() * 2) @ d() * 2)
    h11 = (xop() @ (D() + const(m + half)) @ Dm * (-4 * k2)
           + (D() @ D() * 4 + const(delta / 2)) * (k2 + 1) + tail)
    h12 = (xop() @ Dm * (4 * (k2 + 1)) + (D() * (-8) + const(delta + 4 * m + 1))) * kap
    h21 = const(kap * (delta + 4 * m + 3))
    h22 = (xop() @ (D() + const(m + 5 * half)) @ Dm * (-4 * k2)
           + (D() @ D() * 4 + D() * 2 + const(1 - delta / 2)) * (k2 + 1) + tail)
    return MatrixOperator([[h11, h12], [h21, h22]])


# ---------------------------------------------------------------------------
# Bose-Hubbard model

@dataclass(frozen=True)
class BoseHubbardParams:
    alpha: Fraction
    M: Fraction
    s: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        object.__setattr__(self, "M", as_rational(self.M))
        object.__setattr__(self, "s", as_rational(self.s))
        if self.alpha <= 0:
            raise ParameterError("alpha must be positive")
        if 2 * self.s * self.s != self.s:
            raise ParameterError("s must solve 2 s^2 = s")

    @classmethod
    def from_boson_number(cls, alpha, n: int, s=0) -> "BoseHubbardParams":
        alpha = as_rational(alpha)
        return cls(alpha, Fraction(n + 1) * alpha / 2, as_rational(s))

    @property
    def L(self) -> Fraction:
        """``2M/alpha - 1``: integer values give polynomial solutions."""
        return 2 * self.M / self.alpha - 1

    @property
    def M_tilde_printed(self) -> Fraction:
        """``(2 alpha M - 1)/alpha^2``; coincides with ``L`` at alpha = 1."""
        return (2 * self.alpha * self.M - 1) / self.alpha ** 2

    @property
    def boson_number(self) -> Fraction:
        return self.L

    @property
    def E0(self) -> Fraction:
        """Shift between the two energy scales, ``E = E1 + E0``."""
        n = self.boson_number
        return self.M ** 2 + 1 / self.alpha ** 2 + self.alpha ** 2 * (n / 2) * (n / 2 - 1)

    @property
    def E0_printed(self) -> Fraction:
        n = self.boson_number
        return (n + 1) ** 2 * self.alpha ** 2 / 4 + 1 / self.alpha ** 2 + self.alpha / 4 * n * (n - 2)


def bh_sigma(p: BoseHubbardParams) -> Poly:
    """``(dz/dx)^2 = alpha^2 z (z + 2)`` for ``z = cosh(alpha x) - 1``."""
    return Poly([0, 2, 1]) * (p.alpha ** 2)


def bh_potential_z(p: BoseHubbardParams) -> Poly:
    """``(cosh(alpha x)/alpha - M)^2`` with ``cosh = z + 1``."""
    lin = Poly([1 / p.alpha - p.M, 1 / p.alpha])
    return lin * lin


def bh_physical_z(p: BoseHubbardParams) -> DiffOperator:
    return -pullback_second_derivative(VariableChange(bh_sigma(p))) + multiplication(bh_potential_z(p))


def bh_gauge(p: BoseHubbardParams) -> GaugeFactor:
    """``exp(-cosh(alpha x)/alpha^2) = exp(-(z+1)/alpha^2)``."""
    return GaugeFactor.from_laurent({0: -1 / p.alpha ** 2})


@dataclass
class BoseHubbardReduced:
    params: BoseHubbardParams
    hat: DiffOperator          # exp(+..) H exp(-..) in z; eigen-operator with value E

    def eigen_form(self) -> DiffOperator:
        """The operator ``L`` with ``(L + E) phi = 0``."""
        return -self.hat

    def indicial(self) -> Poly:
        """Lowest-order coefficient of ``hat`` acting on ``z^s`` as a polynomial in s."""
        img = self.hat.apply_to_monomial(GenExponent(0, 1))
        lowest = min(e for e, _c in img)
        return dict(img)[lowest]

    def f_form(self, s=None) -> DiffOperator:
        """``z^-s hat z^s`` (the operator acting on f)."""
        s = self.params.s if s is None else to_scalar(s)
        return power_conjugate(self.hat, GenExponent(-s))

    def t_form(self, s=None) -> DiffOperator:
        """``f``-operator rewritten in ``t = (z + 2)/2``."""
        return affine_substitute(self.f_form(s), 2, -2)


def build_bosehubbard_reduced(p: BoseHubbardParams) -> BoseHubbardReduced:
    hat = conjugate_scalar(bh_physical_z(p), bh_gauge(p))
    return BoseHubbardReduced(p, hat)


def bh_reduced_printed(p: BoseHubbardParams) -> DiffOperator:
    """The reduced operator with the cosh coefficient written as 2M/alpha - 1/alpha^2."""
    a2 = p.alpha ** 2
    c = 2 * p.M / p.alpha - 1 / a2
    return (multiplication(Poly([0, 2 * a2, a2])) @ d(2)
            + multiplication(Poly([a2, a2 - 4, -2])) @ d()
            + multiplication(Poly([-1 / a2 - p.M ** 2 + c, c])))


def bh_w_form_printed(p: BoseHubbardParams) -> DiffOperator:
    """The f-form written with W = z + 2 (without the E term)."""
    a2, s = p.alpha ** 2, p.s
    W = Poly([2, 1])
    c2 = (W * W - W * 2) * a2
    c1 = -(W * W) + W * (a2 * (2 * s + 1) + 2) - a2
    c0 = Poly([-p.M ** 2 + a2 * s * s - 2 * p.M / p.alpha]) + W * (2 * p.M / p.alpha - 1 / a2)
    return multiplication(c2) @ d(2) + multiplication(c1) @ d() + multiplication(c0)
