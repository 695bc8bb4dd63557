"""Gauge conjugations and algebraic changes of variable.

A gauge factor ``g`` enters only through its logarithmic derivative
``l = g'/g``; conjugation uses ``g^{-1} o d o g = d + l``.  A change of
variable enters only through ``sigma(x) = (dx/dz)**2`` written in the new
variable, so that ``d^2/dz^2 = sigma d^2 + sigma'/2 d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import Poly, RationalFunction, inv, to_scalar
from .weylop import DiffOperator, GenExponent, MatrixOperator, compose


class NotPolynomializable(ValueError):
    """A conjugated operator kept a denominator other than a power of x."""


class InverseCheckFailed(ValueError):
    """The supplied inverse does not invert the transformation matrix."""


def multiplication(p) -> DiffOperator:
    """The multiplication operator by a polynomial (or Laurent) function."""
    if isinstance(p, RationalFunction):
        laurent = p.laurent()
        if laurent is None:
            raise NotPolynomializable(f"{p.format()} is not a Laurent polynomial")
        return DiffOperator([((GenExponent(e), 0), Poly([c])) for e, c in laurent.items()])
    if isinstance(p, Poly):
        return DiffOperator([((GenExponent(i), 0), Poly([c])) for i, c in enumerate(p.coeffs)])
    return DiffOperator.const(p)


@dataclass(frozen=True)
class VariableChange:
    """Change of independent variable described by ``sigma = (dx/dz)^2``."""

    sigma: Poly

    def __post_init__(self):
        if self.sigma.is_zero():
            raise ValueError("sigma must be nonzero")


@dataclass(frozen=True)
class GaugeFactor:
    """A factor ``g(x)`` known only through ``l = g'/g``."""

    log_derivative: RationalFunction

    @classmethod
    def from_laurent(cls, coeffs: dict) -> "GaugeFactor":
        """Build ``l = sum c_e x^e`` from a dict of integer exponents."""
        lo = min(list(coeffs) + [0])
        num = [Fraction(0)] * (max(list(coeffs) + [0]) - lo + 1)
        for e, c in coeffs.items():
            num[e - lo] = to_scalar(c)
        return cls(RationalFunction(Poly(num), Poly.monomial(-lo)))

    def inverse(self) -> "GaugeFactor":
        return GaugeFactor(-self.log_derivative)


def pullback_second_derivative(change: VariableChange) -> DiffOperator:
    sigma = change.sigma
    return (multiplication(sigma) @ DiffOperator.d(2)
            + multiplication(sigma.derivative() * Fraction(1, 2)) @ DiffOperator.d())


def _shifted_derivative_powers(ell: RationalFunction, kmax: int) -> list[dict[int, RationalFunction]]:
    """``(d + l)^k`` for ``k = 0..kmax`` as ``{order: coefficient}`` dicts."""
    powers = [{0: RationalFunction(1)}]
    for _ in range(kmax):
        prev = powers[-1]
        nxt: dict[int, RationalFunction] = {}
        for j, r in prev.items():
            for order, val in ((j, r.derivative() + ell * r), (j + 1, r)):
                nxt[order] = nxt.get(order, RationalFunction(0)) + val
        powers.append({j: r for j, r in nxt.items() if r})
    return powers


def conjugate_scalar(A: DiffOperator, g: GaugeFactor) -> DiffOperator:
    """``g^{-1} o A o g``.

    Terms whose exponents differ by integers are collected before the
    denominator test, so cancellations between them are honoured.
    """
    ell = g.log_derivative
    powers = _shifted_derivative_powers(ell, max(A.order(), 0))
    # key: (a_count, fractional offset, derivative order, power of a)
    buckets: dict[tuple, RationalFunction] = {}
    for (p, k), c in A.terms.items():
        base = p.offset - (p.offset.numerator // p.offset.denominator)
        shift = int(p.offset - base)
        xs = RationalFunction(Poly.monomial(shift)) if shift >= 0 else \
            RationalFunction(1, Poly.monomial(-shift))
        for j, r in powers[k].items():
            term = xs * r
            for adeg, ac in enumerate(c.coeffs):
                if ac == 0:
                    continue
                key = (p.a_count, base, j, adeg)
                buckets[key] = buckets.get(key, RationalFunction(0)) + term * ac
    out = []
    for (t, base, j, adeg), r in buckets.items():
        laurent = r.laurent()
        if laurent is None:
            raise NotPolynomializable(
                f"coefficient {r.format()} of d^{j} does not reduce to powers of x")
        for e, c in laurent.items():
            out.append(((GenExponent(base + e, t), j), Poly.monomial(adeg, c)))
    return DiffOperator(out)


def substitute_power(op: DiffOperator, c) -> DiffOperator:
    """Rewrite an operator in ``y`` through ``y = x**c``.

    ``y^q -> x^(c q)`` and ``d/dy = (1/c) x^(1-c) d/dx``.  Formal exponents
    are allowed only for integer ``c``.
    """
    c = Fraction(c)
    if c == 0:
        raise ValueError("exponent of the substitution must be nonzero")
    dy = DiffOperator({(GenExponent(1 - c), 1): Poly([1 / c])})
    cache = [DiffOperator.identity()]
    out = DiffOperator()
    for (p, k), coef in op.terms.items():
        if p.a_count and c.denominator != 1:
            raise ValueError("formal exponents need an integer substitution power")
        while len(cache) <= k:
            cache.append(compose(cache[-1], dy))
        mult = DiffOperator({(GenExponent(c * p.offset, int(c * p.a_count)), 0): coef})
        out = out + compose(mult, cache[k])
    return out


def affine_substitute(op: DiffOperator, scale, shift) -> DiffOperator:
    """Rewrite an operator in ``x`` through ``x = scale*u + shift``.

    All exponents must be non-negative integers; the result acts in ``u``.
    """
    scale, shift = to_scalar(scale), to_scalar(shift)
    if scale == 0:
        raise ValueError("affine scale must be nonzero")
    lin = Poly([shift, scale])
    out = DiffOperator()
    for (p, k), coef in op.terms.items():
        if p.a_count or p.offset.denominator != 1 or p.offset < 0:
            raise ValueError("affine substitution needs polynomial coefficients")
        img = lin ** int(p.offset)
        factor = inv(scale) ** k
        out = out + multiplication(img) @ DiffOperator.d(k) * (coef * factor)
    return out


def conjugate_matrix(A: MatrixOperator, P: MatrixOperator, Pinv: MatrixOperator) -> MatrixOperator:
    """``Pinv o A o P`` after checking that ``P o Pinv`` is the identity."""
    if P @ Pinv != MatrixOperator.identity() or Pinv @ P != MatrixOperator.identity():
        raise InverseCheckFailed("P o Pinv is not the identity")
    return Pinv @ A @ P


def conjugate_matrix_by_scalar_gauge(A: MatrixOperator, g: GaugeFactor) -> MatrixOperator:
    return A.map_entries(lambda e: conjugate_scalar(e, g))


def is_polynomial_operator(op: DiffOperator) -> bool:
    """Coefficients are polynomials in x (no negative, fractional or formal powers)."""
    return all(p.a_count == 0 and p.offset.denominator == 1 and p.offset >= 0
               for (p, _k) in op.terms)

