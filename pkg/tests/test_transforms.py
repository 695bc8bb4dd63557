from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qespoly.exactnum import Poly, RationalFunction
from qespoly.transforms import (GaugeFactor, InverseCheckFailed, NotPolynomializable,
                                VariableChange, affine_substitute, conjugate_matrix,
                                conjugate_scalar, is_polynomial_operator, multiplication,
                                pullback_second_derivative, substitute_power)
from qespoly.weylop import DiffOperator, GenExponent, MatrixOperator

x_s, z_s, s_s = sp.symbols("x z s", positive=True)
d, x = DiffOperator.d, DiffOperator.x


def rat(q):
    q = Fraction(q)
    return sp.Rational(q.numerator, q.denominator)


def apply_sympy(op: DiffOperator, f, var=x_s):
    out = sp.Integer(0)
    for (p, k), c in op.terms.items():
        assert p.a_count == 0
        out += rat(c.coeffs[0]) * var ** rat(p.offset) * sp.diff(f, var, k)
    return out


def numerically_equal(f, g, points):
    for pt in points:
        u, v = sp.N(f.subs(pt), 40), sp.N(g.subs(pt), 40)
        if abs(u - v) > sp.Float("1e-28", 40) * max(1, abs(u)):
            return False
    return True


POINTS = [{x_s: sp.Rational(3, 2), s_s: sp.Rational(2, 5)},
          {x_s: sp.Rational(4, 7), s_s: sp.Rational(-7, 3)}]

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)
gauges = st.dictionaries(st.integers(-2, 2), small, max_size=3)
operators = st.lists(st.tuples(st.integers(-1, 3), st.integers(0, 2), small), max_size=3).map(
    lambda ts: DiffOperator([((GenExponent(q), k), Poly([c])) for q, k, c in ts]))


def test_harmonic_oscillator_ground_state_gauge():
    # exp(x^2/2) (-d^2 + x^2) exp(-x^2/2) = -d^2 + 2 x d + 1
    H = -d(2) + x(2)
    got = conjugate_scalar(H, GaugeFactor.from_laurent({1: -1}))
    assert got == -d(2) + x() @ d() * 2 + DiffOperator.const(1)


@settings(max_examples=25, deadline=None)
@given(operators, gauges)
def test_conjugate_scalar_matches_sympy(A, lcoeffs):
    # g = exp(integral of l); test g^{-1} A (g x^s) against the conjugated operator on x^s
    g = GaugeFactor.from_laurent(lcoeffs)
    try:
        B = conjugate_scalar(A, g)
    except NotPolynomializable:
        return
    ell = sum((rat(c) * x_s ** e for e, c in lcoeffs.items()), sp.Integer(0))
    G = sp.exp(sp.integrate(ell, x_s))
    f = x_s ** s_s
    assert numerically_equal(apply_sympy(A, G * f) / G, apply_sympy(B, f), POINTS)


@settings(max_examples=25, deadline=None)
@given(operators, gauges)
def test_conjugation_round_trip(A, lcoeffs):
    g = GaugeFactor.from_laurent(lcoeffs)
    try:
        B = conjugate_scalar(A, g)
    except NotPolynomializable:
        return
    assert conjugate_scalar(B, g.inverse()) == A


def test_non_laurent_gauge_is_reported():
    g = GaugeFactor(RationalFunction(Poly([1]), Poly([1, 1])))  # l = 1/(1+x)
    with pytest.raises(NotPolynomializable):
        conjugate_scalar(d(2), g)


def test_pullback_for_square_root_variable():
    # x = z^2: (dx/dz)^2 = 4 z^2 = 4 x, so d^2/dz^2 = 4x d^2 + 2 d
    op = pullback_second_derivative(VariableChange(Poly([0, 4])))
    f = sp.Function("f")
    lhs = sp.diff(f(z_s ** 2), z_s, 2)
    rhs = apply_sympy(op, f(x_s)).subs(x_s, z_s ** 2)
    assert sp.simplify(lhs - rhs.doit()) == 0


def test_pullback_for_jacobi_sn_squared():
    # x = sn^2(z): (dx/dz)^2 = 4 x (1 - x)(1 - k^2 x)
    k2 = Fraction(1, 3)
    sigma = Poly([0, 4]) * Poly([1, -1]) * Poly([1, -k2])
    op = pullback_second_derivative(VariableChange(sigma))
    assert op.coefficient(2, 2) == Poly([-4 * (1 + k2)])
    assert op.coefficient(0, 1) == Poly([2])
    assert op.coefficient(1, 1) == Poly([-4 * (1 + k2)])
    assert op.coefficient(2, 1) == Poly([6 * k2])


@pytest.mark.parametrize("c", [2, 3, Fraction(1, 2), -1])
def test_substitute_power_matches_chain_rule(c):
    # an operator in y applied to y^s, compared with the rewritten operator on x^(c s)
    op = DiffOperator.term(1, 2, 2) + DiffOperator.term(3, 0, 1) + DiffOperator.term(-2, 1, 0)
    sub = substitute_power(op, c)
    y = sp.Symbol("y", positive=True)
    lhs = apply_sympy(op, y ** s_s, var=y).subs(y, x_s ** rat(c))
    rhs = apply_sympy(sub, x_s ** (rat(c) * s_s))
    assert numerically_equal(lhs, rhs, POINTS)


def test_affine_substitute():
    op = x(2) @ d(2) + d()
    sub = affine_substitute(op, 2, 1)  # x = 2u + 1
    u = sp.Symbol("u")
    f = sp.Function("f")
    lhs = apply_sympy(op, f(x_s)).subs(x_s, 2 * u + 1).doit()
    rhs = apply_sympy(sub, f(2 * u + 1), var=u).doit()
    assert sp.simplify(lhs - rhs) == 0


def test_multiplication_by_laurent():
    m = multiplication(RationalFunction(Poly([1, 0, 1]), Poly([0, 1])))
    assert m == x(-1) + x(1)
    with pytest.raises(NotPolynomializable):
        multiplication(RationalFunction(Poly([1]), Poly([1, 1])))


def test_conjugate_matrix_checks_inverse():
    one, zero = DiffOperator.identity(), DiffOperator.zero()
    P = MatrixOperator([[one, x()], [zero, one]])
    Pinv = MatrixOperator([[one, -x()], [zero, one]])
    A = MatrixOperator.diag(d(), d())
    got = conjugate_matrix(A, P, Pinv)
    # Pinv diag(d, d) P = [[d, d x - x d], [0, d]] = [[d, 1], [0, d]]
    assert got == MatrixOperator([[d(), one], [zero, d()]])
    with pytest.raises(InverseCheckFailed):
        conjugate_matrix(A, P, P)


def test_is_polynomial_operator():
    assert is_polynomial_operator(x(2) @ d())
    assert not is_polynomial_operator(x(-1) @ d())
    assert not is_polynomial_operator(DiffOperator.x(0, 1))
