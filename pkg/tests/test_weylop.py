from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qespoly.exactnum import Poly
from qespoly.weylop import (A_VAR, DiffOperator, GenExponent, MatrixOperator, anticommutator,
                            commutator, compose, matrix_commutator, power_conjugate,
                            taylor_shift, to_D_poly)

x_s, a_s, s_s = sp.symbols("x a s")
small = st.fractions(min_value=-4, max_value=4, max_denominator=3)
coeff_in_a = st.lists(small, min_size=1, max_size=2).map(Poly)
term = st.tuples(st.integers(-2, 3), st.integers(0, 1), st.integers(0, 3), coeff_in_a)
operators = st.lists(term, min_size=0, max_size=4).map(
    lambda ts: DiffOperator([((GenExponent(q, t), k), c) for q, t, k, c in ts]))


def poly_a(c: Poly):
    return sum((sp.Rational(v.numerator, v.denominator) * a_s ** i
                for i, v in enumerate(c.coeffs)), sp.Integer(0))


def apply_sympy(op: DiffOperator, f):
    out = sp.Integer(0)
    for (p, k), c in op.terms.items():
        out += poly_a(c) * x_s ** (sp.Rational(p.offset.numerator, p.offset.denominator)
                                   + p.a_count * a_s) * sp.diff(f, x_s, k)
    return out


SAMPLE_POINTS = [{x_s: sp.Rational(3, 2), a_s: sp.Rational(2, 7), s_s: sp.Rational(3, 5)},
                 {x_s: sp.Rational(7, 3), a_s: sp.Rational(-5, 3), s_s: sp.Rational(11, 4)},
                 {x_s: sp.Rational(5, 9), a_s: sp.Rational(9, 4), s_s: sp.Rational(-2, 3)}]


def same_function(f, g):
    """Equal values at generic points, evaluated to 40 digits."""
    for pt in SAMPLE_POINTS:
        u, v = sp.N(f.subs(pt), 40), sp.N(g.subs(pt), 40)
        if abs(u - v) > sp.Float("1e-30", 40) * max(1, abs(u)):
            return False
    return True


@settings(max_examples=25, deadline=None)
@given(operators, operators)
def test_compose_matches_direct_application(A, B):
    f = x_s ** s_s
    assert same_function(apply_sympy(compose(A, B), f), apply_sympy(A, apply_sympy(B, f)))


@settings(max_examples=40, deadline=None)
@given(operators, operators, operators)
def test_compose_associative_and_distributive(A, B, C):
    assert compose(compose(A, B), C) == compose(A, compose(B, C))
    assert compose(A, B + C) == compose(A, B) + compose(A, C)


@settings(max_examples=40, deadline=None)
@given(operators, operators, operators)
def test_jacobi_identity(A, B, C):
    total = (commutator(A, commutator(B, C)) + commutator(B, commutator(C, A))
             + commutator(C, commutator(A, B)))
    assert total.is_zero()


@given(operators, operators)
def test_anticommutator_symmetric(A, B):
    assert anticommutator(A, B) == anticommutator(B, A)
    assert (commutator(A, B) + commutator(B, A)).is_zero()


def test_leibniz_basic():
    d, x = DiffOperator.d(), DiffOperator.x()
    assert commutator(d, x) == DiffOperator.identity()
    # d^2 x^2 = x^2 d^2 + 4 x d + 2
    lhs = compose(DiffOperator.d(2), DiffOperator.x(2))
    rhs = DiffOperator([((2, 2), 1), ((1, 1), 4), ((0, 0), 2)])
    assert lhs == rhs


def test_formal_exponent_leibniz():
    # d x^a = x^a d + a x^(a-1)
    xa = DiffOperator.x(0, 1)
    got = compose(DiffOperator.d(), xa)
    want = DiffOperator([((GenExponent(0, 1), 1), 1), ((GenExponent(-1, 1), 0), A_VAR)])
    assert got == want


@settings(max_examples=30, deadline=None)
@given(operators, st.integers(-3, 3))
def test_apply_to_monomial_matches_sympy(A, e):
    img = A.apply_to_monomial(GenExponent(e, 1))
    total = sum((poly_a(c) * x_s ** (p.offset + p.a_count * a_s) for p, c in img), sp.Integer(0))
    assert same_function(total, apply_sympy(A, x_s ** (e + a_s)))


def test_power_conjugate_of_d():
    # x^s d x^-s = d - s/x
    s = GenExponent(Fraction(1, 2))
    got = power_conjugate(DiffOperator.d(), s)
    assert got == DiffOperator([((0, 1), 1), ((-1, 0), Fraction(-1, 2))])


def test_D_polynomial_round_trip():
    op = DiffOperator.D_shifted_product([1, 2, A_VAR])
    coeffs = to_D_poly(op)
    assert DiffOperator.from_D_poly(coeffs) == op
    assert to_D_poly(DiffOperator.d()) is None


def test_taylor_shift():
    # p(y) = y^2, shifted by 1 gives y^2 + 2y + 1
    out = taylor_shift([Poly(), Poly(), Poly([1])], Poly([1]))
    assert out == [Poly([1]), Poly([2]), Poly([1])]


def test_specialize_a():
    op = DiffOperator.x(0, 1) @ DiffOperator.d() * A_VAR
    got = op.specialize_a(Fraction(7, 3))
    assert got == DiffOperator([((Fraction(7, 3), 1), Fraction(7, 3))])


def test_negative_order_refused():
    with pytest.raises(ValueError):
        DiffOperator([((0, -1), 1)])


def test_matrix_operator_commutator_and_identity():
    d, x = DiffOperator.d(), DiffOperator.x()
    A = MatrixOperator([[d, x], [DiffOperator.zero(), d]])
    B = MatrixOperator.diag(x, x)
    comm = matrix_commutator(A, B)
    one = DiffOperator.identity()
    assert comm == MatrixOperator([[one, DiffOperator.zero()], [DiffOperator.zero(), one]])
    assert (A @ MatrixOperator.identity()) == A
