from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qespoly.exactnum import (MixedRadicandError, Poly, QuadExt, RationalFunction, adjugate,
                              as_rational, charpoly, count_real_roots, det, matmul, poly_gcd,
                              real_roots, root_values, solve_linear, squarefree_part)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(rationals, min_size=0, max_size=6).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
X = sp.Symbol("x")


def to_sympy(p: Poly):
    return sum((sp.Rational(c.numerator, c.denominator) * X ** i
                for i, c in enumerate(p.coeffs)), sp.Integer(0))


# --- rational parsing -------------------------------------------------------

@pytest.mark.parametrize("text, value", [("3", Fraction(3)), ("-3/4", Fraction(-3, 4)),
                                         (" +7/2 ", Fraction(7, 2)), ("0", Fraction(0))])
def test_as_rational_parses(text, value):
    assert as_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1/0", "abc", "1/-2", ""])
def test_as_rational_rejects(bad):
    with pytest.raises(ValueError):
        as_rational(bad)


def test_as_rational_refuses_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)


# --- quadratic extension ----------------------------------------------------

def test_quadext_collapses_perfect_squares():
    assert QuadExt.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert isinstance(QuadExt.sqrt(2), QuadExt)


def test_quadext_arithmetic_matches_sympy():
    a = QuadExt(1, 2, 3)
    b = QuadExt(Fraction(-1, 2), 1, 3)
    sa = 1 + 2 * sp.sqrt(3)
    sb = sp.Rational(-1, 2) + sp.sqrt(3)
    for got, want in ((a * b, sa * sb), (a / b, sa / sb), (a - b, sa - sb), (a ** 3, sa ** 3)):
        if isinstance(got, Fraction):
            got = QuadExt(got, 0, 3)
        got_sym = sp.Rational(got.rat.numerator, got.rat.denominator) \
            + sp.Rational(got.surd.numerator, got.surd.denominator) * sp.sqrt(3)
        assert sp.simplify(got_sym - want) == 0


def test_quadext_mixed_radicands_refused():
    with pytest.raises(MixedRadicandError):
        QuadExt(0, 1, 2) + QuadExt(0, 1, 3)


@given(rationals, rationals.filter(bool))
def test_quadext_inverse(r, s):
    q = QuadExt(r, s, 5)
    assert q * q.inverse() == 1


@given(rationals, rationals)
def test_quadext_sign_agrees_with_float(r, s):
    q = QuadExt.make(r, s, 2)
    val = float(q)
    if abs(val) > 1e-9:
        assert (q > 0) == (val > 0)


# --- polynomial ring axioms -------------------------------------------------

@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Poly()


@given(polys, nonzero_polys)
def test_divmod_identity(p, q):
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@given(polys, polys)
def test_product_matches_sympy(p, q):
    assert sp.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@given(polys, polys)
def test_compose_and_derivative(p, q):
    assert sp.expand(to_sympy(p.compose(q)) - to_sympy(p).subs(X, to_sympy(q))) == 0
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(nonzero_polys, nonzero_polys)
def test_gcd_divides_both(p, q):
    g = poly_gcd(p, q)
    assert (p % g).is_zero() and (q % g).is_zero()
    assert sp.Poly(to_sympy(g), X).monic() == sp.Poly(sp.gcd(to_sympy(p), to_sympy(q)), X).monic()


def test_squarefree_part():
    p = Poly.from_roots([1, 1, 2, Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)])
    assert squarefree_part(p).monic() == Poly.from_roots([1, 2, Fraction(1, 3)])


def test_format():
    assert Poly([1, 0, -2]).format("E") == "-2*E^2 + 1"


# --- Sturm counts and root isolation ----------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=7),
                min_size=1, max_size=5), st.lists(rationals, min_size=0, max_size=2))
def test_sturm_count_matches_known_roots(roots, extra):
    # multiply by (x^2 + c) with c > 0 to add non-real roots
    p = Poly.from_roots(roots)
    for c in extra:
        p = p * Poly([abs(c) + 1, 0, 1])
    distinct = sorted(set(roots))
    assert count_real_roots(p, Fraction(-11), Fraction(11)) == len(distinct)
    intervals = real_roots(p, Fraction(1, 2 ** 12))
    assert len(intervals) == len(distinct)
    for (lo, hi), r in zip(intervals, distinct):
        assert lo <= r <= hi and (lo < r or lo == hi)


def test_root_values_irrational():
    vals = root_values(Poly([-2, 0, 1]))
    assert vals == pytest.approx([-2 ** 0.5, 2 ** 0.5], abs=1e-14)


def test_root_isolation_on_surd_free_monic():
    p = Poly([QuadExt(0, 2, 2), QuadExt(0, 2, 2) * 0 + 0, QuadExt(0, 1, 2)])
    assert root_values(p) == []  # sqrt(2)(x^2 + 2) has no real root


# --- rational functions and linear algebra ----------------------------------

@given(polys, nonzero_polys, polys, nonzero_polys)
def test_rational_function_field_ops(a, b, c, d):
    f, g = RationalFunction(a, b), RationalFunction(c, d)
    assert f + g == g + f
    assert (f * g) * RationalFunction(d, Poly([1])) == f * RationalFunction(c)
    assert (f - f).is_zero()
    if not c.is_zero():
        assert (f / g) * g == f


def test_rational_function_laurent():
    f = RationalFunction(Poly([1, 0, 3]), Poly([0, 0, 2]))
    assert f.laurent() == {-2: Fraction(1, 2), 0: Fraction(3, 2)}


small_matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4),
                                min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_det_charpoly_adjugate_against_sympy(m):
    sm = sp.Matrix([[sp.Rational(e.numerator, e.denominator) for e in row] for row in m])
    d = det(m)
    assert sp.Rational(d.numerator, d.denominator) == sm.det()
    cp = charpoly(m)
    E = sp.Symbol("E")
    want = sm.charpoly(E).as_expr()
    assert sp.expand(to_sympy(cp).subs(X, E) - want) == 0
    adj = adjugate(m)
    prod = matmul(m, adj)
    assert all(prod[i][j] == (d if i == j else 0) for i in range(len(m)) for j in range(len(m)))


def test_det_of_poly_matrix():
    x = Poly.x()
    m = [[x, Poly([1])], [Poly([1]), x]]
    assert det(m) == Poly([-1, 0, 1])


def test_solve_linear():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    sol = solve_linear(a, [Fraction(3), Fraction(5)])
    assert sol == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(ZeroDivisionError):
        solve_linear([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [1, 1])
