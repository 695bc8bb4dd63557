from fractions import Fraction

import pytest

from qespoly.catalog import (FAMILIES, RELATIONS, CatalogSpec, DomainError, J_op, Kprime_op, K_op,
                             Q_op, Qbar_op, S_op, Stilde_op, Wminus_op, Wplus_op, build,
                             declared_space, family_specs, fit_casimir_polynomial, j_op,
                             kernel_product, k_op, lame_halfinteger_solution, so3_structure,
                             verify_reduced_space, verify_relation)
from qespoly.exactnum import Poly, RationalFunction, matmul
from qespoly.spaces import MonomialSpace, check_invariance, restrict
from qespoly.transforms import GaugeFactor, conjugate_scalar
from qespoly.weylop import DiffOperator, GenExponent, commutator

d, x, D = DiffOperator.d, DiffOperator.x, DiffOperator.D


def test_j_minus_is_d():
    assert build(CatalogSpec("j", 3, eps="-")) == d()


def test_j_plus_and_j0():
    n = 4
    assert j_op("+", n) == x(2) @ d() - x() * n
    assert j_op("0", n) == x() @ d() - DiffOperator.const(Fraction(n, 2))


@pytest.mark.parametrize("a", [Fraction(7, 3), Fraction(-1, 2), 3])
@pytest.mark.parametrize("eps", "+0-")
def test_k_a_is_power_conjugate(a, eps):
    # x^a j x^-a equals conjugation by the gauge factor x^-a, whose log derivative is -a/x
    g = GaugeFactor(RationalFunction(Poly([-a]), Poly([0, 1])))
    assert k_op(eps, 2, a) == conjugate_scalar(j_op(eps, 2), g)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_Wminus_for_k_equal_n_plus_1(n):
    m = 2 * n + 1
    assert Wminus_op(n, m, n + 1) == j_op("-") ** (n + 1)
    assert Wplus_op(n, m, n + 1) == j_op("+", m + n + 1) ** (n + 1)


def test_W_for_k_equal_2():
    m = 3
    assert Wplus_op(0, m, 2) == x(2) @ DiffOperator.D_shifted_product([m + 2, m + 1])
    assert Wminus_op(0, m, 2) == x(-2) @ D() @ (D() - DiffOperator.const(3))


def test_kernels_annihilate_their_sectors():
    n, m, a = 3, 2, Fraction(5, 2)
    for e in range(n + 1):
        assert K_op(n).apply_to_monomial(e) == []
    for j in range(m + 1):
        assert Kprime_op(m, a).apply_to_monomial(GenExponent(a + j)) == []
    assert Kprime_op(m).apply_to_monomial(GenExponent(1, 1)) == []


def test_Q_maps_second_sector_into_first_and_kills_first():
    n, m, a = 2, 4, Fraction(1, 3)
    V = MonomialSpace(n, m, a)
    for al in range(abs(m - n) + 1):
        Q, Qb = Q_op(al, n, m, a), Qbar_op(al, n, m, a)
        for e in V.basis:
            for img, _c in Q.apply_to_monomial(e):
                assert img.offset.denominator == 1 and 0 <= img.offset <= n
            for img, _c in Qb.apply_to_monomial(e):
                assert (img.offset - a).denominator == 1 and 0 <= img.offset - a <= m
        for e in range(n + 1):
            assert Q.apply_to_monomial(e) == []


def test_kernel_product_helper():
    assert kernel_product(2, [1, 2]) == x(2) @ DiffOperator.D_shifted_product([1, 2])


@pytest.mark.parametrize("spec", [CatalogSpec("S", 2, 2), CatalogSpec("Stilde", 2, 1),
                                  CatalogSpec("Wplus", 2, 3, 2), CatalogSpec("Wplus", 1, 4, 0),
                                  CatalogSpec("Wminus", 1, 4, Fraction(3, 2)),
                                  CatalogSpec("q_low", 1, 3, alpha=3), CatalogSpec("nope")])
def test_domain_violations(spec):
    with pytest.raises(DomainError):
        build(spec)


def test_every_family_has_specs_and_a_space():
    for fam in FAMILIES:
        n, m, a = (1, 3, 1) if fam.startswith("W") else (2, 1 if fam == "S" else 2, None)
        specs = family_specs(fam, n, m, a)
        assert specs
        for spec in specs:
            op = build(spec)
            V = declared_space(spec)
            if V is not None:
                assert check_invariance(op, V).invariant, spec


def test_cubic_fit_formal_coefficients():
    fit = fit_casimir_polynomial(2, 2)
    assert fit.residual.is_zero()
    assert fit.alpha == Poly([-4])
    assert fit.beta == Poly([-18, 6])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cubic_fit_against_restriction_when_space_is_plain_polynomials(n):
    # a = 1 and m = n - 1 make the space P_n; the fitted cubic must agree with
    # the restriction matrices there
    fit = fit_casimir_polynomial(n, n - 1, 1)
    V = MonomialSpace(n)
    Jp, Jm, J0 = (restrict(J_op(e, n, n - 1, 1), V) for e in "+-0")
    lhs = [[u - v for u, v in zip(r1, r2)] for r1, r2 in zip(matmul(Jp, Jm), matmul(Jm, Jp))]
    coeffs = [c.constant_value() if c else Fraction(0) for c in fit.coefficients]
    size = len(J0)
    power = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    rhs = [[Fraction(0)] * size for _ in range(size)]
    for c in coeffs:
        rhs = [[r + c * p for r, p in zip(rr, pr)] for rr, pr in zip(rhs, power)]
        power = matmul(power, J0)
    assert lhs == rhs


def test_cubic_fit_for_swapped_sector_sizes():
    # the fit must reproduce the commutator for n < m and n > m alike
    for n, m in ((1, 3), (3, 1)):
        assert fit_casimir_polynomial(n, m).residual.is_zero()


def test_relation_reports():
    rep = verify_relation("J0_Jplus", 2, 3)
    assert rep.holds and rep.scope == "algebra"
    rep = verify_relation("Q_Jplus", 2, 2)
    assert rep.holds
    d_ = verify_relation("nlalgebra", 1, 1).as_dict()
    assert d_["holds"] and set(d_["details"]) == {"alpha", "beta", "gamma", "delta"}
    with pytest.raises(DomainError):
        verify_relation("Q_Jminus", 2, 3)
    with pytest.raises(DomainError):
        verify_relation("not_a_relation")


def test_commutator_of_Q_with_euler_operator():
    # [Q, D] = a Q holds; the shifted form (D + a) Q does not
    assert verify_relation("Q_D", 2, 2).holds
    assert verify_relation("Qbar_D", 2, 2).holds
    assert not verify_relation("Q_D_shifted", 2, 2).holds


def test_W_printed_commutators():
    for m in (2, 3, 5):
        assert verify_relation("Wplus_Jplus", 0, m, 2).holds
        assert verify_relation("Wplus_Jminus", 0, m, 2).holds


def test_so3_structure_constants_antisymmetric():
    table = so3_structure(2)
    for (i, j), (k, c) in table.items():
        assert table[(j, i)] == (k, -c)
    assert verify_relation("so3", 3).holds
    assert verify_relation("so3_tilde", 2).holds


def test_S_at_other_lambda_is_invariant():
    lam = Fraction(1, 2)
    V = lame_halfinteger_solution(2, lam)
    for idx in (1, 2, 3):
        assert check_invariance(S_op(idx, 2, lam), V).invariant
    assert lame_halfinteger_solution(1, lam).dim == 3


def test_lame_halfinteger_domain():
    with pytest.raises(DomainError):
        lame_halfinteger_solution(2, 1)


@pytest.mark.parametrize("lam", [-1, Fraction(1, 3)])
def test_Stilde_preserves_ratio_space(lam):
    spec = CatalogSpec("Stilde", 2, 2, lam=Fraction(lam))
    V = declared_space(spec)
    assert V.f_case == "sqrtRatio" and V.dim == 6
    for idx in (1, 2, 3):
        assert check_invariance(Stilde_op(idx, 2, lam), V).invariant


@pytest.mark.parametrize("kind", ["a-1", "a"])
@pytest.mark.parametrize("n, m, a", [(0, 2, 2), (1, 3, 3), (0, 1, 3)])
def test_reduced_spaces(kind, n, m, a):
    assert verify_reduced_space(kind, n, m, a)


def test_relation_names_are_dispatchable():
    for name in RELATIONS:
        n = m = 2
        a = None
        if name == "W_k_n_plus_1":
            n, m = 1, 3
        if name.startswith("Wplus"):
            n, m = 0, 3
        if name.startswith("so3"):
            n, m = 2, 1
        rep = verify_relation(name, n, m, a)
        assert rep.name == name


def test_J_with_formal_a():
    # J0 does not see a; J+ and J- carry it in their coefficients
    assert J_op("0", 1, 2) == D() - DiffOperator.const(2)
    assert J_op("-", 1, 2).coefficient(0, 1) == Poly([1, -1])
    assert J_op("+", 1, 2).coefficient(2, 1) == Poly([-2, -1])
    assert commutator(J_op("0", 1, 2), J_op("-", 1, 2)) == -J_op("-", 1, 2)
