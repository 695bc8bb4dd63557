from fractions import Fraction

import pytest

from qespoly import cases as cs
from qespoly import hamiltonians as ham
from qespoly import recurrence as rec


def test_make_params_defaults_and_overrides():
    p = cs.make_params("polypot", {})
    assert p.m == 2
    p = cs.make_params("polypot", {"m": Fraction(3), "p2": Fraction(1, 2), "p1": None})
    assert p.m == 3 and p.p2 == Fraction(1, 2) and p.p1 == 0
    lame = cs.make_params("lame", {"k2": Fraction(1, 5)})
    assert lame.m == 1 and lame.k2 == Fraction(1, 5)


def test_make_params_boson_number():
    p = cs.make_params("bose-hubbard", {"alpha": Fraction(1, 2), "bosons": 4})
    assert p.boson_number == 4
    with pytest.raises(cs.CaseError):
        cs.make_params("bose-hubbard", {"M": 2, "bosons": 3})


@pytest.mark.parametrize("case, vals", [("polypot", {"m": Fraction(5, 2)}), ("polypot", {"p2": 0}),
                                        ("lame", {"k2": 2}), ("bose-hubbard", {"alpha": 0}),
                                        ("harmonic", {})])
def test_make_params_rejects_bad_input(case, vals):
    with pytest.raises(cs.CaseError):
        cs.make_params(case, vals)


def test_param_dict_is_exact_strings():
    p = cs.make_params("lame", {"delta": Fraction(-3, 2)})
    assert cs.param_dict("lame", p) == {"m": "1", "delta": "-3/2", "k2": "1/3"}


@pytest.mark.parametrize("bosons", [3, 4, 5])
def test_bose_hubbard_chains_hold_n_plus_one_levels(bosons):
    p = cs.make_params("bose-hubbard", {"alpha": 1, "bosons": bosons})
    chains = cs.chains("bose-hubbard", p)
    assert len(chains) == 2
    assert sum(c.space.dim for c in chains) == bosons + 1


def test_bose_hubbard_without_truncation_has_no_chain():
    p = cs.make_params("bose-hubbard", {"alpha": 2, "M": Fraction(7, 3)})
    assert cs.chains("bose-hubbard", p) == []


def test_basis_index_of_polypot_chain():
    ch = cs.chains("polypot", cs.make_params("polypot", {"m": 2}))[0]
    # the staggered second component starts one level below the first
    dim = ch.space.dim
    start = rec.generate(ch.system, 2).start
    assert start == -1
    seen = {ch.basis_index(n, i) for n in range(start, 6) for i in range(2)} - {None}
    assert seen == set(range(dim))


SAMPLES = [
    ("polypot", {"m": 2}), ("polypot", {"m": 3, "p2": Fraction(1, 2), "p1": 1}),
    ("polypot", {"m": 4, "kappa0": Fraction(2, 3)}),
    ("lame", {}), ("lame", {"m": 0, "delta": 1, "k2": Fraction(2, 3)}),
    ("lame", {"m": 2, "delta": Fraction(-3, 2), "k2": Fraction(1, 2)}),
    ("bose-hubbard", {}), ("bose-hubbard", {"alpha": Fraction(1, 2), "bosons": 4}),
]


@pytest.mark.parametrize("case, vals", SAMPLES)
def test_truncation_polynomial_matches_restriction(case, vals):
    for ch in cs.chains(case, cs.make_params(case, vals)):
        res = cs.oracle_check(ch)
        assert res.proportional and res.series_eigenvector
        assert res.as_dict()["chain"] == ch.label


def test_unknown_case_in_chains():
    with pytest.raises(cs.CaseError):
        cs.chains("harmonic", ham.PolyPotParams(2))
