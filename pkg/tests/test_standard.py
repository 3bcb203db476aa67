from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charcat.catalog import small_group, small_groups
from charcat.config import DEFAULT, BudgetExceeded, InvalidSpecification
from charcat.counitals import check_counital
from charcat.groups import center, cyclic, derived_subgroup, heisenberg, symmetric
from charcat.standard import (RottlaenderSpec, WordSyntaxError, abelianization_unit, are_isoclinic,
                              center_counital, check_epi_invariant_brute, check_fully_invariant_brute,
                              check_marginal_nondegenerate, derived_counit, eval_word, in_variety,
                              isoclinism_data, marginal_counital, marginal_subgroup, parse_word,
                              rottlaender_counitals, rottlaender_group, rottlaender_scan, validate_rottlaender,
                              verbal_counit, verbal_subgroup, word_values)


# -- words ------------------------------------------------------------------


def test_parse_commutator_and_powers():
    w = parse_word("[x,y]")
    assert w.variables == ("x", "y") and w.arity == 2
    assert parse_word("x^3 y^-1").arity == 2
    assert parse_word("[x,y,z]").arity == 3
    assert parse_word("1").arity == 0


@pytest.mark.parametrize("bad", ["[x]", "x^", "(x", "x)", "x y ]", "x + y"])
def test_parse_errors(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_commutator_in_s3():
    S3 = symmetric(3)
    x, y = S3.index_of("(12)"), S3.index_of("(13)")
    v = eval_word("[x,y]", S3, {"x": x, "y": y})
    assert S3.elements[v] in ("(123)", "(132)")
    assert v == S3.mul(S3.mul(S3.inv(x), S3.inv(y)), S3.mul(x, y))


def test_trivial_words():
    S3 = symmetric(3)
    assert eval_word("1", S3, {}) == S3.identity
    assert all(eval_word("x x^-1", S3, [g]) == S3.identity for g in range(6))


def test_unbound_variable():
    with pytest.raises(KeyError):
        eval_word("[x,y]", symmetric(3), {"x": 1})


@given(st.sampled_from(small_groups(12)), st.data())
def test_vectorised_matches_scalar(G, data):
    w = parse_word(data.draw(st.sampled_from(["[x,y]", "x^2 y^-1", "(x y)^3", "[x,y,x]", "x y x^-1 y^-1"])))
    vals = word_values(w, G)
    args = tuple(data.draw(st.integers(0, G.order - 1)) for _ in range(w.arity))
    assert vals[args] == eval_word(w, G, args)


# -- verbal and marginal ----------------------------------------------------


def test_verbal_examples():
    S3 = symmetric(3)
    assert verbal_subgroup(S3, ["[x,y]"]) == derived_subgroup(S3)
    assert verbal_subgroup(S3, ["x"]).is_whole()
    assert verbal_subgroup(S3, [f"x^{S3.exponent}"]).order == 1


def test_in_variety():
    assert in_variety(cyclic(6), ["[x,y]"])
    assert not in_variety(symmetric(3), ["[x,y]"])
    assert in_variety(symmetric(3), [])


def test_marginal_examples(catalog):
    D4 = small_group("D4")
    assert marginal_subgroup(D4, "[x,y]") == center(D4)
    assert marginal_subgroup(D4, "x").order == 1
    assert marginal_subgroup(cyclic(6), "[x,y]").is_whole()


def test_marginal_is_center_everywhere(catalog):
    for G in catalog:
        assert marginal_subgroup(G, "[x,y]") == center(G), G.id


def test_marginal_nondegenerate(catalog12):
    for G in catalog12:
        assert check_marginal_nondegenerate(G, "[x,y]").ok, G.id
    # for x^2 the word map is well defined on cosets but does not separate them
    r = check_marginal_nondegenerate(symmetric(3), "x^2")
    assert r.get("well_defined").passed and not r.get("nondegenerate").passed


@pytest.mark.parametrize("word", ["[x,y]", "x^2", "[x,y,y]"])
def test_verbal_fully_invariant_and_normal(catalog12, word):
    for G in catalog12:
        V = verbal_subgroup(G, [word])
        assert V.is_normal() and check_fully_invariant_brute(G, V), G.id


@pytest.mark.parametrize("word", ["[x,y]", "x^2"])
def test_marginal_epi_invariant(catalog12, word):
    for G in catalog12:
        M = marginal_subgroup(G, word)
        assert M.is_normal() and check_epi_invariant_brute(G, M), G.id


def test_word_budget():
    with pytest.raises(BudgetExceeded):
        word_values("[x,y,z,w]", symmetric(3))
    with pytest.raises(BudgetExceeded):
        marginal_subgroup(heisenberg(5), "[x,y,z]")
    with pytest.raises(BudgetExceeded):
        marginal_subgroup(heisenberg(5), "[x,y]")
    big = DEFAULT.with_(pair_budget=2 * 10**6)
    assert marginal_subgroup(heisenberg(5), "[x,y]", big) == center(heisenberg(5))


# -- standard counitals -----------------------------------------------------


def test_standard_components():
    S3 = symmetric(3)
    d = derived_counit([S3])
    assert d.subgroup(S3) == derived_subgroup(S3)
    C8 = cyclic(8)
    assert center_counital([C8]).eta(C8).is_bijective()
    pi = abelianization_unit([S3]).pi(S3)
    assert pi.codomain.order == 2 and pi.kernel() == derived_subgroup(S3)


def test_verbal_and_marginal_counitals(catalog12):
    cat = catalog12[:12]
    assert check_counital(verbal_counit(cat, ["x^2"])).ok
    assert check_counital(marginal_counital(cat, "[x,y]")).ok


# -- Rottlaender groups -----------------------------------------------------


def test_rottlaender_605():
    scan = rottlaender_scan(RottlaenderSpec(5, 11, (3, 9)))
    assert scan.group.order == 605
    assert len(scan.subgroups) == 12
    assert len(scan.characteristic) == 2
    assert scan.to_json()["match"]


def test_rottlaender_rejects_inverse_pair():
    with pytest.raises(InvalidSpecification) as exc:
        validate_rottlaender(RottlaenderSpec(3, 7, (2, 4)))
    assert exc.value.violation == (2, 2)


@pytest.mark.parametrize("spec", [RottlaenderSpec(5, 11, (1, 3)), RottlaenderSpec(5, 13, (3, 9)),
                                  RottlaenderSpec(5, 11, (3, 3)), RottlaenderSpec(5, 11, (2,)),
                                  RottlaenderSpec(4, 13, (3,)), RottlaenderSpec(3, 7, (2, 4, 2))])
def test_rottlaender_invalid(spec):
    with pytest.raises(InvalidSpecification):
        validate_rottlaender(spec)


def test_rottlaender_counitals():
    etas = rottlaender_counitals(RottlaenderSpec(5, 11, (3, 9)))
    assert len(etas) == 2
    for eta in etas:
        assert check_counital(eta).ok


def test_rottlaender_m_mismatch():
    with pytest.raises(InvalidSpecification):
        rottlaender_group(5, 11, 3, (3, 9))


# -- isoclinism -------------------------------------------------------------


def test_isoclinism_abelian_trivial():
    d = isoclinism_data(cyclic(6))
    assert d.central_quotient.order == 1 and d.well_defined and d.square_commutes


def test_isoclinism_s3_square():
    assert isoclinism_data(symmetric(3)).square_commutes


def test_d4_q8_isoclinic():
    pair = are_isoclinic(small_group("D4"), small_group("Q8"))
    assert pair is not None
    alpha, beta = pair
    assert alpha.is_bijective() and beta.is_bijective()
    assert are_isoclinic(small_group("D4"), symmetric(3)) is None


def test_star_table_shape():
    d = isoclinism_data(small_group("D4"))
    assert np.array(d.star).shape == (4, 4)
