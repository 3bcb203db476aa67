from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from charcat.catalog import load_catalog, small_group, small_groups
from charcat.config import InvalidGroup, InvalidSpecification, NotNormal
from charcat.fflinalg import Mat
from charcat.groups import (FiniteGroup, GroupHom, Subgroup, all_subgroups, center, cyclic, derived_subgroup,
                            dihedral, direct_product, make_group, min_generating_sequence, noether_factor,
                            normal_closure, quotient, relabel, subgroup_closure, symmetric)


def naive_center(G):
    return [z for z in range(G.order) if all(G.mul(z, g) == G.mul(g, z) for g in range(G.order))]


def test_catalog_size_and_orders(catalog):
    assert len(catalog) == 42
    assert len({G.id for G in catalog}) == 42
    assert [G.order for G in catalog] == sorted(G.order for G in catalog)
    assert sum(1 for G in catalog if G.order == 16) == 14
    assert sum(1 for G in catalog if G.order == 8) == 5


def test_catalog_matches_oracle(catalog, oracle):
    for G in catalog:
        o = oracle[G.id]
        assert G.order == o["order"]
        assert list(center(G).members) == o["center"]
        assert list(derived_subgroup(G).members) == o["derived"]


def test_cyclic_five():
    G = make_group("cyclic", n=5)
    assert G.order == 5 and sorted(G.element_orders) == [1, 5, 5, 5, 5]


def test_dihedral_center():
    G = make_group("dihedral", n=4)
    assert G.order == 8 and len(naive_center(G)) == 2 == center(G).order


def test_semidirect_605():
    G = make_group("semidirect", p=5, q=11, theta=Mat.diag(11, [3, 9]))
    assert G.order == 605


def test_semidirect_rejects_wrong_order():
    with pytest.raises(InvalidSpecification):
        make_group("semidirect", p=5, q=11, theta=Mat.diag(11, [2, 9]))


def test_unknown_kind():
    with pytest.raises(InvalidSpecification):
        make_group("sporadic", n=1)


def test_table_validation():
    with pytest.raises(InvalidGroup):
        FiniteGroup.from_table("bad", ["e", "a", "b"], [[0, 1, 2], [1, 0, 0], [2, 0, 1]])
    with pytest.raises(InvalidGroup):
        FiniteGroup.from_table("bad", ["e", "a"], [[0, 1], [1, 1]])


def test_json_round_trip(catalog):
    for G in catalog[:10]:
        H = FiniteGroup.from_json(G.to_json())
        assert H.table == G.table and H.elements == G.elements and H.id == G.id


def test_closure_examples():
    S3 = symmetric(3)
    assert subgroup_closure(S3, [S3.index_of("(123)")]).order == 3
    assert subgroup_closure(S3, []).order == 1
    D4 = dihedral(4)
    assert subgroup_closure(D4, [D4.index_of("r"), D4.index_of("s")]).order == 8


@given(st.sampled_from(small_groups(12)), st.data())
def test_closure_idempotent_and_monotone(G, data):
    a = data.draw(st.sets(st.integers(0, G.order - 1), max_size=3))
    b = data.draw(st.sets(st.integers(0, G.order - 1), max_size=2))
    S = subgroup_closure(G, a)
    assert subgroup_closure(G, S.members).members == S.members
    assert set(S.members) <= set(subgroup_closure(G, a | b).members)
    assert G.order % S.order == 0


def test_all_subgroups_counts():
    assert len(all_subgroups(symmetric(3))) == 6
    assert len(all_subgroups(dihedral(4))) == 10
    assert len(all_subgroups(small_group("Q8"))) == 6


def test_noether_identity():
    D4 = dihedral(4)
    coim, psi, im = noether_factor(GroupHom.identity(D4))
    for f in (coim, psi, im):
        assert f.is_bijective()


def test_noether_mod_two():
    C4, C2 = cyclic(4), cyclic(2)
    phi = GroupHom(C4, C2, (0, 1, 0, 1))
    coim, psi, im = noether_factor(phi)
    assert phi.kernel().members == (0, 2)
    assert coim.codomain.order == 2 and psi.is_bijective() and im.is_injective()
    assert im.compose(psi).compose(coim) == phi


def test_noether_sign_map():
    S3, C2 = symmetric(3), cyclic(2)
    sign = GroupHom(S3, C2, tuple(0 if S3.element_orders[x] != 2 else 1 for x in range(6)))
    assert sign.is_homomorphism()
    coim, psi, im = noether_factor(sign)
    assert sign.kernel() == derived_subgroup(S3)
    assert coim.is_surjective() and psi.is_bijective() and im.is_injective()
    assert im.compose(psi).compose(coim) == sign


def test_quotients():
    S3 = symmetric(3)
    Q = quotient(S3, derived_subgroup(S3))
    assert Q.group.order == 2 and Q.projection.kernel() == derived_subgroup(S3)
    T = quotient(S3, S3.trivial())
    assert T.projection.is_bijective()
    D4 = dihedral(4)
    Z = quotient(D4, center(D4)).group
    assert Z.order == 4 and Z.exponent == 2


def test_quotient_rejects_non_normal():
    S3 = symmetric(3)
    with pytest.raises(NotNormal):
        quotient(S3, subgroup_closure(S3, [S3.index_of("(12)")]))


def test_normal_closure():
    S3 = symmetric(3)
    assert normal_closure(S3, [S3.index_of("(12)")]).order == 6


def test_min_generating_sequence(catalog):
    for G in catalog:
        gens = min_generating_sequence(G)
        assert subgroup_closure(G, gens).order == G.order
        assert min_generating_sequence(G) == gens


def test_relabel_is_isomorphic_copy():
    D4 = dihedral(4)
    perm = [0, 3, 5, 1, 7, 2, 4, 6]
    R = relabel(D4, perm, "D4'")
    assert R.id == "D4'" and center(R).order == 2
    assert sorted(R.element_orders) == sorted(D4.element_orders)


def test_direct_product():
    G = direct_product(symmetric(3), cyclic(2))
    assert G.order == 12 and center(G).order == 2


def test_subgroup_membership_rules():
    S3 = symmetric(3)
    with pytest.raises(ValueError):
        Subgroup(S3, (0, 1, 3))


def test_catalog_files_load(fixtures_dir):
    groups = load_catalog(fixtures_dir / "small")
    assert [G.id for G in groups] == [G.id for G in small_groups(16)]
