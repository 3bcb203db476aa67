from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from charcat.abscat import build_catalog_cat
from charcat.catalog import small_group, small_groups
from charcat.certificates import verify_certificate, verify_counterexample
from charcat.config import FunctorMismatch
from charcat.counitals import (check_counital, check_internal, check_kernel_duality, check_unital,
                               compose_triangle, counital_from_subgroups, counitals_equivalent, extend_to_isocore,
                               identity_counital, internalize, is_characteristic, is_fully_invariant,
                               kernel_of_unital, shipped_images_characteristic, transport, unital_from_normals)
from charcat.groups import all_subgroups, center, cyclic, derived_subgroup, relabel, subgroup_closure, symmetric
from charcat.homs import automorphisms, find_isomorphism
from charcat.standard import abelianization_unit, center_counital, derived_counit


def test_derived_counit_laws(catalog12):
    eta = derived_counit(catalog12)
    r = check_counital(eta)
    assert r.ok, r.failures()
    assert eta.is_monic()


def test_center_counital_on_iso_core(catalog12):
    r = check_counital(center_counital(catalog12))
    assert r.ok, r.failures()


def test_center_not_natural_for_all_homs():
    C = build_catalog_cat([cyclic(2), symmetric(3)], "all-homs")
    eta = counital_from_subgroups("center", C, "all-homs", center)
    r = check_counital(eta)
    assert not r.get("naturality").passed
    phi = r.get("naturality").witness[0]
    assert phi.domain.id == "C2" and phi.codomain.id == "S3"


def test_identity_counital(catalog12):
    C = build_catalog_cat(catalog12[:8], "all-homs")
    assert check_counital(identity_counital(C, "all-homs")).ok


def test_characteristic_examples():
    S3 = symmetric(3)
    res = is_characteristic(S3, derived_subgroup(S3))
    assert res.holds and res.certificate.map_count == 6
    assert verify_certificate(res.to_json(), S3.to_json(), deep=True).ok
    sub = subgroup_closure(S3, [S3.index_of("(12)")])
    bad = is_characteristic(S3, sub)
    assert not bad.holds
    assert bad.counterexample.note == "conjugation by (23)"
    assert verify_counterexample(bad.counterexample.to_json(), S3.to_json()).ok


def test_fully_invariant_examples():
    S3 = symmetric(3)
    res = is_fully_invariant(S3, derived_subgroup(S3))
    assert res.holds and res.certificate.map_count == 10
    assert verify_certificate(res.to_json(), S3.to_json(), deep=True).ok
    # a coordinate subgroup of C2 x C2 is not even characteristic
    V = small_group("C2xC2")
    S = all_subgroups(V)[1]
    assert not is_fully_invariant(V, S).holds


@given(st.sampled_from(small_groups(12)), st.data())
def test_characteristic_agrees_with_all_automorphisms(G, data):
    subs = all_subgroups(G)
    S = data.draw(st.sampled_from(subs))
    brute = all(a.image_of(S) == S for a in automorphisms(G))
    assert is_characteristic(G, S).holds == brute


def test_transport_and_extension():
    cat = [cyclic(2), symmetric(3), cyclic(6)]
    S3 = cat[1]
    ext = extend_to_isocore(cat, S3, derived_subgroup(S3))
    assert ext.report.ok, ext.report.failures()
    assert ext.characteristic and ext.well_defined
    assert [ext.sigma[X].order for X in cat] == [1, 3, 1]


def test_extension_flags_non_characteristic():
    S3 = symmetric(3)
    ext = extend_to_isocore([S3], S3, subgroup_closure(S3, [S3.index_of("(12)")]))
    assert not ext.characteristic and ext.well_defined is None
    assert not ext.report.ok


def test_extension_only_on_iso_core():
    S3 = symmetric(3)
    with pytest.raises(ValueError):
        extend_to_isocore([S3], S3, derived_subgroup(S3), morphism_class="all-homs")


def test_transport_of_center_between_copies():
    D4 = small_group("D4")
    R = relabel(D4, [0, 3, 5, 1, 7, 2, 4, 6], "D4'")
    alpha = find_isomorphism(D4, R)
    assert transport(center(D4), alpha) == center(R)


def test_internalization(catalog12):
    eta = derived_counit(catalog12[:6])
    cat = internalize(eta)
    for X in eta.objects():
        assert cat.contains(eta.eta(X))
    assert check_internal(eta).ok


def test_triangle_composition():
    cat = small_groups(8)
    d = derived_counit(cat)
    dd = compose_triangle(d, d)
    assert check_counital(dd).ok
    for X in cat:
        D = derived_subgroup(X)
        second = derived_subgroup(D.group)
        assert dd.subgroup(X).members == tuple(sorted(D.members[i] for i in second.members))
    with pytest.raises(FunctorMismatch):
        compose_triangle(center_counital(cat), d)


def test_kernel_duality(catalog12):
    pi = abelianization_unit(catalog12)
    iota = derived_counit(catalog12)
    assert check_unital(pi).ok
    assert pi.is_epic()
    assert check_kernel_duality(pi, iota).ok
    assert counitals_equivalent(kernel_of_unital(pi), iota).ok


def test_unital_from_normals(catalog12):
    C = build_catalog_cat(catalog12[:10], "all-homs")
    pi = unital_from_normals("ab", C, "all-homs", derived_subgroup)
    assert check_unital(pi).ok


def test_images_characteristic(catalog12):
    assert shipped_images_characteristic([derived_counit(catalog12), center_counital(catalog12)]).ok
