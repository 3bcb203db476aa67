from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from charcat.baer import (BimapObject, adjoint_algebra, baer_morphism_checks, bimap_from_group, bimap_from_tensor,
                          check_adjoint_algebra, group_from_bimap, is_class2_exponent_p, pipeline)
from charcat.catalog import small_group
from charcat.certificates import verify_certificate
from charcat.config import UnsupportedCharacteristic
from charcat.groups import center, cyclic, derived_subgroup, direct_product, elementary_abelian, heisenberg
from charcat.homs import find_isomorphism

# alternating map F_3^3 x F_3^3 -> F_3^2 with b(e1,e2) = f1, b(e1,e3) = f2
BAER3 = [[[0, 0], [1, 0], [0, 1]], [[2, 0], [0, 0], [0, 0]], [[0, 2], [0, 0], [0, 0]]]


@pytest.fixture(scope="module")
def heis5():
    return heisenberg(5)


def test_class_two_detection(heis5):
    assert is_class2_exponent_p(heis5, 5)
    assert not is_class2_exponent_p(cyclic(25), 5)
    assert not is_class2_exponent_p(small_group("S3"), 3)
    with pytest.raises(UnsupportedCharacteristic):
        is_class2_exponent_p(small_group("D4"), 2)


def test_heisenberg_bimap(heis5):
    b = bimap_from_group(heis5, 5).bimap
    assert (b.v_dim, b.w_dim) == (2, 1)
    assert b.is_alternating() and b.radical().dim == 0


def test_heisenberg_round_trip(heis5):
    b = bimap_from_group(heis5, 5).bimap
    G2 = group_from_bimap(b, "Heis5'")
    assert G2.order == 125
    assert find_isomorphism(heis5, G2) is not None


def test_bimap_json_round_trip(heis5):
    b = bimap_from_group(heis5, 5).bimap
    assert BimapObject.from_json(b.to_json()) == b


def test_non_alternating_rejected():
    with pytest.raises(ValueError):
        group_from_bimap(bimap_from_tensor(3, [[[1]]]))


@settings(max_examples=15)
@given(st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_round_trip_random_bimaps(c):
    # general alternating map F_3^3 x F_3^3 -> F_3
    t = [[[0], [c[0]], [c[1]]], [[-c[0] % 3], [0], [c[2]]], [[-c[1] % 3], [-c[2] % 3], [0]]]
    b = bimap_from_tensor(3, t)
    G = group_from_bimap(b)
    assert G.order == 3 ** 4 and is_class2_exponent_p(G, 3)
    gb = bimap_from_group(G, 3)
    rank = 0 if not any(c) else 2
    assert gb.bimap.w_dim == (1 if rank else 0)
    assert gb.bimap.v_dim == 4 - gb.bimap.w_dim
    assert gb.bimap.v_dim - gb.bimap.radical().dim == rank


def test_adjoint_algebra_heisenberg(heis5):
    adj = adjoint_algebra(bimap_from_group(heis5, 5).bimap)
    assert adj.algebra.dim == 4
    assert check_adjoint_algebra(adj).ok


def test_pipeline_heisenberg(heis5):
    res = pipeline(heis5, 5)
    assert res.radical.dim == 0
    assert res.subgroup == derived_subgroup(heis5) == center(heis5)
    assert res.report.ok
    assert res.to_json()["capsule_generator"] == "unresolved"


def test_pipeline_heisenberg_times_c5():
    G = direct_product(heisenberg(5), cyclic(5), "Heis5xC5")
    res = pipeline(G, 5)
    assert res.adjoint.algebra.dim == 7
    assert res.radical.dim == 2
    assert res.subgroup.order == 25
    assert res.report.ok, res.report.failures()
    assert verify_certificate(res.certificate.to_json(), G.to_json()).ok


def test_pipeline_abelian():
    res = pipeline(elementary_abelian(5, 2), 5)
    assert res.radical.dim == 0 and res.subgroup.order == 1


def test_morphism_checks_heisenberg(heis5):
    assert baer_morphism_checks([heis5], 5).ok


def test_transposed_beta_detected():
    G = group_from_bimap(bimap_from_tensor(3, BAER3), "Baer3")
    assert G.order == 243
    assert baer_morphism_checks([G], 3).ok
    bad = baer_morphism_checks([G], 3, transpose_beta=True)
    assert not bad.get("bimap_morphism").passed
    assert bad.get("bimap_morphism").witness is not None
