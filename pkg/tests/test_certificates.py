from __future__ import annotations

import copy
import json

import pytest

from charcat.catalog import rottlaender_default, small_group
from charcat.certificates import dumps, load_json, verify_certificate, verify_counterexample
from charcat.counitals import is_characteristic, is_fully_invariant
from charcat.groups import center, derived_subgroup, subgroup_closure


@pytest.fixture(scope="module")
def d4_cert():
    G = small_group("D4")
    return G.to_json(), is_characteristic(G, center(G)).to_json()


def test_good_certificate(d4_cert):
    g, c = d4_cert
    v = verify_certificate(c, g, deep=True)
    assert v.ok, v.errors
    assert v.checks["closure"] == "ok" and v.checks["deep"] == "ok"


def test_wrong_aut_order(d4_cert):
    g, c = d4_cert
    c = dict(c, aut_order=c["aut_order"] * 2)
    v = verify_certificate(c, g)
    assert not v.ok and v.checks["closure"].startswith("mismatch")


def test_non_homomorphism_detected(d4_cert):
    g, c = copy.deepcopy(d4_cert)
    m = c["aut_gens"][0]
    m[1], m[2] = m[2], m[1]
    v = verify_certificate(c, g)
    assert not v.ok


def test_tampered_witness(d4_cert):
    g, c = copy.deepcopy(d4_cert)
    c["witnesses"][0]["pairs"][-1][1] = 3
    assert not verify_certificate(c, g).ok


def test_group_mismatch(d4_cert):
    g, c = d4_cert
    assert not verify_certificate(dict(c, group="Q8"), g).ok


def test_non_closed_subgroup(d4_cert):
    g, c = d4_cert
    assert not verify_certificate(dict(c, subgroup=[0, 1, 2]), g).ok


def test_unknown_kind(d4_cert):
    g, c = d4_cert
    assert not verify_certificate(dict(c, kind="normal"), g).ok


def test_deep_recount_catches_partial_list():
    G = small_group("S3")
    c = is_fully_invariant(G, derived_subgroup(G)).to_json()
    c["aut_gens"] = c["aut_gens"][:-1]
    c["witnesses"] = c["witnesses"][:-1]
    c["map_count"] -= 1
    v = verify_certificate(c, G.to_json(), deep=True)
    assert not v.ok and v.checks["deep"].startswith("mismatch")


def test_deep_skipped_for_large_groups():
    G = rottlaender_default()
    c = is_characteristic(G, derived_subgroup(G)).to_json()
    v = verify_certificate(c, G.to_json(), deep=True)
    assert v.ok and v.checks["deep"] == "skipped"


def test_counterexample_round_trip():
    S3 = small_group("S3")
    res = is_characteristic(S3, subgroup_closure(S3, [S3.index_of("(12)")]))
    assert verify_certificate(res.to_json(), S3.to_json()).ok
    cx = res.counterexample.to_json()
    fake = dict(cx, element=0)
    assert not verify_counterexample(fake, S3.to_json()).ok


def test_dumps_is_canonical(tmp_path, d4_cert):
    _, c = d4_cert
    text = dumps(c)
    assert text == dumps(json.loads(text))
    p = tmp_path / "c.json"
    p.write_text(text)
    assert load_json(p) == c
