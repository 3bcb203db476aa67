from __future__ import annotations

import json

from charcat.catalog import (heisenberg_default, load_catalog, load_group, rottlaender_default, safe_filename,
                             save_catalog, small_group, small_groups)
from charcat.groups import group_fingerprint


def test_save_load_round_trip(tmp_path, catalog12):
    paths = save_catalog(catalog12, tmp_path)
    assert len(paths) == len(catalog12)
    index = json.loads((tmp_path / "index.json").read_text())
    assert [e["id"] for e in index] == [G.id for G in catalog12]
    back = load_catalog(tmp_path)
    assert [group_fingerprint(G) for G in back] == [group_fingerprint(G) for G in catalog12]
    assert [G.id for G in load_catalog(tmp_path, max_order=4)] == ["C1", "C2", "C3", "C4", "C2xC2"]


def test_safe_filename():
    assert safe_filename("C2^4") == "C2^4.json"
    assert safe_filename("Rott(5,11,3,9)") == "Rott_5_11_3_9_.json"


def test_lookup_by_name():
    assert small_group("Q8").order == 8
    assert small_groups(8)[-1].order == 8


def test_defaults(fixtures_dir):
    R = rottlaender_default()
    assert R.order == 605
    assert heisenberg_default().order == 125
    assert group_fingerprint(load_group(fixtures_dir / "rottlaender_5_11.json")) == group_fingerprint(R)


def test_fingerprint_is_stable():
    assert group_fingerprint(small_group("S3")) == group_fingerprint(small_group("S3"))
    assert group_fingerprint(small_group("S3")) != group_fingerprint(small_group("C6"))
