"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
from __future__ import annotations

import hashlib
import os
import random
import subprocess
import sys
import time

import pytest

from charcat.abscat import (ambient_groups, build_catalog_cat, check_abscat_laws, identity_functor, Functor,
                            table2)
from charcat.baer import bimap_from_group, group_from_bimap, pipeline
from charcat.capsules import NatTrans, bimorphism_from_nattrans, check_adjoint, compare_nattrans, \
    nattrans_from_bimorphism
from charcat.catalog import small_group, small_groups
from charcat.certificates import verify_certificate
from charcat.config import DEFAULT
from charcat.counitals import (check_counital, counitals_equivalent, extend_to_isocore, is_characteristic,
                               kernel_of_unital, transport)
from charcat.fflinalg import brute_force_radical, jacobson_radical, random_subalgebra
from charcat.groups import GroupHom, center, cyclic, derived_subgroup, direct_product, heisenberg, relabel
from charcat.homs import find_isomorphism, hom_enumerate
from charcat.standard import (RottlaenderSpec, abelianization_unit, center_counital, check_fully_invariant_brute,
                              derived_counit, marginal_subgroup, rottlaender_scan, verbal_subgroup)

from conftest import FIXTURES, ROOT

# from test_abscat; each cell change breaks at least one law
MUTATIONS = [("e1", "a12", None), ("a12", "e2", None), ("a12", "a23", "a23"), ("a12", "a23", None),
             ("a23", "a12", "a13"), ("b45", "b54", "e5"), ("b54", "b45", None), ("e1", "e1", None),
             ("e6", "e6", None), ("e3", "e3", "e2"), ("a13", "e3", "a13'"), ("e1", "a13'", "a13")]


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str) -> bool:
        with capsys.disabled():
            print(f"\n[acceptance {n:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


def test_criterion_01_table2(verdict):
    t0 = time.perf_counter()
    r = check_abscat_laws(table2())
    exhaustive = all(x.exhaustive for x in r.results)
    caught = 0
    for f, g, v in MUTATIONS:
        m = check_abscat_laws(table2().mutate(f, g, v))
        caught += (not m.ok) and all(x.witness is not None for x in m.failures())
    dt = time.perf_counter() - t0
    ok = r.ok and exhaustive and caught == 12 and dt < 1.0
    assert verdict(1, ok, f"laws ok={r.ok} exhaustive={exhaustive}, mutations caught {caught}/12, {dt:.3f}s")


def test_criterion_02_catalog_certificates(verdict, catalog):
    t0 = time.perf_counter()
    bad = []
    for G in catalog:
        gj = G.to_json()
        for name, H in (("center", center(G)), ("derived", derived_subgroup(G))):
            res = is_characteristic(G, H)
            v = verify_certificate(res.to_json(), gj, deep=True) if res.holds else None
            if v is None or not v.ok or v.checks.get("deep") != "ok":
                bad.append((G.id, name))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    assert verdict(2, ok, f"{len(catalog)} groups, {2 * len(catalog)} certificates, failures {bad}, {dt:.1f}s")


def test_criterion_03_rottlaender(verdict):
    t0 = time.perf_counter()
    scan = rottlaender_scan(RottlaenderSpec(5, 11, (3, 9)))
    dt = time.perf_counter() - t0
    d = scan.to_json()
    ok = (scan.group.order == 605 and len(scan.subgroups) == 12 and len(scan.characteristic) == 2
          and d["match"] and dt < 120)
    assert verdict(3, ok, f"order {scan.group.order}, {len(scan.subgroups)} order-11 subgroups, "
                          f"{len(scan.characteristic)} characteristic, eigenspaces match={d['match']}, {dt:.1f}s")


def test_criterion_04_center_counital_isocore(verdict):
    D4 = small_group("D4")
    D4b = relabel(D4, [0, 3, 5, 1, 7, 2, 4, 6], "D4'")
    eta = center_counital([D4, D4b])
    r = check_counital(eta)
    exhaustive = all(x.exhaustive for x in r.results)
    ext = extend_to_isocore([D4, D4b], D4, center(D4))
    isos = hom_enumerate(D4, D4b, iso_only=True)
    images = {transport(center(D4), a).members for a in isos}
    ok = r.ok and exhaustive and ext.report.ok and ext.well_defined and len(images) == 1 and len(isos) == 8
    assert verdict(4, ok, f"counital ok={r.ok} exhaustive={exhaustive}, extension ok={ext.report.ok}, "
                          f"{len(isos)} isomorphisms give {len(images)} transported image(s)")


def _round_trip(eta):
    mu = NatTrans(eta.name, Functor("C", eta.C), identity_functor(), lambda e: eta.eta(e.domain))
    amb = ambient_groups()
    M, _ = bimorphism_from_nattrans(mu, eta.domain, amb)
    back = nattrans_from_bimorphism(M, eta.domain, amb)
    return back.report.ok and compare_nattrans(mu, back.mu, eta.domain).ok


def test_criterion_05_round_trip(verdict, catalog12):
    d = _round_trip(derived_counit(catalog12))
    z = _round_trip(center_counital(catalog12))
    assert verdict(5, d and z, f"derived counit round trip={d}, center counital round trip={z}, "
                               f"{len(catalog12)} groups")


def test_criterion_06_abelianization_adjunction(verdict, catalog12):
    t0 = time.perf_counter()
    abelian = [A for A in small_groups(8) if A.is_abelian]
    unit = abelianization_unit(catalog12)
    B = build_catalog_cat(catalog12, "all-homs")
    A = build_catalog_cat(abelian, "all-homs")
    F = Functor("ab", unit.D, unit.obj)
    G = identity_functor("incl")

    def psi(U, V, x):
        return x.compose(unit.pi(U))

    def psi_inv(U, V, y):
        p = unit.pi(U)
        out = [0] * p.codomain.order
        for u in range(U.order):
            out[p.images[u]] = y.images[u]
        return GroupHom(p.codomain, V, tuple(out))

    cfg = DEFAULT.with_(pair_budget=10**6)
    r = check_adjoint(F, G, psi, psi_inv, catalog12, abelian, hom_enumerate, B, A, ambient_groups(), cfg)
    exhaustive = all(x.exhaustive for x in r.results)
    dt = time.perf_counter() - t0
    ok = r.ok and exhaustive
    laws = ", ".join(f"{x.law}={'ok' if x.passed else 'FAIL'}" for x in r.results)
    assert verdict(6, ok, f"{len(catalog12)}x{len(abelian)} pairs, exhaustive={exhaustive}, {laws}, {dt:.1f}s")


def test_criterion_07_verbal_marginal(verdict, catalog, catalog12):
    eq = counitals_equivalent(kernel_of_unital(abelianization_unit(catalog12)), derived_counit(catalog12),
                              catalog12)
    marg = [G.id for G in catalog if marginal_subgroup(G, "[x,y]") != center(G)]
    groups = [G for G in catalog12 if G.order > 1][:10]
    words = ["[x,y]", "x^2", "x^3", "[x,y,y]"]
    fi = [(G.id, w) for G in groups for w in words if not check_fully_invariant_brute(G, verbal_subgroup(G, [w]))]
    ok = eq.ok and not marg and not fi and len(groups) == 10
    assert verdict(7, ok, f"ker(ab)~derived={eq.ok}, marginal!=center on {marg}, "
                          f"verbal not fully invariant on {fi} ({len(groups)} groups)")


def test_criterion_08_radical_oracle(verdict):
    mismatches = 0
    total = 0
    for p, n in ((5, 2), (7, 3)):
        rng = random.Random(f"0:rad:{p}:{n}")
        for _ in range(100):
            alg = random_subalgebra(p, n, rng)
            total += 1
            mismatches += jacobson_radical(alg) != brute_force_radical(alg)
    assert verdict(8, mismatches == 0, f"{total} algebras, {mismatches} mismatches")


def test_criterion_09_baer(verdict):
    t0 = time.perf_counter()
    H5 = heisenberg(5)
    rt = find_isomorphism(H5, group_from_bimap(bimap_from_group(H5, 5).bimap)) is not None
    r1 = pipeline(H5, 5)
    heis_ok = rt and r1.radical.dim == 0 and r1.subgroup == derived_subgroup(H5)
    G = direct_product(heisenberg(5), cyclic(5), "Heis5xC5")
    r2 = pipeline(G, 5)
    v = verify_certificate(r2.certificate.to_json(), G.to_json(), deep=True)
    # exhaustive table scan: H is exactly the set of elements commuting with everything,
    # a set every automorphism preserves
    t = G.table
    central = tuple(g for g in range(G.order) if all(t[g][x] == t[x][g] for x in range(G.order)))
    brute = central == r2.subgroup.members
    dt = time.perf_counter() - t0
    ok = heis_ok and r2.radical.dim > 0 and r2.certificate.holds and v.ok and brute and dt < 60
    assert verdict(9, ok, f"Heis5 round trip={rt} J={r1.radical.dim} H=derived={heis_ok}; Heis5xC5 "
                          f"J={r2.radical.dim} |H|={r2.subgroup.order} verifier={v.ok} "
                          f"(closure {v.checks.get('closure')}, deep {v.checks.get('deep')}) "
                          f"table scan={brute}, {dt:.1f}s")


_DETERMINISM_RUN = [
    ["fixtures", "{out}/fixtures"],
    ["check-laws", str(FIXTURES / "table2.json"), "--out", "{out}/laws.json"],
    ["check-laws", str(FIXTURES / "table2_broken.json"), "--out", "{out}/laws_broken.json"],
    ["characteristic", "D4", "--subgroup", "center", "--out", "{out}/d4_center.json"],
    ["characteristic", "S3", "--subgroup", "gen:(12)", "--out", "{out}/s3_cx.json"],
    ["fully-invariant", "Q8", "--subgroup", "derived", "--out", "{out}/q8_fi.json"],
    ["counital", "derived", "--catalog", str(FIXTURES / "small"), "--out", "{out}/derived.json"],
    ["baer", str(FIXTURES / "heisenberg_5.json"), "--p", "5", "--out", "{out}/baer.json"],
]


def _run_all(out, hashseed: str) -> dict:
    env = dict(os.environ, PYTHONHASHSEED=hashseed)
    env["PYTHONPATH"] = os.pathsep.join([str(ROOT / "src"), env.get("PYTHONPATH", "")])
    for cmd in _DETERMINISM_RUN:
        args = [a.format(out=out) for a in cmd]
        subprocess.run([sys.executable, "-m", "charcat.cli", "--seed", "0", *args], env=env,
                       stdout=subprocess.DEVNULL, check=False, timeout=600)
    digests = {}
    for path in sorted(out.rglob("*")):
        if path.is_file():
            digests[str(path.relative_to(out))] = hashlib.sha256(path.read_bytes()).hexdigest()
    return digests


def test_criterion_10_determinism(verdict, tmp_path):
    a = _run_all(tmp_path / "a", "1")
    b = _run_all(tmp_path / "b", "2")
    diff = sorted(k for k in a.keys() | b.keys() if a.get(k) != b.get(k))
    ok = bool(a) and not diff and len(a) >= len(_DETERMINISM_RUN)
    assert verdict(10, ok, f"{len(a)} artifacts compared across two runs, {len(diff)} differ {diff[:5]}")
