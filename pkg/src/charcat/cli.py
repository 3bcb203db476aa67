"""Command-line interface.

Exit codes: 0 pass, 1 a checked property fails, 2 bad input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import catalog as cat
from .abscat import FinAbsCat, build_catalog_cat, check_abscat_laws, table2
from .certificates import dumps, load_json, verify_certificate
from .config import (BudgetExceeded, Config, FunctorMismatch, InvalidGroup, InvalidSpecification, NotNormal,
                     UnsupportedCharacteristic)
from .counitals import (Counital, check_counital, counital_from_subgroups, extend_to_isocore, is_characteristic,
                        is_fully_invariant)
from .groups import FiniteGroup, Subgroup, center, derived_subgroup, subgroup_closure
from .homs import automorphism_group

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

BROKEN_CELL = ("a12", "a23", None)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# Input helpers


def load_group_arg(spec: str) -> FiniteGroup:
    """A group JSON file, or the name of a built-in small group."""
    p = Path(spec)
    if p.exists():
        try:
            return cat.load_group(p)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read group from {spec}: {exc}") from exc
    try:
        return cat.small_group(spec)
    except KeyError:
        raise InputError(f"no group file or built-in group named {spec!r}") from None


def load_catalog_arg(spec: Optional[str], config: Config) -> list[FiniteGroup]:
    path = spec or config.catalog_path
    if path is None:
        return cat.small_groups(16)
    d = Path(path)
    if not (d / "index.json").exists():
        raise InputError(f"{path} is not a catalog directory (missing index.json)")
    return cat.load_catalog(d)


def parse_subgroup(G: FiniteGroup, spec: str) -> Subgroup:
    """``center``, ``derived``, ``whole``, ``trivial``, ``gen:l1,l2`` or ``members:i,j``."""
    if spec == "center":
        return center(G)
    if spec == "derived":
        return derived_subgroup(G)
    if spec == "whole":
        return G.whole()
    if spec == "trivial":
        return G.trivial()
    kind, _, rest = spec.partition(":")
    items = [x.strip() for x in rest.split(",") if x.strip()]
    if kind == "gen":
        try:
            return subgroup_closure(G, [G.index_of(x) for x in items])
        except KeyError as exc:
            raise InputError(f"unknown element label {exc}") from None
    if kind == "members":
        members = sorted({int(x) for x in items})
        S = subgroup_closure(G, members)
        if list(S.members) != members:
            raise InputError("listed members do not form a subgroup")
        return S
    raise InputError(f"bad subgroup spec {spec!r}")


def emit(obj, out: Optional[str]) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pmap(config: Config, fn: Callable, items: Sequence):
    """Order-preserving map over at most ``config.threads`` workers."""
    if config.threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=config.threads) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# Commands


def cmd_check_laws(args, config: Config) -> int:
    try:
        C = FinAbsCat.load(args.path)
    except (OSError, json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse category: {exc}") from exc
    report = check_abscat_laws(C, config)
    emit(report.to_dict(), args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_aut(args, config: Config) -> int:
    G = load_group_arg(args.group)
    A = automorphism_group(G, config)
    emit({"group": G.id, "order": G.order, "aut_order": A.order, "base": list(A.base),
          "orbit_sizes": list(A.orbit_sizes), "generators": [list(g) for g in A.generators]}, args.out)
    return EXIT_OK


def cmd_subgroup(args, config: Config) -> int:
    G = load_group_arg(args.group)
    S = parse_subgroup(G, args.subgroup)
    emit({"group": G.id, "order": S.order, "members": list(S.members),
          "labels": [G.elements[m] for m in S.members], "normal": S.is_normal()}, args.out)
    return EXIT_OK


def _char_cmd(args, config: Config, fn) -> int:
    G = load_group_arg(args.group)
    S = parse_subgroup(G, args.subgroup)
    res = fn(G, S, config)
    emit(res.to_json(), args.out)
    return EXIT_OK if res.holds else EXIT_FAIL


def cmd_characteristic(args, config: Config) -> int:
    return _char_cmd(args, config, is_characteristic)


def cmd_fully_invariant(args, config: Config) -> int:
    return _char_cmd(args, config, is_fully_invariant)


def _components(eta: Counital, config: Config) -> list[dict]:
    def one(X):
        S = eta.subgroup(X)
        res = is_characteristic(X, S, config)
        return {"object": X.id, "members": list(S.members), "order": S.order, "certified": res.holds,
                "certificate": res.to_json()}
    return _pmap(config, one, eta.objects())


def cmd_counital(args, config: Config) -> int:
    from . import standard as std
    name = args.name
    if name == "rottlaender":
        if args.p is None or args.q is None or not args.eigs:
            raise InputError("rottlaender needs --p, --q and --eigs")
        spec = std.RottlaenderSpec(args.p, args.q, tuple(int(x) for x in args.eigs.split(",")))
        scan = std.rottlaender_scan(spec, config)
        etas = std.rottlaender_counitals(spec, config)
        out = {"name": name, "seed": config.seed, "scan": scan.to_json(),
               "counitals": [{"name": e.name, "report": check_counital(e, config).to_dict(),
                              "components": _components(e, config)} for e in etas]}
        ok = out["scan"]["match"] and len(scan.characteristic) == spec.m and all(
            c["report"]["ok"] and all(x["certified"] for x in c["components"]) for c in out["counitals"])
        emit(out, args.out)
        return EXIT_OK if ok else EXIT_FAIL
    if name == "baer":
        from .baer import pipeline
        if not args.group or args.p is None:
            raise InputError("baer needs --group and --p")
        G = load_group_arg(args.group)
        res = pipeline(G, args.p, config)
        out = {"name": name, "seed": config.seed, "pipeline": res.to_json()}
        aut = automorphism_group(G, config)
        if aut.order <= config.pair_budget:
            A = build_catalog_cat([G], "isos", config, f"Aut({G.id})")
            eta = counital_from_subgroups("baer", A, "isos", lambda X: res.subgroup, universal=False)
            rep = check_counital(eta, config)
            out["report"] = rep.to_dict()
            ok = rep.ok and res.report.ok
        else:
            out["report"] = {"skipped": f"automorphism group of order {aut.order} exceeds the pair budget"}
            ok = res.report.ok
        emit(out, args.out)
        return EXIT_OK if ok else EXIT_FAIL
    groups = load_catalog_arg(args.catalog, config)
    if name == "derived":
        eta = std.derived_counit(groups, config)
    elif name == "center":
        eta = std.center_counital(groups, config)
    elif name == "verbal":
        if not args.words:
            raise InputError("verbal needs --words")
        eta = std.verbal_counit(groups, [w.strip() for w in args.words.split(";")], config)
    elif name == "marginal":
        eta = std.marginal_counital(groups, args.word or "[x,y]", config)
    else:
        raise InputError(f"unknown counital {name!r}")
    rep = check_counital(eta, config)
    comps = _components(eta, config)
    emit({"name": eta.name, "seed": config.seed, "report": rep.to_dict(), "components": comps}, args.out)
    return EXIT_OK if rep.ok and all(c["certified"] for c in comps) else EXIT_FAIL


def cmd_extend(args, config: Config) -> int:
    groups = load_catalog_arg(args.catalog, config)
    by_id = {G.id: G for G in groups}
    if args.group not in by_id:
        raise InputError(f"{args.group!r} is not in the catalog")
    G = by_id[args.group]
    H = parse_subgroup(G, args.subgroup)
    ext = extend_to_isocore(groups, G, H, config)
    emit({"group": G.id, "subgroup": list(H.members), "characteristic": ext.characteristic,
          "well_defined": ext.well_defined,
          "sigma": [{"object": X.id, "members": list(S.members)} for X, S in ext.sigma.items()],
          "lambda": ext.lam[G].describe() if ext.lam[G] is not None else None,
          "report": ext.report.to_dict()}, args.out)
    return EXIT_OK if ext.report.ok else EXIT_FAIL


def cmd_baer(args, config: Config) -> int:
    from .baer import pipeline
    G = load_group_arg(args.group)
    res = pipeline(G, args.p, config)
    emit(res.to_json(), args.out)
    return EXIT_OK if res.report.ok else EXIT_FAIL


def cmd_verify(args, config: Config) -> int:
    try:
        cert = load_json(args.certificate)
        group = load_json(args.group) if Path(args.group).exists() else load_group_arg(args.group).to_json()
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from exc
    if "pipeline" in cert:
        cert = cert["pipeline"]["certificate"]
    elif "certificate" in cert and "kind" not in cert:
        cert = cert["certificate"]
    v = verify_certificate(cert, group, deep=args.deep)
    emit(v.to_json(), args.out)
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_fixtures(args, config: Config) -> int:
    write_fixtures(Path(args.directory))
    return EXIT_OK


def write_fixtures(d: Path) -> None:
    """The six-object table2 category and a broken copy, small and abelian catalogs, the Rottlaender and Heisenberg groups."""
    d.mkdir(parents=True, exist_ok=True)
    T = table2()
    (d / "table2.json").write_text(dumps(T.to_json()))
    (d / "table2_broken.json").write_text(dumps(T.mutate(*BROKEN_CELL).to_json()))
    small = cat.small_groups(16)
    cat.save_catalog(small, d / "small")
    cat.save_catalog([G for G in small if G.is_abelian], d / "abelian")
    cat.save_group(cat.rottlaender_default(), d / "rottlaender_5_11.json")
    cat.save_group(cat.heisenberg_default(), d / "heisenberg_5.json")


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charcat", description="Characteristic structure of finite groups.")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--exhaustive-limit", type=int, default=16)
    ap.add_argument("--aut-budget", type=int, default=10**7)
    ap.add_argument("--sample-count", type=int, default=10**4)
    ap.add_argument("--pair-budget", type=int, default=10**5)
    ap.add_argument("--catalog-path", default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")
        p.set_defaults(fn=fn)
        return p

    p = add("check-laws", cmd_check_laws, "check the abstract-category laws of a JSON table")
    p.add_argument("path")
    p = add("aut", cmd_aut, "automorphism group summary")
    p.add_argument("group")
    for name, fn, h in (("subgroup", cmd_subgroup, "resolve a subgroup spec"),
                        ("characteristic", cmd_characteristic, "certificate or counterexample"),
                        ("fully-invariant", cmd_fully_invariant, "endomorphism certificate or counterexample")):
        p = add(name, fn, h)
        p.add_argument("group")
        p.add_argument("--subgroup", default="center")
    p = add("counital", cmd_counital, "build and check a named counital")
    p.add_argument("name", choices=["derived", "center", "verbal", "marginal", "rottlaender", "baer"])
    p.add_argument("--catalog", default=None)
    p.add_argument("--words", default=None, help="';'-separated words")
    p.add_argument("--word", default=None)
    p.add_argument("--group", default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--eigs", default=None)
    p = add("extend", cmd_extend, "extend a subgroup to a counital on the iso-core of a catalog")
    p.add_argument("--catalog", default=None)
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", default="center")
    p = add("baer", cmd_baer, "radical pipeline for a class-2 exponent-p group")
    p.add_argument("group")
    p.add_argument("--p", type=int, required=True)
    p = add("verify", cmd_verify, "independently re-check a certificate")
    p.add_argument("certificate")
    p.add_argument("--group", required=True)
    p.add_argument("--deep", action="store_true", help="also recount maps by an independent search")
    p = add("fixtures", cmd_fixtures, "write the shipped fixtures")
    p.add_argument("directory")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1 or min(args.exhaustive_limit, args.aut_budget, args.sample_count, args.pair_budget) < 1:
        print("error: budgets and --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    config = Config(exhaustive_limit=args.exhaustive_limit, aut_budget=args.aut_budget,
                    sample_count=args.sample_count, pair_budget=args.pair_budget, seed=args.seed,
                    catalog_path=args.catalog_path, threads=args.threads)
    try:
        return args.fn(args, config)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, InvalidGroup, InvalidSpecification, NotNormal, UnsupportedCharacteristic,
            FunctorMismatch, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
