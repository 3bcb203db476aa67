"""Independent re-checking of characteristic and fully-invariant certificates.

Nothing here imports the group, homomorphism or automorphism code used to
produce certificates.  The verifier works on raw Cayley tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

CLOSURE_LIMIT = 200_000
DEEP_LIMIT = 128


@dataclass
class Verdict:
    ok: bool = True
    checks: dict = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.errors.append(msg)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "errors": self.errors}


class _Table:
    def __init__(self, d: dict):
        self.id = d["id"]
        self.t = [list(map(int, r)) for r in d["table"]]
        self.n = len(self.t)
        if any(len(r) != self.n for r in self.t):
            raise ValueError("table is not square")
        ids = [e for e in range(self.n) if self.t[e] == list(range(self.n))]
        if not ids:
            raise ValueError("no identity row")
        self.e = ids[0]

    def mul(self, a: int, b: int) -> int:
        return self.t[a][b]

    def generators(self) -> list[int]:
        """Greedy generating set by lowest missing index."""
        seen = {self.e}
        gens: list[int] = []
        for x in range(self.n):
            if x in seen:
                continue
            gens.append(x)
            seen = self._close(gens)
        return gens

    def _close(self, gens: Sequence[int]) -> set[int]:
        seen = {self.e}
        stack = [self.e]
        while stack:
            x = stack.pop()
            for g in gens:
                y = self.t[x][g]
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def orders(self) -> list[int]:
        out = []
        for x in range(self.n):
            k, y = 1, x
            while y != self.e:
                y = self.t[y][x]
                k += 1
            out.append(k)
        return out


def _is_hom(T: _Table, m: Sequence[int]) -> bool:
    t = T.t
    return all(m[t[a][b]] == t[m[a]][m[b]] for a in range(T.n) for b in range(T.n))


def _extend(T: _Table, gens: Sequence[int], imgs: Sequence[int]) -> Optional[list[int]]:
    """The homomorphism sending ``gens`` to ``imgs``; ``None`` if none exists."""
    f = [-1] * T.n
    f[T.e] = T.e
    queue = [T.e]
    for x in queue:
        for g, h in zip(gens, imgs):
            y = T.t[x][g]
            v = T.t[f[x]][h]
            if f[y] == -1:
                f[y] = v
                queue.append(y)
            elif f[y] != v:
                return None
    return f if -1 not in f else None


def _count_maps(T: _Table, bijective: bool, limit: int = 10**7) -> Optional[int]:
    """Count endomorphisms (or automorphisms) by backtracking over generator images."""
    gens = T.generators()
    orders = T.orders()
    cands = [[y for y in range(T.n) if (orders[y] == orders[g] if bijective else orders[g] % orders[y] == 0)]
             for g in gens]
    count = 0
    nodes = 0

    def rec(i: int, imgs: list[int]) -> bool:
        nonlocal count, nodes
        nodes += 1
        if nodes > limit:
            return False
        if i == len(gens):
            f = _extend(T, gens, imgs)
            if f is not None and (not bijective or len(set(f)) == T.n):
                count += 1
            return True
        for y in cands[i]:
            if not rec(i + 1, imgs + [y]):
                return False
        return True

    return count if rec(0, []) else None


def _closure_size(T: _Table, maps: Sequence[Sequence[int]], limit: int) -> Optional[int]:
    ident = tuple(range(T.n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in maps:
                c = tuple(g[a[x]] for x in range(T.n))
                if c not in seen:
                    seen.add(c)
                    if len(seen) > limit:
                        return None
                    nxt.append(c)
        frontier = nxt
    return len(seen)


def verify_certificate(cert: dict, group: dict, deep: bool = False) -> Verdict:
    """Re-check a certificate against the group's Cayley table.

    Checks the witness equations, that the listed maps are homomorphisms
    (bijective for the characteristic kind) and, when small enough, that the
    maps generate a group of the recorded order.  ``deep`` also recounts
    automorphisms or endomorphisms by an independent search.
    """
    v = Verdict()
    try:
        T = _Table(group)
    except (KeyError, ValueError, TypeError) as exc:
        v.fail(f"bad group: {exc}")
        return v
    if "counterexample" in cert:
        return verify_counterexample(cert["counterexample"], group)
    kind = cert.get("kind")
    if kind not in ("characteristic", "fully_invariant"):
        v.fail(f"unknown certificate kind {kind!r}")
        return v
    if cert.get("group") != T.id:
        v.fail(f"certificate is for {cert.get('group')!r}, table is {T.id!r}")
    H = [int(h) for h in cert["subgroup"]]
    Hs = set(H)
    closed = T.e in Hs and all(T.t[a][b] in Hs for a in H for b in H)
    v.checks["subgroup_closed"] = closed
    if not closed:
        v.fail("subgroup is not closed under multiplication")
    maps = [list(map(int, m)) for m in cert["aut_gens"]]
    homs = all(len(m) == T.n and all(0 <= y < T.n for y in m) and _is_hom(T, m) for m in maps)
    v.checks["maps_are_homomorphisms"] = homs
    if not homs:
        v.fail("a listed map is not a homomorphism")
    if kind == "characteristic":
        bij = all(len(set(m)) == T.n for m in maps)
        v.checks["maps_are_bijective"] = bij
        if not bij:
            v.fail("a listed automorphism is not bijective")
    wit = cert.get("witnesses", [])
    ok = len(wit) == len(maps)
    for w in wit:
        i = int(w["gen"])
        pairs = w["pairs"]
        ok = ok and 0 <= i < len(maps) and sorted(int(h) for h, _ in pairs) == sorted(H)
        ok = ok and all(maps[i][int(h)] == int(k) and int(k) in Hs for h, k in pairs)
    v.checks["witness_equations"] = ok
    if not ok:
        v.fail("witness equations fail")
    if not homs:
        return v
    if kind == "characteristic":
        target = int(cert["aut_order"])
        if target <= CLOSURE_LIMIT:
            size = _closure_size(T, maps, CLOSURE_LIMIT)
            v.checks["closure"] = "ok" if size == target else f"mismatch ({size} != {target})"
            if size != target:
                v.fail("generators do not generate a group of the recorded order")
        else:
            v.checks["closure"] = "skipped"
    else:
        distinct = len({tuple(m) for m in maps}) == len(maps) == int(cert["map_count"])
        v.checks["maps_distinct"] = distinct
        if not distinct:
            v.fail("listed endomorphisms are not distinct or miscounted")
    if deep and T.n <= DEEP_LIMIT:
        n = _count_maps(T, kind == "characteristic")
        expect = int(cert["aut_order"] if kind == "characteristic" else cert["map_count"])
        if n is None:
            v.checks["deep"] = "budget"
        else:
            v.checks["deep"] = "ok" if n == expect else f"mismatch ({n} != {expect})"
            if n != expect:
                v.fail("independent count disagrees with the certificate")
    elif deep:
        v.checks["deep"] = "skipped"
    return v


def verify_counterexample(cx: dict, group: dict) -> Verdict:
    v = Verdict()
    T = _Table(group)
    m = list(map(int, cx["map"]))
    H = set(int(h) for h in cx["subgroup"])
    h = int(cx["element"])
    v.checks["map_is_homomorphism"] = len(m) == T.n and _is_hom(T, m)
    if cx.get("kind") == "characteristic":
        v.checks["map_is_bijective"] = len(set(m)) == T.n
    v.checks["element_escapes"] = h in H and m[h] not in H
    for k, val in v.checks.items():
        if not val:
            v.fail(k)
    return v


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def dumps(obj) -> str:
    """Canonical JSON text used for every emitted report and certificate."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"
