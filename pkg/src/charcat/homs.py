"""Homomorphism search between Cayley-table groups.

Maps are found by choosing images for a generating sequence of the
domain.  Each new generator extends the partial map over a precomputed
spanning tree, and the remaining Cayley relations of the subgroup
generated so far are checked at once, which prunes most bad choices early.

Automorphism groups are computed as a stabiliser chain along the
generating sequence.  Orbits are closed under the automorphisms already
found, so only one search per orbit (or per rejected orbit) is needed.
The order is the product of the orbit lengths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Iterator, Optional, Sequence

import numpy as np

from .config import DEFAULT, BudgetExceeded, Config
from .groups import FiniteGroup, GroupHom, center, closure, derived_subgroup, min_generating_sequence

MAX_MATERIALISED = 200_000


class _Plan:
    """Spanning trees and residual relations for each prefix of the generators."""

    def __init__(self, G: FiniteGroup, gens: Sequence[int]):
        self.G = G
        self.gens = tuple(gens)
        t = G.table
        members = {G.identity}
        order_list = [G.identity]
        self.levels: list[tuple[list[tuple[int, int, int]], list[tuple[int, int, int]]]] = []
        for i, g in enumerate(self.gens):
            tree: list[tuple[int, int, int]] = []
            checks: list[tuple[int, int, int]] = []
            old = list(order_list)
            queue = [(e, (i,)) for e in old]
            pos = 0
            while pos < len(queue):
                e, js = queue[pos]
                pos += 1
                for j in js:
                    target = t[e][self.gens[j]]
                    if target in members:
                        checks.append((e, j, target))
                    else:
                        members.add(target)
                        order_list.append(target)
                        tree.append((target, e, j))
                        queue.append((target, tuple(range(i + 1))))
            self.levels.append((tree, checks))
        if len(members) != G.order:
            raise ValueError("sequence does not generate the group")


def search_base(G: FiniteGroup) -> tuple[int, ...]:
    """The greedy generating sequence with redundant members removed."""
    gens = list(min_generating_sequence(G))
    i = 0
    while i < len(gens):
        rest = gens[:i] + gens[i + 1:]
        if len(closure(G, rest)) == G.order:
            gens = rest
        else:
            i += 1
    return tuple(gens)


@lru_cache(maxsize=512)
def _plan_for(G: FiniteGroup) -> _Plan:
    return _Plan(G, search_base(G))


@lru_cache(maxsize=512)
def element_signatures(G: FiniteGroup) -> tuple[tuple[int, int, bool, int], ...]:
    """Per-element isomorphism invariants.

    Order, centraliser size, membership of the derived subgroup and the
    order of the normal closure are all preserved by isomorphisms.
    """
    t = G.np_table
    inv = np.array(G.inverse)
    derived = derived_subgroup(G).member_set
    out = []
    for x in range(G.order):
        cls = {int(y) for y in t[t[:, x], inv]}
        out.append((G.element_orders[x], G.centralizer_sizes[x], x in derived, len(closure(G, cls))))
    return tuple(out)


def _signature(G: FiniteGroup, x: int) -> tuple[int, int, bool, int]:
    return element_signatures(G)[x]


def _candidates(G: FiniteGroup, H: FiniteGroup, g: int, iso: bool) -> list[int]:
    if iso:
        sig = _signature(G, g)
        return [h for h in range(H.order) if _signature(H, h) == sig]
    o = G.element_orders[g]
    return [h for h in range(H.order) if o % H.element_orders[h] == 0]


class _Counter:
    def __init__(self, limit: int, what: str):
        self.n = 0
        self.limit = limit
        self.what = what

    def tick(self) -> None:
        self.n += 1
        if self.n > self.limit:
            raise BudgetExceeded(self.what, self.limit)


def _search(plan: _Plan, H: FiniteGroup, cands: Sequence[Sequence[int]], iso: bool,
            counter: _Counter) -> Iterator[tuple[int, ...]]:
    G = plan.G
    k = len(plan.gens)
    img = [-1] * G.order
    img[G.identity] = H.identity
    used = [False] * H.order
    used[H.identity] = True
    gimg = [0] * k
    Ht = H.table

    def rec(level: int):
        if level == k:
            yield tuple(img)
            return
        tree, checks = plan.levels[level]
        for c in cands[level]:
            counter.tick()
            gimg[level] = c
            ok = True
            assigned = []
            for new, parent, j in tree:
                v = Ht[img[parent]][gimg[j]]
                if iso and used[v]:
                    ok = False
                    break
                img[new] = v
                if iso:
                    used[v] = True
                    assigned.append(v)
            if ok:
                for e, j, target in checks:
                    if Ht[img[e]][gimg[j]] != img[target]:
                        ok = False
                        break
            if ok:
                yield from rec(level + 1)
            for v in assigned:
                used[v] = False

    if G.order == 1:
        yield (H.identity,)
        return
    yield from rec(0)


# ---------------------------------------------------------------------------
# Invariants


def iso_invariants(G: FiniteGroup) -> tuple:
    """Cheap isomorphism invariants used to reject pairs before searching."""
    sig = sorted(_signature(G, x) for x in range(G.order))
    return (G.order, tuple(sig), center(G).order, derived_subgroup(G).order, G.exponent)


def may_be_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return iso_invariants(G) == iso_invariants(H)


# ---------------------------------------------------------------------------
# Public search entry points


def iter_homs(G: FiniteGroup, H: FiniteGroup, config: Config = DEFAULT) -> Iterator[GroupHom]:
    if G.order > config.exhaustive_limit:
        raise BudgetExceeded(f"all-homomorphism enumeration from order {G.order}", config.exhaustive_limit)
    plan = _plan_for(G)
    cands = [_candidates(G, H, g, False) for g in plan.gens]
    counter = _Counter(config.aut_budget, "homomorphism search")
    for images in _search(plan, H, cands, False, counter):
        yield GroupHom(G, H, images)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, config: Config = DEFAULT) -> Optional[GroupHom]:
    if G.order != H.order or not may_be_isomorphic(G, H):
        return None
    if G.order > config.iso_limit:
        raise BudgetExceeded(f"isomorphism search at order {G.order}", config.iso_limit)
    plan = _plan_for(G)
    cands = [_candidates(G, H, g, True) for g in plan.gens]
    counter = _Counter(config.aut_budget, "isomorphism search")
    images = next(_search(plan, H, cands, True, counter), None)
    return None if images is None else GroupHom(G, H, images)


def hom_enumerate(G: FiniteGroup, H: FiniteGroup, iso_only: bool = False,
                  config: Config = DEFAULT) -> list[GroupHom]:
    """All homomorphisms (or all isomorphisms) ``G -> H``, sorted by image tuple."""
    if not iso_only:
        return sorted(iter_homs(G, H, config), key=lambda f: f.images)
    phi = find_isomorphism(G, H, config)
    if phi is None:
        return []
    auts = automorphism_group(G, config).elements()
    base = np.array(phi.images)
    out = [GroupHom(G, H, tuple(base[a].tolist())) for a in auts]
    return sorted(out, key=lambda f: f.images)


def endomorphisms(G: FiniteGroup, config: Config = DEFAULT) -> list[GroupHom]:
    return hom_enumerate(G, G, False, config)


def epimorphisms(G: FiniteGroup, H: FiniteGroup, config: Config = DEFAULT) -> list[GroupHom]:
    if H.order > G.order or G.order % H.order:
        return []
    return [f for f in hom_enumerate(G, H, False, config) if f.is_surjective()]


def monomorphisms(G: FiniteGroup, H: FiniteGroup, config: Config = DEFAULT) -> list[GroupHom]:
    if H.order % G.order:
        return []
    return [f for f in hom_enumerate(G, H, False, config) if f.is_injective()]


# ---------------------------------------------------------------------------
# Automorphism groups


@dataclass(frozen=True)
class AutGroup:
    """Automorphism group of ``group`` as a stabiliser chain.

    ``generators`` generate the whole group; ``orbit_sizes[i]`` is the
    length of the orbit of ``base[i]`` under the pointwise stabiliser of
    ``base[:i]``.
    """

    group: FiniteGroup
    base: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    orbit_sizes: tuple[int, ...]
    nodes: int

    @property
    def order(self) -> int:
        return prod(self.orbit_sizes)

    def generator_homs(self) -> list[GroupHom]:
        return [GroupHom(self.group, self.group, g) for g in self.generators]

    def elements(self, limit: int = MAX_MATERIALISED) -> list[np.ndarray]:
        """Every automorphism as an image array, sorted lexicographically."""
        if self.order > limit:
            raise BudgetExceeded(f"materialising {self.order} automorphisms", limit)
        n = self.group.order
        ident = np.arange(n, dtype=np.int32)
        gens = [np.array(g, dtype=np.int32) for g in self.generators]
        seen = {ident.tobytes(): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = a[g]
                    key = b.tobytes()
                    if key not in seen:
                        seen[key] = b
                        nxt.append(b)
            frontier = nxt
        if len(seen) != self.order:
            raise AssertionError("automorphism closure disagrees with the chain order")
        out = list(seen.values())
        out.sort(key=lambda a: tuple(a.tolist()))
        return out

    def element_homs(self, limit: int = MAX_MATERIALISED) -> list[GroupHom]:
        return [GroupHom(self.group, self.group, tuple(a.tolist())) for a in self.elements(limit)]


def _orbit(point: int, gens: Sequence[tuple[int, ...]]) -> set[int]:
    orb = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in orb:
                    orb.add(y)
                    nxt.append(y)
        frontier = nxt
    return orb


_AUT_CACHE: dict[tuple[str, int], AutGroup] = {}


def automorphism_group(G: FiniteGroup, config: Config = DEFAULT) -> AutGroup:
    if G.order > config.iso_limit:
        raise BudgetExceeded(f"automorphism search at order {G.order}", config.iso_limit)
    key = (G.id, hash(G.table))
    cached = _AUT_CACHE.get(key)
    if cached is not None and cached.group == G:
        if cached.nodes > config.aut_budget:
            raise BudgetExceeded("automorphism search", config.aut_budget)
        return cached
    plan = _plan_for(G)
    base = plan.gens
    k = len(base)
    cands = [_candidates(G, G, g, True) for g in base]
    counter = _Counter(config.aut_budget, "automorphism search")
    found: list[tuple[int, tuple[int, ...]]] = []
    sizes = [1] * k
    for i in reversed(range(k)):
        level_gens = [a for lvl, a in found if lvl >= i]
        delta = _orbit(base[i], level_gens)
        failed: set[int] = set()
        prefix = [[b] for b in base[:i]]
        for c in cands[i]:
            if c in delta or c in failed:
                continue
            trial = prefix + [[c]] + cands[i + 1:]
            images = next(_search(plan, G, trial, True, counter), None)
            if images is None:
                failed |= _orbit(c, level_gens)
            else:
                found.append((i, images))
                level_gens.append(images)
                delta = _orbit(base[i], level_gens)
        sizes[i] = len(delta)
    gens = tuple(dict.fromkeys(a for _, a in sorted(found, key=lambda t: (t[0], t[1]))))
    out = AutGroup(G, base, gens, tuple(sizes), counter.n)
    _AUT_CACHE[key] = out
    return out


def automorphisms(G: FiniteGroup, config: Config = DEFAULT) -> list[GroupHom]:
    return automorphism_group(G, config).element_homs()
