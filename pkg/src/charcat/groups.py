"""Finite groups as Cayley tables, their subgroups, quotients and homomorphisms."""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import InvalidGroup, InvalidSpecification, NotNormal
from .fflinalg import Mat, is_prime

FULL_ASSOC_LIMIT = 256


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group given by a multiplication table on ``range(order)``.

    ``table[a][b]`` is the index of ``a * b``.  Two groups are equal when
    they carry the same id and table.
    """

    id: str
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]

    # -- construction -------------------------------------------------------

    @classmethod
    def from_table(cls, id: str, elements: Sequence[str], table: Sequence[Sequence[int]],
                   check: bool = True) -> "FiniteGroup":
        n = len(table)
        tab = tuple(tuple(int(x) for x in row) for row in table)
        elements = tuple(str(e) for e in elements)
        if len(elements) != n or any(len(r) != n for r in tab):
            raise InvalidGroup("table is not square or labels do not match")
        if n == 0:
            raise InvalidGroup("empty table")
        arr = np.array(tab, dtype=np.int64)
        if arr.min() < 0 or arr.max() >= n:
            raise InvalidGroup("table entry out of range")
        ident = next((e for e in range(n) if tab[e] == tuple(range(n))), None)
        if ident is None or any(tab[a][ident] != a for a in range(n)):
            raise InvalidGroup("no two-sided identity")
        inv = [-1] * n
        for a in range(n):
            row = tab[a]
            for b in range(n):
                if row[b] == ident:
                    inv[a] = b
                    break
            if inv[a] < 0 or tab[inv[a]][a] != ident:
                raise InvalidGroup(f"element {elements[a]} has no two-sided inverse")
        if check:
            sorted_rows = np.sort(arr, axis=1)
            if not (sorted_rows == np.arange(n)).all():
                raise InvalidGroup("table rows are not permutations")
            _check_associative(arr)
        return cls(id, elements, tab, ident, tuple(inv))

    @classmethod
    def from_json(cls, d: dict, check: bool = True) -> "FiniteGroup":
        g = cls.from_table(d["id"], d["elements"], d["table"], check=check)
        if "order" in d and int(d["order"]) != g.order:
            raise InvalidGroup("declared order disagrees with table")
        return g

    def to_json(self) -> dict:
        return {"id": self.id, "order": self.order, "elements": list(self.elements),
                "table": [list(r) for r in self.table]}

    def renamed(self, new_id: str) -> "FiniteGroup":
        return FiniteGroup(new_id, self.elements, self.table, self.identity, self.inverse)

    # -- identity and hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.id == other.id and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.id)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.id!r}, order={self.order})"

    # -- arithmetic -------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        out, base = self.identity, a
        while k:
            if k & 1:
                out = self.table[out][base]
            base = self.table[base][base]
            k >>= 1
        return out

    def commutator(self, a: int, b: int) -> int:
        """``[a, b] = a^-1 b^-1 a b``."""
        t, i = self.table, self.inverse
        return t[t[i[a]][i[b]]][t[a][b]]

    def conj(self, a: int, g: int) -> int:
        """``g a g^-1``."""
        t = self.table
        return t[t[g][a]][self.inverse[g]]

    def index_of(self, label: str) -> int:
        return self._label_index[label]

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def np_table(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != self.identity:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def centralizer_sizes(self) -> tuple[int, ...]:
        t = self.np_table
        return tuple(int(x) for x in (t == t.T).sum(axis=1))

    @cached_property
    def exponent(self) -> int:
        out = 1
        for o in set(self.element_orders):
            out = out * o // _gcd(out, o)
        return out

    @cached_property
    def is_abelian(self) -> bool:
        t = self.np_table
        return bool((t == t.T).all())

    @cached_property
    def commutator_table(self) -> np.ndarray:
        t = self.np_table
        inv = np.array(self.inverse)
        left = t[inv[:, None], inv[None, :]]
        return t[left, t]

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _check_associative(arr: np.ndarray) -> None:
    n = len(arr)
    if n <= FULL_ASSOC_LIMIT:
        for a in range(n):
            lhs = arr[arr[a]]          # (a b) c  indexed [b, c]
            rhs = arr[a][arr]          # a (b c)  indexed [b, c]
            if not np.array_equal(lhs, rhs):
                raise InvalidGroup("table is not associative")
        return
    # Light's test: associativity against a generating set is enough.
    gens = _greedy_generators_np(arr)
    for g in gens:
        lhs = arr[arr, g]              # (a b) g
        rhs = arr[:, arr[:, g]]        # a (b g)
        if not np.array_equal(lhs, rhs):
            raise InvalidGroup("table is not associative")


def _greedy_generators_np(arr: np.ndarray) -> list[int]:
    n = len(arr)
    seen = np.zeros(n, dtype=bool)
    ident = int(np.nonzero((arr == np.arange(n)).all(axis=1))[0][0])
    seen[ident] = True
    members = [ident]
    gens: list[int] = []
    for g in range(n):
        if seen[g]:
            continue
        gens.append(g)
        frontier = list(members)
        members_set = set(members)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = int(arr[x, s])
                    if y not in members_set:
                        members_set.add(y)
                        nxt.append(y)
            frontier = nxt
        members = sorted(members_set)
        seen[members] = True
        if len(members) == n:
            break
    return gens


# ---------------------------------------------------------------------------
# Subgroups


def closure(G: FiniteGroup, seed: Iterable[int]) -> tuple[int, ...]:
    """Sorted element indices of the subgroup generated by ``seed``.

    Seeds already inside the current subgroup are skipped, so the working
    generator list stays short.
    """
    members = {G.identity}
    gens: list[int] = []
    t = G.table
    for s in sorted(set(seed)):
        if s in members:
            continue
        gens.append(s)
        frontier = list(members)
        while frontier:
            nxt = []
            for x in frontier:
                row = t[x]
                for g in gens:
                    y = row[g]
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
    return tuple(sorted(members))


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.members)
        object.__setattr__(self, "members", m)
        if list(m) != sorted(set(m)) or not m or m[0] < 0 or m[-1] >= self.parent.order:
            raise ValueError("subgroup members must be sorted distinct element indices")
        if self.parent.identity not in m:
            raise ValueError("subgroup must contain the identity")
        idx = np.array(m)
        mem = np.zeros(self.parent.order, dtype=bool)
        mem[idx] = True
        if not mem[self.parent.np_table[idx[:, None], idx[None, :]]].all():
            raise ValueError("subgroup members are not closed under multiplication")

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.parent == other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.parent.id, self.members))

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.id}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def tag(self) -> str:
        digest = hashlib.sha1(",".join(map(str, self.members)).encode()).hexdigest()[:8]
        return f"s{self.order}_{digest}"

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    @cached_property
    def group(self) -> FiniteGroup:
        """The subgroup as a group in its own right; the parent when improper."""
        if self.is_whole():
            return self.parent
        pos = {m: i for i, m in enumerate(self.members)}
        t = self.parent.table
        table = [[pos[t[a][b]] for b in self.members] for a in self.members]
        return FiniteGroup.from_table(f"{self.parent.id}.{self.tag}",
                                      [self.parent.elements[m] for m in self.members], table, check=False)

    @cached_property
    def inclusion(self) -> "GroupHom":
        return GroupHom(self.group, self.parent, self.members)

    def is_normal(self) -> bool:
        t = self.parent.np_table
        inv = np.array(self.parent.inverse)
        mem = np.zeros(self.parent.order, dtype=bool)
        mem[list(self.members)] = True
        h = np.array(self.members)
        conj = t[t[:, h], inv[:, None]]
        return bool(mem[conj].all())

    def __le__(self, other: "Subgroup") -> bool:
        return self.member_set <= other.member_set


def subgroup_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    return Subgroup(G, closure(G, seed))


def subgroup_from_labels(G: FiniteGroup, labels: Iterable[str]) -> Subgroup:
    return subgroup_closure(G, [G.index_of(x) for x in labels])


@lru_cache(maxsize=4096)
def center(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(i for i, c in enumerate(G.centralizer_sizes) if c == G.order))


@lru_cache(maxsize=4096)
def derived_subgroup(G: FiniteGroup) -> Subgroup:
    vals = np.unique(G.commutator_table)
    return subgroup_closure(G, [int(v) for v in vals])


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    seed = set(seed)
    conj = {G.conj(a, g) for a in seed for g in range(G.order)}
    return subgroup_closure(G, conj)


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, sorted by (order, members)."""
    found = {(G.identity,)}
    frontier = [(G.identity,)]
    while frontier:
        nxt = []
        for mem in frontier:
            ms = set(mem)
            for g in range(G.order):
                if g in ms:
                    continue
                c = closure(G, mem + (g,))
                if c not in found:
                    found.add(c)
                    nxt.append(c)
        frontier = nxt
    return [Subgroup(G, m) for m in sorted(found, key=lambda m: (len(m), m))]


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True, eq=False)
class GroupHom:
    """A map ``domain -> codomain`` stored as the image of every element."""

    domain: FiniteGroup
    codomain: FiniteGroup
    images: tuple[int, ...]

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupHom) and self.images == other.images
                and self.domain.id == other.domain.id and self.codomain.id == other.codomain.id)

    def __hash__(self) -> int:
        return hash((self.domain.id, self.codomain.id, self.images))

    def __repr__(self) -> str:
        return f"GroupHom({self.domain.id}->{self.codomain.id}, {list(self.images)})"

    def __call__(self, x: int) -> int:
        return self.images[x]

    def describe(self) -> str:
        return f"{self.domain.id}->{self.codomain.id}:{','.join(map(str, self.images))}"

    @classmethod
    def identity(cls, G: FiniteGroup) -> "GroupHom":
        return cls(G, G, tuple(range(G.order)))

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self o other``."""
        if other.codomain.id != self.domain.id:
            raise ValueError("maps are not composable")
        im = self.images
        return GroupHom(other.domain, self.codomain, tuple(map(im.__getitem__, other.images)))

    def is_homomorphism(self) -> bool:
        G, H = self.domain, self.codomain
        f = np.array(self.images)
        return bool((f[G.np_table] == H.np_table[f[:, None], f[None, :]]).all())

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.domain.order

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.codomain.order

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "GroupHom":
        inv = [0] * self.codomain.order
        for x, y in enumerate(self.images):
            inv[y] = x
        return GroupHom(self.codomain, self.domain, tuple(inv))

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, tuple(sorted(set(self.images))))

    def kernel(self) -> Subgroup:
        e = self.codomain.identity
        return Subgroup(self.domain, tuple(x for x, y in enumerate(self.images) if y == e))

    def image_of(self, S: Subgroup) -> Subgroup:
        return Subgroup(self.codomain, tuple(sorted({self.images[x] for x in S.members})))

    def restrict(self, S: Subgroup, T: Subgroup) -> Optional["GroupHom"]:
        """The map ``S -> T`` induced by ``self``; ``None`` if ``self(S)`` escapes ``T``."""
        if S.parent != self.domain or T.parent != self.codomain:
            raise ValueError("subgroups do not live in the right groups")
        pos = {m: i for i, m in enumerate(T.members)}
        out = []
        for m in S.members:
            y = self.images[m]
            if y not in pos:
                return None
            out.append(pos[y])
        return GroupHom(S.group, T.group, tuple(out))


def transport(H: Subgroup, alpha: GroupHom) -> Subgroup:
    if H.parent != alpha.domain:
        raise ValueError("subgroup does not live in the domain")
    return alpha.image_of(H)


# ---------------------------------------------------------------------------
# Quotients


@dataclass(frozen=True, eq=False)
class Quotient:
    group: FiniteGroup
    projection: GroupHom
    normal: Subgroup
    coset_of: tuple[int, ...]
    representatives: tuple[int, ...]


def quotient(G: FiniteGroup, N: Subgroup) -> Quotient:
    if N.parent != G:
        raise ValueError("subgroup of a different group")
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.id}")
    if N.order == 1:
        return Quotient(G, GroupHom.identity(G), N, tuple(range(G.order)), tuple(range(G.order)))
    coset_of = [-1] * G.order
    reps = []
    t = G.table
    for g in range(G.order):
        if coset_of[g] >= 0:
            continue
        idx = len(reps)
        reps.append(g)
        for n in N.members:
            coset_of[t[g][n]] = idx
    table = [[coset_of[t[a][b]] for b in reps] for a in reps]
    labels = [f"[{G.elements[r]}]" for r in reps]
    Q = FiniteGroup.from_table(f"{G.id}/{N.tag}", labels, table, check=False)
    return Quotient(Q, GroupHom(G, Q, tuple(coset_of)), N, tuple(coset_of), tuple(reps))


def noether_factor(f: GroupHom):
    """Split ``f`` as ``incl o psi o proj`` through ``G/ker f``.

    Returns ``(proj, psi, incl)`` with ``psi`` an isomorphism onto the image.
    """
    K = f.kernel()
    Qd = quotient(f.domain, K)
    im = f.image()
    pos = {m: i for i, m in enumerate(im.members)}
    psi_images = tuple(pos[f.images[r]] for r in Qd.representatives)
    psi = GroupHom(Qd.group, im.group, psi_images)
    return Qd.projection, psi, im.inclusion


def induced_on_quotients(f: GroupHom, qx: Quotient, qy: Quotient) -> Optional[GroupHom]:
    """``X/N -> Y/M`` induced by ``f``; ``None`` if ``f(N)`` is not inside ``M``."""
    if any(qy.coset_of[f.images[n]] != qy.coset_of[f.codomain.identity] for n in qx.normal.members):
        return None
    return GroupHom(qx.group, qy.group, tuple(qy.coset_of[f.images[r]] for r in qx.representatives))


# ---------------------------------------------------------------------------
# Generating sequences


def min_generating_sequence(G: FiniteGroup) -> tuple[int, ...]:
    """Greedy generating sequence: add the element enlarging the closure most.

    Ties go to the lowest index.
    """
    return _min_gens_cached(G)


_GEN_CACHE: dict[tuple[str, int], tuple[int, ...]] = {}


def _min_gens_cached(G: FiniteGroup) -> tuple[int, ...]:
    key = (G.id, hash(G.table))
    if key in _GEN_CACHE:
        return _GEN_CACHE[key]
    gens: list[int] = []
    current = (G.identity,)
    while len(current) < G.order:
        cur_set = set(current)
        best, best_size = None, -1
        for g in range(G.order):
            if g in cur_set:
                continue
            size = len(_extend_closure(G, current, gens + [g]))
            if size > best_size:
                best, best_size = g, size
                if size == G.order:
                    break
        gens.append(best)
        current = _extend_closure(G, current, gens)
    out = tuple(gens)
    _GEN_CACHE[key] = out
    return out


def _extend_closure(G: FiniteGroup, base: Sequence[int], gens: Sequence[int]) -> tuple[int, ...]:
    members = set(base)
    frontier = list(base)
    t = G.table
    while frontier:
        nxt = []
        for x in frontier:
            row = t[x]
            for s in gens:
                y = row[s]
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(members))


# ---------------------------------------------------------------------------
# Constructors


def _power_label(sym: str, k: int) -> str:
    return "" if k == 0 else (sym if k == 1 else f"{sym}^{k}")


def _join_labels(parts: Sequence[str]) -> str:
    s = "".join(parts)
    return s or "1"


def cyclic(n: int, id: Optional[str] = None) -> FiniteGroup:
    if n < 1:
        raise InvalidSpecification("cyclic order must be positive")
    labels = [_join_labels([_power_label("a", i)]) for i in range(n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup.from_table(id or f"C{n}", labels, table)


def abelian(moduli: Sequence[int], id: Optional[str] = None) -> FiniteGroup:
    """Direct product of cyclic groups of the given orders, coordinates lexicographic."""
    moduli = list(moduli)
    if not moduli or any(m < 1 for m in moduli):
        raise InvalidSpecification("moduli must be positive")
    vecs = list(itertools.product(*[range(m) for m in moduli]))
    pos = {v: i for i, v in enumerate(vecs)}
    table = [[pos[tuple((a + b) % m for a, b, m in zip(u, v, moduli))] for v in vecs] for u in vecs]
    labels = ["(" + ",".join(map(str, v)) + ")" for v in vecs]
    return FiniteGroup.from_table(id or "x".join(f"C{m}" for m in moduli), labels, table)


def elementary_abelian(p: int, m: int, id: Optional[str] = None) -> FiniteGroup:
    if not is_prime(p):
        raise InvalidSpecification(f"{p} is not prime")
    return abelian([p] * m, id or (f"C{p}^{m}" if m > 1 else f"C{p}"))


def dihedral(n: int, id: Optional[str] = None) -> FiniteGroup:
    """Symmetries of an ``n``-gon (order ``2n``); elements ``r^i s^j``."""
    if n < 1:
        raise InvalidSpecification("dihedral parameter must be positive")
    return metacyclic(n, 2, n - 1 if n > 1 else 0, 0, id=id or f"D{n}", syms=("r", "s"))


def metacyclic(m: int, n: int, r: int, s: int, id: Optional[str] = None,
               syms: tuple[str, str] = ("a", "b")) -> FiniteGroup:
    """``<a, b | a^m = 1, b^n = a^s, b a b^-1 = a^r>``, elements ``a^i b^j``.

    Requires ``r^n = 1`` and ``r s = s`` modulo ``m``.
    """
    if pow(r, n, m) != 1 % m or (r * s - s) % m:
        raise InvalidSpecification("metacyclic parameters are inconsistent")
    elems = [(i, j) for j in range(n) for i in range(m)]
    elems.sort()
    pos = {e: k for k, e in enumerate(elems)}

    def mul(x, y):
        i1, j1 = x
        i2, j2 = y
        i = i1 + pow(r, j1, m) * i2
        j = j1 + j2
        if j >= n:
            j -= n
            i += s
        return pos[(i % m, j)]

    table = [[mul(x, y) for y in elems] for x in elems]
    labels = [_join_labels([_power_label(syms[0], i), _power_label(syms[1], j)]) for i, j in elems]
    return FiniteGroup.from_table(id or f"M({m},{n},{r},{s})", labels, table)


def quaternion(order: int = 8, id: Optional[str] = None) -> FiniteGroup:
    """Generalised quaternion group of 2-power order at least 8."""
    if order < 8 or order & (order - 1):
        raise InvalidSpecification("quaternion order must be a power of 2, at least 8")
    m = order // 2
    return metacyclic(m, 2, m - 1, m // 2, id=id or f"Q{order}", syms=("i", "j"))


def _cycle_label(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + "".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) or "()"


def permutation_group(perms: Sequence[Sequence[int]], id: str) -> FiniteGroup:
    """Group of permutations of ``range(n)``; ``(p*q)(i) = p(q(i))``."""
    perms = sorted({tuple(p) for p in perms})
    pos = {p: k for k, p in enumerate(perms)}
    table = [[pos[tuple(a[b[i]] for i in range(len(a)))] for b in perms] for a in perms]
    return FiniteGroup.from_table(id, [_cycle_label(p) for p in perms], table)


def symmetric(n: int, id: Optional[str] = None) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise InvalidSpecification("symmetric groups supported for n <= 5")
    return permutation_group(list(itertools.permutations(range(n))), id or f"S{n}")


def alternating(n: int, id: Optional[str] = None) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise InvalidSpecification("alternating groups supported for n <= 5")

    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0

    return permutation_group([p for p in itertools.permutations(range(n)) if even(p)], id or f"A{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, id: Optional[str] = None) -> FiniteGroup:
    pairs = [(a, b) for a in range(G.order) for b in range(H.order)]
    n = H.order
    table = [[G.table[a][c] * n + H.table[b][d] for c, d in pairs] for a, b in pairs]
    labels = [f"({G.elements[a]},{H.elements[b]})" for a, b in pairs]
    return FiniteGroup.from_table(id or f"{G.id}x{H.id}", labels, table)


def semidirect_abelian(moduli: Sequence[int], action: Sequence[Sequence[int]], m: int,
                       id: Optional[str] = None, tsym: str = "t") -> FiniteGroup:
    """``(Z_n1 x ... x Z_nk) : C_m`` with the generator ``t`` acting by ``action``.

    Elements are pairs ``(t^i, v)`` standing for ``t^i v``; so
    ``(t^i, v)(t^j, w) = (t^{i+j}, A^{-j} v + w)`` where ``t w t^-1 = A w``.
    """
    moduli = list(moduli)
    k = len(moduli)
    A = [list(r) for r in action]
    if len(A) != k or any(len(r) != k for r in A):
        raise InvalidSpecification("action matrix has the wrong shape")
    for c in range(k):
        for r_ in range(k):
            if (A[r_][c] * moduli[c]) % moduli[r_]:
                raise InvalidSpecification("action is not well defined on the abelian group")

    def apply(M, v):
        return tuple(sum(M[r_][c] * v[c] for c in range(k)) % moduli[r_] for r_ in range(k))

    vecs = list(itertools.product(*[range(q) for q in moduli]))
    # powers of the action as maps on vectors
    powers = [{v: v for v in vecs}]
    for _ in range(m):
        prev = powers[-1]
        powers.append({v: apply(A, prev[v]) for v in vecs})
    if any(powers[m][v] != v for v in vecs):
        raise InvalidSpecification("action does not have order dividing m")
    if len(set(powers[1].values())) != len(vecs):
        raise InvalidSpecification("action is not invertible")
    # A^{-j} = A^{m-j}
    elems = [(i, v) for i in range(m) for v in vecs]
    pos = {e: n for n, e in enumerate(elems)}
    table = []
    for i, v in elems:
        row = []
        for j, w in elems:
            av = powers[(m - j) % m][v]
            row.append(pos[((i + j) % m, tuple((a + b) % q for a, b, q in zip(av, w, moduli)))])
        table.append(row)
    labels = [f"({_power_label(tsym, i) or '1'},({','.join(map(str, v))}))" for i, v in elems]
    return FiniteGroup.from_table(id or f"SD({moduli},{m})", labels, table)


def heisenberg(p: int, id: Optional[str] = None) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over F_p, as ``(Z_p^2) : Z_p``."""
    if not is_prime(p):
        raise InvalidSpecification(f"{p} is not prime")
    return semidirect_abelian([p, p], [[1, 0], [1, 1]], p, id=id or f"Heis{p}")


def relabel(G: FiniteGroup, perm: Sequence[int], id: str) -> FiniteGroup:
    """Same group with element ``i`` moved to index ``perm[i]``."""
    n = G.order
    inv = [0] * n
    for i, j in enumerate(perm):
        inv[j] = i
    table = [[perm[G.table[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    labels = [G.elements[inv[a]] for a in range(n)]
    return FiniteGroup.from_table(id, labels, table)


def make_group(kind: str, **params) -> FiniteGroup:
    """Build a group from a family name and parameters."""
    kind = kind.lower()
    builders = {
        "cyclic": lambda n, id=None: cyclic(n, id),
        "dihedral": lambda n, id=None: dihedral(n, id),
        "symmetric": lambda n, id=None: symmetric(n, id),
        "alternating": lambda n, id=None: alternating(n, id),
        "quaternion": lambda order=8, id=None: quaternion(order, id),
        "elementary_abelian": lambda p, m, id=None: elementary_abelian(p, m, id),
        "abelian": lambda moduli, id=None: abelian(moduli, id),
        "metacyclic": lambda m, n, r, s, id=None: metacyclic(m, n, r, s, id),
        "heisenberg": lambda p, id=None: heisenberg(p, id),
        "semidirect": _semidirect_from_theta,
    }
    if kind == "direct_product":
        return direct_product(params["left"], params["right"], params.get("id"))
    if kind not in builders:
        raise InvalidSpecification(f"unknown group family {kind!r}")
    return builders[kind](**params)


def _semidirect_from_theta(p: int, q: int, theta: Mat, id: Optional[str] = None) -> FiniteGroup:
    if theta.p != q or theta.rows != theta.cols:
        raise InvalidSpecification("theta must be a square matrix over F_q")
    return semidirect_abelian([q] * theta.rows, theta.as_rows(), p, id=id)


def group_fingerprint(G: FiniteGroup) -> str:
    """Stable digest of the Cayley table and labels."""
    return hashlib.sha256(json.dumps(G.to_json(), sort_keys=True).encode()).hexdigest()
