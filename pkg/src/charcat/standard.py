"""Words, verbal and marginal subgroups, the standard counitals, Rottlaender groups and isoclinism."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .abscat import build_catalog_cat
from .config import DEFAULT, BudgetExceeded, Config, InvalidSpecification
from .counitals import Counital, Unital, counital_from_subgroups, is_characteristic, kernel_of_unital
from .fflinalg import Fp, Mat, eigenspace, is_prime
from .groups import (FiniteGroup, GroupHom, Subgroup, center, derived_subgroup, quotient, semidirect_abelian,
                     subgroup_closure)
from .homs import automorphism_group, hom_enumerate
from .reports import LawCheck, LawReport

# ---------------------------------------------------------------------------
# Words
#
# Trees are nested tuples: ("one",), ("var", name), ("mul", a, b), ("inv", a),
# ("pow", a, k).  Commutators are left normed, [a,b] = a^-1 b^-1 a b.

_TOKEN = re.compile(r"\s*(?:([A-Za-z][0-9]*)|(\^-?[0-9]+)|(1)|([\[\](),]))")


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Word:
    text: str
    tree: tuple = field(compare=False)
    variables: tuple[str, ...] = field(compare=False)

    @property
    def arity(self) -> int:
        return len(self.variables)

    def __str__(self) -> str:
        return self.text


def _tokens(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"unexpected character at {pos} in {text!r}")
        kind = ("var", "pow", "one", "punct")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_word(text: str) -> Word:
    """Parse ``x``, ``y^-1``, ``1``, juxtaposition, parentheses and ``[a,b,...]``."""
    toks = _tokens(text)
    i = 0
    names: list[str] = []

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def product(stop: set) -> tuple:
        acc: tuple = ("one",)
        while True:
            kind, val = peek()
            if kind is None or (kind == "punct" and val in stop):
                return acc
            f = factor()
            acc = f if acc == ("one",) else ("mul", acc, f)

    def factor() -> tuple:
        nonlocal i
        kind, val = peek()
        if kind == "var":
            i += 1
            if val not in names:
                names.append(val)
            node: tuple = ("var", val)
        elif kind == "one":
            i += 1
            node = ("one",)
        elif kind == "punct" and val == "(":
            i += 1
            node = product({")"})
            expect(")")
        elif kind == "punct" and val == "[":
            i += 1
            parts = [product({",", "]"})]
            while peek() == ("punct", ","):
                i += 1
                parts.append(product({",", "]"}))
            expect("]")
            if len(parts) < 2:
                raise WordSyntaxError("commutator needs at least two entries")
            node = parts[0]
            for b in parts[1:]:
                node = ("mul", ("mul", ("inv", node), ("inv", b)), ("mul", node, b))
        else:
            raise WordSyntaxError(f"unexpected token {val!r} in {text!r}")
        while peek()[0] == "pow":
            k = int(peek()[1][1:])
            i += 1
            node = ("inv", node) if k == -1 else ("pow", node, k)
        return node

    def expect(c: str) -> None:
        nonlocal i
        if peek() != ("punct", c):
            raise WordSyntaxError(f"expected {c!r} in {text!r}")
        i += 1

    tree = product(set())
    if i != len(toks):
        raise WordSyntaxError(f"trailing input in {text!r}")
    return Word(text.strip(), tree, tuple(names))


WordLike = Union[Word, str]


def as_word(w: WordLike) -> Word:
    return w if isinstance(w, Word) else parse_word(w)


def _eval(tree: tuple, G: FiniteGroup, env) -> object:
    """Evaluate over ints or numpy index arrays alike."""
    op = tree[0]
    if op == "var":
        return env[tree[1]]
    if op == "one":
        return G.identity
    if op == "mul":
        a, b = _eval(tree[1], G, env), _eval(tree[2], G, env)
        return G.np_table[a, b] if isinstance(a, np.ndarray) or isinstance(b, np.ndarray) else G.table[a][b]
    if op == "inv":
        a = _eval(tree[1], G, env)
        return np.asarray(G.inverse)[a] if isinstance(a, np.ndarray) else G.inverse[a]
    a = _eval(tree[1], G, env)
    k = tree[2]
    if isinstance(a, np.ndarray):
        base = a if k >= 0 else np.asarray(G.inverse)[a]
        out = np.full_like(base, G.identity)
        for _ in range(abs(k)):
            out = G.np_table[out, base]
        return out
    return G.power(a, k)


def eval_word(w: WordLike, G: FiniteGroup, assignment: Union[Mapping[str, int], Sequence[int]]) -> int:
    """Value of ``w`` at the given assignment of element indices."""
    w = as_word(w)
    if not isinstance(assignment, Mapping):
        assignment = dict(zip(w.variables, assignment))
    missing = [v for v in w.variables if v not in assignment]
    if missing:
        raise KeyError(f"unbound variable {missing[0]!r}")
    return int(_eval(w.tree, G, assignment))


def _check_scan(G: FiniteGroup, n: int, extra: int, config: Config) -> None:
    if n > config.word_arity:
        raise BudgetExceeded(f"word arity {n}", config.word_arity)
    if G.order > config.word_order and G.order ** (n + extra) > config.pair_budget:
        raise BudgetExceeded(f"word scan over {G.id}", config.word_order)


def word_values(w: WordLike, G: FiniteGroup, config: Config = DEFAULT) -> np.ndarray:
    """Array of shape ``(|G|,)*n`` with ``out[g1,...,gn] = w(g1,...,gn)``."""
    w = as_word(w)
    n = w.arity
    _check_scan(G, n, 0, config)
    if n == 0:
        return np.asarray(_eval(w.tree, G, {}))
    grids = np.indices((G.order,) * n)
    env = {v: grids[k] for k, v in enumerate(w.variables)}
    out = _eval(w.tree, G, env)
    return np.broadcast_to(np.asarray(out), (G.order,) * n)


def verbal_subgroup(G: FiniteGroup, W: Iterable[WordLike], config: Config = DEFAULT) -> Subgroup:
    seeds: set[int] = set()
    for w in W:
        seeds.update(int(x) for x in np.unique(word_values(w, G, config)))
    return subgroup_closure(G, sorted(seeds))


def in_variety(G: FiniteGroup, W: Iterable[WordLike], config: Config = DEFAULT) -> bool:
    return all(bool(np.all(word_values(w, G, config) == G.identity)) for w in W)


def marginal_subgroup(G: FiniteGroup, w: WordLike, config: Config = DEFAULT) -> Subgroup:
    """Hall's marginal subgroup: ``z`` with ``w(.., g_i z, ..) = w(.., g_i, ..)`` for every slot."""
    w = as_word(w)
    n = w.arity
    _check_scan(G, n, 1, config)
    vals = word_values(w, G, config)
    t = G.np_table
    members = []
    for z in range(G.order):
        col = t[:, z]
        if all(np.array_equal(np.take(vals, col, axis=i), vals) for i in range(n)):
            members.append(z)
    S = Subgroup(G, tuple(members))
    if not S.is_normal():
        raise AssertionError(f"marginal subgroup of {G.id} is not normal")
    return S


def check_marginal_nondegenerate(G: FiniteGroup, w: WordLike, config: Config = DEFAULT) -> LawReport:
    """The word map on ``(G/w*(G))^n`` is well defined and separates cosets slotwise.

    Slot ``i`` separates when two elements giving equal values for every
    choice of the other entries lie in the same coset.
    """
    w = as_word(w)
    M = marginal_subgroup(G, w, config)
    Q = quotient(G, M)
    vals = word_values(w, G, config)
    report = LawReport(f"marginal[{w}]@{G.id}", seed=config.seed)
    well = LawCheck("well_defined")
    sep = LawCheck("nondegenerate")
    for i in range(w.arity):
        rows = np.moveaxis(vals, i, 0).reshape(G.order, -1)
        by_row: dict = {}
        for a in range(G.order):
            by_row.setdefault(rows[a].tobytes(), []).append(a)
        by_coset: dict = {}
        for a in range(G.order):
            by_coset.setdefault(Q.coset_of[a], set()).add(rows[a].tobytes())
        for c, keys in sorted(by_coset.items()):
            well.record(len(keys) == 1, (i, c))
        for cls in by_row.values():
            sep.record(len({Q.coset_of[a] for a in cls}) == 1, (i, cls[0]))
    report.add(well.result())
    report.add(sep.result())
    return report


# ---------------------------------------------------------------------------
# Standard counitals and unitals


def center_counital(catalog: Sequence[FiniteGroup], config: Config = DEFAULT) -> Counital:
    C = build_catalog_cat(catalog, "isos", config, "iso-core")
    return counital_from_subgroups("center", C, "isos", center, flat=True)


def derived_counit(catalog: Sequence[FiniteGroup], config: Config = DEFAULT) -> Counital:
    C = build_catalog_cat(catalog, "all-homs", config, "all-homs")
    return counital_from_subgroups("derived", C, "all-homs", derived_subgroup, flat=True)


def abelianization_unit(catalog: Sequence[FiniteGroup], config: Config = DEFAULT) -> Unital:
    C = build_catalog_cat(catalog, "all-homs", config, "all-homs")
    return Unital("abelianization", C, "all-homs", lambda X: quotient(X, derived_subgroup(X)).projection)


def verbal_unit(catalog: Sequence[FiniteGroup], W: Sequence[WordLike], config: Config = DEFAULT) -> Unital:
    words = [as_word(w) for w in W]
    C = build_catalog_cat(catalog, "all-homs", config, "all-homs")
    name = "verbal[" + ";".join(str(w) for w in words) + "]"
    return Unital(name, C, "all-homs", lambda X: quotient(X, verbal_subgroup(X, words, config)).projection)


def verbal_counit(catalog: Sequence[FiniteGroup], W: Sequence[WordLike], config: Config = DEFAULT) -> Counital:
    return kernel_of_unital(verbal_unit(catalog, W, config))


def marginal_unital(catalog: Sequence[FiniteGroup], w: WordLike, config: Config = DEFAULT) -> Unital:
    w = as_word(w)
    C = build_catalog_cat(catalog, "epis", config, "epis")
    return Unital(f"marginal[{w}]", C, "epis", lambda X: quotient(X, marginal_subgroup(X, w, config)).projection)


def marginal_counital(catalog: Sequence[FiniteGroup], w: WordLike, config: Config = DEFAULT) -> Counital:
    return kernel_of_unital(marginal_unital(catalog, w, config))


def check_fully_invariant_brute(G: FiniteGroup, S: Subgroup, config: Config = DEFAULT) -> bool:
    """Every endomorphism maps ``S`` into itself (direct enumeration)."""
    return all(f.image_of(S) <= S for f in hom_enumerate(G, G, False, config))


def check_epi_invariant_brute(G: FiniteGroup, S: Subgroup, config: Config = DEFAULT) -> bool:
    return all(f.image_of(S) <= S for f in hom_enumerate(G, G, False, config) if f.is_surjective())


# ---------------------------------------------------------------------------
# Rottlaender groups


@dataclass(frozen=True)
class RottlaenderSpec:
    p: int
    q: int
    eigenvalues: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.eigenvalues)

    @property
    def id(self) -> str:
        return f"Rott({self.p},{self.q},{','.join(map(str, self.eigenvalues))})"


def validate_rottlaender(spec: RottlaenderSpec) -> None:
    """Raise :class:`InvalidSpecification` unless the parameters are admissible.

    The exponent condition is tested for every ordered pair ``i != j``; a
    failure carries the offending ``(u, k)``.
    """
    p, q, eigs = spec.p, spec.q, [e % spec.q for e in spec.eigenvalues]
    if not is_prime(p) or not is_prime(q):
        raise InvalidSpecification("p and q must be prime")
    if (q - 1) % p:
        raise InvalidSpecification(f"q = {q} is not 1 mod p = {p}")
    if not 0 < spec.m < p:
        raise InvalidSpecification(f"need 0 < m < p, got m = {spec.m}")
    for a in eigs:
        if a == 1:
            raise InvalidSpecification("eigenvalue 1 is not allowed")
        if a == 0 or Fp(q, a).multiplicative_order() != p:
            raise InvalidSpecification(f"eigenvalue {a} does not have multiplicative order {p}")
    for i, ai in enumerate(eigs):
        for j, aj in enumerate(eigs):
            if i == j:
                continue
            for u in range(1, p):
                if pow(ai, u, q) != aj:
                    continue
                for k in range(1, spec.m + 1):
                    if (u ** k - 1) % p == 0:
                        raise InvalidSpecification(
                            f"eigenvalues {ai} and {aj}: u = {u}, k = {k} has p | u^k - 1", (u, k))


def rottlaender_theta(spec: RottlaenderSpec) -> Mat:
    return Mat.diag(spec.q, [e % spec.q for e in spec.eigenvalues])


def rottlaender_group(p: int, q: int, m: Optional[int] = None, eigenvalues: Sequence[int] = ()) -> FiniteGroup:
    """``C_p`` acting on ``F_q^m`` by the diagonal matrix of ``eigenvalues``."""
    spec = RottlaenderSpec(p, q, tuple(eigenvalues))
    if m is not None and m != spec.m:
        raise InvalidSpecification(f"m = {m} but {spec.m} eigenvalues were given")
    validate_rottlaender(spec)
    return semidirect_abelian([q] * spec.m, rottlaender_theta(spec).as_rows(), p, id=spec.id)


def _vector_index(v: Sequence[int], q: int) -> int:
    idx = 0
    for c in v:
        idx = idx * q + c
    return idx


def rottlaender_eigenspaces(G: FiniteGroup, spec: RottlaenderSpec) -> list[Subgroup]:
    """Eigenspace subgroups of ``V``, one per eigenvalue, in eigenvalue order."""
    theta = rottlaender_theta(spec)
    out = []
    for a in spec.eigenvalues:
        E = eigenspace(theta, a % spec.q)
        out.append(Subgroup(G, tuple(sorted(_vector_index(v, spec.q) for v in E.elements()))))
    return out


def order_q_subgroups(G: FiniteGroup, q: int) -> list[Subgroup]:
    orders = G.element_orders
    seen: dict = {}
    for x in range(G.order):
        if orders[x] == q:
            S = subgroup_closure(G, [x])
            seen.setdefault(S.members, S)
    return [seen[k] for k in sorted(seen)]


@dataclass
class RottlaenderScan:
    spec: RottlaenderSpec
    group: FiniteGroup
    subgroups: list[Subgroup]
    characteristic: list[Subgroup]
    eigenspaces: list[Subgroup]
    aut_order: int

    def to_json(self) -> dict:
        return {"group": self.group.id, "order": self.group.order, "aut_order": self.aut_order,
                "order_q_subgroups": len(self.subgroups), "characteristic": len(self.characteristic),
                "characteristic_members": [list(S.members) for S in self.characteristic],
                "eigenspaces": [list(S.members) for S in self.eigenspaces],
                "match": sorted(S.members for S in self.characteristic) == sorted(S.members for S in self.eigenspaces)}


def rottlaender_scan(spec: RottlaenderSpec, config: Config = DEFAULT) -> RottlaenderScan:
    """Test every subgroup of order ``q`` for being characteristic."""
    G = rottlaender_group(spec.p, spec.q, None, spec.eigenvalues)
    subs = order_q_subgroups(G, spec.q)
    chars = [S for S in subs if is_characteristic(G, S, config).holds]
    aut = automorphism_group(G, config)
    return RottlaenderScan(spec, G, subs, chars, rottlaender_eigenspaces(G, spec), aut.order)


def rottlaender_counitals(spec: RottlaenderSpec, config: Config = DEFAULT) -> list[Counital]:
    """One counital per eigenvalue over the automorphism category of the group."""
    G = rottlaender_group(spec.p, spec.q, None, spec.eigenvalues)
    A = build_catalog_cat([G], "isos", config, f"Aut({G.id})")
    out = []
    for a, E in zip(spec.eigenvalues, rottlaender_eigenspaces(G, spec)):
        out.append(counital_from_subgroups(f"eig[{a}]", A, "isos", lambda X, E=E: E, universal=False))
    return out


# ---------------------------------------------------------------------------
# Isoclinism


@dataclass
class Isoclinism:
    group: FiniteGroup
    central_quotient: FiniteGroup
    projection: GroupHom
    derived: Subgroup
    star: tuple[tuple[int, ...], ...]
    well_defined: bool
    square_commutes: bool

    def to_json(self) -> dict:
        return {"group": self.group.id, "quotient_order": self.central_quotient.order,
                "derived": list(self.derived.members), "star": [list(r) for r in self.star],
                "well_defined": self.well_defined, "square_commutes": self.square_commutes}


def isoclinism_data(G: FiniteGroup) -> Isoclinism:
    """The commutator map factored through ``(G/Z)^2 -> [G,G]``, with the square checked elementwise."""
    Z = center(G)
    Q = quotient(G, Z)
    D = derived_subgroup(G)
    pos = {m: i for i, m in enumerate(D.members)}
    n = Q.group.order
    star = [[-1] * n for _ in range(n)]
    well = True
    for g in range(G.order):
        for h in range(G.order):
            c = pos.get(G.commutator(g, h))
            if c is None:
                well = False
                continue
            a, b = Q.coset_of[g], Q.coset_of[h]
            if star[a][b] == -1:
                star[a][b] = c
            elif star[a][b] != c:
                well = False
    square = well and all(D.members[star[Q.coset_of[g]][Q.coset_of[h]]] == G.commutator(g, h)
                          for g in range(G.order) for h in range(G.order))
    return Isoclinism(G, Q.group, Q.projection, D, tuple(tuple(r) for r in star), well, square)


def are_isoclinic(G: FiniteGroup, H: FiniteGroup, config: Config = DEFAULT) -> Optional[tuple[GroupHom, GroupHom]]:
    """An isomorphism pair ``(alpha, beta)`` with ``beta(a*b) = alpha(a)*alpha(b)``, or ``None``."""
    dg, dh = isoclinism_data(G), isoclinism_data(H)
    if dg.central_quotient.order != dh.central_quotient.order or dg.derived.order != dh.derived.order:
        return None
    betas = hom_enumerate(dg.derived.group, dh.derived.group, True, config)
    if not betas:
        return None
    n = dg.central_quotient.order
    for alpha in hom_enumerate(dg.central_quotient, dh.central_quotient, True, config):
        for beta in betas:
            if all(beta.images[dg.star[a][b]] == dh.star[alpha.images[a]][alpha.images[b]]
                   for a in range(n) for b in range(n)):
                return alpha, beta
    return None
