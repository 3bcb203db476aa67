"""Abstract categories: partial algebras of morphisms with guards and a bottom.

A category here is anything exposing ``src``, ``tgt`` and ``compose`` on
morphism terms, where ``None`` plays the role of the bottom term.  Two
concrete kinds are provided:

* :class:`FinAbsCat`, a finite table with named morphisms;
* :class:`VirtualCat`, whose morphisms are produced lazily per pair of
  objects (used for categories of groups and homomorphisms).
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from pathlib import Path
from typing import Any, Callable, Hashable, Optional, Sequence

from .config import DEFAULT, BudgetExceeded, Config
from .groups import FiniteGroup, GroupHom
from .homs import epimorphisms, hom_enumerate, monomorphisms
from .reports import LawCheck, LawReport, rng_for

BOT = None
Mor = Hashable


def directional(a: Any, b: Any) -> bool:
    """``a ⇁ b``: if ``a`` is defined then it equals ``b``."""
    return a is None or a == b


# ---------------------------------------------------------------------------
# Finite tables


class FinAbsCat:
    """A finite abstract category given by named morphisms and a composition table.

    ``table[(f, g)]`` is the product ``f g`` (``f`` after ``g``); missing
    entries are bottom.
    """

    def __init__(self, morphisms: Sequence[str], src: dict, tgt: dict, table: dict, id: str = ""):
        self.id = id
        self._mors = tuple(morphisms)
        self._src = dict(src)
        self._tgt = dict(tgt)
        self._table = {k: v for k, v in table.items() if v is not None}

    # -- interface --------------------------------------------------------------

    def morphisms(self) -> tuple[str, ...]:
        return self._mors

    def src(self, f):
        return None if f is None else self._src.get(f)

    def tgt(self, f):
        return None if f is None else self._tgt.get(f)

    def compose(self, f, g):
        if f is None or g is None:
            return None
        return self._table.get((f, g))

    def contains(self, f) -> bool:
        return f is None or f in self._src

    def identities(self) -> list[str]:
        return [f for f in self._mors if self._src.get(f) == f]

    # -- construction and editing ---------------------------------------------

    def mutate(self, f: str, g: str, value: Optional[str]) -> "FinAbsCat":
        table = dict(self._table)
        if value is None:
            table.pop((f, g), None)
        else:
            table[(f, g)] = value
        return FinAbsCat(self._mors, self._src, self._tgt, table, self.id)

    def to_json(self) -> dict:
        return {
            "morphisms": list(self._mors),
            "src": [self._src.get(f) for f in self._mors],
            "tgt": [self._tgt.get(f) for f in self._mors],
            "compose": [[self._table.get((f, g)) for g in self._mors] for f in self._mors],
        }

    @classmethod
    def from_json(cls, d: dict, id: str = "") -> "FinAbsCat":
        mors = d.get("morphisms", [])
        if not isinstance(mors, list) or any(not isinstance(m, str) for m in mors):
            raise ValueError("morphisms must be a list of names")
        if len(set(mors)) != len(mors):
            raise ValueError("duplicate morphism names")
        names = set(mors)
        n = len(mors)
        src, tgt, comp = d.get("src", []), d.get("tgt", []), d.get("compose", [])
        if len(src) != n or len(tgt) != n or len(comp) != n or any(len(r) != n for r in comp):
            raise ValueError("src/tgt/compose shapes do not match the morphism list")
        for v in itertools.chain(src, tgt, (x for r in comp for x in r)):
            if v is not None and v not in names:
                raise ValueError(f"unknown morphism {v!r}")
        table = {(mors[i], mors[j]): comp[i][j] for i in range(n) for j in range(n)}
        return cls(mors, dict(zip(mors, src)), dict(zip(mors, tgt)), table, id)

    @classmethod
    def load(cls, path: str | Path) -> "FinAbsCat":
        p = Path(path)
        return cls.from_json(json.loads(p.read_text()), id=p.stem)


def table2() -> FinAbsCat:
    """The six-object example: a composable chain, a parallel pair and an isomorphism pair."""
    ids = [f"e{i}" for i in range(1, 7)]
    arrows = {"a12": ("e2", "e1"), "a23": ("e3", "e2"), "a13": ("e3", "e1"),
              "a13'": ("e3", "e1"), "b45": ("e5", "e4"), "b54": ("e4", "e5")}
    mors = ids + list(arrows)
    src = {e: e for e in ids}
    tgt = {e: e for e in ids}
    for a, (s, t) in arrows.items():
        src[a], tgt[a] = s, t
    table = {}
    for f in mors:
        for g in mors:
            if src[f] != tgt[g]:
                continue
            if f in ids:
                table[(f, g)] = g
            elif g in ids:
                table[(f, g)] = f
    table[("a12", "a23")] = "a13"
    table[("b45", "b54")] = "e4"
    table[("b54", "b45")] = "e5"
    return FinAbsCat(mors, src, tgt, table, "table2")


# ---------------------------------------------------------------------------
# Lazy categories


class VirtualCat:
    """A category whose morphisms are enumerated per ordered pair of objects."""

    def __init__(self, id: str, objects: Sequence[Any], identity: Callable[[Any], Mor],
                 hom: Callable[[Any, Any], Sequence[Mor]], src: Callable[[Mor], Mor],
                 tgt: Callable[[Mor], Mor], compose: Callable[[Mor, Mor], Optional[Mor]],
                 contains: Callable[[Mor], bool]):
        self.id = id
        self.objects = list(objects)
        self._identity = identity
        self._hom = hom
        self._src = src
        self._tgt = tgt
        self._compose = compose
        self._contains = contains
        self._hom_cache: dict[tuple[int, int], list] = {}
        self._all: Optional[list] = None

    def identity(self, obj) -> Mor:
        return self._identity(obj)

    def hom(self, x, y) -> list:
        key = (self.objects.index(x), self.objects.index(y))
        if key not in self._hom_cache:
            self._hom_cache[key] = list(self._hom(x, y))
        return self._hom_cache[key]

    def morphisms(self) -> list:
        if self._all is None:
            self._all = [f for x in self.objects for y in self.objects for f in self.hom(x, y)]
        return self._all

    def identities(self) -> list:
        return [self._identity(x) for x in self.objects]

    def src(self, f):
        return None if f is None else self._src(f)

    def tgt(self, f):
        return None if f is None else self._tgt(f)

    def compose(self, f, g):
        if f is None or g is None:
            return None
        return self._compose(f, g)

    def contains(self, f) -> bool:
        return f is None or self._contains(f)


def _hom_src(f: GroupHom) -> GroupHom:
    return GroupHom.identity(f.domain)


def _hom_tgt(f: GroupHom) -> GroupHom:
    return GroupHom.identity(f.codomain)


def hom_compose(f: GroupHom, g: GroupHom) -> Optional[GroupHom]:
    """``f g`` in the category of groups, bottom unless ``src f = tgt g``."""
    if f is None or g is None or g.codomain != f.domain:
        return None
    return f.compose(g)


MORPHISM_CLASSES = ("all-homs", "isos", "epis", "monos")


def build_catalog_cat(catalog: Sequence[FiniteGroup], morphism_class: str = "all-homs",
                      config: Config = DEFAULT, id: Optional[str] = None) -> VirtualCat:
    """Groups of ``catalog`` with the chosen class of homomorphisms between them."""
    if morphism_class not in MORPHISM_CLASSES:
        raise ValueError(f"unknown morphism class {morphism_class!r}")
    objs = list(catalog)
    ids = {G.id for G in objs}
    if len(ids) != len(objs):
        raise ValueError("catalog group ids must be distinct")

    def hom(G, H):
        if morphism_class == "isos":
            return hom_enumerate(G, H, iso_only=True, config=config)
        if morphism_class == "epis":
            return epimorphisms(G, H, config)
        if morphism_class == "monos":
            return monomorphisms(G, H, config)
        return hom_enumerate(G, H, iso_only=False, config=config)

    def contains(f):
        if not isinstance(f, GroupHom) or f.domain.id not in ids or f.codomain.id not in ids:
            return False
        if not f.is_homomorphism():
            return False
        if morphism_class == "isos":
            return f.is_bijective()
        if morphism_class == "epis":
            return f.is_surjective()
        if morphism_class == "monos":
            return f.is_injective()
        return True

    name = id or f"{morphism_class}[{','.join(G.id for G in objs)}]"
    return VirtualCat(name, objs, GroupHom.identity, hom, _hom_src, _hom_tgt, hom_compose, contains)


def ambient_groups() -> VirtualCat:
    """The category of all finite groups met so far; not enumerable."""

    def hom(G, H):
        raise BudgetExceeded("enumeration of the ambient category", 0)

    return VirtualCat("Grp", [], GroupHom.identity, hom, _hom_src, _hom_tgt, hom_compose,
                      lambda f: isinstance(f, GroupHom))


def one_object_cat(G: FiniteGroup, maps: Sequence[GroupHom], id: Optional[str] = None) -> VirtualCat:
    """A one-object category from a monoid of self-maps of ``G``."""
    maps = list(maps)
    keys = set(maps)
    return VirtualCat(id or f"End[{G.id}]", [G], GroupHom.identity, lambda x, y: maps,
                      _hom_src, _hom_tgt, hom_compose, lambda f: f in keys)


# ---------------------------------------------------------------------------
# Composable tuples


def _buckets(C, mors: Sequence[Mor]):
    by_src: dict = defaultdict(list)
    by_tgt: dict = defaultdict(list)
    for f in mors:
        by_src[C.src(f)].append(f)
        by_tgt[C.tgt(f)].append(f)
    return by_src, by_tgt


def composable_pairs(C, config: Config = DEFAULT, salt: str = "pairs", mors: Optional[Sequence] = None):
    """Pairs ``(f, g)`` with ``src f = tgt g``; returns ``(pairs, exhaustive)``."""
    mors = list(C.morphisms()) if mors is None else list(mors)
    by_src, by_tgt = _buckets(C, mors)
    total = sum(len(by_src[e]) * len(by_tgt[e]) for e in by_src)
    if total <= config.pair_budget:
        return [(f, g) for e in by_src for f in by_src[e] for g in by_tgt[e]], True
    rng = rng_for(config, salt)
    out = []
    for _ in range(config.sample_count):
        g = mors[rng.randrange(len(mors))]
        fs = by_src[C.tgt(g)]
        out.append((fs[rng.randrange(len(fs))], g))
    return out, False


def composable_triples(C, config: Config = DEFAULT, salt: str = "triples", mors: Optional[Sequence] = None):
    mors = list(C.morphisms()) if mors is None else list(mors)
    by_src, by_tgt = _buckets(C, mors)
    total = sum(len(by_src[C.tgt(g)]) * len(by_tgt[C.src(g)]) for g in mors)
    if total <= config.pair_budget:
        return [(f, g, h) for g in mors for f in by_src[C.tgt(g)] for h in by_tgt[C.src(g)]], True
    rng = rng_for(config, salt)
    out = []
    for _ in range(config.sample_count):
        g = mors[rng.randrange(len(mors))]
        fs, hs = by_src[C.tgt(g)], by_tgt[C.src(g)]
        out.append((fs[rng.randrange(len(fs))], g, hs[rng.randrange(len(hs))]))
    return out, False


# ---------------------------------------------------------------------------
# Law checking


def check_abscat_laws(C, config: Config = DEFAULT) -> LawReport:
    """Evaluate the source/target laws, the bottom-sink laws and associativity.

    Also checks that composition is defined exactly when the guards match,
    and the derived facts ``tgt(fg) ⇁ tgt f`` and ``src(fg) ⇁ src g``.
    """
    report = LawReport(getattr(C, "id", "category"), seed=config.seed)
    mors = list(C.morphisms())
    carrier = mors + [None]
    src, tgt, comp = C.src, C.tgt, C.compose

    bot = LawCheck("bot_guards")
    bot.record(src(None) is None and tgt(None) is None, (None,))

    unary = {name: LawCheck(name) for name in ("closed_guards", "tgt_src", "src_tgt", "left_unit", "right_unit")}
    for f in carrier:
        s, t = src(f), tgt(f)
        unary["closed_guards"].record(C.contains(s) and C.contains(t), (f,))
        unary["tgt_src"].record(tgt(s) == s, (f,))
        unary["src_tgt"].record(src(t) == t, (f,))
        unary["left_unit"].record(comp(t, f) == f, (f,))
        unary["right_unit"].record(comp(f, s) == f, (f,))

    n = len(carrier)
    if n * n <= config.pair_budget:
        pairs, pair_exh = list(itertools.product(carrier, carrier)), True
    else:
        sample, _ = composable_pairs(C, config, "law-pairs", mors)
        rng = rng_for(config, "law-any-pairs")
        extra = [(carrier[rng.randrange(n)], carrier[rng.randrange(n)]) for _ in range(config.sample_count)]
        pairs = sample + extra + [(f, None) for f in carrier] + [(None, f) for f in carrier]
        pair_exh = False
    names = ("closed_compose", "bot_sink", "guard", "tgt_compose", "src_compose", "tgt_directional",
             "src_directional")
    binary = {name: LawCheck(name, pair_exh) for name in names}
    for f, g in pairs:
        fg = comp(f, g)
        binary["closed_compose"].record(C.contains(fg), (f, g))
        if f is None or g is None:
            binary["bot_sink"].record(fg is None, (f, g))
            continue
        binary["guard"].record((fg is not None) == (src(f) == tgt(g) and src(f) is not None), (f, g))
        binary["tgt_compose"].record(tgt(fg) == tgt(comp(f, tgt(g))), (f, g))
        binary["src_compose"].record(src(fg) == src(comp(src(f), g)), (f, g))
        binary["tgt_directional"].record(directional(tgt(fg), tgt(f)), (f, g))
        binary["src_directional"].record(directional(src(fg), src(g)), (f, g))

    if n ** 3 <= config.pair_budget:
        triples, tri_exh = itertools.product(carrier, carrier, carrier), True
    else:
        triples, tri_exh = composable_triples(C, config, "law-triples", mors)
        tri_exh = False
    assoc = LawCheck("assoc", tri_exh)
    for f, g, h in triples:
        assoc.record(comp(f, comp(g, h)) == comp(comp(f, g), h), (f, g, h))

    report.add(bot.result())
    for c in list(unary.values()) + list(binary.values()) + [assoc]:
        report.add(c.result())
    report.extra["morphisms"] = len(mors)
    return report


# ---------------------------------------------------------------------------
# Peirce slices


def is_identity(C, e) -> bool:
    return e is not None and C.src(e) == e


def peirce(C, e=None, f=None):
    """``(eA, Af, eAf)``; pass ``None`` to leave a side unconstrained."""
    for x in (e, f):
        if x is not None and not is_identity(C, x):
            raise ValueError(f"{x!r} is not an identity")
    mors = list(C.morphisms())
    left = [a for a in mors if e is None or C.tgt(a) == e]
    right = [a for a in mors if f is None or C.src(a) == f]
    rs = set(right)
    both = [a for a in left if a in rs]
    return left, right, both


def peirce_partition(C) -> dict:
    """Map each pair of identities ``(e, f)`` to ``eAf``; empty slices are omitted."""
    out: dict = defaultdict(list)
    for a in C.morphisms():
        out[(C.tgt(a), C.src(a))].append(a)
    return dict(out)


# ---------------------------------------------------------------------------
# Functors


class Functor:
    """A morphism map between categories; bottom goes to bottom."""

    def __init__(self, name: str, fmor: Callable[[Mor], Optional[Mor]],
                 fobj: Optional[Callable[[Any], Any]] = None):
        self.name = name
        self._fmor = fmor
        self._fobj = fobj

    def __call__(self, a):
        return None if a is None else self._fmor(a)

    def obj(self, X):
        if self._fobj is None:
            raise AttributeError(f"functor {self.name} has no object map")
        return self._fobj(X)

    def then(self, other: "Functor") -> "Functor":
        """``other o self``."""
        fobj = None
        if self._fobj is not None and other._fobj is not None:
            fobj = lambda X: other.obj(self.obj(X))
        return Functor(f"{other.name}.{self.name}", lambda a: other(self(a)), fobj)


def identity_functor(name: str = "id") -> Functor:
    return Functor(name, lambda a: a, lambda X: X)


def check_functor(F: Callable, A, B, config: Config = DEFAULT, name: str = "") -> LawReport:
    """Check that ``F`` maps ``A`` into ``B`` as a functor."""
    report = LawReport(name or getattr(F, "name", "functor"), seed=config.seed)
    bot = LawCheck("bot")
    bot.record(F(None) is None, (None,))
    report.add(bot.result())
    mors = list(A.morphisms())
    total = LawCheck("total")
    member = LawCheck("lands_in_target")
    ident = LawCheck("identities")
    src_l = LawCheck("src")
    tgt_l = LawCheck("tgt")
    images = {}
    for c in mors:
        Fc = F(c)
        images[c] = Fc
        total.record(Fc is not None, (c,))
        if Fc is None:
            continue
        member.record(B.contains(Fc), (c, Fc))
        src_l.record(F(A.src(c)) == B.src(Fc), (c,))
        tgt_l.record(F(A.tgt(c)) == B.tgt(Fc), (c,))
        if is_identity(A, c):
            ident.record(is_identity(B, Fc), (c, Fc))
    pairs, exh = composable_pairs(A, config, "functor", mors)
    comp_l = LawCheck("composition", exh)
    for c, d in pairs:
        cd = A.compose(c, d)
        if cd is None:
            continue
        Fc, Fd = images.get(c, F(c)), images.get(d, F(d))
        Fcd = images.get(cd, F(cd))
        comp_l.record(Fcd is not None and Fcd == B.compose(Fc, Fd), (c, d))
    for chk in (total, member, ident, src_l, tgt_l, comp_l):
        report.add(chk.result())
    return report
