"""Counitals and unitals over catalog categories, with characteristic certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .abscat import (VirtualCat, ambient_groups, build_catalog_cat, check_abscat_laws, check_functor,
                     Functor, hom_compose)
from .config import DEFAULT, BudgetExceeded, Config, FunctorMismatch
from .groups import (FiniteGroup, GroupHom, Subgroup, noether_factor, normal_closure, quotient,
                     subgroup_closure)
from .homs import automorphism_group, endomorphisms, hom_enumerate
from .reports import LawCheck, LawReport, LawResult, sampled

def class_covers(big: str, small: str) -> bool:
    """Every ``small``-morphism is a ``big``-morphism."""
    if big == small or big == "all-homs":
        return True
    return small == "isos" and big in ("monos", "epis")


def _factor_through(phi_eta: GroupHom, eta_y: GroupHom) -> Optional[GroupHom]:
    """The unique ``u`` with ``eta_y u = phi_eta``; ``None`` if the image escapes."""
    pos = {y: i for i, y in enumerate(eta_y.images)}
    out = []
    for y in phi_eta.images:
        if y not in pos:
            return None
        out.append(pos[y])
    return GroupHom(phi_eta.domain, eta_y.domain, tuple(out))


# ---------------------------------------------------------------------------
# Counitals


@dataclass(eq=False)
class Counital:
    """A natural family ``eta_X : C(X) -> X`` over a catalog category.

    ``C`` on morphisms is recovered by factoring ``phi eta_X`` through the
    (monic) ``eta_Y``; it is ``None`` when no factorisation exists.
    """

    name: str
    domain: VirtualCat
    morphism_class: str
    component_fn: Callable[[FiniteGroup], GroupHom]
    universal: bool = True
    flat: bool = False
    internal: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def eta(self, X: FiniteGroup) -> GroupHom:
        c = self._cache.get(X)
        if c is None:
            c = self.component_fn(X)
            self._cache[X] = c
        return c

    def obj(self, X: FiniteGroup) -> FiniteGroup:
        return self.eta(X).domain

    def subgroup(self, X: FiniteGroup) -> Subgroup:
        return self.eta(X).image()

    def C(self, phi: GroupHom) -> Optional[GroupHom]:
        if phi is None:
            return None
        ey = self.eta(phi.codomain)
        if not ey.is_injective():
            raise ValueError(f"{self.name}: component at {phi.codomain.id} is not monic")
        return _factor_through(phi.compose(self.eta(phi.domain)), ey)

    def functor(self) -> Functor:
        return Functor(f"C[{self.name}]", self.C, self.obj)

    def objects(self) -> list[FiniteGroup]:
        return list(self.domain.objects)

    def is_monic(self) -> bool:
        return all(self.eta(X).is_injective() for X in self.objects())

    def components(self) -> list[GroupHom]:
        return [self.eta(X) for X in self.objects()]


def counital_from_subgroups(name: str, domain: VirtualCat, morphism_class: str,
                            sub: Callable[[FiniteGroup], Subgroup], universal: bool = True,
                            flat: bool = False) -> Counital:
    return Counital(name, domain, morphism_class, lambda X: sub(X).inclusion, universal, flat)


def identity_counital(domain: VirtualCat, morphism_class: str) -> Counital:
    return Counital("id", domain, morphism_class, GroupHom.identity, True, True)


def check_counital(eta: Counital, config: Config = DEFAULT) -> LawReport:
    """Functoriality of ``C``, naturality of ``eta`` and the monic flag."""
    report = LawReport(eta.name, seed=config.seed)
    guards = LawCheck("component_guards")
    monic = LawCheck("monic")
    for X in eta.objects():
        e = eta.eta(X)
        guards.record(e.codomain == X and e.is_homomorphism(), (X.id,))
        monic.record(e.is_injective(), (e,))
    report.add(guards.result())
    report.add(monic.result())
    if not monic.failed:
        report.merge(check_functor(eta.functor(), eta.domain, ambient_groups(), config), "C.")
        mors, exh = sampled(list(eta.domain.morphisms()), config, f"counital-{eta.name}")
        nat = LawCheck("naturality", exh)
        for phi in mors:
            c = eta.C(phi)
            ok = c is not None and hom_compose(phi, eta.eta(phi.domain)) == hom_compose(eta.eta(phi.codomain), c)
            nat.record(ok, (phi,))
        report.add(nat.result())
    report.extra["objects"] = [X.id for X in eta.objects()]
    return report


# ---------------------------------------------------------------------------
# Unitals


@dataclass(eq=False)
class Unital:
    """A natural family ``pi_X : X -> D(X)``; ``D`` on morphisms is the induced map."""

    name: str
    domain: VirtualCat
    morphism_class: str
    component_fn: Callable[[FiniteGroup], GroupHom]
    universal: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def pi(self, X: FiniteGroup) -> GroupHom:
        c = self._cache.get(X)
        if c is None:
            c = self.component_fn(X)
            self._cache[X] = c
        return c

    def obj(self, X: FiniteGroup) -> FiniteGroup:
        return self.pi(X).codomain

    def D(self, phi: GroupHom) -> Optional[GroupHom]:
        if phi is None:
            return None
        px, py = self.pi(phi.domain), self.pi(phi.codomain)
        out = [-1] * px.codomain.order
        for x in range(phi.domain.order):
            q, v = px.images[x], py.images[phi.images[x]]
            if out[q] == -1:
                out[q] = v
            elif out[q] != v:
                return None
        if -1 in out:
            return None
        return GroupHom(px.codomain, py.codomain, tuple(out))

    def functor(self) -> Functor:
        return Functor(f"D[{self.name}]", self.D, self.obj)

    def objects(self) -> list[FiniteGroup]:
        return list(self.domain.objects)

    def is_epic(self) -> bool:
        return all(self.pi(X).is_surjective() for X in self.objects())


def unital_from_normals(name: str, domain: VirtualCat, morphism_class: str,
                        normal: Callable[[FiniteGroup], Subgroup], universal: bool = True) -> Unital:
    return Unital(name, domain, morphism_class, lambda X: quotient(X, normal(X)).projection, universal)


def check_unital(pi: Unital, config: Config = DEFAULT) -> LawReport:
    report = LawReport(pi.name, seed=config.seed)
    guards = LawCheck("component_guards")
    epic = LawCheck("epic")
    for X in pi.objects():
        p = pi.pi(X)
        guards.record(p.domain == X and p.is_homomorphism(), (X.id,))
        epic.record(p.is_surjective(), (p,))
    report.add(guards.result())
    report.add(epic.result())
    report.merge(check_functor(pi.functor(), pi.domain, ambient_groups(), config), "D.")
    mors, exh = sampled(list(pi.domain.morphisms()), config, f"unital-{pi.name}")
    nat = LawCheck("naturality", exh)
    for phi in mors:
        d = pi.D(phi)
        ok = d is not None and hom_compose(d, pi.pi(phi.domain)) == hom_compose(pi.pi(phi.codomain), phi)
        nat.record(ok, (phi,))
    report.add(nat.result())
    return report


# ---------------------------------------------------------------------------
# Characteristic and fully invariant subgroups


@dataclass
class CharCertificate:
    kind: str
    group: FiniteGroup
    subgroup: tuple[int, ...]
    maps: list[tuple[int, ...]]
    map_count: int

    def witnesses(self) -> list[dict]:
        return [{"gen": i, "pairs": [[h, m[h]] for h in self.subgroup]} for i, m in enumerate(self.maps)]

    def to_json(self) -> dict:
        d = {"kind": self.kind, "group": self.group.id, "order": self.group.order,
             "subgroup": list(self.subgroup), "aut_gens": [list(m) for m in self.maps],
             "witnesses": self.witnesses()}
        d["aut_order" if self.kind == "characteristic" else "map_count"] = self.map_count
        return d


@dataclass
class Counterexample:
    kind: str
    group: FiniteGroup
    subgroup: tuple[int, ...]
    map: tuple[int, ...]
    element: int
    note: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "group": self.group.id, "subgroup": list(self.subgroup),
                "map": list(self.map), "element": self.element, "image": self.map[self.element],
                "note": self.note}


@dataclass
class CharResult:
    holds: bool
    certificate: Optional[CharCertificate] = None
    counterexample: Optional[Counterexample] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        if self.holds:
            return self.certificate.to_json()
        return {"counterexample": self.counterexample.to_json()}


def _escape(images: Sequence[int], H: Subgroup) -> Optional[int]:
    for h in H.members:
        if images[h] not in H.member_set:
            return h
    return None


def is_characteristic(G: FiniteGroup, H: Subgroup, config: Config = DEFAULT) -> CharResult:
    """Decide ``phi(H) = H`` for all automorphisms ``phi``.

    Inner automorphisms are tried first so that a counterexample, when one
    exists among them, is a conjugation.
    """
    if H.parent != G:
        raise ValueError("subgroup of a different group")
    t = G.table
    for g in range(G.order):
        gi = G.inverse[g]
        conj = tuple(t[t[g][x]][gi] for x in range(G.order))
        h = _escape(conj, H)
        if h is not None:
            return CharResult(False, counterexample=Counterexample(
                "characteristic", G, H.members, conj, h, f"conjugation by {G.elements[g]}"))
    aut = automorphism_group(G, config)
    for a in aut.generators:
        h = _escape(a, H)
        if h is not None:
            return CharResult(False, counterexample=Counterexample("characteristic", G, H.members, a, h,
                                                                   "automorphism generator"))
    return CharResult(True, CharCertificate("characteristic", G, H.members, list(aut.generators), aut.order))


def is_fully_invariant(G: FiniteGroup, H: Subgroup, config: Config = DEFAULT) -> CharResult:
    if H.parent != G:
        raise ValueError("subgroup of a different group")
    ends = endomorphisms(G, config)
    for f in ends:
        h = _escape(f.images, H)
        if h is not None:
            return CharResult(False, counterexample=Counterexample("fully_invariant", G, H.members, f.images, h,
                                                                   "endomorphism"))
    return CharResult(True, CharCertificate("fully_invariant", G, H.members, [f.images for f in ends], len(ends)))


# ---------------------------------------------------------------------------
# Transport and extension


def transport(H: Subgroup, alpha: GroupHom) -> Subgroup:
    """``alpha(H)`` for an isomorphism ``alpha``."""
    if not alpha.is_bijective() or not alpha.is_homomorphism():
        raise ValueError("transport needs an isomorphism")
    if H.parent != alpha.domain:
        raise ValueError("subgroup does not live in the domain")
    return alpha.image_of(H)


def transport_images(H: Subgroup, target: FiniteGroup, config: Config = DEFAULT) -> list[Subgroup]:
    """``alpha(H)`` for every isomorphism ``alpha : G -> target``, in enumeration order."""
    return [alpha.image_of(H) for alpha in hom_enumerate(H.parent, target, iso_only=True, config=config)]


@dataclass
class Extension:
    counital: Counital
    sigma: dict
    lam: dict
    characteristic: bool
    well_defined: Optional[bool]
    report: LawReport


def extend_to_isocore(catalog: Sequence[FiniteGroup], G: FiniteGroup, H: Subgroup,
                      config: Config = DEFAULT, morphism_class: str = "isos") -> Extension:
    """Extend the one-object data ``H <= G`` to a counital on the iso-core of ``catalog``.

    ``sigma_{G'}`` is generated by ``alpha(H)`` over all isomorphisms
    ``alpha : G -> G'`` (trivial when there are none).  The comparison maps
    ``lambda`` with ``R(a) = S(a) lambda`` are computed and checked.
    """
    if morphism_class != "isos":
        raise ValueError("extension needs the acting category to be full; only the iso-core is supported")
    catalog = list(catalog)
    if G not in catalog:
        raise ValueError(f"{G.id} is not in the catalog")
    if H.parent != G:
        raise ValueError("subgroup of a different group")
    char = is_characteristic(G, H, config)
    report = LawReport(f"extend[{G.id}]", seed=config.seed)
    sigma: dict = {}
    well = LawCheck("transport_well_defined")
    for X in catalog:
        images = transport_images(H, X, config)
        seeds = sorted({m for S in images for m in S.members})
        sigma[X] = subgroup_closure(X, seeds)
        if char.holds:
            for S in images:
                well.record(S == sigma[X], (X.id, S.order))
    C = build_catalog_cat(catalog, "isos", config)
    ext = counital_from_subgroups(f"ext[{G.id}:{H.tag}]", C, "isos", lambda X: sigma[X], universal=False)

    # comparison maps on the Aut(G) object: rho = incl_H, S = a sigma_G
    rho = H.inclusion
    s = sigma[G].inclusion
    lam = _factor_through(rho, s)
    lam_ok = LawCheck("lambda_is_iso")
    lam_ok.record(lam is not None and lam.is_bijective(), (G.id,))
    eq = LawCheck("R(a)=S(a)lambda")
    for a in automorphism_group(G, config).generator_homs() + [GroupHom.identity(G)]:
        Ra = a.compose(rho)
        Sa = a.compose(s)
        eq.record(lam is not None and Ra == Sa.compose(lam), (a,))
    sig = LawCheck("sigma_stable")
    for c in C.morphisms():
        sig.record(c.image_of(sigma[c.domain]) <= sigma[c.codomain], (c,))
    if char.holds:
        report.add(well.result())
    else:
        report.add(LawResult("transport_well_defined", True, 0, False, None,
                             "skipped: subgroup is not characteristic"))
    for chk in (lam_ok, eq, sig):
        report.add(chk.result())
    report.merge(check_counital(ext, config), "counital.")
    return Extension(ext, sigma, {G: lam}, char.holds, (not well.failed) if char.holds else None, report)


# ---------------------------------------------------------------------------
# Internal counitals


def internalize(eta: Counital, config: Config = DEFAULT) -> VirtualCat:
    """The category generated by the domain morphisms and the components of ``eta``.

    Generators are closed under composition to a fixpoint; more than
    ``pair_budget`` morphisms raises :class:`BudgetExceeded`.
    """
    gens = list(eta.domain.morphisms())
    for X in eta.objects():
        e = eta.eta(X)
        gens += [e, GroupHom.identity(e.domain)]
    mors = list(dict.fromkeys(gens))
    known = set(mors)
    frontier = list(mors)
    while frontier:
        nxt = []
        for f in list(known):
            for g in frontier:
                for h in (hom_compose(f, g), hom_compose(g, f)):
                    if h is not None and h not in known:
                        known.add(h)
                        mors.append(h)
                        nxt.append(h)
                        if len(known) > config.pair_budget:
                            raise BudgetExceeded("internal category closure", config.pair_budget)
        frontier = nxt
    objs = list(dict.fromkeys([f.domain for f in mors] + [f.codomain for f in mors]))
    by_pair: dict = {}
    for f in mors:
        by_pair.setdefault((f.domain, f.codomain), []).append(f)
    return VirtualCat(f"int[{eta.name}]", objs, GroupHom.identity,
                      lambda X, Y: by_pair.get((X, Y), []),
                      lambda f: GroupHom.identity(f.domain), lambda f: GroupHom.identity(f.codomain),
                      hom_compose, lambda f: f in known)


def check_internal(eta: Counital, config: Config = DEFAULT) -> LawReport:
    cat = internalize(eta, config)
    report = LawReport(f"internal[{eta.name}]", seed=config.seed)
    report.merge(check_abscat_laws(cat, config), "cat.")
    inside = LawCheck("components_internal")
    for X in eta.objects():
        inside.record(cat.contains(eta.eta(X)), (eta.eta(X),))
    report.add(inside.result())
    report.extra["morphisms"] = len(cat.morphisms())
    return report


# ---------------------------------------------------------------------------
# Composition and duality


def compose_triangle(mu: Counital, eta: Counital) -> Counital:
    """``(mu ▽ eta)_X = eta_X mu_{C(X)}``."""
    if not class_covers(mu.morphism_class, eta.morphism_class):
        raise FunctorMismatch(f"{mu.name} acts on {mu.morphism_class}, {eta.name} needs {eta.morphism_class}")
    if not mu.universal:
        known = set(mu.objects())
        for X in eta.objects():
            if eta.obj(X) not in known:
                raise FunctorMismatch(f"{mu.name} is not defined at {eta.obj(X).id}")

    def comp(X):
        return eta.eta(X).compose(mu.eta(eta.obj(X)))

    return Counital(f"{mu.name}▽{eta.name}", eta.domain, eta.morphism_class, comp,
                    mu.universal and eta.universal, eta.flat and mu.flat)


def kernel_of_unital(pi: Unital) -> Counital:
    return Counital(f"ker[{pi.name}]", pi.domain, pi.morphism_class,
                    lambda X: pi.pi(X).kernel().inclusion, pi.universal)


def cokernel_of_counital(iota: Counital) -> Unital:
    def comp(X):
        return quotient(X, normal_closure(X, iota.eta(X).images)).projection
    return Unital(f"coker[{iota.name}]", iota.domain, iota.morphism_class, comp, iota.universal)


def counitals_equivalent(a: Counital, b: Counital, objects: Optional[Sequence[FiniteGroup]] = None) -> LawReport:
    """Equivalence of monos per object: each component factors through the other by an isomorphism."""
    report = LawReport(f"{a.name}~{b.name}")
    eq = LawCheck("equivalent_components")
    for X in objects if objects is not None else a.objects():
        u = _factor_through(a.eta(X), b.eta(X))
        v = _factor_through(b.eta(X), a.eta(X))
        eq.record(u is not None and v is not None and u.is_bijective(), (X.id,))
    report.add(eq.result())
    return report


def check_kernel_duality(pi: Unital, iota: Counital) -> LawReport:
    """``coker(ker pi)`` matches ``im pi`` and ``ker(coker iota)`` matches ``iota``.

    The comparison isomorphisms are computed per object and checked
    elementwise.
    """
    report = LawReport(f"duality[{pi.name},{iota.name}]")
    ck = cokernel_of_counital(kernel_of_unital(pi))
    mu_ok = LawCheck("coker_ker_iso_image")
    for X in pi.objects():
        proj, psi, incl = noether_factor(pi.pi(X))
        c = ck.pi(X)
        ok = psi.is_bijective() and c.codomain == proj.codomain
        ok = ok and incl.compose(psi).compose(c) == pi.pi(X)
        mu_ok.record(ok, (X.id,))
    kc = kernel_of_unital(cokernel_of_counital(iota))
    tau_ok = LawCheck("ker_coker_equals_iota")
    for X in iota.objects():
        tau = _factor_through(kc.eta(X), iota.eta(X))
        tau_ok.record(tau is not None and tau.is_bijective() and iota.eta(X).compose(tau) == kc.eta(X), (X.id,))
    report.add(mu_ok.result())
    report.add(tau_ok.result())
    return report


def shipped_images_characteristic(etas: Sequence[Counital], config: Config = DEFAULT) -> LawReport:
    """Every image ``im(eta_X)`` is characteristic in ``X``."""
    report = LawReport("images-characteristic", seed=config.seed)
    chk = LawCheck("image_characteristic")
    for eta in etas:
        for X in eta.objects():
            chk.record(is_characteristic(X, eta.subgroup(X), config).holds, (eta.name, X.id))
    report.add(chk.result())
    return report
