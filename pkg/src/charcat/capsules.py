"""Category actions, capsules, bimorphisms and their translation to functors.

An action is stored with explicit guard functions, so that "defined iff the
guards agree" is a checkable statement rather than an assumption.  A left
action of ``A`` on a carrier is written ``a . x``; a right action ``x . b``
is stored with the same ``act(b, x)`` signature.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from .abscat import (Functor, composable_pairs, directional, is_identity)
from .config import DEFAULT, Config
from .reports import LawCheck, LawReport, product_source, rng_for, sampled


def _guarded(fn: Callable, *args):
    if any(a is None for a in args):
        return None
    return fn(*args)


# ---------------------------------------------------------------------------
# Actions


@dataclass
class CatAction:
    """A (left or right) action of the category ``actor`` on ``carrier``.

    ``guard(a)`` is ``a◁`` (or ``▷b`` for a right action), and
    ``carrier_guard(x)`` is ``◁x`` (or ``x▷``).
    """

    actor: Any
    carrier: Sequence[Any]
    act: Callable[[Any, Any], Any]
    guard: Callable[[Any], Any]
    carrier_guard: Callable[[Any], Any]
    side: str = "left"
    carrier_cat: Any = None
    name: str = "action"

    def __call__(self, a, x):
        if a is None or x is None:
            return None
        return self.act(a, x)

    def g(self, a):
        return None if a is None else self.guard(a)

    def cg(self, x):
        return None if x is None else self.carrier_guard(x)


def _by_key(items, key):
    out = defaultdict(list)
    for it in items:
        out[key(it)].append(it)
    return out


def _matched(act: CatAction, actors, carrier, config: Config, salt: str):
    """Pairs ``(a, x)`` with equal guards; exhaustive within budget."""
    by_guard = _by_key(actors, act.g)
    total = sum(len(by_guard.get(act.cg(x), ())) for x in carrier)
    if total <= config.pair_budget:
        return [(a, x) for x in carrier for a in by_guard.get(act.cg(x), ())], True
    rng = rng_for(config, salt)
    out = []
    for _ in range(config.sample_count):
        x = carrier[rng.randrange(len(carrier))]
        pool = by_guard.get(act.cg(x), ())
        if pool:
            out.append((pool[rng.randrange(len(pool))], x))
    return out, False


def check_action(act: CatAction, config: Config = DEFAULT) -> LawReport:
    """Check the three action rules and fullness; capsule laws when the carrier is a category."""
    report = LawReport(act.name, seed=config.seed)
    A = act.actor
    actors = list(A.morphisms())
    carrier = list(act.carrier)
    left = act.side == "left"
    unit_of = A.src if left else A.tgt

    # rule (1): defined exactly when guards agree
    pairs, exh = product_source([actors, carrier], config, "action-rule1")
    r1 = LawCheck("rule1_guard", exh)
    for a, x in pairs:
        r1.record((act(a, x) is not None) == (act.g(a) == act.cg(x)), (a, x))
    r1b = LawCheck("rule1_bot")
    for a in actors[:1] + [None]:
        r1b.record(act(a, None) is None and act.g(None) is None, (a,))
    report.add(r1.result())
    report.add(r1b.result())

    # rule (2): guard of the unit, unit acts trivially
    r2a = LawCheck("rule2_unit_guard")
    for a in actors:
        r2a.record(act.g(unit_of(a)) == act.g(a), (a,))
    matched, mexh = _matched(act, actors, carrier, config, "action-matched")
    r2b = LawCheck("rule2_unit_acts", mexh)
    for a, x in matched:
        r2b.record(directional(act(unit_of(a), x), x), (a, x))
    report.add(r2a.result())
    report.add(r2b.result())

    # rule (3): compatibility with composition
    comp, cexh = composable_pairs(A, config, "action-rule3", actors)
    by_guard = _by_key(carrier, act.cg)
    triples = [(a, b, A.compose(a, b)) for a, b in comp]
    triples = [t for t in triples if t[2] is not None]
    texh = cexh and sum(len(by_guard.get(act.g(ab), ())) for _, _, ab in triples) <= config.pair_budget
    if not texh and len(triples) > config.sample_count:
        rng0 = rng_for(config, "action-rule3-pairs")
        triples = [triples[rng0.randrange(len(triples))] for _ in range(config.sample_count)]
    r3 = LawCheck("rule3_compose", texh and mexh)
    rng = rng_for(config, "action-rule3-x")
    for a, b, ab in triples:
        xs = by_guard.get(act.g(ab), [])
        if not texh and len(xs) > 1:
            xs = [xs[rng.randrange(len(xs))]]
        for x in xs:
            if left:
                r3.record(directional(act(ab, x), act(a, act(b, x))), (a, b, x))
            else:
                r3.record(directional(act(ab, x), act(b, act(a, x))), (a, b, x))
    report.add(r3.result())

    full = LawCheck("full")
    guards = {act.cg(x) for x in carrier}
    for a in actors:
        full.record(act.g(a) in guards, (a,))
    report.add(full.result())

    if act.carrier_cat is not None:
        report.merge(_check_capsule(act, matched, mexh, config))
    return report


def _check_capsule(act: CatAction, matched, mexh: bool, config: Config) -> LawReport:
    X = act.carrier_cat
    left = act.side == "left"
    report = LawReport(act.name)
    ga = LawCheck("capsule_guard_is_identity")
    for x in act.carrier:
        expected = X.tgt(x) if left else X.src(x)
        ga.record(act.cg(x) == expected, (x,))
    report.add(ga.result())
    # (a) for left: a.(xy) = (a.x)y ; right: (xy).b = x(y.b)
    other = _by_key(act.carrier, X.tgt if left else X.src)
    key = X.src if left else X.tgt
    exh = mexh and sum(len(other.get(key(x), ())) for _, x in matched) <= config.pair_budget
    cb = LawCheck("capsule_compose", exh)
    rng = rng_for(config, "capsule")
    if not exh and len(matched) > config.sample_count:
        matched = [matched[rng.randrange(len(matched))] for _ in range(config.sample_count)]
    for a, x in matched:
        ys = other.get(key(x), [])
        if not exh and len(ys) > 1:
            ys = [ys[rng.randrange(len(ys))]]
        for y in ys:
            if left:
                cb.record(act(a, X.compose(x, y)) == X.compose(act(a, x), y), (a, x, y))
            else:
                cb.record(act(a, X.compose(y, x)) == X.compose(y, act(a, x)), (a, y, x))
    report.add(cb.result())
    return report


def regular_action(C, side: str = "left", name: Optional[str] = None) -> CatAction:
    """``C`` acting on its own morphisms by composition."""
    if side == "left":
        return CatAction(C, list(C.morphisms()), lambda a, x: C.compose(a, x), C.src, C.tgt,
                         "left", C, name or f"regular-left[{getattr(C, 'id', '')}]")
    return CatAction(C, list(C.morphisms()), lambda b, x: C.compose(x, b), C.tgt, C.src,
                     "right", C, name or f"regular-right[{getattr(C, 'id', '')}]")


def induced_action(F: Callable, A, X, carrier: Sequence, side: str = "left",
                   name: Optional[str] = None) -> CatAction:
    """The capsule given by a functor: ``a . x = F(a) x`` or ``x . b = x F(b)``."""
    if side == "left":
        return CatAction(A, list(carrier), lambda a, x: X.compose(F(a), x),
                         lambda a: X.src(F(a)), X.tgt, "left", X, name or "induced-left")
    return CatAction(A, list(carrier), lambda b, x: X.compose(x, F(b)),
                     lambda b: X.tgt(F(b)), X.src, "right", X, name or "induced-right")


def functor_from_capsule(act: CatAction, config: Config = DEFAULT, check: bool = True) -> Functor:
    """The unique functor ``F`` with ``a . x = F(a) x`` (or ``x . b = x F(b)``).

    ``F(a)`` is ``a`` acting on the unique identity matching its guard.
    """
    if check:
        rep = check_action(act, config)
        if not rep.ok:
            bad = rep.failures()[0]
            raise ValueError(f"not a capsule: {bad.law} fails at {bad.witness}")

    def fmor(a):
        return act(a, act.g(a))

    return Functor(f"F[{act.name}]", fmor)


# ---------------------------------------------------------------------------
# Bicapsules and bimorphisms


@dataclass
class Bicapsule:
    left: CatAction
    right: CatAction
    name: str = "bicapsule"

    def __call__(self, a, x, b):
        """``a . x . b``; pass ``None`` for a side to skip it."""
        y = x if a is None else self.left(a, x)
        return y if b is None else self.right(b, y)

    def lact(self, a, x):
        return self.left(a, x)

    def ract(self, x, b):
        return self.right(b, x)


def check_bicapsule(bc: Bicapsule, config: Config = DEFAULT) -> LawReport:
    report = LawReport(bc.name, seed=config.seed)
    report.merge(check_action(bc.left, config), "left.")
    report.merge(check_action(bc.right, config), "right.")
    L, R = bc.left, bc.right
    lg = _by_key(list(L.actor.morphisms()), L.g)
    rg = _by_key(list(R.actor.morphisms()), R.g)
    total = sum(len(lg.get(L.cg(x), ())) * len(rg.get(R.cg(x), ())) for x in L.carrier)
    mid = LawCheck("middle_assoc", total <= config.pair_budget)
    rng = rng_for(config, "bicapsule-mid")
    for x in L.carrier:
        As, Bs = lg.get(L.cg(x), []), rg.get(R.cg(x), [])
        if total > config.pair_budget and As and Bs:
            pick = [(As[rng.randrange(len(As))], Bs[rng.randrange(len(Bs))]) for _ in range(2)]
        else:
            pick = [(a, b) for a in As for b in Bs]
        for a, b in pick:
            mid.record(L(a, R(b, x)) == R(b, L(a, x)), (a, x, b))
    report.add(mid.result())
    return report


def regular_bicapsule(C) -> Bicapsule:
    return Bicapsule(regular_action(C, "left"), regular_action(C, "right"), f"regular[{getattr(C, 'id', '')}]")


def functor_bicapsule(A, X, F: Callable, G: Callable, carrier: Sequence, name: str = "FxG") -> Bicapsule:
    """``a . x . a' = F(a) x G(a')`` on the given carrier of ``X``."""
    return Bicapsule(induced_action(F, A, X, carrier, "left", name + ".left"),
                     induced_action(G, A, X, carrier, "right", name + ".right"), name)


@dataclass
class Bimorphism:
    """A partial map ``source -> target`` intertwining both actions."""

    name: str
    source: Bicapsule
    target: Bicapsule
    fn: Callable[[Any], Any]

    def __call__(self, x):
        return None if x is None else self.fn(x)


def check_bimorphism(M: Bimorphism, config: Config = DEFAULT) -> LawReport:
    """``M(a.x.b) ⇁ a.M(x).b``, checked one side at a time and on full triples."""
    report = LawReport(M.name, seed=config.seed)
    S, T = M.source, M.target
    xs = list(S.left.carrier)
    la, lexh = _matched(S.left, list(S.left.actor.morphisms()), xs, config, "bimor-left")
    ra, rexh = _matched(S.right, list(S.right.actor.morphisms()), xs, config, "bimor-right")
    left = LawCheck("left_equivariant", lexh)
    for a, x in la:
        left.record(directional(M(S.lact(a, x)), T.lact(a, M(x))), (a, x))
    right = LawCheck("right_equivariant", rexh)
    for b, x in ra:
        right.record(directional(M(S.ract(x, b)), T.ract(M(x), b)), (x, b))
    by_x = defaultdict(list)
    for b, x in ra:
        by_x[x].append(b)
    total = sum(len(by_x[x]) for _, x in la)
    both = LawCheck("two_sided", lexh and rexh and total <= config.pair_budget)
    rng = rng_for(config, "bimor-two")
    for a, x in la:
        bs = by_x[x]
        if total > config.pair_budget and len(bs) > 2:
            bs = [bs[rng.randrange(len(bs))] for _ in range(2)]
        for b in bs:
            both.record(directional(M(S(a, x, b)), T(a, M(x), b)), (a, x, b))
    for c in (left, right, both):
        report.add(c.result())
    return report


# ---------------------------------------------------------------------------
# Natural transformations


@dataclass
class NatTrans:
    """``mu : source => target`` with components indexed by identities of the domain."""

    name: str
    source: Functor
    target: Functor
    component: Callable[[Any], Any]

    def __call__(self, e):
        return None if e is None else self.component(e)


def check_nattrans(mu: NatTrans, A, X, config: Config = DEFAULT) -> LawReport:
    """``F(a) mu_{src a} = mu_{tgt a} G(a)`` for every morphism ``a``."""
    report = LawReport(mu.name, seed=config.seed)
    F, G = mu.target, mu.source
    mors, exh = sampled(list(A.morphisms()), config, "nattrans")
    guards = LawCheck("component_guards")
    for e in A.identities() if hasattr(A, "identities") else []:
        m = mu(e)
        guards.record(m is not None and X.tgt(m) == F(e) and X.src(m) == G(e), (e,))
    nat = LawCheck("naturality", exh)
    for a in mors:
        lhs = X.compose(F(a), mu(A.src(a)))
        rhs = X.compose(mu(A.tgt(a)), G(a))
        nat.record(lhs is not None and lhs == rhs, (a,))
    report.add(guards.result())
    report.add(nat.result())
    return report


def bimorphism_from_nattrans(mu: NatTrans, A, X, carrier: Optional[Sequence] = None,
                             config: Config = DEFAULT, check: bool = True):
    """``M(a) = a . mu_{src a}`` into the bicapsule ``a . x . a' = F(a) x G(a')``.

    Returns ``(M, cyclic)`` where ``cyclic`` lists the cyclic bicapsule
    ``A . mu . A`` (capped by the pair budget).
    """
    if check:
        rep = check_nattrans(mu, A, X, config)
        if not rep.ok:
            bad = rep.failures()[0]
            raise ValueError(f"not natural: {bad.law} fails at {bad.witness}")
    F, G = mu.target, mu.source
    cyc = cyclic_bicapsule(mu, A, X, config)
    target = functor_bicapsule(A, X, F, G, carrier if carrier is not None else cyc, f"F.X.G[{mu.name}]")
    source = regular_bicapsule(A)

    def fn(a):
        return X.compose(F(a), mu(A.src(a)))

    return Bimorphism(f"M[{mu.name}]", source, target, fn), cyc


def cyclic_bicapsule(mu: NatTrans, A, X, config: Config = DEFAULT) -> list:
    """``{F(a) mu_e G(a')}`` over matching ``a, e, a'``; sorted deterministically."""
    F, G = mu.target, mu.source
    mors = list(A.morphisms())
    by_src = _by_key(mors, A.src)
    by_tgt = _by_key(mors, A.tgt)
    seen = {}
    count = 0
    for e in A.identities():
        for a in by_src.get(e, []):
            for b in by_tgt.get(e, []):
                count += 1
                if count > config.pair_budget:
                    break
                y = X.compose(X.compose(F(a), mu(e)), G(b))
                if y is not None:
                    seen[y] = None
    out = list(seen)
    return out


@dataclass
class NatTransResult:
    F: Functor
    G: Functor
    mu: NatTrans
    report: LawReport


def nattrans_from_bimorphism(M: Bimorphism, A, X, config: Config = DEFAULT) -> NatTransResult:
    """``F(a) = a . 1``, ``G(a) = 1 . a`` and ``mu_e = M(e)``."""
    T = M.target
    F = Functor(f"F[{M.name}]", lambda a: T.lact(a, T.left.g(a)))
    G = Functor(f"G[{M.name}]", lambda a: T.ract(T.right.g(a), a))
    mu = NatTrans(f"mu[{M.name}]", G, F, lambda e: M(e))
    report = check_nattrans(mu, A, X, config)
    det = LawCheck("determined_by_identities")
    mors, exh = sampled(list(A.morphisms()), config, "determined")
    det.exhaustive = exh
    for a in mors:
        Ma = M(a)
        det.record(Ma == T.lact(a, M(A.src(a))) and Ma == T.ract(M(A.tgt(a)), a), (a,))
    report.add(det.result())
    return NatTransResult(F, G, mu, report)


def compare_nattrans(mu: NatTrans, nu: NatTrans, A) -> LawReport:
    """Componentwise equality over the identities of ``A``."""
    report = LawReport(f"{mu.name}=={nu.name}")
    eq = LawCheck("componentwise_equal")
    for e in A.identities():
        eq.record(mu(e) == nu(e), (e,))
    report.add(eq.result())
    return report


# ---------------------------------------------------------------------------
# Counits


@dataclass
class CounitResult:
    F: Functor
    G: Functor
    nu: NatTrans
    N_prime: Callable[[Any], Any]
    report: LawReport


def check_ab_morphism(N: Callable, source: Bicapsule, target: Bicapsule, config: Config = DEFAULT,
                      name: str = "N") -> LawReport:
    return check_bimorphism(Bimorphism(name, source, target, N), config)


def counit_from_bimorphism(N: Callable, A, B, bicap_A: Bicapsule, bicap_B: Bicapsule,
                           config: Config = DEFAULT) -> CounitResult:
    """Turn an (A,B)-morphism ``N : B -> A`` into a counit ``nu : FG => id``.

    ``F(b) = 1_A . b`` and ``G(a) = a . 1_B``.  The reverse construction
    ``N'(b) = F(b) nu_{src F(b)}`` is checked against the displayed
    bicapsules ``a.y.b = G(a) y b`` on ``B`` and
    ``a.x.b = FG(a) x FGF(b)`` on ``A``.
    """
    report = LawReport("counit", seed=config.seed)
    report.merge(check_ab_morphism(N, bicap_B, bicap_A, config), "N.")
    F = Functor("F", lambda b: bicap_A.ract(bicap_A.right.g(b), b))
    G = Functor("G", lambda a: bicap_B.lact(a, bicap_B.left.g(a)))
    FG = G.then(F)
    nu = NatTrans("nu", FG, Functor("id", lambda a: a), lambda e: N(G(e)))
    report.merge(check_nattrans(nu, A, A, config), "nu.")

    def N_prime(b):
        Fb = F(b)
        return A.compose(Fb, nu(A.src(Fb)))

    Bcap = Bicapsule(induced_action(G, A, B, list(B.morphisms()), "left"), regular_action(B, "right"), "G.B.B")
    FGF = F.then(G).then(F)
    Acap = Bicapsule(induced_action(FG, A, A, list(A.morphisms()), "left"),
                     induced_action(FGF, B, A, list(A.morphisms()), "right"), "FG.A.FGF")
    report.merge(check_ab_morphism(N_prime, Bcap, Acap, config, "N'"), "N'.")
    back = LawCheck("N'G(e)=nu_FG(e)")
    repro = LawCheck("N'G(e)=N G(e)")
    for e in A.identities():
        back.record(N_prime(G(e)) == nu(FG(e)), (e,))
        repro.record(N_prime(G(e)) == N(G(e)), (e,))
    report.add(back.result())
    report.add(repro.result())
    return CounitResult(F, G, nu, N_prime, report)


# ---------------------------------------------------------------------------
# Adjoint pairs


def check_adjoint(F: Functor, G: Functor, Psi: Callable, PsiInv: Callable,
                  B_objects: Sequence, A_objects: Sequence, hom: Callable[[Any, Any], Sequence],
                  B_cat, A_cat, ambient, config: Config = DEFAULT) -> LawReport:
    """Check ``F : B -| A : G`` with ``Psi_UV : A(F U, V) -> B(U, G V)``.

    ``Psi(U, V, x)`` and ``PsiInv(U, V, y)`` take the object pair explicitly.
    Naturality ``Psi(a x F(b)) = G(a) Psi(x) b`` is checked as its two
    one-sided cases, which together are equivalent to it.  The induced
    bimorphisms ``M = Psi`` and ``N = PsiInv`` are checked to be
    pseudo-inverses.
    """
    report = LawReport("adjoint", seed=config.seed)
    comp = ambient.compose
    bij = LawCheck("bijective")
    inv_l = LawCheck("PsiInv.Psi=id")
    inv_r = LawCheck("Psi.PsiInv=id")
    mnm = LawCheck("MNM=M")
    nmn = LawCheck("NMN=N")
    dom: dict = {}
    for U in B_objects:
        for V in A_objects:
            X = list(hom(F.obj(U), V))
            Y = list(hom(U, G.obj(V)))
            dom[(U.id, V.id)] = X
            Yset = set(Y)
            images = [Psi(U, V, x) for x in X]
            ok = len(X) == len(Y) and len(set(images)) == len(X) and all(y in Yset for y in images)
            bij.record(ok, (U.id, V.id, len(X), len(Y)))
            for x, y in zip(X, images):
                inv_l.record(PsiInv(U, V, y) == x, (x,))
                mnm.record(Psi(U, V, PsiInv(U, V, y)) == y, (x,))
            for y in Y:
                x = PsiInv(U, V, y)
                inv_r.record(Psi(U, V, x) == y, (y,))
                nmn.record(PsiInv(U, V, Psi(U, V, x)) == x, (y,))
    for c in (bij, inv_l, inv_r, mnm, nmn):
        report.add(c.result())

    # naturality, left: Psi_{U,Y}(a x) = G(a) Psi_{U,V}(x) for a : V -> Y in A
    a_out = defaultdict(list)
    for a in A_cat.morphisms():
        a_out[a.domain.id].append(a)
    b_in = defaultdict(list)
    for b in B_cat.morphisms():
        b_in[b.codomain.id].append(b)
    obj_A = {V.id: V for V in A_objects}
    obj_B = {U.id: U for U in B_objects}
    tasks_l = [(U, V, x, a) for U in B_objects for V in A_objects for x in dom[(U.id, V.id)]
               for a in a_out[V.id] if a.codomain.id in obj_A]
    tasks_r = [(U, V, x, b) for U in B_objects for V in A_objects for x in dom[(U.id, V.id)]
               for b in b_in[U.id] if b.domain.id in obj_B]
    tl, exl = sampled(tasks_l, config, "adjoint-left")
    tr, exr = sampled(tasks_r, config, "adjoint-right")
    nat_l = LawCheck("naturality_left", exl)
    for U, V, x, a in tl:
        Y = obj_A[a.codomain.id]
        nat_l.record(Psi(U, Y, comp(a, x)) == comp(G(a), Psi(U, V, x)), (a, x))
    nat_r = LawCheck("naturality_right", exr)
    for U, V, x, b in tr:
        Xo = obj_B[b.domain.id]
        nat_r.record(Psi(Xo, V, comp(x, F(b))) == comp(Psi(U, V, x), b), (x, b))
    report.add(nat_l.result())
    report.add(nat_r.result())
    report.extra["pairs"] = len(dom)
    return report


# ---------------------------------------------------------------------------
# Natural maps


def check_natural_map(N, A, B, dot: Callable, bullet: Callable, config: Config = DEFAULT,
                      name: str = "natural-map") -> LawReport:
    """Conditions (1)-(4) for ``dot : 1_N x A -> B`` and ``bullet : N x 1_A -> B``."""
    report = LawReport(name, seed=config.seed)
    N_ids = [e for e in N.morphisms() if is_identity(N, e)]
    N_mors = list(N.morphisms())
    A_ids = list(A.identities())
    A_mors = list(A.morphisms())
    pairs, exh = composable_pairs(A, config, "natmap-1", A_mors)
    c1 = LawCheck("cond1_functorial", exh)
    for e in N_ids:
        for x, y in pairs:
            xy = A.compose(x, y)
            if xy is not None:
                c1.record(directional(dot(e, xy), B.compose(dot(e, x), dot(e, y))), (e, x, y))
    c2 = LawCheck("cond2_guards")
    for e in N_ids:
        for x in A_mors:
            ex = dot(e, x)
            c2.record(ex is not None and dot(e, A.src(x)) == B.src(ex) and dot(e, A.tgt(x)) == B.tgt(ex), (e, x))
    c3 = LawCheck("cond3_interchange")
    for s in N_mors:
        for x in A_mors:
            lhs = B.compose(bullet(s, A.tgt(x)), dot(N.src(s), x))
            rhs = B.compose(dot(N.tgt(s), x), bullet(s, A.src(x)))
            c3.record(lhs is not None and lhs == rhs, (s, x))
    c4 = LawCheck("cond4_vertical")
    for s in N_mors:
        for t in N_mors:
            st = N.compose(s, t)
            if st is None:
                continue
            for f in A_ids:
                c4.record(directional(bullet(st, f), B.compose(bullet(s, f), bullet(t, f))), (s, t, f))
    for c in (c1, c2, c3, c4):
        report.add(c.result())
    return report
