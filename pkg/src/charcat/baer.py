"""Class-2 exponent-p groups, alternating bimaps, adjoint algebras and the radical pipeline."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT, Config, UnsupportedCharacteristic
from .counitals import CharResult, is_characteristic
from .fflinalg import BilinearMap, Mat, MatrixAlgebra, Subspace, algebra_closure, is_prime, bimap_radical, jacobson_radical, nullspace_rows
from .groups import FiniteGroup, GroupHom, Subgroup, center, closure, derived_subgroup, quotient
from .homs import automorphism_group
from .reports import LawCheck, LawReport, product_source, rng_for

Vec = tuple[int, ...]


def _require_odd_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise UnsupportedCharacteristic("the correspondence needs an odd prime")


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def is_class2_exponent_p(G: FiniteGroup, p: int) -> bool:
    """``|G|`` a power of ``p``, every element of order dividing ``p`` and ``[G,G] <= Z(G)``."""
    _require_odd_prime(p)
    if not _is_p_power(G.order, p):
        return False
    if any(p % o for o in G.element_orders):
        return False
    return derived_subgroup(G) <= center(G)


# ---------------------------------------------------------------------------
# Bimaps


@dataclass(frozen=True)
class BimapObject:
    """``b : F_p^v x F_p^v -> F_p^w`` given by ``gram[i][j] = b(e_i, e_j)``."""

    p: int
    v_dim: int
    w_dim: int
    gram: tuple[tuple[Vec, ...], ...]
    source: Optional[str] = None

    @property
    def tensor(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64).reshape(self.v_dim, self.v_dim, self.w_dim)

    def __call__(self, u: Sequence[int], v: Sequence[int]) -> Vec:
        out = np.einsum("i,j,ijk->k", np.array(u, dtype=np.int64), np.array(v, dtype=np.int64), self.tensor)
        return tuple(int(x) % self.p for x in out)

    def is_alternating(self) -> bool:
        p = self.p
        for i in range(self.v_dim):
            if any(self.gram[i][i]):
                return False
            for j in range(i):
                if any((a + b) % p for a, b in zip(self.gram[i][j], self.gram[j][i])):
                    return False
        return True

    def to_bilinear(self) -> BilinearMap:
        grams = tuple(Mat.from_rows(self.p, [[self.gram[i][j][k] for j in range(self.v_dim)]
                                             for i in range(self.v_dim)], self.v_dim) for k in range(self.w_dim))
        return BilinearMap(self.p, self.v_dim, self.w_dim, grams)

    def radical(self) -> Subspace:
        """``{u : b(u, .) = 0}``."""
        return bimap_radical(self.to_bilinear())

    def to_json(self) -> dict:
        return {"p": self.p, "v_dim": self.v_dim, "w_dim": self.w_dim,
                "gram": [[list(x) for x in row] for row in self.gram], "source": self.source}

    @classmethod
    def from_json(cls, d: dict) -> "BimapObject":
        gram = tuple(tuple(tuple(int(x) % d["p"] for x in e) for e in row) for row in d["gram"])
        return cls(d["p"], d["v_dim"], d["w_dim"], gram, d.get("source"))


def bimap_from_tensor(p: int, tensor: Sequence, source: Optional[str] = None) -> BimapObject:
    t = np.array(tensor, dtype=np.int64) % p
    a, _, c = t.shape
    gram = tuple(tuple(tuple(int(x) for x in t[i, j]) for j in range(a)) for i in range(a))
    return BimapObject(p, a, c, gram, source)


@dataclass(frozen=True)
class BimapMorphism:
    """``(alpha, beta)`` with ``b'(alpha u, alpha v) = beta b(u, v)``."""

    alpha: Mat
    beta: Mat

    def then(self, other: "BimapMorphism") -> "BimapMorphism":
        return BimapMorphism(other.alpha @ self.alpha, other.beta @ self.beta)

    def check(self, b: BimapObject, b2: BimapObject) -> Optional[tuple]:
        """First basis pair violating the law, else ``None``."""
        a = self.alpha
        for i, j in itertools.product(range(b.v_dim), repeat=2):
            lhs = b2(a.col(i), a.col(j))
            rhs = self.beta.apply(b.gram[i][j])
            if tuple(lhs) != tuple(rhs):
                return (i, j, lhs, rhs)
        return None

    def to_json(self) -> dict:
        return {"alpha": [list(r) for r in self.alpha.as_rows()], "beta": [list(r) for r in self.beta.as_rows()]}


def _greedy_basis(Q: FiniteGroup, p: int) -> tuple[list[int], list[Vec]]:
    """Lowest-index greedy basis of an elementary abelian group and the coordinates of every element."""
    basis: list[int] = []
    span = {Q.identity}
    for x in range(Q.order):
        if x not in span:
            basis.append(x)
            span = set(closure(Q, basis))
    coords: list[Optional[Vec]] = [None] * Q.order
    for c in itertools.product(range(p), repeat=len(basis)):
        g = Q.identity
        for b, k in zip(basis, c):
            g = Q.table[g][Q.power(b, k)]
        coords[g] = tuple(c)
    return basis, coords  # type: ignore[return-value]


@dataclass
class GroupBimap:
    """``b_G`` together with the coordinates tying it to ``G``."""

    group: FiniteGroup
    bimap: BimapObject
    derived: Subgroup
    v_coord: list[Vec]
    w_coord: dict
    v_lifts: list[int]
    w_lifts: list[int]

    def morphism(self, phi: GroupHom, target: "GroupBimap") -> BimapMorphism:
        """The pair induced by ``phi`` on ``G/[G,G]`` and ``[G,G]``."""
        p = self.bimap.p
        acols = [target.v_coord[phi.images[g]] for g in self.v_lifts]
        bcols = [target.w_coord[phi.images[g]] for g in self.w_lifts]
        alpha = Mat.from_rows(p, [[c[i] for c in acols] for i in range(target.bimap.v_dim)], len(acols))
        beta = Mat.from_rows(p, [[c[i] for c in bcols] for i in range(target.bimap.w_dim)], len(bcols))
        return BimapMorphism(alpha, beta)


def bimap_from_group(G: FiniteGroup, p: int) -> GroupBimap:
    """``(x[G,G], y[G,G]) -> [x, y]`` in coordinates from greedy bases."""
    if not is_class2_exponent_p(G, p):
        raise ValueError(f"{G.id} is not of class at most 2 and exponent {p}")
    D = derived_subgroup(G)
    Q = quotient(G, D)
    vb, vq = _greedy_basis(Q.group, p)
    wb, wq = _greedy_basis(D.group, p)
    v_lifts = [Q.representatives[b] for b in vb]
    w_lifts = [D.members[b] for b in wb]
    w_coord = {D.members[i]: wq[i] for i in range(D.order)}
    v_coord = [vq[Q.coset_of[g]] for g in range(G.order)]
    gram = tuple(tuple(w_coord[G.commutator(x, y)] for y in v_lifts) for x in v_lifts)
    b = BimapObject(p, len(vb), len(wb), gram, G.id)
    return GroupBimap(G, b, D, v_coord, w_coord, v_lifts, w_lifts)


def group_from_bimap(b: BimapObject, id: Optional[str] = None) -> FiniteGroup:
    """``V x W`` with ``(v, w)(v', w') = (v + v', w + w' + b(v, v')/2)``.

    Element index is little endian in the digits of ``(v, w)``.
    """
    _require_odd_prime(b.p)
    if not b.is_alternating():
        raise ValueError("bimap is not alternating")
    p, a, c = b.p, b.v_dim, b.w_dim
    n = a + c
    N = p ** n
    digits = np.array([[(x // p ** k) % p for k in range(n)] for x in range(N)], dtype=np.int64)
    V, W = digits[:, :a], digits[:, a:]
    half = pow(2, -1, p)
    cross = np.einsum("xi,yj,ijk->xyk", V, V, b.tensor) * half
    vs = (V[:, None, :] + V[None, :, :]) % p
    ws = (W[:, None, :] + W[None, :, :] + cross) % p
    weights = p ** np.arange(n, dtype=np.int64)
    table = (np.concatenate([vs, ws], axis=2) * weights).sum(axis=2)
    labels = ["(" + ",".join(map(str, digits[x, :a])) + ";" + ",".join(map(str, digits[x, a:])) + ")"
              for x in range(N)]
    return FiniteGroup.from_table(id or f"Baer(p={p},{a},{c})", labels, table.tolist())


# ---------------------------------------------------------------------------
# Adjoint algebra


@dataclass(frozen=True)
class AdjointAlgebra:
    """``{f : exists f*, b(fu, v) = b(u, f* v)}`` with the solution pairs ``(f, f*)``."""

    algebra: MatrixAlgebra
    pairs: tuple[tuple[Mat, Mat], ...]
    bimap: BimapObject

    def is_pair(self, f: Mat, fs: Mat) -> bool:
        b = self.bimap
        for i, j in itertools.product(range(b.v_dim), repeat=2):
            if b(f.col(i), tuple(1 if k == j else 0 for k in range(b.v_dim))) != \
                    b(tuple(1 if k == i else 0 for k in range(b.v_dim)), fs.col(j)):
                return False
        return True

    def star(self, f: Mat) -> Optional[Mat]:
        """Some ``f*`` for ``f`` (unique when ``b`` is nondegenerate)."""
        p, n = self.bimap.p, self.bimap.v_dim
        d = len(self.pairs)
        rows = [[self.pairs[t][0].entries[k] for t in range(d)] for k in range(n * n)]
        # solve sum c_t f_t = f
        aug = [r + [f.entries[k]] for k, r in enumerate(rows)]
        sol = nullspace_rows(aug, p, d + 1)
        for s in sol:
            if s[-1]:
                inv = pow(-s[-1], -1, p)
                c = [x * inv % p for x in s[:-1]]
                out = Mat.zero(p, n, n)
                for ct, (_, fs) in zip(c, self.pairs):
                    out = out + fs.scale(ct)
                return out
        return None


def adjoint_algebra(b: BimapObject) -> AdjointAlgebra:
    """Solve ``b(f e_i, e_j) = b(e_i, f* e_j)`` for pairs of ``v x v`` matrices."""
    p, a, c = b.p, b.v_dim, b.w_dim
    T = b.tensor

    def fvar(l, i):
        return l * a + i

    def svar(l, j):
        return a * a + l * a + j

    rows = []
    for i, j, k in itertools.product(range(a), range(a), range(c)):
        row = [0] * (2 * a * a)
        for l in range(a):
            row[fvar(l, i)] = (row[fvar(l, i)] + int(T[l, j, k])) % p
            row[svar(l, j)] = (row[svar(l, j)] - int(T[i, l, k])) % p
        rows.append(row)
    sols = nullspace_rows(rows, p, 2 * a * a) if rows else tuple(
        tuple(1 if x == y else 0 for x in range(2 * a * a)) for y in range(2 * a * a))
    pairs = tuple((Mat(p, a, a, tuple(s[: a * a])), Mat(p, a, a, tuple(s[a * a:]))) for s in sols)
    fs = Subspace.span(p, a * a, [f.flatten() for f, _ in pairs])
    basis = tuple(Mat(p, a, a, tuple(v)) for v in fs.basis)
    alg = MatrixAlgebra(p, a, basis) if basis else MatrixAlgebra(p, a, ())
    return AdjointAlgebra(alg, pairs, b)


def check_adjoint_algebra(adj: AdjointAlgebra) -> LawReport:
    """Product closure, the unit, and ``(fg)* = g* f*`` on basis products."""
    report = LawReport("adjoint-algebra")
    alg = adj.algebra
    closed = LawCheck("product_closed")
    anti = LawCheck("star_anti_homomorphism")
    if alg.dim:
        closed.record(algebra_closure(list(alg.basis), with_unit=False).dim == alg.dim, ())
    unit = LawCheck("unital")
    unit.record(alg.dim > 0 and alg.has_unit(), ())
    for (f, fs), (g, gs) in itertools.product(adj.pairs, repeat=2):
        anti.record(adj.is_pair(f @ g, gs @ fs), (f, g))
    for chk in (closed, unit, anti):
        report.add(chk.result())
    return report


def conjugate_subspace(alpha: Mat, S: Subspace, n: int) -> Subspace:
    """``alpha S alpha^-1`` for a subspace of flattened ``n x n`` matrices."""
    ai = alpha.inverse()
    return Subspace.span(S.p, n * n, [(alpha @ Mat(S.p, n, n, v) @ ai).flatten() for v in S.basis])


def radical_image(J: Subspace, n: int) -> Subspace:
    """``J V`` inside ``V = F_p^n``."""
    p = J.p
    vecs = [Mat(p, n, n, j).col(i) for j in J.basis for i in range(n)]
    return Subspace.span(p, n, vecs)


# ---------------------------------------------------------------------------
# Morphism checks


def _aut_sample(aut, config: Config, salt: str) -> tuple[list[GroupHom], bool]:
    """All automorphisms within budget, else seeded random generator words."""
    if aut.order <= config.pair_budget:
        return aut.element_homs(config.pair_budget), True
    rng = rng_for(config, salt)
    gens = aut.generator_homs()
    out = []
    for _ in range(min(config.sample_count, 1000)):
        f = GroupHom.identity(aut.group)
        for _ in range(20):
            f = rng.choice(gens).compose(f)
        out.append(f)
    return out, False


def baer_morphism_checks(groups: Sequence[FiniteGroup], p: int, config: Config = DEFAULT,
                         transpose_beta: bool = False) -> LawReport:
    """Functoriality of ``G -> b_G`` on automorphisms and equivariance of the adjoint algebra.

    ``transpose_beta`` replaces every induced ``beta`` by its transpose; it
    is a negative control and should fail whenever some ``beta`` is not
    symmetric.
    """
    report = LawReport("baer-morphisms", seed=config.seed)
    morph = LawCheck("bimap_morphism")
    func = LawCheck("functorial")
    equi = LawCheck("adjoint_equivariant")
    for G in groups:
        gb = bimap_from_group(G, p)
        b = gb.bimap
        adj = adjoint_algebra(b)
        A = adj.algebra.as_subspace()
        aut = automorphism_group(G, config)
        elems, exh = _aut_sample(aut, config, f"baer-{G.id}")

        def B(phi):
            m = gb.morphism(phi, gb)
            return BimapMorphism(m.alpha, m.beta.transpose()) if transpose_beta else m

        for phi in elems:
            m = B(phi)
            morph.record(m.check(b, b) is None, (G.id, phi, m.check(b, b)))
            equi.record(conjugate_subspace(m.alpha, A, b.v_dim) == A, (G.id, phi))
        pairs, pexh = product_source([elems, elems], config, f"baer-pairs-{G.id}")
        func.exhaustive = exh and pexh
        for phi, psi in pairs:
            func.record(B(psi.compose(phi)) == B(phi).then(B(psi)), (G.id, phi, psi))
        morph.exhaustive = morph.exhaustive and exh
        equi.exhaustive = equi.exhaustive and exh
    for chk in (morph, func, equi):
        report.add(chk.result())
    return report


# ---------------------------------------------------------------------------
# Pipeline


@dataclass
class PipelineResult:
    group: FiniteGroup
    group_bimap: GroupBimap
    adjoint: AdjointAlgebra
    radical: Subspace
    radical_image: Subspace
    subgroup: Subgroup
    certificate: CharResult
    composite: list[dict]
    report: LawReport

    def to_json(self) -> dict:
        return {
            "group": self.group.id,
            "order": self.group.order,
            "bimap": self.group_bimap.bimap.to_json(),
            "algebra_basis": [list(m.entries) for m in self.adjoint.algebra.basis],
            "algebra_dim": self.adjoint.algebra.dim,
            "radical_basis": [list(v) for v in self.radical.basis],
            "radical_dim": self.radical.dim,
            "radical_image": [list(v) for v in self.radical_image.basis],
            "subgroup": list(self.subgroup.members),
            "subgroup_order": self.subgroup.order,
            "certificate": self.certificate.to_json(),
            "composite": self.composite,
            "capsule_generator": "unresolved",
            "report": self.report.to_dict(),
        }


def pipeline(G: FiniteGroup, p: int, config: Config = DEFAULT) -> PipelineResult:
    """``b_G``, its adjoint algebra, the radical ``J`` and the preimage of ``J V`` in ``G``.

    The subgroup is certified characteristic by brute force, and every
    automorphism generator is pushed through the composite
    group -> bimap -> algebra -> radical to check each stage is preserved.
    """
    gb = bimap_from_group(G, p)
    b = gb.bimap
    adj = adjoint_algebra(b)
    J = jacobson_radical(adj.algebra)
    JV = radical_image(J, b.v_dim)
    H = Subgroup(G, tuple(g for g in range(G.order) if JV.contains(gb.v_coord[g])))
    cert = is_characteristic(G, H, config)
    report = LawReport(f"pipeline[{G.id}]", seed=config.seed)
    report.merge(check_adjoint_algebra(adj), "algebra.")
    A = adj.algebra.as_subspace()
    morph = LawCheck("bimap_morphism")
    alg = LawCheck("algebra_preserved")
    rad = LawCheck("radical_preserved")
    jv = LawCheck("radical_image_preserved")
    composite = []
    for i, phi in enumerate(automorphism_group(G, config).generator_homs()):
        m = gb.morphism(phi, gb)
        morph.record(m.check(b, b) is None, (i,))
        alg.record(conjugate_subspace(m.alpha, A, b.v_dim) == A, (i,))
        rad.record(conjugate_subspace(m.alpha, J, b.v_dim) == J, (i,))
        jv.record(Subspace.span(p, b.v_dim, [m.alpha.apply(v) for v in JV.basis]) == JV, (i,))
        composite.append({"gen": i, **m.to_json()})
    for chk in (morph, alg, rad, jv):
        report.add(chk.result())
    cc = LawCheck("subgroup_characteristic")
    cc.record(cert.holds, (G.id,))
    report.add(cc.result())
    return PipelineResult(G, gb, adj, J, JV, H, cert, composite, report)
