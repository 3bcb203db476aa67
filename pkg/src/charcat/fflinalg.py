"""Exact linear algebra over prime fields.

Vectors are tuples of ints reduced mod ``p``.  Matrices are row-major
:class:`Mat` values.  Every subspace is stored by its reduced row echelon
basis, so equal subspaces compare equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import InvalidSpecification, UnsupportedCharacteristic

Vec = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise InvalidSpecification(f"{p} is not prime", {"p": p})


# ---------------------------------------------------------------------------
# Scalars


@dataclass(frozen=True)
class Fp:
    """An element of the prime field of order ``p``."""

    p: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("field mismatch")
            return other.value
        return int(other)

    def __add__(self, other):
        return Fp(self.p, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.p, self.value - self._coerce(other))

    def __mul__(self, other):
        return Fp(self.p, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(self.p, -self.value)

    def __pow__(self, k: int):
        return Fp(self.p, pow(self.value, k, self.p))

    def inverse(self) -> "Fp":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return Fp(self.p, pow(self.value, -1, self.p))

    def __int__(self) -> int:
        return self.value

    def multiplicative_order(self) -> int:
        if self.value == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        k, x = 1, self.value
        while x != 1:
            x = x * self.value % self.p
            k += 1
        return k


# ---------------------------------------------------------------------------
# Row reduction


def rref(rows: Iterable[Sequence[int]], p: int, ncols: int | None = None):
    """Reduced row echelon form of ``rows`` over F_p.

    Returns ``(basis, pivots)`` with zero rows dropped.
    """
    m = [[x % p for x in r] for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[0])


def nullspace_rows(rows: Sequence[Sequence[int]], p: int, ncols: int) -> tuple[Vec, ...]:
    """Basis (RREF) of ``{x : M x = 0}`` for the matrix with the given rows."""
    basis, pivots = rref(rows, p, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(basis, pivots):
            x[pc] = (-row[f]) % p
        out.append(x)
    return rref(out, p, ncols)[0]


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class Mat:
    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        object.__setattr__(self, "entries", tuple(int(x) % self.p for x in self.entries))

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        return cls(p, len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, p: int, n: int) -> "Mat":
        return cls(p, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, p: int, rows: int, cols: int) -> "Mat":
        return cls(p, rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, p: int, values: Sequence[int]) -> "Mat":
        n = len(values)
        return cls(p, n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vec:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vec:
        return self.entries[j::self.cols]

    def as_rows(self) -> list[Vec]:
        return [self.row(i) for i in range(self.rows)]

    def __add__(self, other: "Mat") -> "Mat":
        return Mat(self.p, self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat(self.p, self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c: int) -> "Mat":
        return Mat(self.p, self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in cols)
        return Mat(self.p, self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[int]) -> Vec:
        """``M v`` for a column vector ``v``."""
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) % self.p for i in range(self.rows))

    def transpose(self) -> "Mat":
        return Mat.from_rows(self.p, [self.col(j) for j in range(self.cols)], self.rows)

    def trace(self) -> int:
        return sum(self[i, i] for i in range(min(self.rows, self.cols))) % self.p

    def __pow__(self, k: int) -> "Mat":
        out = Mat.identity(self.p, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.entries)

    def inverse(self) -> "Mat":
        n = self.rows
        aug = [list(self.row(i)) + [int(i == j) for j in range(n)] for i in range(n)]
        basis, pivots = rref(aug, self.p, 2 * n)
        if len(basis) < n or pivots[n - 1] != n - 1:
            raise ZeroDivisionError("singular matrix")
        return Mat.from_rows(self.p, [r[n:] for r in basis])

    def flatten(self) -> Vec:
        return self.entries

    def to_json(self) -> dict:
        return {"p": self.p, "rows": self.rows, "cols": self.cols, "entries": list(self.entries)}

    @classmethod
    def from_json(cls, d: dict) -> "Mat":
        return cls(int(d["p"]), int(d["rows"]), int(d["cols"]), tuple(d["entries"]))


def _unflatten(p: int, n: int, v: Sequence[int]) -> Mat:
    return Mat(p, n, n, tuple(v))


# ---------------------------------------------------------------------------
# Subspaces


@dataclass(frozen=True)
class Subspace:
    p: int
    ambient_dim: int
    basis: tuple[Vec, ...]

    @classmethod
    def span(cls, p: int, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        return cls(p, ambient_dim, rref(list(vectors), p, ambient_dim)[0])

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return rank(list(self.basis) + [list(v)], self.p) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.p, self.ambient_dim, self.basis + other.basis)

    def elements(self) -> Iterable[Vec]:
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield tuple(sum(c * b[i] for c, b in zip(coeffs, self.basis)) % self.p
                        for i in range(self.ambient_dim))

    def to_json(self) -> dict:
        return {"p": self.p, "rows": self.dim, "cols": self.ambient_dim,
                "entries": [x for b in self.basis for x in b]}

    @classmethod
    def from_json(cls, d: dict) -> "Subspace":
        m = Mat.from_json(d)
        return cls.span(m.p, m.cols, m.as_rows())


def kernel(m: Mat) -> Subspace:
    """Null space of ``x -> m x`` as a subspace of column vectors."""
    return Subspace(m.p, m.cols, nullspace_rows(m.as_rows(), m.p, m.cols))


def image(m: Mat) -> Subspace:
    return Subspace.span(m.p, m.rows, [m.col(j) for j in range(m.cols)])


def eigenspace(theta: Mat, a: Fp | int) -> Subspace:
    """``ker(theta - a I)``."""
    if theta.rows != theta.cols:
        raise ValueError("eigenspace needs a square matrix")
    av = int(a) % theta.p
    return kernel(theta - Mat.identity(theta.p, theta.rows).scale(av))


# ---------------------------------------------------------------------------
# Matrix algebras


@dataclass(frozen=True)
class MatrixAlgebra:
    """Subalgebra of ``M_deg(F_p)`` given by an RREF basis of flattened matrices."""

    p: int
    deg: int
    basis: tuple[Mat, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_subspace(self) -> Subspace:
        return Subspace(self.p, self.deg * self.deg, tuple(b.flatten() for b in self.basis))

    def contains(self, m: Mat) -> bool:
        return self.as_subspace().contains(m.flatten())

    def has_unit(self) -> bool:
        return self.contains(Mat.identity(self.p, self.deg))


def algebra_closure(gens: Sequence[Mat], with_unit: bool = True, p: int | None = None,
                    deg: int | None = None) -> MatrixAlgebra:
    """Smallest subalgebra of ``M_n(F_p)`` containing ``gens``.

    With no generators, ``p`` and ``deg`` must be given; the result is the
    zero algebra (or the scalars when ``with_unit``).
    """
    if not gens:
        if p is None or deg is None:
            raise ValueError("need a generator or explicit p and deg")
        if not with_unit:
            return MatrixAlgebra(p, deg, ())
        gens = [Mat.identity(p, deg)]
    p, n = gens[0].p, gens[0].rows
    if any(g.p != p or g.rows != n or g.cols != n for g in gens):
        raise ValueError("generators must be square of one degree over one field")
    vecs = [g.flatten() for g in gens]
    if with_unit:
        vecs.append(Mat.identity(p, n).flatten())
    basis = rref(vecs, p, n * n)[0]
    while True:
        mats = [_unflatten(p, n, b) for b in basis]
        prods = [(x @ y).flatten() for x in mats for y in mats]
        nb = rref(list(basis) + prods, p, n * n)[0]
        if len(nb) == len(basis):
            break
        basis = nb
    return MatrixAlgebra(p, n, tuple(_unflatten(p, n, b) for b in basis))


def jacobson_radical(alg: MatrixAlgebra) -> Subspace:
    """Radical via the trace form; valid when ``p > deg``.

    An element ``a`` lies in the radical exactly when ``Tr(a b) = 0`` for
    every ``b`` in the algebra and ``Tr(a) = 0``.  With ``p > deg`` the
    power-sum identities force ``a b`` to be nilpotent.
    """
    p, n = alg.p, alg.deg
    if p <= n:
        raise UnsupportedCharacteristic(f"trace criterion needs p > {n}, got p = {p}")
    d = alg.dim
    eqs = [[(alg.basis[i] @ bj).trace() for i in range(d)] for bj in alg.basis]
    eqs.append([alg.basis[i].trace() for i in range(d)])
    coeffs = nullspace_rows(eqs, p, d)
    vecs = [tuple(sum(c * b.entries[k] for c, b in zip(cv, alg.basis)) % p for k in range(n * n))
            for cv in coeffs]
    return Subspace.span(p, n * n, vecs)


def quotient_trace_form_rank(alg: MatrixAlgebra, rad: Subspace) -> tuple[int, int]:
    """Rank of the trace form restricted to a complement of ``rad``.

    Returns ``(rank, dim A - dim rad)``; the two agree when the form is
    nondegenerate on the quotient.
    """
    p = alg.p
    comp = []
    cur = rad
    for b in alg.basis:
        if not cur.contains(b.flatten()):
            comp.append(b)
            cur = cur + Subspace.span(p, cur.ambient_dim, [b.flatten()])
    gram = [[(x @ y).trace() for y in comp] for x in comp]
    return rank(gram, p), len(comp)


# -- brute-force oracle ------------------------------------------------------


def _np_nilpotent(stack: np.ndarray, p: int, n: int) -> np.ndarray:
    """Boolean mask of nilpotent matrices in an (N, n, n) stack."""
    acc = stack.copy()
    for _ in range(n - 1):
        acc = np.matmul(acc, stack) % p
    return ~acc.reshape(len(acc), -1).any(axis=1)


def _subspace_products(p: int, n: int, xs: Sequence[Vec], ys: Sequence[Vec]) -> list[Vec]:
    mx = [_unflatten(p, n, x) for x in xs]
    my = [_unflatten(p, n, y) for y in ys]
    return [(a @ b).flatten() for a in mx for b in my]


def _is_nilpotent_subspace(p: int, n: int, basis: Sequence[Vec]) -> bool:
    cur = list(basis)
    for _ in range(n * n + 1):
        if not cur:
            return True
        cur = list(rref(_subspace_products(p, n, cur, basis), p, n * n)[0])
    return not cur


def brute_force_radical(alg: MatrixAlgebra, max_dim: int = 6) -> Subspace:
    """Largest nilpotent ideal, found without the trace form.

    Every element is enumerated.  An element lies in the radical iff the
    two-sided ideal it generates is nilpotent, so the radical is the span
    of such elements.  Cheap necessary filters (``a``, ``a b_i`` and
    ``b_i a`` nilpotent) run vectorised before the exact ideal test.
    """
    p, n, d = alg.p, alg.deg, alg.dim
    if d > max_dim:
        raise ValueError(f"oracle limited to dimension <= {max_dim}, got {d}")
    B = np.array([b.entries for b in alg.basis], dtype=np.int64).reshape(d, n, n)
    coeffs = np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64)
    elems = np.einsum("kd,dij->kij", coeffs, B) % p
    elems = elems[_np_nilpotent(elems, p, n)]
    for b in B:
        elems = elems[_np_nilpotent(np.matmul(elems, b) % p, p, n)]
        elems = elems[_np_nilpotent(np.matmul(b, elems) % p, p, n)]
    basis_vecs = [b.flatten() for b in alg.basis]
    found: list[Vec] = []
    span = Subspace.zero(p, n * n)
    for e in elems:
        a = tuple(int(x) for x in e.reshape(-1))
        if not any(a) or span.contains(a):
            continue
        ideal = [a] + _subspace_products(p, n, [a], basis_vecs) + _subspace_products(p, n, basis_vecs, [a])
        ideal += _subspace_products(p, n, _subspace_products(p, n, basis_vecs, [a]), basis_vecs)
        ideal_basis = rref(ideal, p, n * n)[0]
        if _is_nilpotent_subspace(p, n, ideal_basis):
            found.append(a)
            span = Subspace.span(p, n * n, found)
    return span


def _random_mat(p: int, n: int, rng, upper: bool = False) -> Mat:
    return Mat(p, n, n, tuple(0 if upper and i > j else rng.randrange(p) for i in range(n) for j in range(n)))


def random_invertible(p: int, n: int, rng) -> Mat:
    while True:
        m = _random_mat(p, n, rng)
        if rank(m.as_rows(), p) == n:
            return m


def random_subalgebra(p: int, n: int, rng, max_dim: int = 6) -> MatrixAlgebra:
    """Unital subalgebra of ``M_n(F_p)`` generated by two seeded random matrices.

    When ``n*n`` exceeds ``max_dim`` the generators are conjugates of upper
    triangular matrices, which keeps the dimension within ``n(n+1)/2``.
    """
    if n * n <= max_dim:
        return algebra_closure([_random_mat(p, n, rng), _random_mat(p, n, rng)])
    if n * (n + 1) // 2 > max_dim:
        raise ValueError(f"cannot keep M_{n} subalgebras within dimension {max_dim}")
    P = random_invertible(p, n, rng)
    Pi = P.inverse()
    gens = [P @ _random_mat(p, n, rng, upper=True) @ Pi for _ in range(2)]
    return algebra_closure(gens)


# ---------------------------------------------------------------------------
# Bilinear maps


@dataclass(frozen=True)
class BilinearMap:
    """``b: F_p^v x F_p^v -> F_p^w`` given by one Gram matrix per output coordinate."""

    p: int
    v_dim: int
    w_dim: int
    grams: tuple[Mat, ...]

    def __post_init__(self):
        if len(self.grams) != self.w_dim:
            raise ValueError("need one Gram matrix per output coordinate")
        for g in self.grams:
            if (g.rows, g.cols) != (self.v_dim, self.v_dim):
                raise ValueError("Gram matrix has wrong shape")

    def __call__(self, u: Sequence[int], v: Sequence[int]) -> Vec:
        return tuple(sum(u[i] * g[i, j] * v[j] for i in range(self.v_dim) for j in range(self.v_dim)) % self.p
                     for g in self.grams)

    def is_alternating(self) -> bool:
        return all(g[i, i] == 0 for g in self.grams for i in range(self.v_dim)) and all(
            (g + g.transpose()).is_zero() for g in self.grams)

    def to_json(self) -> dict:
        return {"p": self.p, "v_dim": self.v_dim, "w_dim": self.w_dim,
                "grams": [g.to_json() for g in self.grams]}

    @classmethod
    def from_json(cls, d: dict) -> "BilinearMap":
        return cls(int(d["p"]), int(d["v_dim"]), int(d["w_dim"]),
                   tuple(Mat.from_json(g) for g in d["grams"]))


def bimap_radical(b: BilinearMap) -> Subspace:
    """``{v : b(v, u) = 0 for all u}``."""
    rows = [g.transpose().row(i) for g in b.grams for i in range(b.v_dim)]
    return Subspace(b.p, b.v_dim, nullspace_rows(rows, b.p, b.v_dim)) if rows else \
        Subspace.span(b.p, b.v_dim, Mat.identity(b.p, b.v_dim).as_rows())
