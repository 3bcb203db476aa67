"""Catalogs of named finite groups and their JSON storage."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Callable, Iterable, Optional

from .groups import (FiniteGroup, abelian, alternating, cyclic, dihedral, direct_product,
                     heisenberg, metacyclic, quaternion, semidirect_abelian, symmetric)


def _small_builders() -> list[tuple[str, Callable[[], FiniteGroup]]]:
    b: list[tuple[str, Callable[[], FiniteGroup]]] = []

    def cyc(n):
        b.append((f"C{n}", lambda n=n: cyclic(n)))

    for n in range(1, 17):
        cyc(n)
        if n == 4:
            b.append(("C2xC2", lambda: abelian([2, 2], "C2xC2")))
        if n == 6:
            b.append(("S3", lambda: symmetric(3)))
        if n == 8:
            b += [("C4xC2", lambda: abelian([4, 2])),
                  ("C2^3", lambda: abelian([2, 2, 2], "C2^3")),
                  ("D4", lambda: dihedral(4)),
                  ("Q8", lambda: quaternion(8))]
        if n == 9:
            b.append(("C3xC3", lambda: abelian([3, 3])))
        if n == 10:
            b.append(("D5", lambda: dihedral(5)))
        if n == 12:
            b += [("C6xC2", lambda: abelian([6, 2])),
                  ("A4", lambda: alternating(4)),
                  ("D6", lambda: dihedral(6)),
                  ("Dic3", lambda: metacyclic(3, 4, 2, 0, "Dic3"))]
        if n == 14:
            b.append(("D7", lambda: dihedral(7)))
        if n == 16:
            b += [("C8xC2", lambda: abelian([8, 2])),
                  ("C4xC4", lambda: abelian([4, 4])),
                  ("C4xC2xC2", lambda: abelian([4, 2, 2])),
                  ("C2^4", lambda: abelian([2, 2, 2, 2], "C2^4")),
                  ("D8", lambda: dihedral(8)),
                  ("SD16", lambda: metacyclic(8, 2, 3, 0, "SD16")),
                  ("Q16", lambda: quaternion(16)),
                  ("M16", lambda: metacyclic(8, 2, 5, 0, "M16")),
                  ("C4sC4", lambda: metacyclic(4, 4, 3, 0, "C4sC4")),
                  ("C2^2sC4", lambda: semidirect_abelian([2, 2], [[0, 1], [1, 0]], 4, "C2^2sC4")),
                  ("D4xC2", lambda: direct_product(dihedral(4), cyclic(2), "D4xC2")),
                  ("Q8xC2", lambda: direct_product(quaternion(8), cyclic(2), "Q8xC2")),
                  ("C4oD4", lambda: semidirect_abelian([4, 2], [[1, 2], [0, 1]], 2, "C4oD4"))]
    return b


def small_groups(max_order: int = 16) -> list[FiniteGroup]:
    """One group of each isomorphism type of order at most ``max_order`` (<= 16)."""
    if max_order > 16:
        raise ValueError("the built-in catalog stops at order 16")
    out = []
    for name, build in _small_builders():
        G = build()
        if G.order <= max_order:
            out.append(G if G.id == name else G.renamed(name))
    return out


def small_group(name: str) -> FiniteGroup:
    for n, build in _small_builders():
        if n == name:
            G = build()
            return G if G.id == name else G.renamed(name)
    raise KeyError(name)


def safe_filename(group_id: str) -> str:
    return "".join(c if c.isalnum() or c in "-_^." else "_" for c in group_id) + ".json"


def save_group(G: FiniteGroup, path: Path) -> None:
    path.write_text(json.dumps(G.to_json(), separators=(",", ":")) + "\n")


def load_group(path: str | os.PathLike) -> FiniteGroup:
    return FiniteGroup.from_json(json.loads(Path(path).read_text()))


def save_catalog(groups: Iterable[FiniteGroup], directory: str | os.PathLike) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    index = []
    for G in groups:
        p = d / safe_filename(G.id)
        save_group(G, p)
        paths.append(p)
        index.append({"id": G.id, "order": G.order, "file": p.name})
    (d / "index.json").write_text(json.dumps(index, indent=1) + "\n")
    return paths


def load_catalog(directory: str | os.PathLike, max_order: Optional[int] = None) -> list[FiniteGroup]:
    d = Path(directory)
    index = json.loads((d / "index.json").read_text())
    return [load_group(d / e["file"]) for e in index if max_order is None or e["order"] <= max_order]


def rottlaender_default() -> FiniteGroup:
    from .standard import rottlaender_group
    return rottlaender_group(5, 11, 2, (3, 9))


def heisenberg_default() -> FiniteGroup:
    return heisenberg(5)
