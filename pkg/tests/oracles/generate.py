"""Rebuild the frozen oracle file from naive brute force.

Run ``python tests/oracles/generate.py`` after changing the catalog.  The
values are computed from raw Cayley tables with plain loops; none of the
library's subgroup or automorphism code is used.
"""

from __future__ import annotations

import json
from pathlib import Path

from charcat.catalog import small_groups
from charcat.certificates import _Table, _count_maps

HERE = Path(__file__).parent


def naive_center(t):
    n = len(t)
    return sorted(z for z in range(n) if all(t[z][g] == t[g][z] for g in range(n)))


def naive_derived(t, e):
    n = len(t)
    inv = [next(y for y in range(n) if t[x][y] == e) for x in range(n)]
    comms = {t[t[inv[a]][inv[b]]][t[a][b]] for a in range(n) for b in range(n)}
    sub = {e} | comms
    while True:
        new = {t[a][b] for a in sub for b in sub} | sub
        if new == sub:
            return sorted(sub)
        sub = new


def main() -> None:
    out = {}
    for G in small_groups(16):
        T = _Table(G.to_json())
        out[G.id] = {
            "order": G.order,
            "aut_order": _count_maps(T, True),
            "endomorphisms": _count_maps(T, False),
            "center": naive_center(T.t),
            "derived": naive_derived(T.t, T.e),
        }
    (HERE / "small_groups.json").write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
