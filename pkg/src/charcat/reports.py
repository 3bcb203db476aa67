"""Structured law reports and budgeted tuple sources."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import prod
from typing import Any, Iterator, Optional, Sequence

from .config import DEFAULT, Config


def render(x: Any) -> Any:
    """JSON-friendly rendering of witnesses."""
    if x is None:
        return "bot"
    if hasattr(x, "describe"):
        return x.describe()
    if isinstance(x, (tuple, list)):
        return [render(y) for y in x]
    if isinstance(x, (int, str, bool, float)):
        return x
    return str(x)


@dataclass
class LawResult:
    law: str
    passed: bool
    checked: int
    exhaustive: bool
    witness: Optional[tuple] = None
    note: str = ""

    def to_dict(self) -> dict:
        d = {"law": self.law, "passed": self.passed, "checked": self.checked, "exhaustive": self.exhaustive}
        if self.witness is not None:
            d["witness"] = render(self.witness)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class LawReport:
    subject: str
    results: list[LawResult] = field(default_factory=list)
    seed: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed]

    def get(self, law: str) -> LawResult:
        for r in self.results:
            if r.law == law:
                return r
        raise KeyError(law)

    def add(self, r: LawResult) -> None:
        self.results.append(r)

    def merge(self, other: "LawReport", prefix: str = "") -> None:
        for r in other.results:
            self.results.append(LawResult(prefix + r.law, r.passed, r.checked, r.exhaustive, r.witness, r.note))

    def to_dict(self) -> dict:
        d = {"subject": self.subject, "ok": self.ok, "seed": self.seed,
             "results": [r.to_dict() for r in self.results]}
        if self.extra:
            d["extra"] = self.extra
        return d


class LawCheck:
    """Accumulates one law over many tuples, keeping the first counterexample."""

    def __init__(self, law: str, exhaustive: bool = True):
        self.law = law
        self.exhaustive = exhaustive
        self.checked = 0
        self.witness: Optional[tuple] = None
        self.note = ""

    def record(self, ok: bool, witness: tuple) -> None:
        self.checked += 1
        if not ok and self.witness is None:
            self.witness = witness

    @property
    def failed(self) -> bool:
        return self.witness is not None

    def result(self) -> LawResult:
        return LawResult(self.law, self.witness is None, self.checked, self.exhaustive, self.witness, self.note)


def rng_for(config: Config, salt: str = "") -> random.Random:
    return random.Random(f"{config.seed}:{salt}")


def product_source(pools: Sequence[Sequence[Any]], config: Config = DEFAULT,
                   salt: str = "") -> tuple[Iterator[tuple], bool]:
    """All tuples of the product when within budget, else a seeded sample.

    Returns ``(iterator, exhaustive)``.
    """
    total = prod(len(p) for p in pools)
    if total <= config.pair_budget:
        return itertools.product(*pools), True
    if any(len(p) == 0 for p in pools):
        return iter(()), True
    rng = rng_for(config, salt)
    sample = [tuple(rng.choice(p) for p in pools) for _ in range(config.sample_count)]
    return iter(sample), False


def sampled(items: Sequence[Any], config: Config = DEFAULT, salt: str = "") -> tuple[Sequence[Any], bool]:
    """``items`` when within the pair budget, else a seeded sample of them."""
    if len(items) <= config.pair_budget:
        return items, True
    rng = rng_for(config, salt)
    return [items[rng.randrange(len(items))] for _ in range(config.sample_count)], False
