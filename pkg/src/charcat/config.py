"""Run-wide settings and error types."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional


@dataclass(frozen=True)
class Config:
    """Search budgets and sampling controls.

    ``exhaustive_limit`` caps the domain order for all-homomorphism
    enumeration.  ``aut_budget`` caps the number of search nodes visited by
    any single homomorphism/automorphism search.  Law checks that would
    visit more than ``pair_budget`` tuples fall back to ``sample_count``
    seeded random tuples.  Word scans over ``|G|^n`` tuples are limited to
    arity ``word_arity`` and groups of order at most ``word_order``.
    """

    exhaustive_limit: int = 16
    aut_budget: int = 10**7
    sample_count: int = 10**4
    pair_budget: int = 10**5
    seed: int = 0
    catalog_path: Optional[str] = None
    iso_limit: int = 1000
    word_arity: int = 3
    word_order: int = 64
    threads: int = 1

    def with_(self, **kw) -> "Config":
        return replace(self, **kw)


DEFAULT = Config()


class BudgetExceeded(RuntimeError):
    """A search ran past its configured budget."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"{what}: budget of {limit} exceeded")
        self.what = what
        self.limit = limit


class InvalidGroup(ValueError):
    pass


class NotNormal(ValueError):
    pass


class FunctorMismatch(ValueError):
    pass


class UnsupportedCharacteristic(ValueError):
    pass


class InvalidSpecification(ValueError):
    """Parameters that do not describe a valid construction.

    ``violation`` carries a machine-readable description of the offending
    condition.
    """

    def __init__(self, message: str, violation=None):
        super().__init__(message)
        self.violation = violation
