"""Resource budgets shared by the search-heavy operations."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration or saturation passes its configured cap.

    ``partial`` carries whatever count or object was reached before stopping.
    """

    def __init__(self, what: str, limit: int, partial=None):
        super().__init__(f"{what} budget of {limit} exceeded")
        self.what = what
        self.limit = limit
        self.partial = partial


@dataclass(frozen=True)
class Budget:
    type_count: int = 200_000     # realized types / aggregates in one saturation
    node_count: int = 200_000     # universal-model nodes created or counted
    level_depth: int = 8          # levels explored by k-enumeration
    search_steps: int = 2_000_000  # candidate visits in combinatorial searches
    width: int = 8192             # subformula-closure size

    def __post_init__(self):
        for name in ("type_count", "node_count", "level_depth", "search_steps", "width"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")

    def with_(self, **kw) -> Budget:
        return replace(self, **kw)


PROFILES = {
    "ci": Budget(type_count=50_000, node_count=50_000, level_depth=6,
                 search_steps=500_000, width=4096),
    "desk": Budget(),
    "deep": Budget(type_count=2_000_000, node_count=5_000_000, level_depth=12,
                   search_steps=50_000_000, width=65536),
}


def default_budget() -> Budget:
    name = os.environ.get("HEYTING_BUDGET_PROFILE", "desk")
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown HEYTING_BUDGET_PROFILE {name!r}; "
                         f"choose from {sorted(PROFILES)}") from None


class StepCounter:
    __slots__ = ("limit", "used", "what")

    def __init__(self, limit: int, what: str = "search_steps"):
        self.limit = limit
        self.used = 0
        self.what = what

    def tick(self, k: int = 1, partial=None):
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(self.what, self.limit, partial)
