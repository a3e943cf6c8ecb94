"""Deterministic budgeted backtracking shared by the partition, complete
mapping and rectangle searches.

A problem exposes mutable state behind four methods; the engine owns the
node budget and the exhaustive-infeasibility bookkeeping.  Outcomes are
values, never exceptions: ``infeasible`` is only reported when the whole
space was exhausted within budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Protocol

DEFAULT_BUDGET = 10_000_000

FOUND = "found"
INFEASIBLE = "infeasible"
BUDGET_EXCEEDED = "budget_exceeded"


class SearchProblem(Protocol):
    """Backtracking problem with in-place assignment and undo.

    ``select`` returns the next decision slot, or None when the current
    assignment is a solution.  ``options`` must be deterministic; any
    seeding lives inside the problem.  ``assign`` returns False (without
    mutating) when the value is inconsistent with the partial state.
    """

    def select(self) -> Any | None: ...

    def options(self, slot: Any) -> Iterable[Any]: ...

    def assign(self, slot: Any, value: Any) -> bool: ...

    def unassign(self, slot: Any, value: Any) -> None: ...

    def witness(self) -> Any: ...


@dataclass(frozen=True)
class SearchOutcome:
    status: str
    witness: Any | None
    nodes_explored: int

    @property
    def found(self) -> bool:
        return self.status == FOUND


def backtrack(problem: SearchProblem, budget: int = DEFAULT_BUDGET) -> SearchOutcome:
    """Depth-first search over the problem's decision tree.

    Counts one node per attempted assignment.  Deterministic given the
    problem's own determinism.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    nodes = 0
    exceeded = False

    def rec() -> bool:
        nonlocal nodes, exceeded
        slot = problem.select()
        if slot is None:
            return True
        for value in problem.options(slot):
            nodes += 1
            if nodes > budget:
                exceeded = True
                return False
            if problem.assign(slot, value):
                if rec():
                    return True
                problem.unassign(slot, value)
            if exceeded:
                return False
        return False

    if rec():
        return SearchOutcome(FOUND, problem.witness(), nodes)
    if exceeded:
        return SearchOutcome(BUDGET_EXCEEDED, None, nodes)
    return SearchOutcome(INFEASIBLE, None, nodes)
