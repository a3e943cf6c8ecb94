"""Partitions of a finite Abelian group into equal-size zero-sum classes.

For a group of odd order or with more than one involution, such a
partition exists for every class size m > 2 dividing the order (and for
m = order).  Size 2 is impossible outright: the identity would have to
pair with an element y satisfying 0 + y = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BudgetExceededError,
    InfeasibleError,
    PreconditionError,
    VerificationError,
)
from .groups import Element, GroupSpec, is_in_script_g
from .search import DEFAULT_BUDGET, FOUND, INFEASIBLE, backtrack


@dataclass(frozen=True)
class ZeroSumPartition:
    """Equal-size classes covering the whole group, each summing to zero."""

    group: GroupSpec
    m: int
    classes: tuple[tuple[Element, ...], ...]

    @cached_property
    def class_count(self) -> int:
        return len(self.classes)


def check_zero_sum_partition(p: ZeroSumPartition) -> None:
    """Raise VerificationError at the first violated invariant."""
    g = p.group
    if p.m < 1 or g.order % p.m != 0:
        raise VerificationError("class-size-divides-order")
    if len(p.classes) != g.order // p.m:
        raise VerificationError("class-count")
    seen: set[Element] = set()
    for i, cls in enumerate(p.classes):
        if len(cls) != p.m:
            raise VerificationError(f"class-size:{i}")
        for x in cls:
            g.check_element(x)
            if x in seen:
                raise VerificationError(f"duplicate-element:{i}")
            seen.add(x)
        if g.sum_over(cls) != g.zero:
            raise VerificationError(f"class-sum:{i}")
    if len(seen) != g.order:
        raise VerificationError("coverage")


def verify_zero_sum_partition(p: ZeroSumPartition) -> bool:
    try:
        check_zero_sum_partition(p)
        return True
    except VerificationError:
        return False


class _PartitionProblem:
    """Backtracking state: build classes one at a time, each anchored at
    its lowest-rank unused element, remaining members chosen in rank
    order with the final member forced by the zero-sum constraint."""

    def __init__(self, g: GroupSpec, m: int, seed: int = 0):
        self.g = g
        self.m = m
        self.elems = list(g.elements())
        n = g.order
        order = list(range(n))
        if seed:
            random.Random(seed).shuffle(order)
        # rank[i] = position of element i in the (possibly seeded) order
        self.by_rank = order
        self.rank = [0] * n
        for pos, i in enumerate(order):
            self.rank[i] = pos
        self.used = [False] * n
        self.used_count = 0
        self.classes: list[list[int]] = []
        self.partial_sum = g.zero
        self.index = {e: i for i, e in enumerate(self.elems)}

    # -- engine protocol ----------------------------------------------

    def select(self):
        if self.used_count == len(self.elems):
            return None
        if not self.classes or len(self.classes[-1]) == self.m:
            return ("anchor",)
        return ("member", len(self.classes[-1]))

    def options(self, slot):
        if slot[0] == "anchor":
            for i in self.by_rank:
                if not self.used[i]:
                    return [i]
            return []
        pos = slot[1]
        last_rank = self.rank[self.classes[-1][-1]]
        if pos == self.m - 1:
            needed = self.index.get(self.g.neg(self.partial_sum))
            if (
                needed is not None
                and not self.used[needed]
                and self.rank[needed] > last_rank
            ):
                return [needed]
            return []
        return [
            i
            for i in self.by_rank[last_rank + 1 :]
            if not self.used[i]
        ]

    def assign(self, slot, i) -> bool:
        if slot[0] == "anchor":
            self.classes.append([i])
            self.partial_sum = self.elems[i]
        else:
            self.classes[-1].append(i)
            self.partial_sum = self.g.add(self.partial_sum, self.elems[i])
        self.used[i] = True
        self.used_count += 1
        return True

    def unassign(self, slot, i) -> None:
        self.used[i] = False
        self.used_count -= 1
        self.partial_sum = self.g.sub(self.partial_sum, self.elems[i])
        if slot[0] == "anchor":
            self.classes.pop()
            self.partial_sum = self.g.zero
        else:
            self.classes[-1].pop()

    def witness(self) -> tuple[tuple[Element, ...], ...]:
        return tuple(
            tuple(self.elems[i] for i in cls) for cls in self.classes
        )


def zero_sum_partition(
    g: GroupSpec,
    m: int,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> ZeroSumPartition:
    """Partition the whole group into classes of size m, each zero-sum.

    Deterministic given (g, m, seed).  Raises PreconditionError for bad
    parameters, InfeasibleError for m = 2 (provably impossible: 0 cannot
    be paired) and BudgetExceededError if the search budget runs out.
    """
    n = g.order
    if m <= 1:
        raise PreconditionError(f"class size {m} must exceed 1")
    if n % m != 0:
        raise PreconditionError(f"class size {m} does not divide order {n}")
    if not is_in_script_g(g):
        raise PreconditionError(
            f"{g} has exactly one involution; no zero-sum partition exists"
        )
    if m == 2:
        raise InfeasibleError(
            "no zero-sum partition with classes of size 2: the identity "
            "cannot be paired"
        )
    if m == n:
        return ZeroSumPartition(g, m, (tuple(g.elements()),))

    outcome = backtrack(_PartitionProblem(g, m, seed), budget)
    if outcome.status == FOUND:
        part = ZeroSumPartition(g, m, outcome.witness)
        check_zero_sum_partition(part)
        return part
    if outcome.status == INFEASIBLE:
        # Not expected for any in-class group at tested orders.
        raise InfeasibleError(
            f"exhaustive search found no zero-sum partition of {g} with m={m}"
        )
    raise BudgetExceededError(
        f"zero-sum partition search for {g}, m={m} exceeded {budget} nodes"
    )
