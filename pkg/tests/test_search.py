from zsmagic.search import (
    BUDGET_EXCEEDED,
    FOUND,
    INFEASIBLE,
    backtrack,
)


class PickDistinct:
    """Choose n pairwise-distinct values from a domain; infeasible when
    the domain is too small."""

    def __init__(self, n, domain):
        self.n = n
        self.domain = list(domain)
        self.chosen = []

    def select(self):
        return len(self.chosen) if len(self.chosen) < self.n else None

    def options(self, slot):
        return [v for v in self.domain if v not in self.chosen]

    def assign(self, slot, v):
        self.chosen.append(v)
        return True

    def unassign(self, slot, v):
        self.chosen.pop()

    def witness(self):
        return tuple(self.chosen)


def test_found():
    out = backtrack(PickDistinct(3, range(5)), budget=1000)
    assert out.status == FOUND and out.found
    assert len(set(out.witness)) == 3


def test_infeasible_exhausts():
    out = backtrack(PickDistinct(4, range(3)), budget=1000)
    assert out.status == INFEASIBLE and not out.found
    assert out.witness is None


def test_budget_exceeded():
    out = backtrack(PickDistinct(10, range(10)), budget=3)
    assert out.status == BUDGET_EXCEEDED
    # The engine notices exhaustion on the first node past the budget.
    assert out.nodes_explored == 4


def test_node_accounting_deterministic():
    a = backtrack(PickDistinct(4, range(4)), budget=10_000)
    b = backtrack(PickDistinct(4, range(4)), budget=10_000)
    assert a.status == b.status == FOUND
    assert a.nodes_explored == b.nodes_explored
    assert a.witness == b.witness
