"""Kotzig array sets over a group, and integer Kotzig arrays.

A Kotzig array set with parameters (j, m; t) is a collection of t
j-by-m arrays of group elements such that each fixed row index, read
across the whole set, is a permutation of the group, and every row and
every column of every array sums to zero.  Integer Kotzig arrays have
rows that permute {1..k} (or centered residues) and constant column
sums.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BudgetExceededError,
    InfeasibleError,
    OutOfTheoremRangeError,
    PreconditionError,
    VerificationError,
)
from .groups import Element, GroupSpec, is_in_script_g
from .mappings import CmPartitionCertificate, cm_two_group, two_group_class_size
from .search import DEFAULT_BUDGET, FOUND, backtrack
from .zerosum import zero_sum_partition

Array = tuple[tuple[Element, ...], ...]


@dataclass(frozen=True)
class KotzigArraySet:
    group: GroupSpec
    j: int
    m: int
    arrays: tuple[Array, ...]

    @property
    def t(self) -> int:
        return len(self.arrays)


@dataclass(frozen=True)
class IntKotzigArray:
    j: int
    k: int
    centered: bool
    entries: tuple[tuple[int, ...], ...]


def check_kas(s: KotzigArraySet) -> None:
    g = s.group
    if s.m < 1 or g.order % s.m != 0 or s.t != g.order // s.m:
        raise VerificationError("array-count")
    for idx, arr in enumerate(s.arrays):
        if len(arr) != s.j or any(len(row) != s.m for row in arr):
            raise VerificationError(f"shape:{idx}")
        for i, row in enumerate(arr):
            for x in row:
                g.check_element(x)
            if g.sum_over(row) != g.zero:
                raise VerificationError(f"row-sum:{idx}:{i}")
        for col in range(s.m):
            if g.sum_over(arr[i][col] for i in range(s.j)) != g.zero:
                raise VerificationError(f"col-sum:{idx}:{col}")
    all_elems = set(g.elements())
    for i in range(s.j):
        seen = [arr[i][c] for arr in s.arrays for c in range(s.m)]
        if len(set(seen)) != g.order or set(seen) != all_elems:
            raise VerificationError(f"row-permutation:{i}")


def verify_kas(s: KotzigArraySet) -> bool:
    try:
        check_kas(s)
        return True
    except VerificationError:
        return False


def verify_int_kotzig(a: IntKotzigArray) -> bool:
    if a.centered:
        domain = set(range(-(a.k - 1) // 2, (a.k - 1) // 2 + 1))
        target = 0
    else:
        domain = set(range(1, a.k + 1))
        target = a.j * (a.k + 1) // 2
    if len(a.entries) != a.j or any(len(r) != a.k for r in a.entries):
        return False
    if any(set(r) != domain for r in a.entries):
        return False
    return all(
        sum(a.entries[i][c] for i in range(a.j)) == target for c in range(a.k)
    )


# -- group Kotzig array sets ---------------------------------------------


def kas_two_rows(g: GroupSpec, m: int, seed: int = 0) -> KotzigArraySet:
    """Two-row set from a zero-sum partition: each class yields rows
    (elements, negated elements)."""
    part = zero_sum_partition(g, m, seed=seed)
    arrays = tuple(
        (cls, tuple(g.neg(x) for x in cls)) for cls in part.classes
    )
    return KotzigArraySet(g, 2, m, arrays)


def kas_three_rows(
    g: GroupSpec, cert: CmPartitionCertificate | None = None
) -> KotzigArraySet:
    """Three-row set for a 2-group with more than one involution: rows
    g, phi(g), -g-phi(g) over a complete-mapping partition certificate.
    Each row permutes the group because phi and theta are bijections."""
    if not g.is_two_group:
        raise OutOfTheoremRangeError(
            f"three-row sets are only constructed for 2-groups; got {g}"
        )
    if cert is None:
        cert = cm_two_group(g)
    arrays = []
    for cls in cert.partition.classes:
        row2 = tuple(cert.mapping.apply(x) for x in cls)
        row3 = tuple(g.neg(g.add(x, y)) for x, y in zip(cls, row2))
        arrays.append((cls, row2, row3))
    return KotzigArraySet(g, 3, cert.m, tuple(arrays))


def kas_row_glue(sets: list[KotzigArraySet]) -> KotzigArraySet:
    """Stack sets vertically, array by array; all parts must agree on
    the group, column count and array count."""
    if not sets:
        raise PreconditionError("nothing to glue")
    g, m, t = sets[0].group, sets[0].m, sets[0].t
    if any(s.group != g or s.m != m or s.t != t for s in sets):
        raise PreconditionError("row glue requires matching (group, m, t)")
    arrays = tuple(
        tuple(row for s in sets for row in s.arrays[idx]) for idx in range(t)
    )
    return KotzigArraySet(g, sum(s.j for s in sets), m, arrays)


def kas(g: GroupSpec, j: int, m: int, budget: int = DEFAULT_BUDGET) -> KotzigArraySet:
    """(j, m; order/m) Kotzig array set.

    Even j: stack of j/2 two-row sets over independent partitions; works
    for any group with odd order or more than one involution and any
    divisor m > 2 (or m = order).  Odd j: one three-row set plus two-row
    sets, available for 2-groups at m = two_group_class_size(g) only.
    """
    if j <= 1:
        raise PreconditionError(f"row count {j} must exceed 1")
    if not is_in_script_g(g):
        raise PreconditionError(f"{g} has exactly one involution")
    if j % 2 == 0:
        parts = [kas_two_rows(g, m, seed=i) for i in range(j // 2)]
        out = kas_row_glue(parts)
    else:
        if not g.is_two_group:
            raise OutOfTheoremRangeError(
                f"odd row count {j} is only supported for 2-groups; got {g}"
            )
        if m != two_group_class_size(g):
            raise PreconditionError(
                f"odd row count requires m = {two_group_class_size(g)}, got {m}"
            )
        cert = cm_two_group(g, budget)
        parts = [kas_three_rows(g, cert)]
        parts += [kas_two_rows(g, m, seed=i) for i in range((j - 3) // 2)]
        out = kas_row_glue(parts)
    check_kas(out)
    return out


def kas_column_glue(s: KotzigArraySet, b: int) -> KotzigArraySet:
    """Concatenate consecutive groups of b arrays horizontally."""
    if b < 1 or s.t % b != 0:
        raise PreconditionError(f"{b} does not divide the array count {s.t}")
    if b == 1:
        return s
    arrays = []
    for start in range(0, s.t, b):
        chunk = s.arrays[start : start + b]
        arrays.append(
            tuple(
                tuple(x for arr in chunk for x in arr[i]) for i in range(s.j)
            )
        )
    return KotzigArraySet(s.group, s.j, s.m * b, tuple(arrays))


def group_kotzig(h: GroupSpec, rows: int) -> KotzigArraySet:
    """Single-array Kotzig set of shape rows x |h| for an odd-order
    group: pairs (g, -g), preceded by the triple g, g, -2g when the row
    count is odd (doubling is a bijection in odd order)."""
    if h.order % 2 == 0:
        raise PreconditionError(f"{h} must have odd order")
    if rows <= 1:
        raise PreconditionError(f"row count {rows} must exceed 1")
    elems = tuple(h.elements())
    parts: list[tuple[Element, ...]] = []
    if rows % 2 == 1:
        parts.append(elems)
        parts.append(elems)
        parts.append(tuple(h.neg(h.smul(2, x)) for x in elems))
        rows -= 3
    for _ in range(rows // 2):
        parts.append(elems)
        parts.append(tuple(h.neg(x) for x in elems))
    out = KotzigArraySet(h, len(parts), h.order, (tuple(parts),))
    check_kas(out)
    return out


# -- integer Kotzig arrays ------------------------------------------------


class _ThreeRowProblem:
    """3 x k integer array: row one is 1..k, row two is chosen column by
    column, row three is forced by the column-sum target."""

    def __init__(self, k: int):
        self.k = k
        self.target = 3 * (k + 1) // 2
        self.row2: list[int] = []
        self.row3: list[int] = []
        self.used2 = [False] * (k + 1)
        self.used3 = [False] * (k + 1)

    def select(self):
        return len(self.row2) if len(self.row2) < self.k else None

    def options(self, col):
        out = []
        for v in range(1, self.k + 1):
            if self.used2[v]:
                continue
            w = self.target - (col + 1) - v
            if 1 <= w <= self.k and not self.used3[w]:
                out.append((v, w))
        return out

    def assign(self, col, vw):
        v, w = vw
        self.row2.append(v)
        self.row3.append(w)
        self.used2[v] = True
        self.used3[w] = True
        return True

    def unassign(self, col, vw):
        v, w = vw
        self.row2.pop()
        self.row3.pop()
        self.used2[v] = False
        self.used3[w] = False

    def witness(self):
        return (tuple(self.row2), tuple(self.row3))


_three_row_cache: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}


def _int_three_rows(k: int, budget: int) -> list[tuple[int, ...]]:
    if k == 1:
        return [(1,), (1,), (1,)]
    if k not in _three_row_cache:
        outcome = backtrack(_ThreeRowProblem(k), budget)
        if outcome.status != FOUND:
            raise (
                InfeasibleError if outcome.status == "infeasible" else BudgetExceededError
            )(f"no 3x{k} integer Kotzig array found within {budget} nodes")
        _three_row_cache[k] = outcome.witness
    row2, row3 = _three_row_cache[k]
    return [tuple(range(1, k + 1)), row2, row3]


def int_kotzig(
    j: int, k: int, centered: bool = False, budget: int = DEFAULT_BUDGET
) -> IntKotzigArray:
    """j x k integer Kotzig array: rows permute {1..k}, all column sums
    j(k+1)/2.  Exists exactly when j > 1 and j(k-1) is even.  Centered
    arrays subtract (k+1)/2 entrywise (k odd), making column sums 0."""
    if j <= 1:
        raise PreconditionError(f"row count {j} must exceed 1")
    if (j * (k - 1)) % 2 != 0:
        raise PreconditionError(f"j(k-1) = {j * (k - 1)} must be even")
    if centered and k % 2 == 0:
        raise PreconditionError("centered arrays require odd k")
    rows: list[tuple[int, ...]] = []
    pairs = j // 2
    if j % 2 == 1:
        rows.extend(_int_three_rows(k, budget))
        pairs = (j - 3) // 2
    forward = tuple(range(1, k + 1))
    backward = tuple(range(k, 0, -1))
    for _ in range(pairs):
        rows.append(forward)
        rows.append(backward)
    if centered:
        shift = (k + 1) // 2
        rows = [tuple(v - shift for v in row) for row in rows]
    out = IntKotzigArray(j, k, centered, tuple(rows))
    assert verify_int_kotzig(out)
    return out
