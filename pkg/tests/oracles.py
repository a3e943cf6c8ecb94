"""Independent brute-force oracles for cross-checking constructions.

Everything here works on plain tuples of residues with its own modular
arithmetic, so it shares no code with the library under test beyond the
component-order lists used to describe a group.
"""

from __future__ import annotations

from itertools import permutations, product

Comps = tuple[int, ...]
Elem = tuple[int, ...]


def elements(comps: Comps) -> list[Elem]:
    return [tuple(reversed(e)) for e in product(*(range(n) for n in reversed(comps)))]


def add(comps: Comps, x: Elem, y: Elem) -> Elem:
    return tuple((a + b) % n for a, b, n in zip(x, y, comps))


def neg(comps: Comps, x: Elem) -> Elem:
    return tuple((-a) % n for a, n in zip(x, comps))


def smul(comps: Comps, k: int, x: Elem) -> Elem:
    return tuple((k * a) % n for a, n in zip(x, comps))


def total(comps: Comps, xs) -> Elem:
    out = tuple(0 for _ in comps)
    for x in xs:
        out = add(comps, out, x)
    return out


def involution_count(comps: Comps) -> int:
    zero = tuple(0 for _ in comps)
    return sum(
        1
        for x in elements(comps)
        if x != zero and smul(comps, 2, x) == zero
    )


def sum_of_all(comps: Comps) -> Elem:
    return total(comps, elements(comps))


def partition_feasible(comps: Comps, m: int) -> bool:
    """Exhaustive: can the whole group be split into classes of size m,
    each summing to zero?  Classes are built anchored at the smallest
    unused element with members in increasing order."""
    elems = elements(comps)
    n = len(elems)
    if m < 1 or n % m:
        return False
    zero = tuple(0 for _ in comps)
    index = {e: i for i, e in enumerate(elems)}
    used = [False] * n

    def extend(anchor_from: int) -> bool:
        start = anchor_from
        while start < n and used[start]:
            start += 1
        if start == n:
            return True
        used[start] = True
        ok = members(start, elems[start], start, 1, anchor_from=start + 1)
        used[start] = False
        return ok

    def members(anchor: int, acc: Elem, last: int, count: int, anchor_from: int) -> bool:
        if count == m:
            return acc == zero and extend(anchor_from)
        if count == m - 1:
            needed = tuple((-a) % q for a, q in zip(acc, comps))
            i = index[needed]
            if i > last and not used[i]:
                used[i] = True
                ok = extend(anchor_from)
                used[i] = False
                return ok
            return False
        for i in range(last + 1, n):
            if used[i]:
                continue
            used[i] = True
            if members(anchor, add(comps, acc, elems[i]), i, count + 1, anchor_from):
                used[i] = False
                return True
            used[i] = False
        return False

    return extend(0)


def complete_mapping_exists(comps: Comps) -> bool:
    """Exhaustive over all permutations; only sensible for order <= 8."""
    elems = elements(comps)
    for phi in permutations(elems):
        theta = [add(comps, x, y) for x, y in zip(elems, phi)]
        if len(set(theta)) == len(elems):
            return True
    return False


def mrs_exists(comps: Comps, a: int, b: int, c: int) -> bool:
    """Exhaustive search for c arrays of shape a x b using every group
    element once, with a single global row-sum omega and column-sum
    delta.  Forced cells (each row's last column, each rectangle's last
    row) prune the recursion; the search is complete."""
    elems = elements(comps)
    n = len(elems)
    if a * b * c != n:
        return False
    if b > a:
        # Transposing every rectangle swaps the roles of omega and
        # delta, so existence is symmetric in (a, b).  Tall rectangles
        # hit the forced-cell pruning sooner.
        a, b = b, a
    zero = tuple(0 for _ in comps)
    sigma = sum_of_all(comps)
    used: set[Elem] = set()

    def negate(x: Elem) -> Elem:
        return tuple((-v) % q for v, q in zip(x, comps))

    def candidates(multiple: int, target: Elem) -> list[Elem]:
        return [e for e in elems if smul(comps, multiple, e) == target]

    def fill_rect(rect: list[list[Elem]], r: int, col: int, omega, delta, done) -> bool:
        if r == a - 1:
            # Last row is fully forced by the column sums.
            forced = []
            for j in range(b):
                col_sum = total(comps, (rect[i][j] for i in range(a - 1)))
                x = add(comps, delta, negate(col_sum))
                if x in used or x in forced:
                    return False
                forced.append(x)
            if total(comps, forced) != omega:
                return False
            used.update(forced)
            rect.append(forced)
            ok = done()
            rect.pop()
            used.difference_update(forced)
            return ok
        if col == b - 1:
            row_sum = total(comps, rect[r])
            x = add(comps, omega, negate(row_sum))
            if x in used:
                return False
            used.add(x)
            rect[r].append(x)
            ok = fill_rect(rect, r + 1, 0, omega, delta, done)
            rect[r].pop()
            used.discard(x)
            return ok
        if col == 0:
            rect.append([])
        for x in elems:
            if x in used:
                continue
            used.add(x)
            rect[r].append(x)
            if fill_rect(rect, r, col + 1, omega, delta, done):
                used.discard(x)
                rect[r].pop()
                if col == 0:
                    rect.pop()
                return True
            used.discard(x)
            rect[r].pop()
        if col == 0:
            rect.pop()
        return False

    def rects_from(s: int, omega, delta) -> bool:
        if s == c:
            return True
        rect: list[list[Elem]] = []
        return fill_rect(rect, 0, 0, omega, delta, lambda: rects_from(s + 1, omega, delta))

    for omega in candidates(c * a, sigma):
        for delta in candidates(b, smul(comps, a, omega)):
            if rects_from(0, omega, delta):
                return True
    return False
