"""Magic rectangle sets over a group: verification, existence decisions,
bounded search, and the constructive pipeline.

An MRS(a, b; c) is a family of c rectangles, a x b each, whose cells
exhaust the group exactly once, with one global row-sum constant omega
and one global column-sum constant delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import (
    BudgetExceededError,
    InfeasibleError,
    OutOfTheoremRangeError,
    PreconditionError,
    VerificationError,
)
from .groups import (
    Element,
    GroupSpec,
    cyclic_transversal,
    direct_sum,
    factorize,
    index4_subgroup,
    is_in_script_g,
    prime_power,
    sum_all_elements,
)
from .kotzig import KotzigArraySet, int_kotzig, kas, kas_column_glue, group_kotzig
from .mappings import two_group_class_size
from .search import (
    BUDGET_EXCEEDED,
    DEFAULT_BUDGET,
    FOUND,
    INFEASIBLE,
    SearchOutcome,
    backtrack,
)

Rect = tuple[tuple[Element, ...], ...]

EXISTS = "Exists"
NOT_EXISTS = "NotExists"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class RectangleSet:
    group: GroupSpec
    a: int
    b: int
    c: int
    rects: tuple[Rect, ...]
    omega: Element
    delta: Element
    provenance: tuple[str, ...] = ()


@dataclass(frozen=True)
class Verdict:
    status: str
    rule: str
    witness: RectangleSet | None = None


def check_mrs(r: RectangleSet) -> None:
    g = r.group
    if r.a < 1 or r.b < 1 or r.c < 1 or r.a * r.b * r.c != g.order:
        raise VerificationError("shape-product")
    if len(r.rects) != r.c:
        raise VerificationError("rect-count")
    seen: set[Element] = set()
    for s, rect in enumerate(r.rects):
        if len(rect) != r.a or any(len(row) != r.b for row in rect):
            raise VerificationError(f"shape:{s}")
        for i, row in enumerate(rect):
            for x in row:
                g.check_element(x)
                if x in seen:
                    raise VerificationError(f"duplicate:{s}:{i}")
                seen.add(x)
            if g.sum_over(row) != r.omega:
                raise VerificationError(f"row-sum:{s}:{i}")
        for j in range(r.b):
            if g.sum_over(rect[i][j] for i in range(r.a)) != r.delta:
                raise VerificationError(f"col-sum:{s}:{j}")
    if len(seen) != g.order:
        raise VerificationError("coverage")


def verify_mrs(r: RectangleSet) -> bool:
    try:
        check_mrs(r)
        return True
    except VerificationError:
        return False


def _finish(group, a, b, c, rects, provenance) -> RectangleSet:
    """Fill omega/delta from the first row/column, then verify."""
    g = group
    omega = g.sum_over(rects[0][0])
    delta = g.sum_over(rects[0][i][0] for i in range(a))
    out = RectangleSet(g, a, b, c, tuple(rects), omega, delta, tuple(provenance))
    check_mrs(out)
    return out


def mrs_transpose(r: RectangleSet) -> RectangleSet:
    rects = tuple(
        tuple(tuple(rect[i][j] for i in range(r.a)) for j in range(r.b))
        for rect in r.rects
    )
    return replace(
        r,
        a=r.b,
        b=r.a,
        rects=rects,
        omega=r.delta,
        delta=r.omega,
        provenance=r.provenance + ("transpose",),
    )


# -- existence decision ----------------------------------------------------


def decide_existence(g: GroupSpec, a: int, b: int, c: int) -> Verdict:
    """Existence verdict for MRS(a, b; c) over g, by rule cascade on the
    unordered pair {a, b}."""
    if a < 2 or b < 2:
        raise PreconditionError(f"sides a={a}, b={b} must both be >= 2")
    if a * b * c != g.order:
        raise PreconditionError(
            f"a*b*c = {a * b * c} does not match |{g}| = {g.order}"
        )
    in_g = is_in_script_g(g)
    if a % 2 == 0 and b % 2 == 0:
        return Verdict(EXISTS, "ThmMain")
    if a % 2 == 1 and b % 2 == 1:
        return Verdict(EXISTS if in_g else NOT_EXISTS, "ThmMain")
    even = a if a % 2 == 0 else b
    if even == 2:
        return Verdict(NOT_EXISTS, "ObsDwa")
    p, _ = max(factorize(even).items())
    if p == 2:  # even side is a power of two, >= 4
        if not in_g:
            return Verdict(NOT_EXISTS, "ObsCodd")
        if g.exponent % 8 != 0:
            return Verdict(EXISTS, "ThmLem2p")
        return Verdict(UNKNOWN, "Unknown")
    return Verdict(EXISTS if in_g else NOT_EXISTS, "ThmMain")


# -- bounded search --------------------------------------------------------


def _scalar_solutions(t: int, s: int, n: int) -> list[int]:
    """All x in Z_n with t*x = s (mod n)."""
    d = math.gcd(t, n)
    if s % d != 0:
        return []
    step = n // d
    x0 = next(x for x in range(n) if (t * x - s) % n == 0)
    return sorted((x0 + k * step) % n for k in range(d))


def _vector_solutions(g: GroupSpec, t: int, s: Element) -> list[Element]:
    import itertools

    per = [_scalar_solutions(t, si, n) for si, n in zip(s, g.components)]
    if any(not p for p in per):
        return []
    return [tuple(v) for v in itertools.product(*per)]


class _MrsProblem:
    """Cell-by-cell search for one (omega, delta) pair.

    Cells are filled rectangle by rectangle in column-major order, so
    the forced last-in-column and last-in-row cells prune early.  Cell
    (0,0) of rectangle 0 is pinned to 0 (rectangles, rows and columns
    may each be freely permuted, so some arrangement puts 0 there).
    """

    def __init__(self, g, a, b, c, omega, delta, seed=0):
        self.g, self.a, self.b, self.c = g, a, b, c
        self.omega, self.delta = omega, delta
        self.cells = [
            (s, i, j) for s in range(c) for j in range(b) for i in range(a)
        ]
        self.elems = list(g.elements())
        if seed:
            import random

            random.Random(seed).shuffle(self.elems)
        self.used: set[Element] = set()
        self.grid: dict[tuple[int, int, int], Element] = {}
        self.row_sum: dict[tuple[int, int], Element] = {}
        self.col_sum: dict[tuple[int, int], Element] = {}
        self.depth = 0

    def select(self):
        return self.cells[self.depth] if self.depth < len(self.cells) else None

    def options(self, cell):
        s, i, j = cell
        g = self.g
        last_row = i == self.a - 1
        last_col = j == self.b - 1
        if last_row or last_col:
            forced = None
            if last_row:
                forced = g.sub(self.delta, self.col_sum.get((s, j), g.zero))
            if last_col:
                by_row = g.sub(self.omega, self.row_sum.get((s, i), g.zero))
                if forced is not None and by_row != forced:
                    return []
                forced = by_row
            return [] if forced in self.used else [forced]
        if self.depth == 0:
            return [g.zero]
        return [x for x in self.elems if x not in self.used]

    def assign(self, cell, x):
        s, i, j = cell
        g = self.g
        self.grid[cell] = x
        self.used.add(x)
        self.row_sum[(s, i)] = g.add(self.row_sum.get((s, i), g.zero), x)
        self.col_sum[(s, j)] = g.add(self.col_sum.get((s, j), g.zero), x)
        self.depth += 1
        return True

    def unassign(self, cell, x):
        s, i, j = cell
        g = self.g
        del self.grid[cell]
        self.used.discard(x)
        self.row_sum[(s, i)] = g.sub(self.row_sum[(s, i)], x)
        self.col_sum[(s, j)] = g.sub(self.col_sum[(s, j)], x)
        self.depth -= 1

    def witness(self):
        return tuple(
            tuple(
                tuple(self.grid[(s, i, j)] for j in range(self.b))
                for i in range(self.a)
            )
            for s in range(self.c)
        )


_search_cache: dict[tuple[GroupSpec, int, int, int], RectangleSet] = {}

_RESTART_SLICE = 150_000


def mrs_search(
    g: GroupSpec, a: int, b: int, c: int, budget: int = DEFAULT_BUDGET
) -> SearchOutcome:
    """Exhaustive bounded search for an MRS(a, b; c) over g.

    Candidate (omega, delta) pairs are forced by the counting identities
    c*a*omega = sum(g) and b*delta = a*omega; each pair gets a cell
    search run as a sequence of restart slices with reshuffled value
    order (any slice that exhausts without hitting its node quota proves
    infeasibility for that pair).  Found witnesses are cached.
    """
    if a < 1 or b < 1 or c < 1 or a * b * c != g.order:
        raise PreconditionError(
            f"a*b*c = {a * b * c} does not match |{g}| = {g.order}"
        )
    key = (g, a, b, c)
    if key in _search_cache:
        return SearchOutcome(FOUND, _search_cache[key], 0)
    total = sum_all_elements(g)
    nodes = 0
    # Translating every entry by t maps a witness with sums (omega,
    # delta) to one with (omega + b*t, delta + a*t); negation maps it to
    # (-omega, -delta).  One representative per orbit suffices, both for
    # finding witnesses and for proving exhaustion.
    pairs: list[tuple[Element, Element]] = []
    seen: set[tuple[Element, Element]] = set()
    for omega in _vector_solutions(g, c * a, total):
        for delta in _vector_solutions(g, b, g.smul(a, omega)):
            if (omega, delta) in seen:
                continue
            pairs.append((omega, delta))
            for t in g.elements():
                w = g.add(omega, g.smul(b, t))
                d = g.add(delta, g.smul(a, t))
                seen.add((w, d))
                seen.add((g.neg(w), g.neg(d)))
    active = list(pairs)
    rnd = 0
    while active and nodes < budget:
        still: list[tuple[Element, Element]] = []
        for omega, delta in active:
            quota = min(_RESTART_SLICE, budget - nodes)
            if quota <= 0:
                still.append((omega, delta))
                continue
            out = backtrack(
                _MrsProblem(g, a, b, c, omega, delta, seed=rnd), quota
            )
            nodes += out.nodes_explored
            if out.status == FOUND:
                rset = RectangleSet(
                    g, a, b, c, out.witness, omega, delta, ("search",)
                )
                check_mrs(rset)
                _search_cache[key] = rset
                return SearchOutcome(FOUND, rset, nodes)
            if out.status == BUDGET_EXCEEDED:
                still.append((omega, delta))
        active = still
        rnd += 1
    if active:
        return SearchOutcome(BUDGET_EXCEEDED, None, nodes)
    return SearchOutcome(INFEASIBLE, None, nodes)


def _searched(g, a, b, c, budget, provenance) -> RectangleSet:
    out = mrs_search(g, a, b, c, budget)
    if out.status == INFEASIBLE:
        raise InfeasibleError(f"no MRS({a},{b};{c}) over {g} exists")
    if out.status != FOUND:
        raise BudgetExceededError(
            f"MRS({a},{b};{c}) search over {g} exceeded {budget} nodes"
        )
    return replace(out.witness, provenance=tuple(provenance))


# -- direct constructions --------------------------------------------------


def _z3_extend(delta: GroupSpec) -> GroupSpec:
    """Z3 + delta for a 2-group delta (the 3-component sorts last)."""
    return GroupSpec(tuple(delta.components) + (3,))


def mrs_p3(delta: GroupSpec, budget: int = DEFAULT_BUDGET) -> RectangleSet:
    """MRS(3, 4; |delta|/4) on Z3 + delta for a 2-group delta with more
    than one involution and exponent <= 4.

    Orders 12 and 24 are searched; larger groups recurse through an
    index-4 subgroup of delta and re-expand each rectangle into four
    shifted variants whose per-row shifts form a Latin square over the
    coset representatives, keeping row sums and shifting every column
    sum by the same constant.
    """
    if not delta.is_two_group or not is_in_script_g(delta):
        raise PreconditionError(f"{delta} is not a 2-group with >1 involution")
    if delta.exponent > 4:
        raise PreconditionError(f"exp({delta}) = {delta.exponent} > 4")
    gamma = _z3_extend(delta)
    if delta.order <= 8:
        return _searched(gamma, 3, 4, delta.order // 4, budget, ("p3-base",))

    emb = index4_subgroup(delta)
    base = mrs_p3(emb.sub, budget)
    base_gamma = _z3_extend(emb.sub)

    def lift(x: Element) -> Element:
        # split off the trailing Z3 coordinate, inject the delta0 part
        return emb.inject(x[:-1]) + (x[-1],)

    pad = (0,) * (len(delta.components) - 2)
    c_el = (1, 0) + pad + (0,)
    d_el = (0, 1) + pad + (0,)
    cd = gamma.add(c_el, d_el)
    s2 = gamma.smul(2, cd)
    variants = (
        (s2, s2, s2),
        (c_el, d_el, cd),
        (d_el, gamma.add(d_el, c_el), c_el),
        (cd, c_el, d_el),
    )
    rects = []
    for rect in base.rects:
        lifted = [tuple(lift(x) for x in row) for row in rect]
        for shifts in variants:
            rects.append(
                tuple(
                    tuple(gamma.add(x, sh) for x in row)
                    for row, sh in zip(lifted, shifts)
                )
            )
    assert base_gamma.order * 4 == gamma.order
    return _finish(
        gamma, 3, 4, delta.order // 4, rects,
        base.provenance + (f"p3-step:{delta.render()}",),
    )


def _kas_for(delta: GroupSpec, j: int, m: int, budget: int) -> KotzigArraySet:
    """KAS(j, m; |delta|/m) over a 2-group, for odd j: built at the
    native class size and column-glued up to m."""
    native = two_group_class_size(delta)
    if m % native != 0:
        raise OutOfTheoremRangeError(
            f"no KAS over {delta} at width {m} (native width {native})"
        )
    s = kas(delta, j, native, budget)
    return kas_column_glue(s, m // native)


def _multiplier_orbits(p: int, mult: int) -> list[list[int]]:
    """Orbits of i -> mult * i on the nonzero residues mod p."""
    orbits: list[list[int]] = []
    seen: set[int] = set()
    for i in range(1, p):
        if i in seen:
            continue
        orbit, j = [i], (mult * i) % p
        seen.add(i)
        while j not in seen:
            orbit.append(j)
            seen.add(j)
            j = (mult * j) % p
        orbits.append(orbit)
    return orbits


class _Col0Problem:
    """First-column v and w entries of the three-row band: one of each
    per array, from the given pools, with the w entries a permutation of
    the v entries when both rows live in one orbit, and the derived u
    entries (-v-w) pairwise distinct.  The v entries increase to cut
    array permutations."""

    def __init__(self, g: GroupSpec, t: int, pool_v, pool_w, same: bool):
        self.g = g
        self.t = t
        self.pool_v = sorted(pool_v)
        self.pool_w = sorted(pool_w)
        self.same = same
        self.rank = {e: i for i, e in enumerate(sorted(g.elements()))}
        self.vs: list[Element] = []
        self.ws: list[Element] = []
        self.us: list[Element] = []

    def select(self):
        if len(self.vs) < self.t:
            return ("v", len(self.vs))
        if len(self.ws) < self.t:
            return ("w", len(self.ws))
        return None

    def options(self, slot):
        kind, s = slot
        if kind == "v":
            prev = self.rank[self.vs[-1]] if s else -1
            return [
                e
                for e in self.pool_v
                if e not in self.vs and self.rank[e] > prev
            ]
        pool = self.vs if self.same else self.pool_w
        out = []
        for e in pool:
            if e in self.ws:
                continue
            u = self.g.neg(self.g.add(self.vs[s], e))
            if u not in self.us:
                out.append(e)
        return out

    def assign(self, slot, e):
        kind, s = slot
        if kind == "v":
            self.vs.append(e)
        else:
            self.ws.append(e)
            self.us.append(self.g.neg(self.g.add(self.vs[s], e)))
        return True

    def unassign(self, slot, e):
        if slot[0] == "v":
            self.vs.pop()
        else:
            self.ws.pop()
            self.us.pop()

    def witness(self):
        return (tuple(self.vs), tuple(self.ws), tuple(self.us))


class _ThreeRowCompletion:
    """Fill columns 1..m-1 of a three-row band whose first column is
    prescribed: columns (u, v, w) with u + v + w = 0, each row covering
    the group, per-array row sums zero.  Within an array the free u
    entries increase; the last column is forced by the row sums."""

    def __init__(self, g: GroupSpec, m: int, col0):
        self.g = g
        self.m = m
        self.t = len(col0)
        self.col0 = col0
        self.elems = sorted(g.elements())
        self.rank = {e: i for i, e in enumerate(self.elems)}
        self.used_u = {c[0] for c in col0}
        self.used_v = {c[1] for c in col0}
        self.used_w = {c[2] for c in col0}
        self.cols: list[tuple] = []

    def _array_pos(self):
        k = len(self.cols)
        return divmod(k, self.m - 1)  # (array, position 0..m-2)

    def select(self):
        return len(self.cols) if len(self.cols) < self.t * (self.m - 1) else None

    def options(self, k):
        g = self.g
        s, pos = divmod(k, self.m - 1)
        u0, v0, w0 = self.col0[s]
        u_sum = u0
        v_sum = v0
        prev = -1
        for col in self.cols[s * (self.m - 1) :]:
            u_sum = g.add(u_sum, col[0])
            v_sum = g.add(v_sum, col[1])
            prev = max(prev, self.rank[col[0]])
        last = pos == self.m - 2
        if last:
            forced = g.neg(u_sum)
            us = (
                [forced]
                if forced not in self.used_u and self.rank[forced] > prev
                else []
            )
            forced_v = g.neg(v_sum)
            vs = [forced_v] if forced_v not in self.used_v else []
        else:
            us = [
                e
                for e in self.elems
                if e not in self.used_u and self.rank[e] > prev
            ]
            vs = [e for e in self.elems if e not in self.used_v]
        out = []
        for u in us:
            for v in vs:
                w = g.neg(g.add(u, v))
                if w not in self.used_w:
                    out.append((u, v, w))
        return out

    def assign(self, k, col):
        self.cols.append(col)
        self.used_u.add(col[0])
        self.used_v.add(col[1])
        self.used_w.add(col[2])
        return True

    def unassign(self, k, col):
        self.cols.pop()
        self.used_u.discard(col[0])
        self.used_v.discard(col[1])
        self.used_w.discard(col[2])

    def witness(self):
        n = self.m - 1
        return tuple(
            tuple(self.cols[s * n : (s + 1) * n]) for s in range(self.t)
        )


class _TwoRowCompletion:
    """Fill columns 1..m-1 of a two-row band (y, -y) with prescribed
    first-column entries: remaining elements split across arrays with
    per-array sums zero."""

    def __init__(self, g: GroupSpec, m: int, col0):
        self.g = g
        self.m = m
        self.t = len(col0)
        self.col0 = col0
        self.elems = sorted(g.elements())
        self.rank = {e: i for i, e in enumerate(self.elems)}
        self.used = set(col0)
        self.cells: list[Element] = []

    def select(self):
        k = len(self.cells)
        return k if k < self.t * (self.m - 1) else None

    def options(self, k):
        g = self.g
        s, pos = divmod(k, self.m - 1)
        y_sum = self.col0[s]
        prev = -1
        for y in self.cells[s * (self.m - 1) :]:
            y_sum = g.add(y_sum, y)
            prev = max(prev, self.rank[y])
        if pos == self.m - 2:
            forced = g.neg(y_sum)
            if forced not in self.used and self.rank[forced] > prev:
                return [forced]
            return []
        return [
            e for e in self.elems if e not in self.used and self.rank[e] > prev
        ]

    def assign(self, k, y):
        self.cells.append(y)
        self.used.add(y)
        return True

    def unassign(self, k, y):
        self.cells.pop()
        self.used.discard(y)

    def witness(self):
        n = self.m - 1
        return tuple(
            tuple(self.cells[s * n : (s + 1) * n]) for s in range(self.t)
        )


def _mrs_orbit_formula(
    p: int, delta: GroupSpec, m: int, gamma, combine, budget: int
) -> RectangleSet | None:
    """MRS(p, m; |delta|/m) with multiplier -(m-1) on column 0 and 1
    elsewhere, rows placed along the orbits of f(i) = -(m-1) * i.

    Coverage requires, for each element, that the set of row indices
    where it occupies column 0 is f-invariant, hence a union of
    f-orbits.  All rows landing in one orbit therefore share their
    column-0 entry set; a two-row band (y, -y) in an orbit further
    forces those entries to be 2-torsion.  The v and w rows of the
    three-row band take one orbit each when the orbit size is odd and
    there are exactly two orbits, or share one orbit when the size is
    even; every other orbit is filled by two-row bands reusing the v
    entries.  Returns None when the orbit shapes or the small
    completion searches rule the scheme out.
    """
    t = delta.order // m
    orbits = _multiplier_orbits(p, (-(m - 1)) % p)
    d = len(orbits[0])
    if d % 2 == 0:
        o_v = o_w = 0
    elif len(orbits) == 2:
        o_v, o_w = 0, 1
    else:
        return None
    torsion = [
        e for e in delta.elements() if delta.add(e, e) == delta.zero
    ]
    # Orbits hosting a two-row band need 2-torsion column-0 entries.
    pairs_in_v = len(orbits[o_v]) - (2 if o_v == o_w else 1) > 0
    pairs_in_w = len(orbits[o_w]) - (2 if o_v == o_w else 1) > 0
    pure_orbits = [k for k in range(len(orbits)) if k not in (o_v, o_w)]
    pool_v = torsion if (pairs_in_v or pure_orbits) else list(delta.elements())
    pool_w = torsion if pairs_in_w else list(delta.elements())
    if len(pool_v) < t or len(pool_w) < t:
        return None
    out = backtrack(
        _Col0Problem(delta, t, pool_v, pool_w, o_v == o_w), budget
    )
    if not out.found:
        return None
    vs, ws, us = out.witness

    three = backtrack(
        _ThreeRowCompletion(delta, m, list(zip(us, vs, ws))), budget
    )
    if not three.found:
        return None
    a_cols = [
        [(us[s], vs[s], ws[s])] + list(three.witness[s]) for s in range(t)
    ]
    two_bands: dict[int, tuple] = {}  # keyed by orbit of the band
    for key, col0 in ((o_v, vs), (o_w, ws)):
        need = len(orbits[key]) - (2 if o_v == o_w else 1) > 0
        if (need or (key == o_v and pure_orbits)) and key not in two_bands:
            comp = backtrack(_TwoRowCompletion(delta, m, col0), budget)
            if not comp.found:
                return None
            two_bands[key] = tuple(
                (col0[s],) + comp.witness[s] for s in range(t)
            )

    # Row placement: index 0 takes the u row; each orbit hosts its
    # assigned special rows first, then two-row bands on the leftovers.
    rows_by_index: dict[int, tuple[str, int]] = {0: ("u", 0)}
    for k, orbit in enumerate(orbits):
        slots = list(orbit)
        if k == o_v:
            rows_by_index[slots.pop(0)] = ("v", 0)
        if k == o_w:
            rows_by_index[slots.pop(0)] = ("w", 0)
        band_key = k if k in two_bands else o_v
        for i1, i2 in zip(slots[0::2], slots[1::2]):
            rows_by_index[i1] = ("y", band_key)
            rows_by_index[i2] = ("y-neg", band_key)
        if len(slots) % 2:
            return None

    rects = []
    for s in range(t):
        rect = []
        for i in range(p):
            kind, key = rows_by_index[i]
            if kind == "u":
                row = [c[0] for c in a_cols[s]]
            elif kind == "v":
                row = [c[1] for c in a_cols[s]]
            elif kind == "w":
                row = [c[2] for c in a_cols[s]]
            elif kind == "y":
                row = list(two_bands[key][s])
            else:
                row = [delta.neg(y) for y in two_bands[key][s]]
            rect.append(
                tuple(
                    combine(
                        (((-(m - 1) if j == 0 else 1) * i) % p,), row[j]
                    )
                    for j in range(m)
                )
            )
        rects.append(tuple(rect))
    try:
        return _finish(
            gamma, p, m, t, rects, (f"kas-based:p={p}", "orbit-layout")
        )
    except VerificationError:
        return None


def mrs_kas_based(
    p: int, delta: GroupSpec, m: int, budget: int = DEFAULT_BUDGET
) -> RectangleSet:
    """MRS(p, m; |delta|/m) on Z_p + delta from a KAS over delta.

    Column 0 of row i carries first coordinate f(i) = -(m-1)*i, all
    other columns carry i; with gcd(m-1, p) = 1 both coordinates'
    row and column sums vanish.  Distinctness of cells can still fail
    for an unlucky KAS, so the result is verified and, if needed,
    repaired by rotating columns inside constituent bands (which
    preserves every KAS invariant), with bounded search as a last
    resort.
    """
    if p <= 3 or len(factorize(p)) != 1:
        raise PreconditionError(f"p = {p} must be a prime > 3")
    if math.gcd(m - 1, p) != 1:
        raise PreconditionError(f"gcd(m-1, p) = gcd({m - 1}, {p}) != 1")
    if not delta.is_two_group or not is_in_script_g(delta):
        raise PreconditionError(f"{delta} is not a 2-group with >1 involution")
    if m < 2 or delta.order % m != 0:
        raise PreconditionError(f"m = {m} does not divide |{delta}|")
    gamma, combine = direct_sum(GroupSpec((p,)), delta)
    base = _kas_for(delta, p, m, budget)
    native = two_group_class_size(delta)

    def build(arrays) -> list[Rect]:
        rects = []
        for arr in arrays:
            rect = []
            for i, row in enumerate(arr):
                f_i = (-(m - 1) * i) % p
                rect.append(
                    tuple(
                        combine(((f_i if j == 0 else i),), x)
                        for j, x in enumerate(row)
                    )
                )
            rects.append(tuple(rect))
        return rects

    def try_build(arrays) -> RectangleSet | None:
        try:
            return _finish(
                gamma, p, m, delta.order // m, build(arrays),
                (f"kas-based:p={p}",),
            )
        except VerificationError:
            return None

    out = try_build(base.arrays)
    if out is not None:
        return out

    # Repair: rotate the columns of each band (a run of rows belonging
    # to one glued constituent) independently within each array.  Bands
    # are 3 rows then pairs for odd p; every band has zero column sums
    # on its own, so rotations keep the KAS valid while reshuffling
    # which elements land in column 0.
    import itertools

    band_rows = [3] + [2] * ((p - 3) // 2) if p % 2 else [2] * (p // 2)
    width = native  # rotations act within each original (unglued) block
    blocks = m // native
    starts = []
    r0 = 0
    for h in band_rows:
        starts.append((r0, h))
        r0 += h
    knobs = [(t, bi, blk) for t in range(base.t) for bi in range(len(starts))
             for blk in range(blocks)]
    attempts = 0
    for rots in itertools.product(range(width), repeat=len(knobs)):
        if all(r == 0 for r in rots):
            continue
        attempts += 1
        if attempts > 8192:
            break
        arrays = [
            [list(row) for row in arr] for arr in base.arrays
        ]
        for (t, bi, blk), rot in zip(knobs, rots):
            if rot == 0:
                continue
            r0, h = starts[bi]
            lo = blk * width
            for i in range(r0, r0 + h):
                seg = arrays[t][i][lo : lo + width]
                arrays[t][i][lo : lo + width] = seg[rot:] + seg[:rot]
        out = try_build([tuple(tuple(r) for r in arr) for arr in arrays])
        if out is not None:
            return replace(out, provenance=(f"kas-based:p={p}", "repair"))
    if m == native:
        out = _mrs_orbit_formula(p, delta, m, gamma, combine, budget)
        if out is not None:
            return out
    return _searched(
        gamma, p, m, delta.order // m, budget, (f"kas-based:p={p}", "search")
    )


# -- lifting and gluing ------------------------------------------------------


def mrs_lift_product(base: RectangleSet, h: GroupSpec) -> RectangleSet:
    """Extend an MRS by an odd-order direct factor h: each base
    rectangle spawns |h| rectangles whose cells append alternating-sign
    columns of an h-Kotzig array; the even width cancels the signs in
    every row."""
    if h.is_trivial:
        return base
    if base.b % 2 != 0:
        raise OutOfTheoremRangeError(
            f"product lift requires even width, got b = {base.b}"
        )
    if h.order % 2 == 0:
        raise PreconditionError(f"{h} must have odd order")
    k = group_kotzig(h, base.a).arrays[0]  # a rows, |h| columns
    spec, combine = direct_sum(base.group, h)
    rects = []
    for rect in base.rects:
        for u in range(h.order):
            rects.append(
                tuple(
                    tuple(
                        combine(x, k[i][u] if j % 2 == 0 else h.neg(k[i][u]))
                        for j, x in enumerate(row)
                    )
                    for i, row in enumerate(rect)
                )
            )
    return _finish(
        spec, base.a, base.b, base.c * h.order, rects,
        base.provenance + (f"lemgl:h={h.render()}",),
    )


def mrs_lift_cyclic(base: RectangleSet, h: int) -> RectangleSet:
    """Grow the unique odd prime-power component q' of the base group to
    q'*h (same prime): view the base inside the larger group via x -> h*x
    and append alternating-sign columns of a centered integer Kotzig
    array, whose residues form a transversal of the image subgroup."""
    if h == 1:
        return base
    if base.b % 2 != 0:
        raise OutOfTheoremRangeError(
            f"cyclic lift requires even width, got b = {base.b}"
        )
    if h % 2 == 0 or h < 1:
        raise PreconditionError(f"lift factor {h} must be odd and positive")
    g0 = base.group
    q = max(factorize(h))
    idx = [i for i, comp in enumerate(g0.components) if prime_power(comp)[0] == q]
    if len(idx) != 1:
        raise PreconditionError(
            f"{g0} must have exactly one {q}-power component"
        )
    pos = idx[0]
    comps = list(g0.components)
    comps[pos] *= h
    prime_power(comps[pos])  # still a prime power
    spec = GroupSpec(tuple(comps))
    n_new = comps[pos]
    k = int_kotzig(base.a, h, centered=True).entries
    cyclic_transversal(n_new, h)  # precondition check: h | n_new, odd

    def embed_add(x: Element, t: int) -> Element:
        out = list(x)
        out[pos] = (h * x[pos] + t) % n_new
        return tuple(out)

    rects = []
    for rect in base.rects:
        for u in range(h):
            rects.append(
                tuple(
                    tuple(
                        embed_add(x, k[i][u] if j % 2 == 0 else -k[i][u])
                        for j, x in enumerate(row)
                    )
                    for i, row in enumerate(rect)
                )
            )
    return _finish(
        spec, base.a, base.b, base.c * h, rects,
        base.provenance + (f"lemgl2:h={h}",),
    )


def mrs_glue(
    r: RectangleSet, rows_factor: int = 1, cols_factor: int = 1
) -> RectangleSet:
    """Stack groups of rows_factor rectangles vertically, then groups of
    cols_factor horizontally."""
    out = r
    if rows_factor > 1:
        if out.c % rows_factor != 0:
            raise PreconditionError(
                f"rows factor {rows_factor} does not divide c = {out.c}"
            )
        rects = []
        for s in range(0, out.c, rows_factor):
            chunk = out.rects[s : s + rows_factor]
            rects.append(tuple(row for rect in chunk for row in rect))
        out = _finish(
            out.group, out.a * rows_factor, out.b, out.c // rows_factor,
            rects, out.provenance + (f"glue-rows:{rows_factor}",),
        )
    if cols_factor > 1:
        if out.c % cols_factor != 0:
            raise PreconditionError(
                f"cols factor {cols_factor} does not divide c = {out.c}"
            )
        rects = []
        for s in range(0, out.c, cols_factor):
            chunk = out.rects[s : s + cols_factor]
            rects.append(
                tuple(
                    tuple(x for rect in chunk for x in rect[i])
                    for i in range(out.a)
                )
            )
        out = _finish(
            out.group, out.a, out.b * cols_factor, out.c // cols_factor,
            rects, out.provenance + (f"glue-cols:{cols_factor}",),
        )
    return out


# -- the pipeline ------------------------------------------------------------


def _pipeline(g: GroupSpec, a: int, b: int, budget: int) -> RectangleSet:
    """MRS(a, b; |g|/(a*b)) for odd a >= 3 and b = 2^alpha >= 4, with
    g in the constructible class (more than one involution, exponent
    not divisible by 8).

    Starter of shape (q, 4) over Z_q + Sylow-2 part for the smallest
    prime q of a, then: grow the q-component, extend by the remaining
    odd part, glue rows up to a and columns up to b.
    """
    two, odd = g.split_even_odd()
    q = min(factorize(a))
    if q == 3:
        base = mrs_p3(two, budget)
    elif two_group_class_size(two) == 4:
        base = mrs_kas_based(q, two, 4, budget)
    else:
        base = _searched(
            direct_sum(GroupSpec((q,)), two)[0], q, 4, two.order // 4,
            budget, (f"search-base:p={q}",),
        )
    # Grow the q-component of the base group up to the largest q-power
    # component of g; every other odd component (including further
    # q-components) rides along in the product lift.
    largest_q = max(
        (comp for comp in odd.components if prime_power(comp)[0] == q),
        default=q,
    )
    if largest_q > q:
        base = mrs_lift_cyclic(base, largest_q // q)
    rest_comps = list(odd.components)
    rest_comps.remove(largest_q)
    rest = GroupSpec.from_components(rest_comps)
    base = mrs_lift_product(base, rest)
    return mrs_glue(base, rows_factor=a // q, cols_factor=b // 4)


def mrs_construct(
    g: GroupSpec, a: int, b: int, c: int, budget: int = DEFAULT_BUDGET
) -> RectangleSet:
    """Verified MRS(a, b; c) over g, or a refusal.

    NotExists verdicts raise InfeasibleError and Unknown verdicts raise
    OutOfTheoremRangeError.  The odd-by-2^alpha region runs the starter
    pipeline; other shapes fall back to bounded search.
    """
    verdict = decide_existence(g, a, b, c)
    if verdict.status == NOT_EXISTS:
        raise InfeasibleError(
            f"no MRS({a},{b};{c}) over {g} exists (rule {verdict.rule})"
        )
    if verdict.status == UNKNOWN:
        raise OutOfTheoremRangeError(
            f"existence of MRS({a},{b};{c}) over {g} is undecided"
        )
    if a % 2 == 1 and b % 4 == 0 and len(factorize(b)) == 1:
        out = _pipeline(g, a, b, budget)
    elif b % 2 == 1 and a % 4 == 0 and len(factorize(a)) == 1:
        out = mrs_transpose(_pipeline(g, b, a, budget))
    else:
        out = _searched(g, a, b, c, budget, ("search",))
    check_mrs(out)
    return out


def mrs_exp_variant(g: GroupSpec, k: int, budget: int = DEFAULT_BUDGET) -> RectangleSet:
    """MRS(k, 2*exp(L); |g|/(2*k*exp(L))) where L is the Sylow-2 part:
    the pipeline run at the exponent-determined width."""
    two, odd = g.split_even_odd()
    if not is_in_script_g(two):
        raise PreconditionError(f"the Sylow-2 part {two} needs >1 involution")
    if k <= 1 or odd.order % k != 0:
        raise PreconditionError(
            f"k = {k} must be a divisor > 1 of the odd order {odd.order}"
        )
    b = 2 * two.exponent
    c = g.order // (k * b)
    return mrs_construct(g, k, b, c, budget)
