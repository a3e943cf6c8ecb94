"""Finite Abelian groups as direct sums of prime-power cyclic components.

Elements are residue vectors (plain tuples of ints) over the canonical
decomposition; a mixed-radix integer encoding indexes elements for table
lookups.  All values are immutable and all operations are pure.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Callable, Iterator

from .errors import GroupSpecError, PreconditionError

Element = tuple[int, ...]

DEFAULT_MAX_ORDER = 1 << 16


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (orders here are small)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(c: int) -> tuple[int, int]:
    """Return (p, e) with c = p**e, or raise if c is not a prime power >= 2."""
    if c < 2:
        raise GroupSpecError(f"component {c} < 2")
    f = factorize(c)
    if len(f) != 1:
        raise GroupSpecError(f"component {c} is not a prime power")
    ((p, e),) = f.items()
    return p, e


def _canonical_key(c: int) -> tuple[int, int]:
    # Ascending by prime, descending by exponent: Z12 -> [4, 3],
    # Z4 x Z2 x Z3 stays put.
    p, e = prime_power(c)
    return (p, -e)


@dataclass(frozen=True)
class GroupSpec:
    """Canonical description of a finite Abelian group.

    ``components`` is a tuple of prime powers >= 2 sorted by
    (prime ascending, exponent descending).  The empty tuple is the
    trivial group.
    """

    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for c in comps:
            prime_power(c)
        if list(comps) != sorted(comps, key=_canonical_key):
            raise GroupSpecError(
                f"components {comps} are not in canonical order"
            )

    # -- construction -------------------------------------------------

    @staticmethod
    def from_components(components) -> "GroupSpec":
        """Canonicalize a list of prime-power components (reorders only)."""
        return GroupSpec(tuple(sorted(components, key=_canonical_key)))

    @staticmethod
    def of(*cyclic_orders: int, max_order: int = DEFAULT_MAX_ORDER) -> "GroupSpec":
        """Build from arbitrary cyclic orders, CRT-splitting each into
        prime-power factors: ``GroupSpec.of(12)`` == Z4 + Z3."""
        comps: list[int] = []
        for n in cyclic_orders:
            if n < 2:
                raise GroupSpecError(f"cyclic order {n} < 2")
            comps.extend(p**e for p, e in factorize(n).items())
        g = GroupSpec.from_components(comps)
        if g.order > max_order:
            raise GroupSpecError(f"order {g.order} exceeds maximum {max_order}")
        return g

    @staticmethod
    def parse(text: str, max_order: int = DEFAULT_MAX_ORDER) -> "GroupSpec":
        """Parse a group-spec string: ``Z4xZ2xZ3``, ``z4 x z2 x z3`` or
        the comma form ``4,2,3``.  Case-insensitive, whitespace ignored."""
        s = re.sub(r"\s+", "", text)
        if not s:
            raise GroupSpecError("empty group spec")
        sep = "," if "," in s else "x"
        orders = []
        for term in s.lower().split(sep):
            m = re.fullmatch(r"z?(\d+)", term)
            if not m:
                raise GroupSpecError(f"bad term {term!r} in group spec {text!r}")
            orders.append(int(m.group(1)))
        return GroupSpec.of(*orders, max_order=max_order)

    # -- structure ----------------------------------------------------

    @cached_property
    def order(self) -> int:
        return math.prod(self.components)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.components) if self.components else 1

    @cached_property
    def even_component_count(self) -> int:
        return sum(1 for c in self.components if c % 2 == 0)

    @cached_property
    def involution_count(self) -> int:
        # 2**p - 1 for p even components.
        return (1 << self.even_component_count) - 1

    @property
    def is_trivial(self) -> bool:
        return not self.components

    @property
    def is_two_group(self) -> bool:
        return all(c % 2 == 0 for c in self.components)

    @property
    def is_odd(self) -> bool:
        return self.order % 2 == 1

    def render(self) -> str:
        """Canonical string form, e.g. ``Z4xZ2xZ3``; trivial group is Z1."""
        if not self.components:
            return "Z1"
        return "x".join(f"Z{c}" for c in self.components)

    def __str__(self) -> str:
        return self.render()

    # -- elements -----------------------------------------------------

    @cached_property
    def zero(self) -> Element:
        return (0,) * len(self.components)

    def check_element(self, x: Element) -> Element:
        if len(x) != len(self.components):
            raise GroupSpecError(f"element {x} does not fit {self}")
        if any(not (0 <= r < c) for r, c in zip(x, self.components)):
            raise GroupSpecError(f"element {x} has unreduced residues for {self}")
        return x

    def elements(self) -> Iterator[Element]:
        """All elements in mixed-radix index order."""
        return itertools.product(*(range(c) for c in self.components))

    def index(self, x: Element) -> int:
        i = 0
        for r, c in zip(x, self.components):
            i = i * c + r
        return i

    def element(self, i: int) -> Element:
        out = []
        for c in reversed(self.components):
            out.append(i % c)
            i //= c
        return tuple(reversed(out))

    # -- arithmetic ---------------------------------------------------

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % c for a, b, c in zip(x, y, self.components))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % c for a, c in zip(x, self.components))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % c for a, b, c in zip(x, y, self.components))

    def smul(self, k: int, x: Element) -> Element:
        return tuple((k * a) % c for a, c in zip(x, self.components))

    def sum_over(self, xs) -> Element:
        return reduce(self.add, xs, self.zero)

    # -- decomposition ------------------------------------------------

    def split_even_odd(self) -> tuple["GroupSpec", "GroupSpec"]:
        """(Sylow-2 part, odd part).  Canonical ordering puts the even
        components first, so element vectors split positionally."""
        k = self.even_component_count
        return GroupSpec(self.components[:k]), GroupSpec(self.components[k:])

    @property
    def even_prefix_len(self) -> int:
        return self.even_component_count


def element_arith(g: GroupSpec, op: str, *args):
    """Validated umbrella over the element operations.

    op in {"add", "neg", "scalar_mul", "sum_over"}.
    """
    if op == "add":
        x, y = args
        return g.add(g.check_element(x), g.check_element(y))
    if op == "neg":
        (x,) = args
        return g.neg(g.check_element(x))
    if op == "scalar_mul":
        k, x = args
        return g.smul(k, g.check_element(x))
    if op == "sum_over":
        (xs,) = args
        return g.sum_over(g.check_element(x) for x in xs)
    raise GroupSpecError(f"unknown element operation {op!r}")


def parse_group_spec(text: str, max_order: int = DEFAULT_MAX_ORDER) -> GroupSpec:
    return GroupSpec.parse(text, max_order=max_order)


def is_in_script_g(g: GroupSpec) -> bool:
    """Membership in the class of groups of odd order or with more than
    one involution; exactly the groups admitting complete mappings."""
    return g.order % 2 == 1 or g.even_component_count >= 2


def sum_all_elements(g: GroupSpec) -> Element:
    """Sum of every group element; zero exactly on the class above."""
    out = []
    for c in g.components:
        repeats = g.order // c
        out.append((repeats * (c * (c - 1) // 2)) % c)
    return tuple(out)


def direct_sum(l: GroupSpec, h: GroupSpec):
    """Direct sum with canonical component reordering.

    Returns (spec, combine) where combine(x, y) places the residues of an
    l-element and an h-element into the canonical positions of spec.
    """
    comps = list(l.components) + list(h.components)
    order = sorted(range(len(comps)), key=lambda i: _canonical_key(comps[i]))
    spec = GroupSpec(tuple(comps[i] for i in order))
    slot = [0] * len(comps)
    for new, old in enumerate(order):
        slot[old] = new

    def combine(x: Element, y: Element) -> Element:
        out = [0] * len(comps)
        for old, v in enumerate(tuple(x) + tuple(y)):
            out[slot[old]] = v
        return tuple(out)

    return spec, combine


@dataclass(frozen=True)
class SubgroupEmbedding:
    """A subgroup given by an injective homomorphism plus a transversal.

    ``columns`` lists, per sub component, the ambient component index it
    maps into and the multiplier applied to its residue.  ``coset_reps``
    hits each coset exactly once, with coset_reps[0] = 0.
    """

    ambient: GroupSpec
    sub: GroupSpec
    columns: tuple[tuple[int, int], ...]
    coset_reps: tuple[Element, ...]

    def inject(self, s: Element) -> Element:
        out = list(self.ambient.zero)
        for (amb_i, mult), v in zip(self.columns, s):
            out[amb_i] = (mult * v) % self.ambient.components[amb_i]
        return tuple(out)

    @property
    def index(self) -> int:
        return self.ambient.order // max(self.sub.order, 1)


def index4_subgroup(g: GroupSpec) -> SubgroupEmbedding:
    """Index-4 subgroup with quotient Z2+Z2, splitting the two largest
    even components (components 0 and 1 in canonical order).

    Requires a 2-group with at least two components, not of the shape
    Z_{2^beta} + Z_2.  Coset representatives are {0, c, d, -c-d} for
    c, d the first two unit vectors.
    """
    comps = g.components
    if not g.is_two_group or len(comps) < 2:
        raise PreconditionError(f"{g} is not a 2-group with >= 2 even components")
    if len(comps) == 2 and comps[1] == 2:
        raise PreconditionError(f"{g} is of shape Z_2^beta x Z_2")

    sub_cols: list[tuple[int, int, int]] = []  # (value, ambient index, multiplier)
    for i, c in enumerate(comps):
        if i < 2:
            if c // 2 >= 2:
                sub_cols.append((c // 2, i, 2))
        else:
            sub_cols.append((c, i, 1))
    sub_cols.sort(key=lambda t: _canonical_key(t[0]))
    sub = GroupSpec(tuple(v for v, _, _ in sub_cols))

    e0 = tuple(1 if i == 0 else 0 for i in range(len(comps)))
    e1 = tuple(1 if i == 1 else 0 for i in range(len(comps)))
    reps = (g.zero, e0, e1, g.neg(g.add(e0, e1)))
    emb = SubgroupEmbedding(
        ambient=g,
        sub=sub,
        columns=tuple((i, m) for _, i, m in sub_cols),
        coset_reps=reps,
    )
    assert g.order == 4 * max(sub.order, 1)
    # Dropping two Z2 directions halves or preserves the exponent
    # (Z4^3 is an example where it is preserved).
    assert g.exponent in (sub.exponent, 2 * sub.exponent)
    return emb


def decompose_index4(emb: SubgroupEmbedding, a: Element) -> tuple[Element, int]:
    """Write ambient a = inject(s) + coset_reps[j]; return (s, j).

    Only valid for embeddings produced by index4_subgroup, where the
    coset is determined by the parities of the first two coordinates.
    """
    g = emb.ambient
    j = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}[(a[0] % 2, a[1] % 2)]
    b = g.sub(a, emb.coset_reps[j])
    s = tuple(
        b[amb_i] // 2 if mult == 2 else b[amb_i] for amb_i, mult in emb.columns
    )
    return s, j


def cyclic_transversal(order_q: int, h: int) -> list[int]:
    """Centered residues {-(h-1)/2 .. (h-1)/2}: a transversal of the
    subgroup generated by h in Z_q, with integer sum zero."""
    if order_q % 2 == 0:
        raise PreconditionError(f"order {order_q} is even")
    if h <= 1 or order_q % h != 0:
        raise PreconditionError(f"{h} is not a divisor > 1 of {order_q}")
    w = (h - 1) // 2
    return list(range(-w, w + 1))


def _partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Integer partitions of n, parts descending."""
    if n == 0:
        yield ()
        return
    def rec(n: int, cap: int):
        if n == 0:
            yield ()
            return
        for first in range(min(n, cap), 0, -1):
            for rest in rec(n - first, first):
                yield (first,) + rest
    yield from rec(n, n)


def groups_of_order(n: int) -> list[GroupSpec]:
    """All isomorphism classes of Abelian groups of order n."""
    if n < 1:
        raise GroupSpecError(f"order {n} < 1")
    if n == 1:
        return [GroupSpec(())]
    per_prime = []
    for p, e in sorted(factorize(n).items()):
        per_prime.append([[p**a for a in part] for part in _partitions(e)])
    out = []
    for pick in itertools.product(*per_prime):
        comps = [c for block in pick for c in block]
        out.append(GroupSpec.from_components(comps))
    return out


def all_groups_up_to(max_order: int, min_order: int = 1) -> Iterator[GroupSpec]:
    for n in range(min_order, max_order + 1):
        yield from groups_of_order(n)
