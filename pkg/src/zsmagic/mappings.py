"""Complete mappings and partitions that are zero-sum under both the
identity and the mapping.

A complete mapping phi is a bijection of the group such that
theta(x) = x + phi(x) is also a bijection.  The certificates built here
pair a complete mapping with an equal-class-size partition whose classes
sum to zero both directly and after applying phi.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BudgetExceededError,
    PreconditionError,
    VerificationError,
)
from .groups import (
    Element,
    GroupSpec,
    SubgroupEmbedding,
    decompose_index4,
    direct_sum,
    index4_subgroup,
    is_in_script_g,
)
from .search import DEFAULT_BUDGET, FOUND, backtrack
from .zerosum import (
    ZeroSumPartition,
    check_zero_sum_partition,
    zero_sum_partition,
)

MAX_MAPPING_SEARCH_ORDER = 1 << 12


@dataclass(frozen=True)
class CompleteMapping:
    """phi as a permutation of element indices (mixed-radix order)."""

    group: GroupSpec
    table: tuple[int, ...]

    def apply(self, x: Element) -> Element:
        g = self.group
        return g.element(self.table[g.index(x)])

    @cached_property
    def theta_table(self) -> tuple[int, ...]:
        g = self.group
        return tuple(
            g.index(g.add(x, g.element(self.table[i])))
            for i, x in enumerate(g.elements())
        )


@dataclass(frozen=True)
class CmPartitionCertificate:
    mapping: CompleteMapping
    partition: ZeroSumPartition

    @property
    def group(self) -> GroupSpec:
        return self.mapping.group

    @property
    def m(self) -> int:
        return self.partition.m


def check_complete_mapping(cm: CompleteMapping) -> None:
    n = cm.group.order
    if len(cm.table) != n or sorted(cm.table) != list(range(n)):
        raise VerificationError("phi-not-bijective")
    if sorted(cm.theta_table) != list(range(n)):
        raise VerificationError("theta-not-bijective")


def verify_complete_mapping(cm: CompleteMapping) -> bool:
    try:
        check_complete_mapping(cm)
        return True
    except VerificationError:
        return False


def check_cm_certificate(cert: CmPartitionCertificate) -> None:
    check_complete_mapping(cert.mapping)
    if cert.partition.group != cert.mapping.group:
        raise VerificationError("group-mismatch")
    check_zero_sum_partition(cert.partition)
    g = cert.group
    for i, cls in enumerate(cert.partition.classes):
        if g.sum_over(cert.mapping.apply(x) for x in cls) != g.zero:
            raise VerificationError(f"phi-class-sum:{i}")


def verify_cm_certificate(cert: CmPartitionCertificate) -> bool:
    try:
        check_cm_certificate(cert)
        return True
    except VerificationError:
        return False


# -- searched complete mappings ----------------------------------------


class _MappingProblem:
    """Assign phi(x) element by element, keeping both the phi values and
    the theta values pairwise distinct."""

    def __init__(self, g: GroupSpec):
        self.g = g
        self.elems = list(g.elements())
        n = g.order
        self.table: list[int] = []
        self.phi_used = [False] * n
        self.theta_used = [False] * n
        self.index = {e: i for i, e in enumerate(self.elems)}

    def select(self):
        if len(self.table) == len(self.elems):
            return None
        return len(self.table)

    def options(self, i):
        x = self.elems[i]
        out = []
        for v in range(len(self.elems)):
            if self.phi_used[v]:
                continue
            t = self.index[self.g.add(x, self.elems[v])]
            if not self.theta_used[t]:
                out.append((v, t))
        return out

    def assign(self, i, vt) -> bool:
        v, t = vt
        self.table.append(v)
        self.phi_used[v] = True
        self.theta_used[t] = True
        return True

    def unassign(self, i, vt) -> None:
        v, t = vt
        self.table.pop()
        self.phi_used[v] = False
        self.theta_used[t] = False

    def witness(self):
        return tuple(self.table)


_mapping_cache: dict[GroupSpec, CompleteMapping] = {}


def find_complete_mapping(g: GroupSpec, budget: int = DEFAULT_BUDGET) -> CompleteMapping:
    """Complete mapping by bounded backtracking (cached per group).

    Exists exactly when the group has odd order or more than one
    involution; the search certifies by construction.
    """
    if not is_in_script_g(g):
        raise PreconditionError(f"{g} admits no complete mapping")
    if g.order > MAX_MAPPING_SEARCH_ORDER:
        raise PreconditionError(
            f"mapping search bounded to order {MAX_MAPPING_SEARCH_ORDER}"
        )
    if g in _mapping_cache:
        return _mapping_cache[g]
    outcome = backtrack(_MappingProblem(g), budget)
    if outcome.status != FOUND:
        raise BudgetExceededError(
            f"complete mapping search for {g} exceeded {budget} nodes"
        )
    cm = CompleteMapping(g, outcome.witness)
    check_complete_mapping(cm)
    _mapping_cache[g] = cm
    return cm


# -- constructions -------------------------------------------------------


def cm_odd_identity(g: GroupSpec, m: int, seed: int = 0) -> CmPartitionCertificate:
    """Odd order: phi = id is complete (theta = 2x is an automorphism),
    so any zero-sum partition certifies."""
    if g.order % 2 == 0:
        raise PreconditionError(f"{g} has even order")
    part = zero_sum_partition(g, m, seed=seed)
    mapping = CompleteMapping(g, tuple(range(g.order)))
    return CmPartitionCertificate(mapping, part)


def two_group_class_size(g: GroupSpec) -> int:
    """Class size achieved for a 2-group: 2*exp when the group is
    Z_{2^beta} x Z_2 (exp = order/2), otherwise max(4, exp)."""
    if not g.is_two_group or g.is_trivial:
        raise PreconditionError(f"{g} is not a nontrivial 2-group")
    if not is_in_script_g(g):
        raise PreconditionError(f"{g} has exactly one involution")
    if g.exponent == g.order // 2:
        return 2 * g.exponent
    return max(4, g.exponent)


def _gf2_mapping_matrix(k: int) -> list[tuple[int, ...]]:
    """Rows of an invertible k x k matrix M over GF(2) with M + I also
    invertible: companion blocks of x^2+x+1, plus one block of
    x^3+x^2+1 when k is odd."""
    rows: list[list[int]] = [[0] * k for _ in range(k)]

    def put(block: list[list[int]], at: int) -> None:
        for r, row in enumerate(block):
            for c, v in enumerate(row):
                rows[at + r][at + c] = v

    pos = 0
    if k % 2 == 1:
        put([[0, 0, 1], [1, 0, 0], [0, 1, 1]], 0)  # companion of x^3+x^2+1
        pos = 3
    while pos < k:
        put([[0, 1], [1, 1]], pos)  # companion of x^2+x+1
        pos += 2
    return [tuple(r) for r in rows]


def _cm_elementary(g: GroupSpec) -> CmPartitionCertificate:
    """Elementary Abelian 2-group: phi(x) = Mx is linear, so every
    zero-sum class is automatically zero-sum under phi; classes are the
    cosets of the span of the last two coordinates (m = 4)."""
    k = len(g.components)
    rows = _gf2_mapping_matrix(k)
    table = []
    for x in g.elements():
        y = tuple(sum(r * v for r, v in zip(row, x)) % 2 for row in rows)
        table.append(g.index(y))
    mapping = CompleteMapping(g, tuple(table))
    classes = []
    for prefix in GroupSpec((2,) * (k - 2)).elements() if k > 2 else [()]:
        classes.append(
            tuple(prefix + (a, b) for a in (0, 1) for b in (0, 1))
        )
    return CmPartitionCertificate(mapping, ZeroSumPartition(g, 4, tuple(classes)))


def _cm_z2beta_z2(g: GroupSpec) -> CompleteMapping:
    """Explicit complete mapping of Z_N x Z_2 with N a power of 2.

    With h(a) = [a >= N/2]:

        phi(a, 0) = (a,     h(a))
        phi(a, 1) = (a + 1, 1 + h(a + 1))

    phi is bijective because the two sources of first coordinate v get
    opposite second coordinates; theta(a, 0) = (2a, h(a)) and
    theta(a, 1) = (2a + 1, h(a + 1)) are bijective because the two
    preimages a, a + N/2 of each doubled value differ in h.
    """
    n = g.components[0]
    assert g.components == (n, 2)

    def h(a: int) -> int:
        return 1 if a % n >= n // 2 else 0

    table = [0] * g.order
    for a in range(n):
        table[g.index((a, 0))] = g.index((a, h(a)))
        table[g.index((a, 1))] = g.index(((a + 1) % n, 1 - h(a + 1)))
    return CompleteMapping(g, tuple(table))


# Shifts applied to phi_0(s) per coset index (0, c, d, -c-d); theta then
# fixes the trivial coset and 3-cycles the others.
_PHI_SHIFT_OF_COSET = {0: None, 1: 2, 2: 3, 3: 1}  # coset j -> rep index added


def cm_two_group(g: GroupSpec, budget: int = DEFAULT_BUDGET) -> CmPartitionCertificate:
    """Complete mapping plus both-ways zero-sum partition for a 2-group
    with more than one involution, class size two_group_class_size(g).

    Structure: groups Z_{2^beta} x Z_2 take the whole group as a single
    class with a searched mapping; elementary Abelian groups use the
    linear construction; everything else recurses through an index-4
    subgroup with quotient Z2 x Z2, extending the mapping coset-wise and
    merging class pairs when the subgroup class size is half the target.
    """
    m = two_group_class_size(g)
    if g.exponent == g.order // 2:
        # Z_{2^beta} x Z_2 (and Z2 x Z2): the whole group is one class,
        # so both class sums hold automatically for any complete mapping.
        part = ZeroSumPartition(g, g.order, (tuple(g.elements()),))
        cert = CmPartitionCertificate(_cm_z2beta_z2(g), part)
        check_cm_certificate(cert)
        return cert
    if g.exponent == 2:
        cert = _cm_elementary(g)
        check_cm_certificate(cert)
        return cert

    emb = index4_subgroup(g)
    sub_cert = cm_two_group(emb.sub, budget)
    m0 = sub_cert.m
    if m0 not in (m, m // 2):
        raise PreconditionError(
            f"inductive step broke down for {g}: m={m}, m0={m0}"
        )
    reps = emb.coset_reps
    sub = emb.sub

    table = [0] * g.order
    for s in sub.elements():
        phi0 = emb.inject(sub_cert.mapping.apply(s))
        base = emb.inject(s)
        for j, r in enumerate(reps):
            a = g.add(base, r)
            shift_rep = _PHI_SHIFT_OF_COSET[j]
            phi = phi0 if shift_rep is None else g.add(phi0, reps[shift_rep])
            table[g.index(a)] = g.index(phi)
    mapping = CompleteMapping(g, tuple(table))

    coset_classes: list[list[tuple[Element, ...]]] = [[], [], [], []]
    for cls in sub_cert.partition.classes:
        for j, r in enumerate(reps):
            coset_classes[j].append(
                tuple(g.add(emb.inject(s), r) for s in cls)
            )
    classes: list[tuple[Element, ...]] = []
    if m0 == m:
        for j in range(4):
            classes.extend(coset_classes[j])
    else:
        t_sub = len(sub_cert.partition.classes)
        if t_sub % 2 != 0:
            raise PreconditionError(
                f"cannot merge an odd number of classes for {g}"
            )
        for j in range(4):
            for i in range(0, t_sub, 2):
                classes.append(coset_classes[j][i] + coset_classes[j][i + 1])

    cert = CmPartitionCertificate(
        mapping, ZeroSumPartition(g, m, tuple(classes))
    )
    check_cm_certificate(cert)
    return cert


def cm_product(
    left: CmPartitionCertificate, right: CmPartitionCertificate
) -> CmPartitionCertificate:
    """Componentwise product certificate on the direct sum; classes are
    the Cartesian products, m = m_left * m_right."""
    if right.group.is_trivial:
        return left
    if left.group.is_trivial:
        return right
    l, h = left.group, right.group
    spec, combine = direct_sum(l, h)
    table = [0] * spec.order
    for a in l.elements():
        fa = left.mapping.apply(a)
        for b in h.elements():
            table[spec.index(combine(a, b))] = spec.index(
                combine(fa, right.mapping.apply(b))
            )
    classes = tuple(
        tuple(combine(a, b) for a in ca for b in cb)
        for ca in left.partition.classes
        for cb in right.partition.classes
    )
    part = ZeroSumPartition(spec, left.m * right.m, classes)
    return CmPartitionCertificate(CompleteMapping(spec, tuple(table)), part)


def cm_zero_sum_partition(
    g: GroupSpec,
    k: int | None = None,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> CmPartitionCertificate:
    """Certificate for an arbitrary group in class G.

    The Sylow-2 part L contributes class size l = two_group_class_size(L)
    via the 2-group construction; the odd part H contributes k (default:
    all of |H|) via the identity mapping; the product certificate has
    m = k * l.
    """
    if not is_in_script_g(g):
        raise PreconditionError(f"{g} admits no complete mapping")
    two_part, odd_part = g.split_even_odd()
    if odd_part.is_trivial:
        if k is not None:
            raise PreconditionError(f"{g} has trivial odd part; k={k} invalid")
        return cm_two_group(g, budget)
    if k is None:
        k = odd_part.order
    if k <= 1 or odd_part.order % k != 0:
        raise PreconditionError(
            f"k={k} must be a divisor > 1 of the odd part order {odd_part.order}"
        )
    right = cm_odd_identity(odd_part, k, seed=seed)
    if two_part.is_trivial:
        return right
    left = cm_two_group(two_part, budget)
    cert = cm_product(left, right)
    check_cm_certificate(cert)
    return cert
