import pytest

import oracles
from zsmagic import (
    BudgetExceededError,
    InfeasibleError,
    PreconditionError,
    VerificationError,
    ZeroSumPartition,
    all_groups_up_to,
    parse_group_spec,
    verify_zero_sum_partition,
    zero_sum_partition,
)
from zsmagic.zerosum import check_zero_sum_partition


def test_basic_partition_verifies():
    g = parse_group_spec("Z9")
    p = zero_sum_partition(g, 3)
    assert p.class_count == 3
    assert verify_zero_sum_partition(p)


def test_preconditions():
    g = parse_group_spec("Z9")
    with pytest.raises(PreconditionError):
        zero_sum_partition(g, 1)
    with pytest.raises(PreconditionError):
        zero_sum_partition(g, 4)  # does not divide 9
    with pytest.raises(PreconditionError):
        zero_sum_partition(parse_group_spec("Z6"), 3)  # one involution
    with pytest.raises(PreconditionError):
        zero_sum_partition(parse_group_spec("Z4"), 4)  # one involution


def test_m2_is_infeasible_and_oracle_agrees():
    # The identity cannot be paired into a zero-sum class of size 2;
    # the oracle confirms this for every elementary 2-group it can scan.
    for comps in [(2, 2), (2, 2, 2), (2, 2, 2, 2)]:
        assert not oracles.partition_feasible(comps, 2)
    for spec in ["Z2xZ2", "Z2xZ2xZ2", "Z4xZ4", "Z2xZ2xZ3"]:
        with pytest.raises(InfeasibleError):
            zero_sum_partition(parse_group_spec(spec), 2)


def test_oracle_agreement_small_groups():
    for g in all_groups_up_to(9, min_order=3):
        for m in range(3, g.order + 1):
            if g.order % m:
                continue
            feasible = oracles.partition_feasible(g.components, m)
            if not (g.order % 2 == 1 or g.involution_count > 1):
                assert not feasible
                continue
            assert feasible
            assert verify_zero_sum_partition(zero_sum_partition(g, m))


def test_all_divisors_up_to_16():
    for g in all_groups_up_to(16, min_order=3):
        if not (g.order % 2 == 1 or g.involution_count > 1):
            continue
        for m in range(3, g.order + 1):
            if g.order % m == 0:
                assert verify_zero_sum_partition(zero_sum_partition(g, m))


def test_full_group_class():
    g = parse_group_spec("Z3xZ3")
    p = zero_sum_partition(g, 9)
    assert p.class_count == 1 and verify_zero_sum_partition(p)


def test_determinism_and_seeds():
    g = parse_group_spec("Z3xZ9")
    assert zero_sum_partition(g, 3) == zero_sum_partition(g, 3)
    alt = zero_sum_partition(g, 3, seed=7)
    assert verify_zero_sum_partition(alt)


def test_budget_exhaustion_raises():
    with pytest.raises(BudgetExceededError):
        zero_sum_partition(parse_group_spec("Z3xZ9xZ5"), 3, budget=3)


def test_verifier_loci():
    g = parse_group_spec("Z9")
    good = zero_sum_partition(g, 3)

    def locus_of(p):
        with pytest.raises(VerificationError) as e:
            check_zero_sum_partition(p)
        return e.value.locus

    assert locus_of(ZeroSumPartition(g, 2, good.classes)) == (
        "class-size-divides-order"
    )
    assert locus_of(ZeroSumPartition(g, 9, good.classes)) == "class-count"
    # swap one element between classes: breaks a class sum
    c = [list(cls) for cls in good.classes]
    c[0][0], c[1][0] = c[1][0], c[0][0]
    bad = ZeroSumPartition(g, 3, tuple(tuple(x) for x in c))
    assert locus_of(bad).startswith("class-sum")
    # duplicate an element
    c = [list(cls) for cls in good.classes]
    c[0][1] = c[0][0]
    bad = ZeroSumPartition(g, 3, tuple(tuple(x) for x in c))
    assert locus_of(bad).startswith(("duplicate-element", "class-sum"))
