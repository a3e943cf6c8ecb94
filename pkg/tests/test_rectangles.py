import pytest

import oracles
from zsmagic import (
    InfeasibleError,
    OutOfTheoremRangeError,
    PreconditionError,
    RectangleSet,
    VerificationError,
    decide_existence,
    mrs_construct,
    mrs_exp_variant,
    mrs_search,
    parse_group_spec,
    verify_mrs,
)
from zsmagic.rectangles import check_mrs, mrs_p3, mrs_transpose
from zsmagic.search import FOUND, INFEASIBLE


def test_decide_rule_cascade():
    cases = [
        ("Z6", 3, 2, 1, "NotExists", "ObsDwa"),
        ("Z4xZ3", 3, 4, 1, "NotExists", "ObsCodd"),
        ("Z2xZ2xZ3", 3, 4, 1, "Exists", "ThmLem2p"),
        ("Z2xZ2", 2, 2, 1, "Exists", "ThmMain"),
        ("Z9", 3, 3, 1, "Exists", "ThmMain"),
        ("Z3xZ3", 3, 3, 1, "Exists", "ThmMain"),
        ("Z8xZ2xZ3", 3, 8, 2, "Unknown", "Unknown"),
        ("Z2xZ3", 2, 3, 1, "NotExists", "ObsDwa"),
        ("Z4xZ2xZ3", 3, 4, 2, "Exists", "ThmLem2p"),
    ]
    for spec, a, b, c, status, rule in cases:
        v = decide_existence(parse_group_spec(spec), a, b, c)
        assert (v.status, v.rule) == (status, rule), (spec, a, b, c, v)


def test_decide_preconditions():
    g = parse_group_spec("Z9")
    with pytest.raises(PreconditionError):
        decide_existence(g, 1, 9, 1)
    with pytest.raises(PreconditionError):
        decide_existence(g, 3, 3, 2)


def test_search_negative_certification():
    out = mrs_search(parse_group_spec("Z6"), 3, 2, 1)
    assert out.status == INFEASIBLE
    out = mrs_search(parse_group_spec("Z4xZ3"), 3, 4, 1)
    assert out.status == INFEASIBLE


def test_search_positive():
    out = mrs_search(parse_group_spec("Z2xZ2xZ3"), 3, 4, 1)
    assert out.status == FOUND
    assert verify_mrs(out.witness)


def test_construct_refusals():
    with pytest.raises(InfeasibleError):
        mrs_construct(parse_group_spec("Z6"), 3, 2, 1)
    with pytest.raises(OutOfTheoremRangeError):
        mrs_construct(parse_group_spec("Z8xZ2xZ3"), 3, 8, 2)


def test_p3_chain_small():
    for spec in ["Z2xZ2", "Z4xZ2", "Z2xZ2xZ2", "Z4xZ4", "Z4xZ2xZ2"]:
        delta = parse_group_spec(spec)
        r = mrs_p3(delta)
        assert (r.a, r.b, r.c) == (3, 4, delta.order // 4)
        assert verify_mrs(r)
    with pytest.raises(PreconditionError):
        mrs_p3(parse_group_spec("Z8xZ2"))  # exponent 8 > 4


def test_pipeline_provenance():
    r = mrs_construct(parse_group_spec("Z9xZ2xZ2"), 9, 4, 1)
    assert verify_mrs(r)
    assert list(r.provenance) == ["p3-base", "lemgl2:h=3", "glue-rows:3"]


def test_construct_matches_oracle_on_exists_cases():
    for spec, a, b, c in [
        ("Z2xZ2xZ3", 3, 4, 1),
        ("Z9", 3, 3, 1),
        ("Z2xZ2", 2, 2, 1),
        ("Z4xZ2", 2, 4, 1),
    ]:
        g = parse_group_spec(spec)
        assert oracles.mrs_exists(g.components, a, b, c)
        assert verify_mrs(mrs_construct(g, a, b, c))


def test_exp_variant():
    r = mrs_exp_variant(parse_group_spec("Z9xZ2xZ2xZ2xZ2"), 3)
    assert (r.a, r.b) == (3, 4) and verify_mrs(r)
    with pytest.raises(PreconditionError):
        mrs_exp_variant(parse_group_spec("Z9xZ4"), 3)


def test_transpose():
    r = mrs_construct(parse_group_spec("Z2xZ2xZ3"), 3, 4, 1)
    t = mrs_transpose(r)
    assert (t.a, t.b) == (4, 3) and verify_mrs(t)


def test_verifier_loci():
    r = mrs_construct(parse_group_spec("Z2xZ2xZ3"), 3, 4, 1)
    rects = [list(map(list, rect)) for rect in r.rects]
    rects[0][0][0], rects[0][1][0] = rects[0][1][0], rects[0][0][0]
    bad = RectangleSet(
        r.group, r.a, r.b, r.c,
        tuple(tuple(tuple(row) for row in rect) for rect in rects),
        r.omega, r.delta, r.provenance,
    )
    with pytest.raises(VerificationError) as e:
        check_mrs(bad)
    assert e.value.locus.startswith("row-sum:0")
    wrong_omega = next(x for x in r.group.elements() if x != r.omega)
    bad = RectangleSet(
        r.group, r.a, r.b, r.c, r.rects, wrong_omega, r.delta, r.provenance
    )
    assert not verify_mrs(bad)
