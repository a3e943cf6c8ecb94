import pytest

from zsmagic import (
    IntKotzigArray,
    KotzigArraySet,
    OutOfTheoremRangeError,
    PreconditionError,
    VerificationError,
    group_kotzig,
    int_kotzig,
    kas,
    kas_column_glue,
    kas_row_glue,
    kas_three_rows,
    kas_two_rows,
    parse_group_spec,
    two_group_class_size,
    verify_int_kotzig,
    verify_kas,
)
from zsmagic.kotzig import check_kas


def test_two_row_sets():
    for spec, m in [("Z9", 3), ("Z2xZ2xZ3", 4), ("Z3xZ3", 9)]:
        s = kas_two_rows(parse_group_spec(spec), m)
        assert s.j == 2 and s.m == m and verify_kas(s)


def test_three_row_sets():
    for spec in ["Z2xZ2", "Z4xZ2", "Z2xZ2xZ2", "Z4xZ4"]:
        g = parse_group_spec(spec)
        s = kas_three_rows(g)
        assert s.j == 3 and s.m == two_group_class_size(g)
        assert verify_kas(s)
    with pytest.raises(OutOfTheoremRangeError):
        kas_three_rows(parse_group_spec("Z9"))


def test_kas_even_and_odd_rows():
    g = parse_group_spec("Z2xZ2xZ2")
    for j in range(2, 8):
        m = two_group_class_size(g) if j % 2 else 4
        s = kas(g, j, m)
        assert s.j == j and verify_kas(s)


def test_kas_odd_rows_require_two_group():
    with pytest.raises(OutOfTheoremRangeError):
        kas(parse_group_spec("Z9"), 3, 3)
    with pytest.raises(PreconditionError):
        kas(parse_group_spec("Z6"), 2, 3)
    with pytest.raises(PreconditionError):
        kas(parse_group_spec("Z4xZ2"), 3, 4)  # class size must be 8


def test_column_glue_preserves_verification():
    g = parse_group_spec("Z2xZ2xZ3")
    s = kas(g, 2, 3)  # t = 4 arrays
    for b in (1, 2, 4):
        glued = kas_column_glue(s, b)
        assert glued.m == 3 * b and verify_kas(glued)
    with pytest.raises(PreconditionError):
        kas_column_glue(s, 3)


def test_row_glue_shape_mismatch():
    g = parse_group_spec("Z2xZ2")
    s = kas_two_rows(g, 4)
    with pytest.raises(PreconditionError):
        kas_row_glue([s, kas_two_rows(parse_group_spec("Z9"), 3)])


def test_group_kotzig_single_array():
    for spec, rows in [("Z9", 2), ("Z9", 3), ("Z3xZ5", 5)]:
        s = group_kotzig(parse_group_spec(spec), rows)
        assert s.t == 1 and s.j == rows and verify_kas(s)
    with pytest.raises(PreconditionError):
        group_kotzig(parse_group_spec("Z4xZ2"), 2)


def test_verifier_loci():
    g = parse_group_spec("Z2xZ2xZ3")
    s = kas(g, 2, 4)
    arrays = [list(map(list, arr)) for arr in s.arrays]
    arrays[0][0][0], arrays[0][0][1] = arrays[0][0][1], arrays[0][0][0]
    bad = KotzigArraySet(g, 2, 4, tuple(
        tuple(tuple(row) for row in arr) for arr in arrays
    ))
    with pytest.raises(VerificationError) as e:
        check_kas(bad)
    assert e.value.locus.startswith("col-sum:0")


def test_int_kotzig_contract():
    for j, k in [(2, 5), (3, 7), (4, 6), (5, 5), (7, 9)]:
        arr = int_kotzig(j, k)
        assert verify_int_kotzig(arr)
    with pytest.raises(PreconditionError):
        int_kotzig(1, 5)
    with pytest.raises(PreconditionError):
        int_kotzig(3, 6)  # j(k-1) odd
    with pytest.raises(PreconditionError):
        int_kotzig(2, 4, centered=True)  # centered needs odd k


def test_int_kotzig_centered():
    arr = int_kotzig(3, 9, centered=True)
    assert arr.centered and verify_int_kotzig(arr)
    assert all(sum(arr.entries[i][c] for i in range(3)) == 0 for c in range(9))


def test_verify_int_kotzig_negative():
    arr = int_kotzig(2, 5)
    rows = [list(r) for r in arr.entries]
    rows[0][0], rows[0][1] = rows[0][1], rows[0][0]
    assert not verify_int_kotzig(
        IntKotzigArray(2, 5, False, tuple(tuple(r) for r in rows))
    )
