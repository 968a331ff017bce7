import numpy as np
import pytest

from fqrank.field import make_field, field_from_order
from fqrank.matrices import (
    DimensionMismatch,
    FieldMismatch,
    MatrixFq,
    SubsetA,
    ct,
    dump_matrix,
    identity_matrix,
    load_matrix,
    mat_add,
    mat_mul,
    matrix,
    rank,
    wt,
    zero_matrix,
)


def span_size(mat):
    """Oracle: grow the row span one row at a time with scalar field ops."""
    ctx = mat.field
    span = {(0,) * mat.data.shape[1]}
    for row in mat.data.tolist():
        new = set()
        for vec in span:
            for s in range(ctx.q):
                combo = tuple(ctx.add(v, ctx.mul(s, r)) for v, r in zip(vec, row))
                if combo not in span:
                    new.add(combo)
        span |= new
    return len(span)


def rank_oracle(mat):
    size = span_size(mat)
    r = 0
    while mat.field.q ** r < size:
        r += 1
    assert mat.field.q ** r == size
    return r


def random_mat(ctx, m, n, rng):
    return matrix(ctx, rng.integers(0, ctx.q, size=(m, n)).tolist())


# --- construction ------------------------------------------------------------

def test_matrix_validation():
    ctx = make_field(2, 1)
    with pytest.raises(ValueError):
        matrix(ctx, [[0, 2]])
    with pytest.raises(ValueError):
        matrix(ctx, [[0, -1]])
    with pytest.raises(ValueError):
        MatrixFq(ctx, np.zeros(3, dtype=np.int16))


def test_matrix_equality_and_hash():
    ctx = make_field(3, 1)
    a = matrix(ctx, [[1, 2], [0, 1]])
    b = matrix(ctx, [[1, 2], [0, 1]])
    c = matrix(ctx, [[1, 2], [0, 2]])
    assert a == b and hash(a) == hash(b)
    assert a != c
    assert a != matrix(make_field(5, 1), [[1, 2], [0, 1]])


def test_matrix_data_is_read_only():
    ctx = make_field(2, 1)
    a = zero_matrix(ctx, 2, 2)
    with pytest.raises(ValueError):
        a.data[0, 0] = 1


def test_identity_and_zero():
    ctx = make_field(2, 2)
    eye = identity_matrix(ctx, 3)
    assert eye.data.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert zero_matrix(ctx, 2, 3).data.tolist() == [[0, 0, 0], [0, 0, 0]]


def test_transpose():
    ctx = make_field(3, 1)
    a = matrix(ctx, [[1, 2, 0], [0, 1, 2]])
    assert a.transpose().data.tolist() == [[1, 0], [2, 1], [0, 2]]


# --- arithmetic --------------------------------------------------------------

def test_mat_mul_against_scalar_loop():
    rng = np.random.default_rng(7)
    for q in (2, 3, 4, 5, 9):
        ctx = field_from_order(q)
        for _ in range(20):
            m, k, n = rng.integers(1, 5, size=3)
            x = random_mat(ctx, m, k, rng)
            y = random_mat(ctx, k, n, rng)
            prod = mat_mul(x, y)
            for i in range(m):
                for j in range(n):
                    acc = 0
                    for t in range(k):
                        acc = ctx.add(acc, ctx.mul(int(x.data[i, t]), int(y.data[t, j])))
                    assert prod.data[i, j] == acc


def test_mat_mul_shape_mismatch():
    ctx = make_field(2, 1)
    with pytest.raises(DimensionMismatch):
        mat_mul(zero_matrix(ctx, 2, 3), zero_matrix(ctx, 2, 3))
    with pytest.raises(FieldMismatch):
        mat_mul(zero_matrix(ctx, 2, 2), zero_matrix(make_field(3, 1), 2, 2))


def test_mat_add():
    ctx = make_field(3, 1)
    a = matrix(ctx, [[1, 2], [0, 1]])
    b = matrix(ctx, [[2, 2], [1, 0]])
    assert mat_add(a, b).data.tolist() == [[0, 1], [1, 1]]
    with pytest.raises(DimensionMismatch):
        mat_add(a, zero_matrix(ctx, 2, 3))


def test_mat_mul_identity():
    rng = np.random.default_rng(3)
    ctx = make_field(2, 2)
    a = random_mat(ctx, 3, 3, rng)
    assert mat_mul(a, identity_matrix(ctx, 3)) == a
    assert mat_mul(identity_matrix(ctx, 3), a) == a


# --- rank ---------------------------------------------------------------------

def test_rank_small_cases():
    ctx = make_field(2, 1)
    assert rank(zero_matrix(ctx, 3, 4)) == 0
    assert rank(identity_matrix(ctx, 4)) == 4
    assert rank(matrix(ctx, [[1, 1], [1, 1]])) == 1
    assert rank(matrix(ctx, [[1, 0], [1, 1]])) == 2


def test_rank_against_span_oracle():
    rng = np.random.default_rng(11)
    for q in (2, 3, 4):
        ctx = field_from_order(q)
        for _ in range(170):
            m = int(rng.integers(1, 5))
            n = int(rng.integers(1, 5))
            a = random_mat(ctx, m, n, rng)
            assert rank(a) == rank_oracle(a)


def test_rank_transpose_invariant():
    rng = np.random.default_rng(13)
    ctx = make_field(3, 1)
    for _ in range(60):
        a = random_mat(ctx, int(rng.integers(1, 6)), int(rng.integers(1, 6)), rng)
        assert rank(a) == rank(a.transpose())


def test_rank_of_product_bounded():
    rng = np.random.default_rng(17)
    ctx = make_field(2, 2)
    for _ in range(60):
        x = random_mat(ctx, 4, 2, rng)
        y = random_mat(ctx, 2, 4, rng)
        assert rank(mat_mul(x, y)) <= min(rank(x), rank(y))


# --- entry subsets and counting statistics -----------------------------------

def test_subset_construction():
    s = SubsetA.from_indices(3, [1, 2])
    assert s.members() == (1, 2)
    assert s.size == 2
    assert 1 in s and 0 not in s
    assert SubsetA.nonzero(3).members() == (1, 2)
    assert SubsetA.zero_only(3).members() == (0,)
    assert SubsetA.full(3).size == 3
    assert s.complement().members() == (0,)
    with pytest.raises(ValueError):
        SubsetA.from_indices(3, [3])
    # empty subset is representable (it is full's complement); statistics
    # layers reject it where it would make a denominator vanish
    assert SubsetA.from_indices(3, []).size == 0
    assert SubsetA.full(3).complement().size == 0


def test_ct_and_wt_brute_force():
    rng = np.random.default_rng(19)
    ctx = make_field(5, 1)
    for _ in range(40):
        a = random_mat(ctx, 3, 4, rng)
        subset = SubsetA.from_indices(5, sorted(rng.choice(5, size=2, replace=False).tolist()))
        expected = sum(1 for v in a.data.ravel().tolist() if v in subset.members())
        assert ct(a, subset) == expected
        assert wt(a) == int(np.count_nonzero(a.data))
    assert ct(zero_matrix(ctx, 2, 2), SubsetA.zero_only(5)) == 4


def test_ct_field_mismatch():
    with pytest.raises(FieldMismatch):
        ct(zero_matrix(make_field(2, 1), 2, 2), SubsetA.nonzero(3))


# --- serialization -------------------------------------------------------------

def test_dump_load_round_trip():
    rng = np.random.default_rng(23)
    for q in (2, 9):
        ctx = field_from_order(q)
        a = random_mat(ctx, 3, 2, rng)
        assert load_matrix(dump_matrix(a)) == a
        assert load_matrix(dump_matrix(a), ctx=ctx) == a


def test_load_matrix_errors():
    ctx = make_field(2, 1)
    good = dump_matrix(identity_matrix(ctx, 2))
    with pytest.raises(ValueError):
        load_matrix(good.replace("2 2 2", "2 2 6"))  # composite order
    with pytest.raises(ValueError):
        load_matrix("2 2 2\n1 0\n")  # missing row
    with pytest.raises(ValueError):
        load_matrix("2 2 2\n1 0\n0 1 1\n")  # ragged row
    with pytest.raises(ValueError):
        load_matrix("2 2 2\n1 3\n0 1\n")  # entry out of range
    with pytest.raises(ValueError):
        load_matrix("")
    with pytest.raises(FieldMismatch):
        load_matrix(good, ctx=make_field(3, 1))
