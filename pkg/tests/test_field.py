import numpy as np
import pytest

from fqrank.field import (
    CompositeCharacteristic,
    DivisionByZero,
    FieldTooLarge,
    field_from_order,
    make_field,
    parse_field_spec,
)

PRIME_POWERS_64 = [
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32,
    37, 41, 43, 47, 49, 53, 59, 61, 64,
]


# --- construction and validation -------------------------------------------

def test_rejects_composite_characteristic():
    with pytest.raises(CompositeCharacteristic):
        make_field(4, 1)
    with pytest.raises(CompositeCharacteristic):
        make_field(6, 2)


def test_rejects_oversized_order():
    with pytest.raises(FieldTooLarge):
        make_field(2, 13)
    with pytest.raises(FieldTooLarge):
        make_field(5, 6)


def test_rejects_bad_degree():
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(ValueError):
        make_field(2, -1)


def test_field_from_order():
    assert field_from_order(9).p == 3
    assert field_from_order(9).e == 2
    assert field_from_order(7).e == 1
    with pytest.raises(CompositeCharacteristic):
        field_from_order(6)
    with pytest.raises(ValueError):
        field_from_order(1)


def test_parse_field_spec():
    assert parse_field_spec("2^4").q == 16
    assert parse_field_spec("9").p == 3
    assert parse_field_spec(" 7 ").e == 1
    with pytest.raises(CompositeCharacteristic):
        parse_field_spec("12")


def test_construction_is_cached():
    assert make_field(2, 2) is make_field(2, 2)


def test_largest_supported_order_builds():
    ctx = field_from_order(4096)
    assert ctx.q == 4096 and ctx.p == 2 and ctx.e == 12
    assert ctx.mul(ctx.generator, ctx.inv(ctx.generator)) == 1


# --- frozen small-field facts ----------------------------------------------

def test_gf4_tables():
    ctx = make_field(2, 2)
    # modulus 1 + x + x^2, elements 0, 1, x, x+1 at indices 0..3
    assert ctx.spec.modulus == (1, 1, 1)
    assert ctx.generator == 2
    assert ctx.mul(2, 3) == 1
    assert ctx.inv(2) == 3
    assert ctx.add(2, 3) == 1
    assert ctx.trace(0) == 0
    assert ctx.trace(1) == 0
    assert ctx.trace(2) == 1
    assert ctx.trace(3) == 1


def test_gf2_tables():
    ctx = make_field(2, 1)
    assert ctx.add_table.tolist() == [[0, 1], [1, 0]]
    assert ctx.mul_table.tolist() == [[0, 0], [0, 1]]
    assert ctx.generator == 1
    assert ctx.trace(1) == 1


def test_gf3_generator():
    assert make_field(3, 1).generator == 2


def test_deterministic_moduli():
    # smallest-index monic irreducible for each degree
    assert make_field(2, 3).spec.modulus == (1, 1, 0, 1)
    assert make_field(3, 2).spec.modulus == (1, 0, 1)
    assert make_field(3, 2).generator == 4


def test_prime_field_is_integer_arithmetic():
    ctx = make_field(7, 1)
    for a in range(7):
        for b in range(7):
            assert ctx.add(a, b) == (a + b) % 7
            assert ctx.mul(a, b) == (a * b) % 7


# --- field axioms, exhaustively for every prime power up to 64 --------------

@pytest.mark.parametrize("q", PRIME_POWERS_64)
def test_field_axioms(q):
    ctx = field_from_order(q)
    add, mul = ctx.add_table.astype(np.int64), ctx.mul_table.astype(np.int64)
    a = np.arange(q).reshape(q, 1, 1)
    b = np.arange(q).reshape(1, q, 1)
    c = np.arange(q).reshape(1, 1, q)

    assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
    assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
    assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])

    flat_a, flat_b = np.arange(q).reshape(q, 1), np.arange(q).reshape(1, q)
    assert np.array_equal(add[flat_a, flat_b], add[flat_b, flat_a])
    assert np.array_equal(mul[flat_a, flat_b], mul[flat_b, flat_a])
    assert np.array_equal(add[np.arange(q), np.zeros(q, int)], np.arange(q))
    assert np.array_equal(mul[np.arange(q), np.ones(q, int)], np.arange(q))
    assert np.array_equal(add[np.arange(q), ctx.neg_table], np.zeros(q, int))

    units = np.arange(1, q)
    assert np.array_equal(mul[units, ctx.inv_table[units]], np.ones(q - 1, int))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16, 27, 64])
def test_exp_log_tables(q):
    ctx = field_from_order(q)
    ks = np.arange(q - 1)
    assert np.array_equal(ctx.log_table[ctx.exp_table[ks]], ks)
    assert sorted(ctx.exp_table.tolist()) == list(range(1, q))  # generator hits every unit


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9, 16, 25, 27, 49])
def test_trace_properties(q):
    ctx = field_from_order(q)
    p = ctx.p
    tr = ctx.trace_table.astype(np.int64)
    add = ctx.add_table.astype(np.int64)
    a = np.arange(q).reshape(q, 1)
    b = np.arange(q).reshape(1, q)
    # additive over the field, with values in the prime subfield
    assert np.array_equal(tr[add[a, b]], (tr[a] + tr[b]) % p)
    assert tr.max() < p
    # every prime-subfield value is hit equally often
    assert np.bincount(tr, minlength=p).tolist() == [q // p] * p
    # direct definition: sum of Frobenius orbits
    for x in range(q):
        acc, powed = 0, x
        for _ in range(ctx.e):
            acc = ctx.add(acc, powed)
            powed = ctx.pow(powed, p)
        assert acc == ctx.trace(x)


# --- scalar helpers ----------------------------------------------------------

def test_scalar_operations():
    ctx = make_field(3, 2)
    g = ctx.generator
    assert ctx.pow(g, ctx.q - 1) == 1
    assert ctx.pow(0, 0) == 1
    assert ctx.pow(0, 5) == 0
    assert ctx.pow(g, -1) == ctx.inv(g)
    assert ctx.sub(5, 5) == 0
    assert ctx.log(ctx.pow(g, 3)) == 3
    assert list(ctx.elements()) == list(range(9))
    assert list(ctx.units()) == list(range(1, 9))


def test_zero_has_no_inverse_or_log():
    ctx = make_field(5, 1)
    with pytest.raises(DivisionByZero):
        ctx.inv(0)
    with pytest.raises(DivisionByZero):
        ctx.log(0)
    with pytest.raises(DivisionByZero):
        ctx.pow(0, -2)


def test_element_digits():
    ctx = make_field(2, 2)
    assert ctx.element_digits(3) == (1, 1)
    assert ctx.element_digits(2) == (0, 1)
