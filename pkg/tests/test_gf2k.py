import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from butterfly_sbox import gf2k
from butterfly_sbox.errors import (BadParameters, DegreeMismatch, ReducibleModulus,
                                   UnsupportedDegree, ZeroInverse)
from oracles import factors_by_product, schoolbook_mul, schoolbook_pow

GF8 = gf2k.make_field(3)
GF4 = gf2k.make_field(2)


def test_default_moduli_are_smallest_irreducible():
    assert GF8.modulus == 0b1011
    assert GF4.modulus == 0b111
    for k in range(2, 9):
        m = gf2k.smallest_irreducible(k)
        assert not factors_by_product(m)
        for smaller in range((1 << k) + 1, m, 2):
            assert factors_by_product(smaller)


def test_small_products():
    assert gf2k.mul(GF8, 0b010, 0b010) == 0b100
    assert gf2k.mul(GF8, 0b011, 0b011) == 0b101
    assert gf2k.add(GF8, 0b011, 0b110) == 0b101


def test_cube_of_x_wraps_modulus():
    # X^3 = X + 1 modulo X^3 + X + 1
    assert gf2k.power(GF8, 0b010, 3) == 0b011
    assert schoolbook_pow(0b010, 3, 0b1011) == 0b011


def test_inverse_in_gf4():
    assert gf2k.inv(GF4, 0b10) == 0b11
    with pytest.raises(ZeroInverse):
        gf2k.inv(GF4, 0)


def test_rejects_bad_moduli():
    with pytest.raises(ReducibleModulus):
        gf2k.make_field(3, 0b1001)
    with pytest.raises(DegreeMismatch):
        gf2k.make_field(3, 0b10011)
    with pytest.raises(UnsupportedDegree):
        gf2k.make_field(17)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7])
def test_irreducibility_matches_factor_search(k):
    for m in range(1 << k, 1 << (k + 1)):
        assert gf2k.is_irreducible(m) == (not factors_by_product(m))


@pytest.mark.parametrize("k", [3, 4, 5])
def test_table_mul_matches_schoolbook(k):
    f = gf2k.make_field(k)
    q = f.order
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    got = f.vmul(a, b)
    want = np.array([[schoolbook_mul(x, y, f.modulus) for y in range(q)] for x in range(q)])
    assert np.array_equal(got, want)


fields = st.sampled_from([gf2k.make_field(k) for k in (2, 3, 5, 7, 8, 11)])


@settings(max_examples=200, deadline=None)
@given(fields, st.data())
def test_field_axioms(f, data):
    el = st.integers(0, f.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    mul = lambda x, y: gf2k.mul(f, x, y)
    assert mul(a, b) == mul(b, a)
    assert mul(a, mul(b, c)) == mul(mul(a, b), c)
    assert mul(a, b ^ c) == mul(a, b) ^ mul(a, c)
    assert mul(a, 1) == a
    if a:
        assert mul(a, gf2k.inv(f, a)) == 1
        assert gf2k.power(f, a, f.group_order) == 1


@settings(max_examples=100, deadline=None)
@given(fields, st.data())
def test_frobenius_and_trace(f, data):
    a = data.draw(st.integers(0, f.order - 1))
    b = data.draw(st.integers(0, f.order - 1))
    j = data.draw(st.integers(0, 2 * f.k))
    assert gf2k.frobenius(f, a, j) == gf2k.power(f, a, 1 << (j % f.k))
    assert gf2k.frobenius(f, a, f.k) == a
    assert gf2k.trace(f, gf2k.frobenius(f, a, 1)) == gf2k.trace(f, a)
    assert gf2k.trace(f, a ^ b) == gf2k.trace(f, a) ^ gf2k.trace(f, b)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 8])
def test_trace_is_balanced_and_vectorised(k):
    f = gf2k.make_field(k)
    xs = f.elements()
    tr = f.vtrace(xs)
    assert tr.sum() == f.order // 2
    assert all(int(tr[x]) == gf2k.trace(f, int(x)) for x in xs)


def test_power_edge_cases():
    assert gf2k.power(GF8, 0, 0) == 1
    assert gf2k.power(GF8, 0, 5) == 0
    assert gf2k.power(GF8, 5, 7 + 3) == gf2k.power(GF8, 5, 3)
    assert np.array_equal(GF8.vpow(GF8.elements(), 0), np.ones(8, dtype=np.int64))


def test_inverse_exponent_values():
    assert gf2k.inverse_exponent(1, 3) == 5
    assert gf2k.inverse_exponent(1, 5) == 21
    with pytest.raises(BadParameters):
        gf2k.inverse_exponent(1, 4)
    with pytest.raises(BadParameters):
        gf2k.inverse_exponent(3, 9)


@pytest.mark.parametrize("k", [3, 5, 7, 9, 11, 13, 15])
def test_gold_exponent_invertible(k):
    q1 = (1 << k) - 1
    for i in range(1, k):
        assert math.gcd((1 << i) + 1, q1) == 1
        if math.gcd(i, k) == 1:
            assert ((1 << i) + 1) * gf2k.inverse_exponent(i, k) % q1 == 1


def test_w2():
    assert gf2k.w2(3) == 2
    assert gf2k.w2(0b10110) == 3


@pytest.mark.parametrize("k", [3, 5])
def test_inverse_exponent_undoes_gold_power(k):
    f = gf2k.make_field(k)
    xs = f.elements()
    for i in range(1, k):
        if math.gcd(i, k) == 1:
            d = gf2k.inverse_exponent(i, k)
            assert np.array_equal(f.vpow(f.vpow(xs, (1 << i) + 1), d), xs)


def test_trace_of_one_in_odd_degree():
    assert gf2k.trace(GF8, 1) == 1
    assert gf2k.trace(gf2k.make_field(4), 1) == 0
