import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slcod.field import (FiniteField, cube_coset_index, field_for_order, field_trace, is_cube,
                         is_irreducible, make_field, multiplicative_generator, nth_root,
                         prime_power, primitive_root_of_unity, smallest_irreducible,
                         smallest_non_cube)

FIELDS = [make_field(5), make_field(7), make_field(3, 2), make_field(5, 2), make_field(2, 3)]


def poly_mulmod(a, b, mod, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    m = len(mod) - 1
    for k in range(len(out) - 1, m - 1, -1):
        c = out[k]
        if c:
            for i in range(m + 1):
                out[k - m + i] = (out[k - m + i] - c * mod[i]) % p
    return (out + [0] * m)[:m]


def poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def reducible_monics(p, m):
    """All monic degree-m products of two monic factors of positive degree."""
    out = set()
    for d in range(1, m // 2 + 1):
        for f in itertools.product(range(p), repeat=d):
            for g in itertools.product(range(p), repeat=m - d):
                out.add(poly_mul(list(f) + [1], list(g) + [1], p))
    return out


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(25) == (5, 2)
    assert prime_power(7) == (7, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_gf9_modulus_and_arithmetic():
    F = make_field(3, 2)
    assert F.modulus == (1, 0, 1)
    t = F.gen
    assert t * t == F(2)
    assert field_trace(t) == 0
    assert field_trace(F.one) == 2


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_smallest_irreducible_matches_product_enumeration(p, m):
    reducible = reducible_monics(p, m)
    mod = smallest_irreducible(p, m)
    assert mod not in reducible
    for tail in itertools.product(range(p), repeat=m):
        cand = tuple(tail) + (1,)
        assert is_irreducible(cand, p) == (cand not in reducible)
        if tail < mod[:-1]:
            assert cand in reducible


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_multiplication_table_matches_polynomial_product(F):
    for a, b in itertools.product(range(F.q), repeat=2):
        ca, cb = F.coeffs_of(a), F.coeffs_of(b)
        expect = poly_mulmod(list(ca), list(cb), F.modulus, F.p)
        assert F.coeffs_of(F.mul(a, b)) == tuple(expect)
        assert F.coeffs_of(F.add(a, b)) == tuple((x + y) % F.p for x, y in zip(ca, cb))


def test_code_order_is_coefficient_order():
    F = make_field(3, 2)
    codes = [F.code_of(c) for c in itertools.product(range(3), repeat=2)]
    assert codes == sorted(codes)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(F, data):
    x, y, w = (F.from_code(data.draw(st.integers(0, F.q - 1))) for _ in range(3))
    assert x + y == y + x and x * y == y * x
    assert (x + y) + w == x + (y + w) and (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert x - x == 0 and x + (-x) == 0
    if x:
        assert x * x.inverse() == 1
        assert x ** (F.q - 1) == 1


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_vector_ops_agree_with_scalar_ops(F):
    codes = np.arange(F.q, dtype=np.int64)
    a, b = np.meshgrid(codes, codes)
    assert all(F.vmul(a, b).ravel() == [F.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())])
    assert all(F.vsub(a, b).ravel() == [F.sub(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())])
    units = codes[1:]
    assert all(F.vinv(units) == [F.inv(int(x)) for x in units])


def test_trace_is_sum_of_conjugates():
    for F in FIELDS:
        for x in F.elements():
            conj = [x ** (F.p ** i) for i in range(F.m)]
            total = F.zero
            for c in conj:
                total = total + c
            assert field_trace(x) == total
            assert field_trace(x).is_in_prime_field()


def test_roots_of_unity_and_generators():
    F7, F13 = make_field(7), make_field(13)
    assert multiplicative_generator(F7) == 3
    assert primitive_root_of_unity(F7, 3) == 2
    assert primitive_root_of_unity(F13, 4) == 5
    assert primitive_root_of_unity(F7, 5) is None
    with pytest.raises(ValueError):
        primitive_root_of_unity(F7, 0)
    for F in FIELDS:
        g = multiplicative_generator(F)
        assert len({(g ** k).code for k in range(F.q - 1)}) == F.q - 1


def test_nth_roots_and_cubes():
    F = make_field(7)
    assert nth_root(F(2), 2) == 3
    assert nth_root(F(2), 3) is None
    assert smallest_non_cube(F) == 2
    assert [cube_coset_index(F(x))[0] for x in (6, 5, 3)] == [0, 1, 2]
    cubes = {(x ** 3).code for x in F.units()}
    assert {x.code for x in F.units() if is_cube(x)} == cubes == {1, 6}
    with pytest.raises(ValueError):
        smallest_non_cube(make_field(5))


def test_cube_cosets_partition_units():
    F = make_field(13)
    z = smallest_non_cube(F)
    for x in F.units():
        i, _ = cube_coset_index(x)
        assert is_cube(x / z ** i)


def test_json_round_trip_and_errors():
    F = make_field(5, 2)
    assert FiniteField.from_json(F.to_json()) == F
    assert field_for_order(25) == F
    with pytest.raises(ValueError):
        field_for_order(12)
    with pytest.raises(ValueError):
        make_field(3, 2, modulus=[1, 0, 0])  # t^2 is reducible
    assert is_irreducible([1, 0, 1], 3) and not is_irreducible([2, 0, 1], 3)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        make_field(5)(1) + make_field(7)(1)


def test_element_display():
    F = make_field(3, 2)
    assert str(F([1, 2])) == "1+2t"
    assert F([1, 2]).to_json() == [1, 2]
