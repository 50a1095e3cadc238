import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slcod.field import make_field
from slcod.matrix import (Mat, Polynomial, char_min_poly, diagonalize, is_diagonalizable, kron,
                          nullspace, simultaneous_eigenbasis)

F5, F7, F9 = make_field(5), make_field(7), make_field(3, 2)


def perm_sign(p):
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        sign *= -1 if length % 2 == 0 else 1
    return sign


def leibniz_charpoly(a: Mat):
    """det(tI - A) by permutation expansion with list polynomials (ascending codes)."""
    F, n = a.field, a.rows

    def entry(i, j):
        c = F.neg(int(a.data[i, j]))
        return [c, F.one_code] if i == j else [c]

    def pmul(x, y):
        out = [0] * (len(x) + len(y) - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                out[i + j] = F.add(out[i + j], F.mul(u, v))
        return out

    total = [0] * (n + 1)
    for p in itertools.permutations(range(n)):
        term = [F.one_code]
        for i in range(n):
            term = pmul(term, entry(i, p[i]))
        s = perm_sign(p)
        for k, c in enumerate(term):
            total[k] = F.add(total[k], c if s == 1 else F.neg(c))
    return total


def matrices(F, n):
    return st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n).map(
        lambda xs: Mat(F, np.array(xs).reshape(n, n)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F5, F7, F9]).flatmap(
    lambda F: st.integers(1, 4).flatmap(lambda n: matrices(F, n))))
def test_charpoly_matches_leibniz(a):
    chi, mu = char_min_poly(a)
    assert list(chi.coeffs) == leibniz_charpoly(a)
    assert mu.eval_matrix(a).is_zero()
    q, r = chi.divmod(mu)
    assert r.is_zero()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([F5, F7, F9]).flatmap(
    lambda F: st.integers(1, 4).flatmap(lambda n: matrices(F, n))))
def test_det_matches_leibniz_and_inverse(a):
    n = a.rows
    chi0 = leibniz_charpoly(a)[0]
    det = chi0 if n % 2 == 0 else a.field.neg(chi0)
    assert a.det().code == det
    if det:
        assert a @ a.inverse() == Mat.identity(a.field, n)
        assert a ** -2 @ a ** 2 == Mat.identity(a.field, n)
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


@pytest.mark.parametrize("shape", [(2, 3), (3, 3), (3, 2), (1, 4)])
def test_rank_and_nullspace_by_counting_solutions(shape):
    F = make_field(3)
    rng = np.random.default_rng(sum(shape))
    for _ in range(20):
        a = Mat(F, rng.integers(0, 3, size=shape))
        sols = sum(1 for x in itertools.product(range(3), repeat=shape[1])
                   if not F.matmul(a.data, np.array(x)).any())
        ns = nullspace(a)
        assert 3 ** len(ns) == sols
        assert a.rank() + len(ns) == shape[1]
        for v in ns:
            assert not F.matmul(a.data, np.array([x.code for x in v])).any()


def test_nullspace_free_variable_is_one():
    ns = nullspace(Mat(F7, [[1, 2], [2, 4]]))
    assert [[x.code for x in v] for v in ns] == [[5, 1]]


def test_minimal_polynomial_has_least_degree():
    rng = np.random.default_rng(0)
    for _ in range(15):
        a = Mat(F5, rng.integers(0, 5, size=(3, 3)))
        _, mu = char_min_poly(a)
        for d in range(mu.degree):
            for low in itertools.product(range(5), repeat=d):
                assert not Polynomial(F5, list(low) + [1]).eval_matrix(a).is_zero()


def test_diagonalization_examples():
    F = F7
    d = Mat.diag(F, [1, 2, 4])
    chi, _ = char_min_poly(d)
    assert chi == Polynomial.from_elements(F, [-1, 0, 0, 1])
    p = Mat(F, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    chi, _ = char_min_poly(p)
    assert chi == Polynomial.from_elements(F, [-1, 0, 0, 1])
    vals, v = diagonalize(p)
    assert sorted(x.code for x in vals) == [1, 2, 4]
    assert v.inverse() @ p @ v == Mat.diag(F, vals)
    p1 = Mat(F, [[0, 0, 1], [2, 0, 0], [0, 2, 0]])
    chi, _ = char_min_poly(p1)
    assert chi == Polynomial.from_elements(F, [-4, 0, 0, 1])
    assert not is_diagonalizable(p1)
    assert not is_diagonalizable(Mat(F, [[1, 1], [0, 1]]))


def test_simultaneous_eigenbasis():
    F = F7
    g = Mat(F, [[1, 2, 0], [0, 1, 3], [1, 0, 2]])
    assert g.det()
    gi = g.inverse()
    fam = [g @ Mat.diag(F, [1, 1, 2]) @ gi, g @ Mat.diag(F, [3, 5, 5]) @ gi]
    res = simultaneous_eigenbasis(fam)
    assert res is not None
    v, tags = res
    for k, m in enumerate(fam):
        assert v.inverse() @ m @ v == Mat.diag(F, [t[k] for t in tags])
    assert simultaneous_eigenbasis([Mat(F, [[0, 1], [0, 0]])]) is None
    with pytest.raises(ValueError):
        simultaneous_eigenbasis([Mat(F, [[0, 1], [0, 0]]), Mat(F, [[0, 0], [1, 0]])])


def test_kron_matches_definition():
    rng = np.random.default_rng(1)
    a = Mat(F5, rng.integers(0, 5, size=(2, 3)))
    b = Mat(F5, rng.integers(0, 5, size=(3, 2)))
    k = kron(a, b)
    assert k.shape == (6, 6)
    for i, j, r, s in itertools.product(range(2), range(3), range(3), range(2)):
        assert k[i * 3 + r, j * 2 + s] == a[i, j] * b[r, s]


def test_polynomial_arithmetic():
    f = Polynomial.from_roots(F7, [1, 2, 4])
    assert f == Polynomial.from_elements(F7, [-1, 0, 0, 1])
    assert sorted(x.code for x in f.roots()) == [1, 2, 4]
    g = Polynomial(F7, [1, 1])
    q, r = (f * g + Polynomial(F7, [3])).divmod(g)
    assert q == f and r == Polynomial(F7, [3])
    assert (f - f).is_zero()
    assert str(Polynomial(F7, [1, 0, 1])) == "t^2 + 1"
    with pytest.raises(ValueError):
        Polynomial(F7, [-1, 1])


def test_mat_json_and_immutability():
    F = F9
    a = Mat(F, [[F.gen, 1], [0, F([1, 1])]])
    assert Mat.from_json(F, a.to_json()) == a
    assert a.to_json()["entries"][0][0] == [0, 1]
    with pytest.raises(ValueError):
        a.data[0, 0] = 1
    with pytest.raises(ValueError):
        Mat.from_json(F, {"rows": 2, "cols": 2, "entries": [[[1]]]})
