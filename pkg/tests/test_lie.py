import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_traceless
from slcod.field import make_field
from slcod.lie import (NotClosedError, Subalgebra, ad_sl, adjoint_trace_form, bracket,
                       classical_algebra_check, is_cartan, is_classical_cartan, is_nilpotent,
                       killing, normalizer, root_decomposition, root_string_ok, sl_basis,
                       span_close)
from slcod.matrix import Mat

F7, F13 = make_field(7), make_field(13)


def traceless(F, n):
    return st.integers(0, 2 ** 32 - 1).map(lambda s: random_traceless(F, n, np.random.default_rng(s)))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(F7, 2), (F7, 3), (F13, 3), (make_field(5, 2), 2)]).flatmap(
    lambda fn: st.tuples(traceless(*fn), traceless(*fn), traceless(*fn))))
def test_jacobi_and_killing_invariance(xyz):
    x, y, z = xyz
    jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert jac.is_zero()
    assert killing(x, y) == killing(y, x)
    assert killing(bracket(x, y), z) == killing(x, bracket(y, z))
    assert killing(x, y) == adjoint_trace_form(x, y)


def test_killing_errors():
    a = Mat(F7, [[1, 0], [0, -1]])
    with pytest.raises(ValueError):
        killing(Mat(F7, [[1, 0], [0, 0]]), a)
    with pytest.raises(ValueError):
        killing(Mat.zeros(make_field(5), 5), Mat.zeros(make_field(5), 5))  # char 5 divides 2n


def test_ad_matrix_matches_bracket():
    rng = np.random.default_rng(5)
    basis = sl_basis(3, F7)
    assert len(basis) == 8
    h = random_traceless(F7, 3, rng)
    ad = ad_sl(F7, h.data)
    for j, b in enumerate(basis):
        br = bracket(b, h)
        col = [F7.from_code(int(c)) for c in ad[:, j]]
        total = Mat.zeros(F7, 3)
        for c, e in zip(col, basis):
            total = total + e * c
        assert total == br


def test_diagonal_cartan_is_classical():
    h0 = span_close([Mat(F7, [[1, 0], [0, -1]])])
    rep = is_classical_cartan(h0)
    assert rep.is_classical and rep.self_normalizing
    rd = root_decomposition(h0)
    assert sorted(r for r in rd.spaces) == [(0,), (2,), (5,)]
    assert rd.dimension() == 3


def test_rotation_is_cartan_without_split_roots():
    h = span_close([Mat(F7, [[0, 1], [-1, 0]])])
    rep = is_classical_cartan(h)
    assert rep.is_cartan and not rep.has_root_decomposition and not rep.is_classical
    assert "root space decomposition" in rep.failure
    rd = root_decomposition(span_close([Mat(F13, [[0, 1], [-1, 0]])]))
    assert sorted(rd.spaces) == [(0,), (3,), (10,)]


def test_split_off_diagonal_is_classical():
    assert is_classical_cartan(span_close([Mat(F7, [[0, 1], [2, 0]])])).is_classical


def test_nilpotent_span_is_not_cartan():
    h = span_close([Mat.unit(F7, 2, 0, 1)])
    assert normalizer(h).dim == 2
    assert is_nilpotent(h) and not is_cartan(h)
    rep = is_classical_cartan(h)
    assert not rep.self_normalizing and not rep.is_classical


def test_borel_is_not_nilpotent():
    b = span_close([Mat(F7, [[1, 0], [0, -1]]), Mat.unit(F7, 2, 0, 1)])
    assert not is_nilpotent(b)
    assert not is_classical_cartan(b).nilpotent


def test_unclosed_span():
    mats = [Mat.unit(F7, 2, 0, 1), Mat.unit(F7, 2, 1, 0)]
    with pytest.raises(NotClosedError):
        span_close(mats)
    sub = span_close(mats, strict=False)
    assert not sub.closed
    assert not is_classical_cartan(sub).bracket_closed
    with pytest.raises(NotClosedError):
        is_nilpotent(sub)


def test_traceless_required():
    with pytest.raises(ValueError):
        Subalgebra.from_matrices([Mat(F7, [[1, 0], [0, 0]])])


def test_root_string_condition():
    # alpha + k beta all roots for k = 1..p-1 violates the condition
    F = make_field(5)
    assert not root_string_ok({(0,), (1,), (2,), (3,), (4,)}, F)
    assert root_string_ok({(0,), (1,), (4,)}, F)


@pytest.mark.parametrize("n,F", [(2, F7), (3, F7), (3, F13), (4, make_field(5))])
def test_sl_is_classical(n, F):
    assert classical_algebra_check(n, F)


def test_classical_check_rejects_char_dividing_n():
    with pytest.raises(ValueError):
        classical_algebra_check(7, F7)


def test_subalgebra_json_and_conjugation():
    h = span_close([Mat(F13, [[0, 1], [3, 0]])])
    assert Subalgebra.from_json(F13, h.to_json()) == h
    g = Mat(F13, [[1, 2], [0, 1]])
    hc = h.conjugate(g)
    assert hc.contains(g @ h.basis[0] @ g.inverse())
    assert is_classical_cartan(hc).flags() == is_classical_cartan(h).flags()
