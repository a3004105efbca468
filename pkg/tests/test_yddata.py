import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nichols_lift.scalars import CycNumber
from nichols_lift.yddata import AbelianGroup, GroupMismatchError, YDDatum, minimal_realization


def z(n, k):
    return CycNumber.zeta(n, k)


def test_zeta9_default_realization(zeta9):
    d = zeta9.datum
    assert d.group.invariant_factors == (18, 9)
    assert d.order == 18
    zeta = z(9, 1).embed(18)
    assert d.q(1, 1) == -zeta
    assert d.q(1, 2) == zeta**7
    assert d.q(2, 1) == 1
    assert d.q(2, 2) == zeta**3


def test_minimal_realization_recovers_matrix():
    q = [[z(18, 11), z(18, 14)], [CycNumber.one(18), z(18, 6)]]
    d = minimal_realization(q)
    for i in range(2):
        for j in range(2):
            assert d.q(i + 1, j + 1) == q[i][j]
    # each factor is the lcm of the orders in its row and column
    assert d.group.invariant_factors == (18, 9)


def test_minimal_realization_rejects_non_roots():
    q = [[CycNumber.rational(4, 2)]]
    with pytest.raises(ValueError):
        minimal_realization(q)


def test_quantum_plane_realization():
    m = CycNumber.rational(2, -1)
    one = CycNumber.one(2)
    d = minimal_realization([[m, one], [one, m]])
    assert d.group.invariant_factors == (2, 2)


def test_group_mismatch():
    d = YDDatum(AbelianGroup((4,)), [(1,)], [(2,)])
    with pytest.raises(GroupMismatchError):
        d.evaluate((1, 1), (1,))


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="12", max_size=8), st.text(alphabet="12", max_size=8))
def test_word_weight_is_multiplicative(zeta9, u, v):
    d = zeta9.datum
    gu, cu = d.word_weight(u)
    gv, cv = d.word_weight(v)
    g, c = d.word_weight(u + v)
    assert g == d.group.mul(gu, gv)
    assert c == d.group.char_mul(cu, cv)


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="12", min_size=1, max_size=6), st.text(alphabet="12", min_size=1, max_size=6))
def test_character_value_is_product_of_braiding_entries(zeta9, u, v):
    # chi_v(g_u) = prod over letters a of u and b of v of q_ab
    d = zeta9.datum
    expected = CycNumber.one(18)
    for a in u:
        for b in v:
            expected = expected * d.q(int(a), int(b))
    g, _ = d.word_weight(u)
    _, chi = d.word_weight(v)
    assert d.evaluate(chi, g) == expected
