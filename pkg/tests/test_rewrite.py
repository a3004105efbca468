import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nichols_lift.algebra import SmashElement, _add_into
from nichols_lift.cli import monomial_oracle
from nichols_lift.rewrite import (
    LeadAutomaton,
    MonomialOrder,
    RewriteSystem,
    SystemCache,
    complete,
    isotypic_components,
)
from nichols_lift.scalars import CycNumber
from nichols_lift.yddata import AbelianGroup, YDDatum


@pytest.fixture(scope="module")
def plane():
    # q11 = q22 = -1, q12 = q21 = 1 over Z2 x Z2
    return YDDatum(AbelianGroup((2, 2)), [(1, 0), (0, 1)], [(1, 0), (0, 1)])


PLANE = YDDatum(AbelianGroup((2, 2)), [(1, 0), (0, 1)], [(1, 0), (0, 1)])


def mono(d, w):
    return SmashElement.monomial(d, w)


# monomial oracle ---------------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(st.lists(st.text(alphabet="12", min_size=1, max_size=8), min_size=1, max_size=5))
def test_monomial_ideals_match_subword_oracle(words):
    """Normal words of a monomial ideal are exactly the words avoiding its generators."""
    R = complete([mono(PLANE, w) for w in words], MonomialOrder.default(2), 8)
    got = [sorted(lv) for lv in R.normal_words(8)]
    got += [[]] * (9 - len(got))
    assert got == monomial_oracle(words, "12", 8)


# Church-Rosser -----------------------------------------------------------------------

RELS = st.lists(
    st.tuples(
        st.text(alphabet="12", min_size=2, max_size=3),
        st.text(alphabet="12", min_size=2, max_size=3),
        st.sampled_from([-1, 1, 2]),
    ),
    min_size=1,
    max_size=2,
)


def _relation(d, w, v, c):
    # homogeneous binomial w - c v (same length keeps completion finite in degree)
    v = v[: len(w)].ljust(len(w), "1")
    return mono(d, w) - mono(d, v).scale(c)


@settings(max_examples=60, deadline=None)
@given(RELS, st.randoms(use_true_random=False))
def test_church_rosser_up_to_bound(rels, rnd):
    """One arbitrary rewrite step followed by normalization gives the same normal form."""
    d = PLANE
    D = 7
    R = complete([_relation(d, *r) for r in rels], MonomialOrder.default(2), D)
    if R.certificate.collapsed:
        return
    for _ in range(10):
        w = "".join(rnd.choice("12") for _ in range(rnd.randint(2, D)))
        target = R.normal_form(mono(d, w))
        hits = [(lead, i) for lead in R.rules for i in range(len(w)) if w.startswith(lead, i)]
        if not hits:
            assert target == mono(d, w)
            continue
        lead, i = rnd.choice(hits)
        tail = SmashElement._wrap(d, dict(R.rules[lead]))
        stepped = mono(d, w[:i]) * tail * mono(d, w[i + len(lead):])
        assert R.normal_form(stepped) == target


@settings(max_examples=40, deadline=None)
@given(RELS, st.lists(st.text(alphabet="12", max_size=3), min_size=2, max_size=2))
def test_normal_form_is_multiplicative(rels, ab):
    d = PLANE
    R = complete([_relation(d, *r) for r in rels], MonomialOrder.default(2), 8)
    a, b = (mono(d, w) for w in ab)
    assert R.normal_form(R.normal_form(a) * R.normal_form(b)) == R.normal_form(a * b)


# quantum plane and certificates ---------------------------------------------------------

def test_quantum_plane_dimension(plane):
    x1, x2 = SmashElement.letter(plane, 1), SmashElement.letter(plane, 2)
    R = complete([x1 * x1, x2 * x2, x1 * x2 - x2 * x1], MonomialOrder.default(2), 8)
    assert R.certificate.exact
    assert R.dimension().value == 4
    assert R.dimension(smash=True).value == 16
    assert R.hilbert_series(2) == [1, 2, 1]


def test_free_algebra_is_infinite(plane):
    R = complete([], MonomialOrder.default(2), 5, datum=plane)
    assert not R.certificate.finite
    assert not R.dimension().exact
    assert R.hilbert_series(5) == [2**k for k in range(6)]


def test_collapse_detected(plane):
    x1 = SmashElement.letter(plane, 1)
    R = complete([x1 * x1 - SmashElement.one(plane), x1], MonomialOrder.default(2), 4)
    assert R.certificate.collapsed
    assert R.dimension().value == 0


def test_isotypic_split(plane):
    # x1^2 - g1 x1^2 lies in a smash ideal whose conjugates separate the components
    x1 = SmashElement.letter(plane, 1)
    g2 = SmashElement.group(plane, (0, 1))
    r = x1 * x1 * x2_of(plane) + x1 * g2
    parts = isotypic_components(plane, r.terms)
    assert len(parts) == 2


def x2_of(d):
    return SmashElement.letter(d, 2)


def test_automaton_counts_match_enumeration():
    A = LeadAutomaton(["11", "212"], "12")
    words = [w for n in range(7) for w in map("".join, itertools.product("12", repeat=n))]
    expected = [0] * 7
    for w in words:
        if "11" not in w and "212" not in w:
            expected[len(w)] += 1
    assert A.counts(6) == expected
    assert A.longest_word() is None  # (12)* avoids both
    assert LeadAutomaton(["1", "22"], "12").longest_word() == 1


def test_serialization_round_trip(plane, tmp_path):
    x1, x2 = SmashElement.letter(plane, 1), SmashElement.letter(plane, 2)
    R = complete([x1 * x1, x2 * x2, x1 * x2 - x2 * x1.scale(3)], MonomialOrder.default(2), 6)
    data = json.loads(json.dumps(R.to_dict()))
    R2 = RewriteSystem.from_dict(plane, data)
    assert R2.rules == R.rules
    assert R2.content_hash() == R.content_hash()
    assert R2.normal_form(x2 * x1) == R.normal_form(x2 * x1)


def test_disk_cache_hit_gives_same_system(plane, tmp_path):
    x1, x2 = SmashElement.letter(plane, 1), SmashElement.letter(plane, 2)
    rels = [x1 * x1 - x2 * x2, x1 * x2 - x2 * x1]
    try:
        SystemCache.configure(str(tmp_path))
        cold = complete(rels, MonomialOrder.default(2), 8)
        warm = complete(rels, MonomialOrder.default(2), 8)
        assert SystemCache.hits == 1 and SystemCache.misses == 1
    finally:
        SystemCache.configure(None)
    assert cold.content_hash() == warm.content_hash()
    assert cold.dimension() .value == warm.dimension().value


def test_order_changes_leads_not_dimension(zeta9):
    d = zeta9.datum
    x1, x2 = SmashElement.letter(d, 1), SmashElement.letter(d, 2)
    rels = [x1 ** 3, x2 ** 3, x1 * x2 - (x2 * x1).scale(d.q(1, 2))]
    a = complete(rels, MonomialOrder.parse("x1>x2", 2), 10)
    b = complete(rels, MonomialOrder.parse("x2>x1", 2), 10)
    assert a.dimension().value == b.dimension().value == 9
