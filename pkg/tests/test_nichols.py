import pytest

from nichols_lift.algebra import SmashElement, root_vectors
from nichols_lift.nichols import (
    Power,
    Stratification,
    Stratum,
    centrality_check,
    free_system,
    kernel,
    normal_form_of,
    normality_check,
    power_coefficient,
    primitive_space,
    relation_weight,
    skew_primitive_defect,
    solve_in_span,
    truncation_order,
    validate_stratification,
)
from nichols_lift.rewrite import MonomialOrder, complete
from nichols_lift.scalars import CycNumber


def test_relation_weights(zeta9):
    d = zeta9.datum
    rel = zeta9.relations
    assert relation_weight(rel["x1^18"]) == (18, (0, 0), (0, 0))
    assert relation_weight(rel["x2^3"])[1:] == ((0, 3), (6, 0))
    assert isinstance(rel["x12^18"], Power)
    assert relation_weight(rel["x12^18"]) == (36, (0, 0), (0, 0))


def test_primitives_of_free_algebra(zeta9):
    R0 = free_system(zeta9.datum, zeta9.order, 4)
    p1 = primitive_space(R0, 1)
    assert sorted(str(p.element) for p in p1) == ["x1", "x2"]
    # q12 q21 != 1 and q11, q22 are not -1: nothing primitive in degree 2
    assert primitive_space(R0, 2) == []


def test_quantum_plane_brackets_are_primitive(qplane):
    d = qplane.datum
    R0 = free_system(d, qplane.order, 3)
    names = sorted(str(p.element) for p in primitive_space(R0, 2))
    # x1^2, x2^2 (q_ii = -1) and the commutator (q12 q21 = 1)
    assert len(names) == 3


def test_strata_levels_0_to_2(zeta9):
    S = zeta9.stratification
    rep = validate_stratification(S, [0, 1, 2])
    assert rep.passed, [c.defect for c in rep.failures()]


def test_non_primitive_element_has_defect(zeta9):
    d = zeta9.datum
    x1, x2 = SmashElement.letter(d, 1), SmashElement.letter(d, 2)
    R0 = free_system(d, zeta9.order, 4)
    u = x1 * x2
    assert skew_primitive_defect(u, d.word_weight("12")[0], R0)


def test_power_coefficient_against_expansion(zeta9):
    d = zeta9.datum
    x12 = root_vectors(d)["12"]
    for N in (2, 3, 4):
        full = x12 ** N
        for (w, _g), c in full.terms.items():
            assert power_coefficient(x12, N, w) == c
    assert power_coefficient(x12, 3, "111222") == 0


def test_truncation_levels_1_and_2(zeta9):
    S = zeta9.stratification
    G1 = zeta9.relations["x1_122-a*x12^2"]
    _, g, chi = relation_weight(G1)
    gens = [normal_form_of(el.relation, S.system(0)) for el in S.strata[0]]
    rep = truncation_order(G1, g, chi, S.system(1), generators=gens, witness="1122" * 9)
    assert rep.N == 9 and not rep.truncated and rep.witness_coefficient == 1
    x1112 = zeta9.relations["x1112"]
    _, g, chi = relation_weight(x1112)
    gens.append(normal_form_of(G1, S.system(0)))
    rep = truncation_order(x1112, g, chi, S.system(2), generators=gens, witness="1112" * 6)
    assert rep.N == 6 and rep.status == "polynomial" and rep.witness_coefficient == 1


def test_truncated_power_in_quantum_plane(qplane):
    d = qplane.datum
    x1 = SmashElement.letter(d, 1)
    S = qplane.stratification
    # x1 * g1^-1 has q = chi_1(g_1) = -1, N = 2, and x1^2 = 0 in the quotient
    rep = truncation_order(x1, d.g[0], d.chi[0], S.final_system())
    assert rep.N == 2 and rep.truncated


def test_kernel_and_span():
    n = 4
    one = CycNumber.one(n)
    i = CycNumber.zeta(n)
    cols = [{"a": one, "b": i}, {"a": i, "b": -one}]
    ker = kernel(cols, n)
    assert len(ker) == 1
    v = ker[0]
    assert v[0] * cols[0]["a"] + v[1] * cols[1]["a"] == 0
    assert solve_in_span({"a": one + i, "b": i - one}, cols, n) is not None
    assert solve_in_span({"c": one}, cols, n) is None


def test_normality_single_stratum(qplane):
    S = qplane.stratification
    x1sq = Stratum.of([("x1^2", qplane.relations["x1^2"])])
    rep = normality_check(x1sq, S.system(0))
    # x2 x1^2 - x1^2 x2 is not a polynomial in x1^2 inside the free algebra
    assert rep.status == "fail"


def test_commutative_quotient_is_central(qplane):
    d = qplane.datum
    x1 = SmashElement.letter(d, 1)
    R = qplane.stratification.final_system()
    rep = centrality_check(x1 * x1, R)
    assert rep.commutes_with_generators
