import random

import pytest

from nichols_lift.algebra import SmashElement
from nichols_lift.lifting import (
    InadmissibleError,
    ParameterSlot,
    RejectedParameters,
    Section,
    admissibility,
    build_cleft,
    build_lifting,
    check_cocycle,
    good_module_check,
    lift_relation,
    qls_certifies_nonzero,
    qls_condition,
)
from nichols_lift.scalars import CycNumber


def test_qplane_admissibility(qplane):
    P = admissibility(qplane.stratification)
    reasons = {s.name: s.reason for s in P.slots}
    assert reasons == {"x1^2": "free", "x2^2": "free", "x12": "character_nontrivial"}
    with pytest.raises(InadmissibleError):
        P.assign({"x12": 1})


@pytest.mark.parametrize("lam", [(0, 0), (1, 0), (0, 1), (2, -3)])
def test_qplane_liftings(qplane, lam):
    S = qplane.stratification
    d = qplane.datum
    p = admissibility(S).assign({"x1^2": lam[0], "x2^2": lam[1]})
    L = build_lifting(p, S)
    assert L.passed
    assert L.dimension == 4 * 16
    # the deformation is genuine: x1^2 = lambda1 (1 - g1^2)
    x1 = SmashElement.letter(d, 1)
    g1sq = SmashElement.group(d, (2, 0))
    expected = (SmashElement.one(d) - g1sq).scale(lam[0])
    assert L.system.normal_form(x1 * x1) == expected


def test_qplane_cleft_and_cocycle(qplane):
    S = qplane.stratification
    p = admissibility(S).assign({"x1^2": 1, "x2^2": 5})
    A = build_cleft(S, p)
    assert A.checks["leads_preserved"] and A.checks["counts_match"]
    sec = Section(A.system, S.final_system())
    ver = sec.verify(2)
    assert ver["colinear"] and ver["convolution_inverse"]
    d = qplane.datum
    x1 = SmashElement.letter(d, 1)
    assert sec.cocycle(x1, x1) == 1  # gamma(x1)^2 = lambda1
    rng = random.Random(1)
    basis = [SmashElement.monomial(d, w, g) for w in ("", "1", "2", "12") for g in [(0, 0), (1, 0), (2, 3)]]
    triples = [tuple(rng.choice(basis) for _ in range(3)) for _ in range(60)]
    rep = check_cocycle(sec, triples)
    assert rep.passed, rep.failures[:3]


def test_cocycle_identity_detects_a_broken_section(qplane):
    S = qplane.stratification
    p = admissibility(S).assign({"x1^2": 1})
    A = build_cleft(S, p)
    sec = Section(A.system, S.final_system())
    d = qplane.datum
    x1 = SmashElement.letter(d, 1)
    g1 = SmashElement.group(d, (1, 0))
    # corrupt sigma(x1, g1) = 0; the identity must notice
    key = (("1", (0, 0)), ("", (1, 0)))
    assert sec.cocycle(x1, g1) == 0
    sec._sigma[key] = CycNumber.one(4)
    basis = [SmashElement.monomial(d, w, g) for w in ("", "1", "2") for g in [(0, 0), (1, 0)]]
    triples = [(a, b, c) for a in basis for b in basis for c in basis]
    rep = check_cocycle(sec, triples)
    assert not rep.cocycle_identity


def test_collapse_is_rejected_with_witness(qplane):
    S = qplane.stratification
    P = admissibility(S)
    forced = [ParameterSlot(s.level, s.name, s.g, s.chi, True, "free", None, CycNumber.one(4) if s.name == "x12" else None)
              for s in P.slots]
    bad = type(P)(P.datum, forced)
    with pytest.raises(RejectedParameters) as err:
        build_cleft(S, bad)
    assert "invertible" in err.value.witness


def test_lift_relation_quantum_plane(qplane):
    S = qplane.stratification
    p = admissibility(S).assign({"x1^2": 1, "x2^2": 1})
    A = build_cleft(S, p, 0)
    sec = Section(A.system, S.system(0))
    for el in S.strata[0]:
        r = lift_relation(el, sec)
        assert r.passed, r


def test_good_module_qplane(qplane):
    steps = good_module_check(qplane.stratification)
    assert steps and all(s.passed for s in steps)


def test_zeta9_admissible_shape(zeta9):
    P = admissibility(zeta9.stratification)
    free = [s.name for s in P.slots if s.admissible]
    assert free == ["x1^18", "x12^18"]
    assert {s.reason for s in P.slots if not s.admissible} == {"character_nontrivial"}


def test_zeta9_qls(zeta9):
    d = zeta9.datum
    assert qls_condition(d, 1, 18)
    assert not qls_condition(d, 2, 3)
    P = admissibility(zeta9.stratification)
    assert qls_certifies_nonzero(zeta9.stratification, P.assign({"x1^18": 1}))


def test_zeta9_low_levels_lift(zeta9):
    S = zeta9.stratification
    p = admissibility(S).assign({"x1^18": 3})
    for level in (1, 2):
        A = build_cleft(S, p, level)
        sec = Section(A.system, S.system(level))
        assert sec.verify(4)["convolution_inverse"]
        for el in S.strata[level]:
            assert lift_relation(el, sec).passed


def test_degree_lattice_shortcut_agrees_with_full_sigma(qplane):
    S = qplane.stratification
    d = qplane.datum
    p = admissibility(S).assign({"x1^2": 1, "x2^2": 5})
    A = build_cleft(S, p)
    fast = Section(A.system, S.final_system())
    full = Section(A.system, S.final_system())
    assert fast._lattice == [[2, 0], [0, 2]]
    full._lattice = [[1, 0], [0, 1]]  # every degree admitted: no shortcut
    basis = [SmashElement.monomial(d, w, g) for w in ("", "1", "2", "12") for g in [(0, 0), (1, 0), (3, 1)]]
    for a in basis:
        for b in basis:
            assert fast.cocycle(a, b) == full.cocycle(a, b)
    x1 = SmashElement.letter(d, 1)
    assert fast.cocycle(x1, x1) == 1
