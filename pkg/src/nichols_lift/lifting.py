"""Cleft objects A(lambda), lifting presentations L(lambda) and their checks.

Conventions. A stratum element u of weight (g, chi) carries one parameter
lambda. The cleft object at the next level adds the relation u - lambda, the
lifting adds u - lambda (1 - g). The parameter enters the cleft object only if
chi is trivial on the group (otherwise the smash-product ideal contains
lambda itself) and enters the lifting only if in addition g != 1.

The section gamma: H -> A identifies the normal words of H and A (both
systems share their leading words). Its convolution inverse is computed from

    gamma^-1(h) = eps(h) - sum_{deg h_2 > 0} gamma^-1(h_1) gamma(h_2),

which is triangular in degree, and gamma^-1(h g) = g^-1 gamma^-1(h).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .algebra import (
    SmashElement,
    TensorElement,
    _add_into,
    format_element,
    format_tensor,
    smash_product_terms,
)
from .nichols import (
    Coproducts,
    Power,
    Relation,
    Stratification,
    StratumElement,
    free_system,
    normal_form_of,
    skew_primitive_defect,
)
from .rewrite import (
    RewriteSystem,
    complete,
    isotypic_components,
    relation_hash,
)
from .scalars import CycNumber
from .yddata import GroupElement, Word, YDDatum


class InadmissibleError(ValueError):
    pass


class BasisMismatchError(RuntimeError):
    pass


class CocycleError(RuntimeError):
    """sigma produced a non-scalar value."""


# parameters --------------------------------------------------------------------

@dataclass
class ParameterSlot:
    level: int
    name: str
    g: GroupElement
    chi: tuple
    admissible: bool
    reason: str  # character_nontrivial | group_trivial | qls_condition | free
    qls_allows: Optional[bool] = None
    value: Optional[CycNumber] = None


@dataclass
class DeformationParams:
    datum: YDDatum
    slots: list[ParameterSlot]

    def names(self) -> list[str]:
        return [s.name for s in self.slots]

    def free_names(self) -> list[str]:
        return [s.name for s in self.slots if s.admissible]

    def value(self, level: int, index_in_level: int) -> CycNumber:
        lv = [s for s in self.slots if s.level == level]
        v = lv[index_in_level].value
        return v if v is not None else CycNumber.zero(self.datum.order)

    def values(self) -> tuple[CycNumber, ...]:
        z = CycNumber.zero(self.datum.order)
        return tuple(s.value if s.value is not None else z for s in self.slots)

    def assign(self, values) -> "DeformationParams":
        """New params with values given as a sequence (slot order) or {name: value}."""
        n = self.datum.order
        if isinstance(values, dict):
            unknown = set(values) - set(self.names())
            if unknown:
                raise InadmissibleError(f"unknown parameters {sorted(unknown)}")
            seq = [values.get(s.name, 0) for s in self.slots]
        else:
            seq = list(values)
            if len(seq) != len(self.slots):
                raise InadmissibleError(f"expected {len(self.slots)} parameter values, got {len(seq)}")
        slots = []
        for s, v in zip(self.slots, seq):
            c = v if isinstance(v, CycNumber) else CycNumber.rational(n, Fraction(v))
            if c.order != n:
                c = c.embed(n)
            if c and not s.admissible:
                raise InadmissibleError(f"{s.name} must vanish ({s.reason})")
            slots.append(ParameterSlot(s.level, s.name, s.g, s.chi, s.admissible, s.reason, s.qls_allows, c))
        return DeformationParams(self.datum, slots)

    def describe(self) -> str:
        return ", ".join(f"{s.name}={s.value if s.value is not None else 0}" for s in self.slots)


def _power_letter(u: Relation) -> Optional[tuple[int, int]]:
    """(i, N) when u is x_i^N with coefficient 1."""
    base, k = (u.base, u.exponent) if isinstance(u, Power) else (u, 1)
    if len(base.terms) != 1:
        return None
    (w, h), c = next(iter(base.terms.items()))
    if h != base.datum.identity or c != 1 or not w or len(set(w)) != 1:
        return None
    return int(w[0]), len(w) * k


def qls_condition(datum: YDDatum, i: int, N: int) -> bool:
    """omega_ij^N == 1 for all j, with omega_ij = q_ij (i < j) and omega_ji = omega_ij^-1."""
    for j in range(1, datum.theta + 1):
        if j == i:
            continue
        k = datum.q_exp(i, j) if i < j else -datum.q_exp(j, i)
        if (k * N) % datum.order:
            return False
    return True


def admissibility(S: Stratification) -> DeformationParams:
    """Template of parameters, one per stratum element, all set to zero."""
    d = S.datum
    slots = []
    for k, stratum in enumerate(S.strata):
        for el in stratum:
            if not d.is_trivial_on_group(el.chi):
                admissible, reason = False, "character_nontrivial"
            elif el.g == d.identity:
                admissible, reason = True, "group_trivial"
            else:
                admissible, reason = True, "free"
            pw = _power_letter(el.relation)
            qls = qls_condition(d, *pw) if pw else None
            slots.append(ParameterSlot(k, el.name, el.g, el.chi, admissible, reason, qls))
    return DeformationParams(d, slots)


def qls_certifies_nonzero(S: Stratification, params: DeformationParams) -> bool:
    """Sufficient test that A(lambda) != 0 via the quantum linear space lemma.

    Holds when every non-power stratum element lies in the q-commutator ideal
    I_Omega and every nonzero lambda sits on a power relation meeting the
    omega condition.
    """
    d = S.datum
    rels = []
    for i in range(1, d.theta + 1):
        for j in range(i + 1, d.theta + 1):
            xi, xj = SmashElement.letter(d, i), SmashElement.letter(d, j)
            rels.append(xi * xj - (xj * xi).scale(d.q(i, j)))
    qls = complete(rels, S.order, S.degree_bound)
    idx = 0
    for stratum in S.strata:
        for el in stratum:
            slot = params.slots[idx]
            idx += 1
            if _power_letter(el.relation):
                if slot.value and not slot.qls_allows:
                    return False
                continue
            if normal_form_of(el.relation, qls):
                return False
    return True


# cleft objects ---------------------------------------------------------------------

@dataclass
class CleftPresentation:
    level: int
    params: DeformationParams
    system: RewriteSystem
    parent: Optional["CleftPresentation"] = None
    checks: dict = field(default_factory=dict)

    @property
    def collapsed(self) -> bool:
        return self.system.certificate.collapsed


class RejectedParameters(RuntimeError):
    def __init__(self, message: str, witness: str):
        super().__init__(f"{message}: {witness}")
        self.witness = witness


def _deformed(el: StratumElement, prev: RewriteSystem, lam: CycNumber, lifting: bool) -> SmashElement:
    d = prev.datum
    u = normal_form_of(el.relation, prev)
    if not lam:
        return u
    one = SmashElement.one(d)
    if lifting:
        return u - (one - SmashElement.group(d, el.g)).scale(lam)
    return u - one.scale(lam)


def _collapse_witness(rels: Sequence[SmashElement]) -> str:
    for r in rels:
        for part in isotypic_components(r.datum, r.terms):
            if all(w == "" for (w, _h) in part):
                return f"component {format_element(SmashElement._wrap(r.datum, part))} of {format_element(r)} is invertible"
    return "1 lies in the completed ideal"


def _compare_with(A: RewriteSystem, H: RewriteSystem) -> tuple[bool, bool, str]:
    """(same leads, same counts, first difference) at the degrees both certify."""
    bound = min(A.degree_bound, H.degree_bound)
    la = {l for l in A.rules if len(l) <= bound}
    lh = {l for l in H.rules if len(l) <= bound}
    ca = A.certificate.normal_word_counts
    ch = H.certificate.normal_word_counts
    if A.certificate.finite and H.certificate.finite:
        same_counts = ca == ch
    else:
        same_counts = ca[: bound + 1] == ch[: bound + 1]
    diff = ""
    if la != lh:
        diff = f"leads only in A: {sorted(la - lh)[:3]}, only in H: {sorted(lh - la)[:3]}"
    elif not same_counts:
        for i, (x, y) in enumerate(zip(ca, ch)):
            if x != y:
                diff = f"degree {i}: {x} normal words in A vs {y} in H"
                break
        else:
            diff = f"length {len(ca)} vs {len(ch)}"
    return la == lh, same_counts, diff


_SYSTEM_CACHE: dict[str, RewriteSystem] = {}


def _cached_complete(rels: list[SmashElement], base: RewriteSystem, bound: int) -> RewriteSystem:
    key = relation_hash(base.datum, rels, base.order, bound) + base.content_hash()
    hit = _SYSTEM_CACHE.get(key)
    if hit is None:
        hit = complete(rels, base.order, bound, base=base)
        _SYSTEM_CACHE[key] = hit
    return hit


def _build_chain(S: Stratification, params: DeformationParams, level: int, lifting: bool) -> list[RewriteSystem]:
    d = S.datum
    systems = [S.system(0)]
    undeformed = True
    idx = 0
    for k in range(level):
        prev = systems[-1]
        rels = []
        for j, el in enumerate(S.strata[k]):
            lam = params.slots[idx + j].value or CycNumber.zero(d.order)
            if lifting and el.g == d.identity:
                lam = CycNumber.zero(d.order)
            undeformed = undeformed and not lam
            rels.append(_deformed(el, prev, lam, lifting))
        idx += len(S.strata[k])
        if undeformed:
            systems.append(S.system(k + 1))
            continue
        R = _cached_complete(rels, prev, S.level_bound(k + 1))
        if R.certificate.collapsed:
            raise RejectedParameters(
                f"{'L' if lifting else 'A'}({params.describe()}) collapses at level {k + 1}",
                _collapse_witness(rels),
            )
        systems.append(R)
    return systems


def build_cleft(S: Stratification, params: DeformationParams, level: Optional[int] = None) -> CleftPresentation:
    """A_level(lambda): T(V)#kG modulo u_i - lambda_i over the strata below `level`.

    Verifies that leading words and normal-word counts agree with H_level.
    """
    level = S.depth if level is None else level
    systems = _build_chain(S, params, level, lifting=False)
    parent = None
    for k, R in enumerate(systems):
        parent = CleftPresentation(k, params, R, parent)
    H = S.system(level)
    same_leads, same_counts, diff = _compare_with(parent.system, H)
    parent.checks = {"leads_preserved": same_leads, "counts_match": same_counts, "difference": diff}
    if not (same_leads and same_counts):
        raise RejectedParameters(f"A({params.describe()}) is not H-cofree at level {level}", diff)
    return parent


# sections -----------------------------------------------------------------------------

def _letter_degree(d: YDDatum, w: Word) -> tuple[int, ...]:
    return tuple(w.count(x) for x in d.letters())


def _hermite(vectors: list[list[int]]) -> list[list[int]]:
    """Row echelon integer basis of the lattice spanned by vectors."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    width = len(rows[0]) if rows else 0
    while rows and col < width:
        piv = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            nxt = [p]
            for r in piv[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                (nxt if r[col] else rest).append(r)
            piv = nxt
        if piv:
            basis.append(piv[0])
        rows = [r for r in rest if any(r)]
        col += 1
    return basis


def _degree_lattice(A: RewriteSystem) -> list[list[int]]:
    """Lattice spanned by deg(lead) - deg(t) over the rules of A; A is graded modulo it."""
    d = A.datum
    vecs = set()
    for lead, tail in A.rules.items():
        dl = _letter_degree(d, lead)
        for (t, _g) in tail:
            vecs.add(tuple(a - b for a, b in zip(dl, _letter_degree(d, t))))
    return _hermite([list(v) for v in sorted(vecs)])


def _in_lattice(v: Sequence[int], basis: list[list[int]]) -> bool:
    v = list(v)
    for b in basis:
        col = next(i for i, x in enumerate(b) if x)
        if v[col] % b[col]:
            return False
        q = v[col] // b[col]
        v = [a - q * c for a, c in zip(v, b)]
    return not any(v)


class Section:
    """gamma: H -> A by normal words, with its convolution inverse."""

    def __init__(self, A: RewriteSystem, H: RewriteSystem):
        same_leads, same_counts, diff = _compare_with(A, H)
        if not same_leads:
            raise BasisMismatchError(diff)
        self.A = A
        self.H = H
        self.datum = H.datum
        self.cop_H = Coproducts(H, H)
        self.cop_AH = Coproducts(A, H)
        self._inv: dict[Word, SmashElement] = {}
        self._sigma: dict = {}
        self._lattice = _degree_lattice(A)

    # gamma ---------------------------------------------------------------
    def gamma(self, h: SmashElement) -> SmashElement:
        v = self.H.normal_form(h)
        return SmashElement._wrap(self.datum, dict(v.terms))

    def _gamma_inv_word(self, w: Word) -> SmashElement:
        hit = self._inv.get(w)
        if hit is not None:
            return hit
        d = self.datum
        if not w:
            out = SmashElement.one(d)
        else:
            out = self._inv_from_coproduct(self.cop_H.word(w))
        self._inv[w] = out
        return out

    def _inv_from_coproduct(self, delta: dict) -> SmashElement:
        # delta is Delta_H(h) for h without group parts and eps(h) = 0
        d = self.datum
        A = self.A
        acc: dict = {}
        for (w1, g1, w2, g2), c in delta.items():
            if not w2:
                continue
            left = self._gamma_inv_basis(w1, g1)
            prod = smash_product_terms(d, left.terms, {(w2, g2): c})
            for k, v in prod.items():
                _add_into(acc, k, -v)
        return A.normal_form(SmashElement._wrap(d, acc))

    def _gamma_inv_basis(self, w: Word, g: GroupElement) -> SmashElement:
        d = self.datum
        base = self._gamma_inv_word(w)
        if g == d.identity:
            return base
        return self.A.normal_form(SmashElement.group(d, d.group.inv(g)) * base)

    def gamma_inv(self, h: SmashElement) -> SmashElement:
        d = self.datum
        v = self.H.normal_form(h)
        acc: dict = {}
        for (w, g), c in v.terms.items():
            for k, x in self._gamma_inv_basis(w, g).terms.items():
                _add_into(acc, k, x * c)
        return SmashElement._wrap(d, acc)

    def gamma_inv_with_coproduct(self, h: SmashElement, delta: TensorElement) -> SmashElement:
        """gamma^-1 of an element without group parts whose reduced coproduct is known."""
        eps = h.counit()
        out = self._inv_from_coproduct(delta.terms)
        if eps:
            out = out + SmashElement.scalar(self.datum, eps)
        return out

    def can_inverse(self, h: SmashElement) -> TensorElement:
        """can^-1(1 (x) h) = gamma^-1(h_1) (x) gamma(h_2) in A (x) A."""
        d = self.datum
        acc: dict = {}
        for (w, g), c in self.H.normal_form(h).terms.items():
            delta = self.cop_H.element(SmashElement.monomial(d, w, g))
            for (w1, g1, w2, g2), c2 in delta.terms.items():
                left = self._gamma_inv_basis(w1, g1)
                for (v1, h1), c3 in left.terms.items():
                    _add_into(acc, (v1, h1, w2, g2), c * c2 * c3)
        return TensorElement._wrap(d, acc)

    # coaction ---------------------------------------------------------------
    def coaction(self, a: Relation) -> TensorElement:
        """rho(a) = Delta of a representative, left leg in A, right leg in H."""
        return self.cop_AH.of(a)

    # verification ----------------------------------------------------------------
    def verify(self, max_degree: int = 4) -> dict:
        """Colinearity and two-sided convolution inverse on all normal words up to max_degree."""
        d = self.datum
        H = self.H
        e = d.identity
        levels = H.normal_words(max_degree)
        words = [w for lv in levels for w in lv]
        colinear = True
        inverse = True
        failures = []
        for w in words:
            if self.cop_AH.word(w) != self.cop_H.word(w):
                colinear = False
                failures.append(f"rho(gamma({w or '1'})) differs from (gamma (x) id) Delta")
            delta = self.cop_H.word(w)
            left = SmashElement.zero(d)
            right = SmashElement.zero(d)
            for (w1, g1, w2, g2), c in delta.items():
                gi1 = self._gamma_inv_basis(w1, g1)
                gi2 = self._gamma_inv_basis(w2, g2)
                g1e = SmashElement._wrap(d, {(w1, g1): c})
                g2e = SmashElement._wrap(d, {(w2, g2): c})
                left = left + gi1 * g2e
                right = right + g1e * gi2
            target = SmashElement.one(d) if not w else SmashElement.zero(d)
            if self.A.normal_form(left) != target or self.A.normal_form(right) != target:
                inverse = False
                failures.append(f"gamma^-1 * gamma != eps on {w or '1'}")
        return {"words": len(words), "colinear": colinear, "convolution_inverse": inverse, "failures": failures}

    # cocycle -------------------------------------------------------------------------
    def _sigma_basis(self, a: tuple, b: tuple) -> CycNumber:
        key = (a, b)
        hit = self._sigma.get(key)
        if hit is not None:
            return hit
        d = self.datum
        zero = CycNumber.zero(d.order)
        if not _in_lattice(_letter_degree(d, a[0] + b[0]), self._lattice):
            # A is graded by letter degree modulo the lattice, scalars sit in degree 0
            self._sigma[key] = zero
            return zero
        H, A = self.H, self.A
        da = self.cop_H.element(SmashElement.monomial(d, *a)).terms
        db = self.cop_H.element(SmashElement.monomial(d, *b)).terms
        acc: dict = {}
        for (w1, g1, w2, g2), c1 in da.items():
            for (v1, h1, v2, h2), c2 in db.items():
                left = smash_product_terms(d, {(w1, g1): c1}, {(v1, h1): c2})
                right = H.reduce_terms(smash_product_terms(d, {(w2, g2): CycNumber.one(d.order)}, {(v2, h2): CycNumber.one(d.order)}))
                inv: dict = {}
                for (u, g), c in right.items():
                    for k, x in self._gamma_inv_basis(u, g).terms.items():
                        _add_into(inv, k, x * c)
                for k, x in smash_product_terms(d, left, inv).items():
                    _add_into(acc, k, x)
        value = A.reduce_terms(acc)
        e = d.identity
        if any(k != ("", e) for k in value):
            raise CocycleError(f"sigma({a}, {b}) is not a scalar: {format_element(SmashElement._wrap(d, value))}")
        out = value.get(("", e), CycNumber.zero(d.order))
        self._sigma[key] = out
        return out

    def cocycle(self, h: SmashElement, k: SmashElement) -> CycNumber:
        """sigma(h, k) = gamma(h_1) gamma(k_1) gamma^-1(h_2 k_2), bilinear in normal words."""
        d = self.datum
        out = CycNumber.zero(d.order)
        for ka, ca in self.H.normal_form(h).terms.items():
            for kb, cb in self.H.normal_form(k).terms.items():
                out = out + self._sigma_basis(ka, kb) * ca * cb
        return out

    def mu_action(self, a: SmashElement, h: SmashElement) -> SmashElement:
        """Miyashita-Ulbrich action a <- h = gamma^-1(h_1) a gamma(h_2)."""
        d = self.datum
        acc = SmashElement.zero(d)
        for (w1, g1, w2, g2), c in self.cop_H.element(self.H.normal_form(h)).terms.items():
            acc = acc + self._gamma_inv_basis(w1, g1) * a * SmashElement._wrap(d, {(w2, g2): c})
        return self.A.normal_form(acc)


def section_and_inverse(A: CleftPresentation, H: RewriteSystem) -> Section:
    return Section(A.system, H)


def cocycle_eval(h: SmashElement, k: SmashElement, section: Section) -> CycNumber:
    return section.cocycle(h, k)


def mu_action(a: SmashElement, h: SmashElement, section: Section) -> SmashElement:
    return section.mu_action(a, h)


def coaction_right(a: Relation, section: Section) -> TensorElement:
    return section.coaction(a)


@dataclass
class CocycleReport:
    samples: int
    normalized: bool
    cocycle_identity: bool
    failures: list[str]

    @property
    def passed(self) -> bool:
        return self.normalized and self.cocycle_identity


def check_cocycle(section: Section, triples: Iterable[tuple[SmashElement, SmashElement, SmashElement]]) -> CocycleReport:
    """sigma(x, 1) = sigma(1, x) = eps(x) and
    sigma(x_1, y_1) sigma(x_2 y_2, z) = sigma(y_1, z_1) sigma(x, y_2 z_2)."""
    d = section.datum
    H = section.H
    one = SmashElement.one(d)
    cop = section.cop_H
    failures = []
    normalized = True
    ident = True
    n = 0
    for x, y, z in triples:
        n += 1
        for t in (x, y, z):
            eps = t.counit()
            if section.cocycle(t, one) != eps or section.cocycle(one, t) != eps:
                normalized = False
                failures.append(f"sigma({format_element(t)}, 1) != eps")
        dx, dy, dz = cop.element(H.normal_form(x)).terms, cop.element(H.normal_form(y)).terms, cop.element(H.normal_form(z)).terms
        lhs = CycNumber.zero(d.order)
        for (a1, ga1, a2, ga2), ca in dx.items():
            for (b1, gb1, b2, gb2), cb in dy.items():
                s1 = section._sigma_basis((a1, ga1), (b1, gb1))
                if not s1:
                    continue
                prod = SmashElement._wrap(d, smash_product_terms(d, {(a2, ga2): ca * cb}, {(b2, gb2): CycNumber.one(d.order)}))
                lhs = lhs + s1 * section.cocycle(prod, z)
        rhs = CycNumber.zero(d.order)
        for (b1, gb1, b2, gb2), cb in dy.items():
            for (c1, gc1, c2, gc2), cc in dz.items():
                s1 = section._sigma_basis((b1, gb1), (c1, gc1))
                if not s1:
                    continue
                prod = SmashElement._wrap(d, smash_product_terms(d, {(b2, gb2): cb * cc}, {(c2, gc2): CycNumber.one(d.order)}))
                rhs = rhs + s1 * section.cocycle(x, prod)
        if lhs != rhs:
            ident = False
            failures.append(f"cocycle identity fails on ({format_element(x)}, {format_element(y)}, {format_element(z)})")
    return CocycleReport(n, normalized, ident, failures)


# lifting relations ----------------------------------------------------------------------

def _op_product(d: YDDatum, a: dict, b: dict) -> dict:
    """(a1 (x) a2)(b1 (x) b2) = a1 b1 (x) b2 a2 in A (x) A^op."""
    acc: dict = {}
    for (w1, g1, w2, g2), ca in a.items():
        for (v1, h1, v2, h2), cb in b.items():
            left = smash_product_terms(d, {(w1, g1): ca}, {(v1, h1): cb})
            right = smash_product_terms(d, {(v2, h2): CycNumber.one(d.order)}, {(w2, g2): CycNumber.one(d.order)})
            for (x1, k1), c1 in left.items():
                for (x2, k2), c2 in right.items():
                    _add_into(acc, (x1, k1, x2, k2), c1 * c2)
    return acc


@dataclass
class LiftReport:
    name: str
    skew_primitive: bool
    colinear: bool
    coaction_identity: bool
    residual: str
    gamma_shift: str

    @property
    def passed(self) -> bool:
        return self.skew_primitive and self.colinear and self.coaction_identity and self.residual == "0"


class LiftContext:
    """Evaluation of words in L = (A (x) A^op)^coH through x_i -> (gamma (x) gamma^-1) Delta(x_i)."""

    def __init__(self, section: Section):
        self.section = section
        self.d = section.datum
        self.cop_AA = Coproducts(section.A, section.A)
        self._letters = {}
        for i in range(1, self.d.theta + 1):
            x = SmashElement.letter(self.d, i)
            g = self.d.letter_g(str(i))
            t = TensorElement.pure(x, SmashElement.one(self.d))
            t = t + TensorElement.pure(SmashElement.group(self.d, g), section.gamma_inv(x))
            self._letters[str(i)] = t.terms

    def reduce(self, terms: dict) -> dict:
        return self.cop_AA.reduce(terms)

    def group(self, g: GroupElement) -> dict:
        grp = self.d.group
        return {("", g, "", grp.inv(g)): CycNumber.one(self.d.order)}

    def word(self, w: Word) -> dict:
        e = self.d.identity
        cur = {("", e, "", e): CycNumber.one(self.d.order)}
        for c in w:
            cur = self.reduce(_op_product(self.d, cur, self._letters[c]))
        return cur

    def element(self, a: SmashElement) -> dict:
        acc: dict = {}
        for (w, g), c in a.terms.items():
            t = _op_product(self.d, self.word(w), self.group(g))
            for k, v in t.items():
                _add_into(acc, k, v * c)
        return self.reduce(acc)

    def of(self, u: Relation) -> dict:
        if isinstance(u, Power):
            step = self.element(u.base)
            e = self.d.identity
            cur = {("", e, "", e): CycNumber.one(self.d.order)}
            for _ in range(u.exponent):
                cur = self.reduce(_op_product(self.d, cur, step))
            return cur
        return self.element(u)


def lift_relation(el: StratumElement, section: Section, lift: Optional[LiftContext] = None) -> LiftReport:
    """Check that u lifts to L without correction terms.

    With Delta_H(u) computed leg-reduced, this verifies skew-primitivity in H,
    colinearity rho(gamma(u)) = (gamma (x) id) Delta_H(u), the coaction identity
    lambda(gamma(u)) - g (x) gamma(u) = u~ (x) 1 with u~ = (gamma (x) gamma^-1)
    Delta_H(u), and that u~ equals u evaluated on the generators of L.
    """
    d = section.datum
    A, H = section.A, section.H
    u = el.relation
    one = SmashElement.one(d)
    g = el.g
    delta = section.cop_H.of(u)
    uH = normal_form_of(u, H)
    skew = delta == TensorElement.pure(uH, one) + TensorElement.pure(SmashElement.group(d, g), uH)
    gam = section.gamma(uH)
    shift = A.normal_form(gam - normal_form_of(u, A))
    rho = section.coaction(u) + section.cop_AH.element(shift)
    colinear = rho == delta
    inv = section.gamma_inv_with_coproduct(uH, delta)
    # u~ = (gamma (x) gamma^-1) Delta_H(u)
    u_tilde: dict = {}
    for (w, h), mid in _split_by_left(delta.terms).items():
        m_inv = _inverse_of(section, SmashElement._wrap(d, mid), uH, inv)
        for (v, k), c in m_inv.terms.items():
            _add_into(u_tilde, (w, h, v, k), c)
    identity = _check_left_coaction(section, u, uH, g, delta, inv, u_tilde)
    lift = lift or LiftContext(section)
    uL = TensorElement._wrap(d, lift.of(u))
    residual = uL - TensorElement._wrap(d, lift.reduce(u_tilde))
    return LiftReport(
        name=el.name,
        skew_primitive=skew,
        colinear=colinear,
        coaction_identity=identity,
        residual=format_tensor(residual) if residual else "0",
        gamma_shift=format_element(shift) if shift else "0",
    )


def _split_by_right(d: YDDatum, terms: dict) -> dict:
    """Group tensor terms by right basis element: {(w2, g2): {(w1, g1): c}}."""
    out: dict = {}
    for (w1, g1, w2, g2), c in terms.items():
        out.setdefault((w2, g2), {})[(w1, g1)] = c
    return out


def _split_by_left(terms: dict) -> dict:
    out: dict = {}
    for (w1, g1, w2, g2), c in terms.items():
        out.setdefault((w1, g1), {})[(w2, g2)] = c
    return out


def _inverse_of(section: Section, m: SmashElement, u: SmashElement, u_inv: SmashElement) -> SmashElement:
    """gamma^-1(m), reusing gamma^-1(u) when m is a multiple of u."""
    if u and m.terms:
        key, c = next(iter(m.terms.items()))
        cu = u.terms.get(key)
        if cu is not None and len(m.terms) == len(u.terms):
            ratio = c / cu
            if m == u.scale(ratio):
                return u_inv.scale(ratio)
    return section.gamma_inv(m)


def _check_left_coaction(section, u, uH, g, delta, inv, u_tilde) -> bool:
    """lambda(gamma(u)) - (g (x) g^-1) (x) gamma(u) == u~ (x) 1.

    lambda(gamma(u)) = gamma(u_1) (x) gamma^-1(u_2) (x) gamma(u_3) with
    Delta^2 = (Delta (x) id) Delta; left coefficients equal to u reuse Delta(u).
    """
    d = section.datum
    e = d.identity
    lam: dict = {}
    for r, left in _split_by_right(d, delta.terms).items():
        L = SmashElement._wrap(d, left)
        if L == uH:
            dl = delta.terms
        else:
            dl = section.cop_H.element(L).terms
        for (a, ga), mid in _split_by_left(dl).items():
            m_inv = _inverse_of(section, SmashElement._wrap(d, mid), uH, inv)
            for (v, k), c in m_inv.terms.items():
                _add_into(lam, (a, ga, v, k, r[0], r[1]), c)
    ginv = d.group.inv(g)
    for (w, h), c in uH.terms.items():
        _add_into(lam, ("", g, "", ginv, w, h), -c)
    target: dict = {}
    for (a, ga, b, gb), c in u_tilde.items():
        _add_into(target, (a, ga, b, gb, "", e), c)
    lam = {k: v for k, v in lam.items() if v}
    target = {k: v for k, v in target.items() if v}
    return lam == target


# liftings ---------------------------------------------------------------------------------

@dataclass
class LiftingPresentation:
    params: DeformationParams
    system: RewriteSystem
    relations: list[str]
    hopf_checks: dict[str, bool]
    dimension: int
    dimension_exact: bool
    expected_dimension: Optional[int]
    graded_counts_match: bool

    @property
    def passed(self) -> bool:
        return (
            all(self.hopf_checks.values())
            and self.dimension_exact
            and self.graded_counts_match
            and (self.expected_dimension is None or self.dimension == self.expected_dimension)
        )


_DEFECT_CACHE: dict = {}


def _cached_defect(el: StratumElement, R: RewriteSystem, cop: Coproducts) -> TensorElement:
    key = (R.content_hash(), el.name, str(el.relation))
    hit = _DEFECT_CACHE.get(key)
    if hit is None:
        hit = skew_primitive_defect(el.relation, el.g, R, cop)
        _DEFECT_CACHE[key] = hit
    return hit


def build_lifting(params: DeformationParams, S: Stratification) -> LiftingPresentation:
    """L(lambda) with a Hopf-ideal check per deformed relation and the dimension check."""
    d = S.datum
    systems = _build_chain(S, params, S.depth, lifting=True)
    hopf = {}
    relations = []
    idx = 0
    for k, stratum in enumerate(S.strata):
        prev = systems[k]
        cop = Coproducts(prev)
        for el in stratum:
            lam = params.slots[idx].value or CycNumber.zero(d.order)
            idx += 1
            defect = _cached_defect(el, prev, cop)
            hopf[el.name] = not defect
            rel = el.name if not lam or el.g == d.identity else f"{el.name} - ({lam})*(1 - {_fmt_group(el.g)})"
            relations.append(rel)
    L = systems[-1]
    H = S.final_system()
    dim = L.dimension(smash=True)
    hdim = H.dimension(smash=True)
    _, same_counts, _ = _compare_with(L, H)
    return LiftingPresentation(
        params=params,
        system=L,
        relations=relations,
        hopf_checks=hopf,
        dimension=dim.value,
        dimension_exact=dim.exact,
        expected_dimension=hdim.value if hdim.exact else None,
        graded_counts_match=same_counts,
    )


def _fmt_group(g: GroupElement) -> str:
    return "g(" + ",".join(str(x) for x in g) + ")"


# good modules ------------------------------------------------------------------------------

@dataclass
class GoodModuleStep:
    level: int
    name: str
    defect: str

    @property
    def passed(self) -> bool:
        return self.defect == "0"


def good_module_check(
    S: Stratification,
    params: Optional[DeformationParams] = None,
    levels: Optional[int] = None,
) -> list[GoodModuleStep]:
    """Delta(n) - n (x) 1 - g_n (x) n in I_M (x) T + T (x) I_M along the chain.

    M at step k is the union of the deformed relations of G_0..G_{k-1}; the
    first step is against the free algebra.
    """
    params = params or admissibility(S)
    levels = S.depth if levels is None else min(levels, S.depth)
    systems = _build_chain(S, params, levels - 1, lifting=True)
    steps = []
    for k in range(levels):
        R = systems[k]
        cop = Coproducts(R)
        for el in S.strata[k]:
            defect = _cached_defect(el, R, cop)
            steps.append(GoodModuleStep(k, el.name, format_tensor(defect) if defect else "0"))
    return steps
