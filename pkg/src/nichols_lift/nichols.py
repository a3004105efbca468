"""Hopf-theoretic checks on quotients of T(V)#kG.

Skew-primitivity, primitive spaces by degree, adapted stratifications,
truncation orders of one-generated subalgebras, centrality and normality.
Every check reduces coproducts leg by leg, so large powers such as x12^18
never get expanded in the free algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .algebra import (
    SmashElement,
    TensorElement,
    _add_into,
    antipode,
    format_element,
    format_tensor,
    letter_coproduct,
    tensor_product_terms,
)
from .rewrite import (
    MonomialOrder,
    RewriteSystem,
    complete,
    tensor_normal_form,
)
from .scalars import CycNumber
from .yddata import Character, GroupElement, Word, YDDatum


class NotHomogeneousError(ValueError):
    """Monomials of one element carry different (g, chi) weights."""


class OutOfScopeError(ValueError):
    pass


@dataclass(frozen=True)
class Power:
    """base^exponent, kept factored so coproducts can be reduced per factor."""

    base: SmashElement
    exponent: int

    @property
    def datum(self) -> YDDatum:
        return self.base.datum

    def __str__(self) -> str:
        return f"({format_element(self.base)})^{self.exponent}"


Relation = Union[SmashElement, Power]


def free_system(datum: YDDatum, order: Optional[MonomialOrder] = None, degree_bound: int = 64) -> RewriteSystem:
    """The rule-free system presenting T(V)#kG itself."""
    order = order or MonomialOrder.default(datum.theta)
    system = RewriteSystem(datum, order, {}, degree_bound)
    system.certificate.confluent_up_to = degree_bound
    system._refresh_counts()
    return system


def normal_form_of(u: Relation, R: RewriteSystem) -> SmashElement:
    if isinstance(u, Power):
        return R.power(u.base, u.exponent)
    return R.normal_form(u)


def relation_weight(u: Relation) -> tuple[int, GroupElement, Character]:
    """(degree, g, chi) shared by every monomial; raises if not homogeneous."""
    if isinstance(u, Power):
        deg, g, chi = relation_weight(u.base)
        grp = u.datum.group
        return deg * u.exponent, grp.power(g, u.exponent), grp.power(chi, u.exponent)
    d = u.datum
    grp = d.group
    weights = set()
    for w, h in u.terms:
        gw, cw = d.word_weight(w)
        weights.add((grp.mul(gw, h), cw))
    if not weights:
        raise NotHomogeneousError("the zero element has no weight")
    if len(weights) > 1:
        raise NotHomogeneousError(f"{format_element(u)} mixes {len(weights)} weights")
    g, chi = weights.pop()
    return u.degree(), g, chi


# coproducts ------------------------------------------------------------------

class Coproducts:
    """Delta on T(V)#kG with legs reduced in `left` and `right`; memoized by word."""

    def __init__(self, left: RewriteSystem, right: Optional[RewriteSystem] = None):
        self.left = left
        self.right = right or left
        self.datum = left.datum
        e = self.datum.identity
        self._words: dict[Word, dict] = {"": {("", e, "", e): CycNumber.one(self.datum.order)}}

    def reduce(self, terms: dict) -> dict:
        return tensor_normal_form(TensorElement._wrap(self.datum, terms), self.left, self.right).terms

    def word(self, w: Word) -> dict:
        hit = self._words.get(w)
        if hit is not None:
            return hit
        # extend the longest cached prefix one letter at a time
        k = len(w) - 1
        while w[:k] not in self._words:
            k -= 1
        cur = self._words[w[:k]]
        for i in range(k, len(w)):
            cur = self.reduce(tensor_product_terms(self.datum, cur, letter_coproduct(self.datum, w[i])))
            self._words[w[: i + 1]] = cur
        return cur

    def element(self, a: SmashElement) -> TensorElement:
        d = self.datum
        grp = d.group
        acc: dict = {}
        for (w, g), c in a.terms.items():
            for (w1, g1, w2, g2), c2 in self.word(w).items():
                _add_into(acc, (w1, grp.mul(g1, g), w2, grp.mul(g2, g)), c2 * c)
        return TensorElement._wrap(d, acc)

    def power(self, base: SmashElement, k: int) -> TensorElement:
        step = self.element(base)
        out = TensorElement.pure(SmashElement.one(self.datum), SmashElement.one(self.datum))
        for _ in range(k):
            out = TensorElement._wrap(self.datum, self.reduce(tensor_product_terms(self.datum, out.terms, step.terms)))
        return out

    def of(self, u: Relation) -> TensorElement:
        if isinstance(u, Power):
            return self.power(u.base, u.exponent)
        return self.element(u)


def skew_primitive_defect(
    u: Relation,
    g: GroupElement,
    R: RewriteSystem,
    coproducts: Optional[Coproducts] = None,
) -> TensorElement:
    """Delta(u) - u (x) 1 - g (x) u with both legs in normal form for R."""
    cop = coproducts or Coproducts(R)
    d = R.datum
    delta = cop.of(u)
    v = normal_form_of(u, R)
    one = SmashElement.one(d)
    return delta - TensorElement.pure(v, one) - TensorElement.pure(SmashElement.group(d, g), v)


# exact linear algebra ------------------------------------------------------------

def _eliminate(rows: list[dict]) -> list[tuple[int, dict]]:
    """Reduced row echelon form of sparse rows {column: value}; returns (pivot, row)."""
    pivots: list[tuple[int, dict]] = []
    for row in rows:
        row = dict(row)
        for p, prow in pivots:
            c = row.get(p)
            if c is not None:
                for j, v in prow.items():
                    _add_into(row, j, -(c * v))
        if not row:
            continue
        p = min(row)
        inv = row[p].inverse()
        row = {j: v * inv for j, v in row.items()}
        for i, (q, qrow) in enumerate(pivots):
            c = qrow.get(p)
            if c is not None:
                for j, v in row.items():
                    _add_into(qrow, j, -(c * v))
        pivots.append((p, row))
    return pivots


def kernel(columns: Sequence[dict], n: int) -> list[list[CycNumber]]:
    """Basis of {c : sum_j c_j columns[j] = 0} over Q(zeta_n)."""
    rows: dict = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            rows.setdefault(key, {})[j] = v
    pivots = _eliminate(list(rows.values()))
    pivot_cols = {p for p, _ in pivots}
    basis = []
    zero = CycNumber.zero(n)
    for f in range(len(columns)):
        if f in pivot_cols:
            continue
        vec = [zero] * len(columns)
        vec[f] = CycNumber.one(n)
        for p, row in pivots:
            c = row.get(f)
            if c is not None:
                vec[p] = -c
        basis.append(vec)
    return basis


def solve_in_span(target: dict, vectors: Sequence[dict], n: int) -> Optional[list[CycNumber]]:
    """Coefficients c with sum c_j vectors[j] = target, or None."""
    sol = kernel(list(vectors) + [target], n)
    last = len(vectors)
    for vec in sol:
        if vec[last]:
            s = -vec[last].inverse()
            return [c * s for c in vec[:last]]
    return None


# primitive spaces --------------------------------------------------------------

@dataclass
class PrimitiveVector:
    degree: int
    g: GroupElement
    chi: Character
    element: SmashElement


def primitive_space(R: RewriteSystem, degree: int) -> list[PrimitiveVector]:
    """Basis of the (g, 1)-skew-primitives of one degree, weight class by weight class."""
    d = R.datum
    levels = R.normal_words(degree)
    words = levels[degree] if len(levels) > degree else []
    classes: dict = {}
    for w in words:
        classes.setdefault(d.word_weight(w), []).append(w)
    cop = Coproducts(R)
    one = SmashElement.one(d)
    out = []
    for (g, chi) in sorted(classes):
        ws = classes[(g, chi)]
        cols = []
        for w in ws:
            mono = SmashElement.monomial(d, w)
            defect = cop.element(mono) - TensorElement.pure(mono, one) - TensorElement.pure(SmashElement.group(d, g), mono)
            cols.append(defect.terms)
        for vec in kernel(cols, d.order):
            terms = {(w, d.identity): c for w, c in zip(ws, vec) if c}
            out.append(PrimitiveVector(degree, g, chi, SmashElement._wrap(d, terms)))
    return out


# stratifications ---------------------------------------------------------------

@dataclass
class StratumElement:
    name: str
    relation: Relation
    degree: int
    g: GroupElement
    chi: Character


@dataclass
class Stratum:
    elements: list[StratumElement]

    @classmethod
    def of(cls, items: Sequence[tuple[str, Relation]]) -> "Stratum":
        out = []
        for name, u in items:
            deg, g, chi = relation_weight(u)
            if deg < 2:
                raise ValueError(f"stratum element {name} has degree {deg} < 2")
            out.append(StratumElement(name, u, deg, g, chi))
        return cls(out)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass
class Stratification:
    """Strata G_0..G_N with R_0 = T(V)#kG and R_{k+1} = R_k + G_k."""

    datum: YDDatum
    strata: list[Stratum]
    order: MonomialOrder
    degree_bound: int = 64
    _systems: list[RewriteSystem] = field(default_factory=list, repr=False)

    def level_bound(self, k: int) -> int:
        """Degree bound used for R_k.

        The final level gets the full bound. An intermediate level only has to
        be exact up to the degree of its own stratum, which is all the checks
        at that level touch; intermediate quotients are often infinite and
        their completion does not terminate.
        """
        if k >= self.depth:
            return self.degree_bound
        return min(self.degree_bound, max(el.degree for el in self.strata[k]))

    def system(self, k: int) -> RewriteSystem:
        if not self._systems:
            self._systems.append(free_system(self.datum, self.order, self.level_bound(0)))
        while len(self._systems) <= k:
            i = len(self._systems) - 1
            prev = self._systems[i]
            rels = [normal_form_of(el.relation, prev) for el in self.strata[i]]
            self._systems.append(complete(rels, self.order, self.level_bound(i + 1), base=prev))
        return self._systems[k]

    @property
    def depth(self) -> int:
        return len(self.strata)

    def final_system(self) -> RewriteSystem:
        return self.system(self.depth)


@dataclass
class StratumCheck:
    level: int
    name: str
    degree: int
    g: GroupElement
    chi: Character
    skew_primitive: bool
    nonzero_at_level: bool
    defect: str = ""

    @property
    def passed(self) -> bool:
        return self.skew_primitive and self.nonzero_at_level


@dataclass
class StratificationReport:
    checks: list[StratumCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[StratumCheck]:
        return [c for c in self.checks if not c.passed]


def validate_stratification(S: Stratification, levels: Optional[Sequence[int]] = None) -> StratificationReport:
    """Every element of G_k must be skew-primitive and nonzero modulo R_k.

    This asks for skew-primitivity of the last stratum too, which is stronger
    than what an adapted stratification requires there.
    """
    checks = []
    for k in levels if levels is not None else range(S.depth):
        R = S.system(k)
        cop = Coproducts(R)
        for el in S.strata[k]:
            defect = skew_primitive_defect(el.relation, el.g, R, cop)
            nonzero = bool(normal_form_of(el.relation, R))
            checks.append(
                StratumCheck(
                    level=k,
                    name=el.name,
                    degree=el.degree,
                    g=el.g,
                    chi=el.chi,
                    skew_primitive=not defect,
                    nonzero_at_level=nonzero,
                    defect=format_tensor(defect) if defect else "",
                )
            )
    return StratificationReport(checks)


# truncation ----------------------------------------------------------------------

@dataclass
class TruncationReport:
    q: CycNumber
    N: int
    truncated: bool
    method: str
    witness: Optional[Word] = None
    witness_coefficient: Optional[CycNumber] = None

    @property
    def status(self) -> str:
        return f"truncated_at {self.N}" if self.truncated else "polynomial"


def power_coefficient(u: SmashElement, N: int, word: Word) -> CycNumber:
    """Coefficient of `word` in u^N computed in T(V) by dynamic programming over cut points."""
    d = u.datum
    coeffs: dict = {}
    for (w, g), c in u.terms.items():
        if g != d.identity:
            raise ValueError("power_coefficient needs an element without group parts")
        coeffs[w] = c
    L = len(word)
    zero = CycNumber.zero(d.order)
    layer = {0: CycNumber.one(d.order)}
    for _ in range(N):
        nxt: dict = {}
        for pos, acc in layer.items():
            for w, c in coeffs.items():
                end = pos + len(w)
                if end <= L and word[pos:end] == w:
                    _add_into(nxt, end, acc * c)
        layer = nxt
    return layer.get(L, zero)


def _contains_any(word: Word, pieces: set) -> bool:
    return any(p in word for p in pieces)


def truncation_order(
    u: SmashElement,
    g: GroupElement,
    chi: Character,
    R: RewriteSystem,
    generators: Optional[Sequence[SmashElement]] = None,
    witness: Optional[Word] = None,
) -> TruncationReport:
    """Decide whether k<u g^-1> is polynomial or truncated at N = ord(chi(g)).

    Without `generators` u^N is reduced directly in R. With them, the monomials
    F of the generators span a monomial ideal containing the ideal of R (checked
    rule by rule), and a word avoiding F with nonzero coefficient in u^N proves
    u^N != 0.
    """
    d = R.datum
    q = d.evaluate(chi, g)
    N = q.root_order()
    if N is None:
        raise OutOfScopeError(f"chi(g) = {q} is not a root of unity")
    if N == 1:
        if not R.normal_form(u):
            raise OutOfScopeError("q = 1 and u vanishes in the quotient")
        return TruncationReport(q, 1, False, "direct")
    if generators is not None:
        F = {w for r in generators for (w, _h) in r.terms if w}
        for lead, tail in R.rules.items():
            for w in [lead] + [t for (t, _h) in tail]:
                if not _contains_any(w, F):
                    raise OutOfScopeError(f"rule word {w or '1'} escapes the monomial ideal of the generators")
        candidates = [witness] if witness else sorted({w * N for (w, _h) in u.terms}, key=R.order.key, reverse=True)
        for W in candidates:
            if _contains_any(W, F):
                continue
            c = power_coefficient(u, N, W)
            if c:
                return TruncationReport(q, N, False, "monomial_projection", W, c)
    v = R.power(u, N)
    if v:
        lead = max((w for (w, _h) in v.terms), key=R.order.key)
        return TruncationReport(q, N, False, "direct", lead, v.coefficient(lead))
    return TruncationReport(q, N, True, "direct")


# centrality and normality -----------------------------------------------------------

@dataclass
class CentralityReport:
    commutators: dict[str, str]
    character_trivial: bool

    @property
    def commutes_with_generators(self) -> bool:
        return all(v == "0" for v in self.commutators.values())

    @property
    def central(self) -> bool:
        return self.commutes_with_generators and self.character_trivial


def centrality_check(u: Relation, R: RewriteSystem) -> CentralityReport:
    d = R.datum
    v = normal_form_of(u, R)
    comms = {}
    for i in range(1, d.theta + 1):
        x = SmashElement.letter(d, i)
        c = R.normal_form(v * x - x * v)
        comms[f"x{i}"] = format_element(c) if c else "0"
    chars = {d.word_weight(w)[1] for (w, _h) in v.terms}
    trivial = all(d.is_trivial_on_group(chi) for chi in chars)
    return CentralityReport(comms, trivial)


@dataclass
class NormalityReport:
    status: str  # pass | fail | undecided
    details: list[str]

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def normality_check(stratum: Stratum, R: RewriteSystem) -> NormalityReport:
    """x S(y) - S(y) x in Y = k<S(y) : y in stratum> for every letter x.

    Nonzero residues are tested against span{S(y)^j} when the stratum has a
    single element; with several elements a nonzero residue is left undecided.
    """
    d = R.datum
    details = []
    status = "pass"
    images = [(el.name, R.normal_form(antipode(normal_form_of(el.relation, R)))) for el in stratum]
    for name, sy in images:
        for i in range(1, d.theta + 1):
            x = SmashElement.letter(d, i)
            res = R.normal_form(x * sy - sy * x)
            if not res:
                details.append(f"x{i} vs S({name}): commutator 0")
                continue
            if len(images) != 1:
                details.append(f"x{i} vs S({name}): nonzero, several generators")
                status = "undecided" if status == "pass" else status
                continue
            deg_y = max(len(w) for (w, _h) in sy.terms)
            top = res.degree() // max(deg_y, 1)
            powers = []
            p = SmashElement.one(d)
            for _ in range(top + 1):
                powers.append(p.terms)
                p = R.normal_form(p * sy)
            sol = solve_in_span(res.terms, powers, d.order)
            if sol is None:
                details.append(f"x{i} vs S({name}): {format_element(res)} not in span of powers")
                status = "fail"
            else:
                details.append(f"x{i} vs S({name}): in span of powers")
    return NormalityReport(status, details)
