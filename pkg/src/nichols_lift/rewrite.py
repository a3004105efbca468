"""Noncommutative rewriting over T(V)#kG.

Rules send a monic leading word to a tail in T(V)#kG of smaller order. Group
parts never block a match: reducing ``u lead v g`` replaces ``lead`` by the tail
and moves the tail's group part past ``v`` with the character of ``v``.

Completion is the Bergman/Buchberger overlap procedure, bounded by a degree D.
Every overlap of degree <= D is resolved; the certificate records what that
buys (see ``Certificate``).
"""

from __future__ import annotations

import hashlib
import heapq
import json
import os
import sys
from fractions import Fraction
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from .algebra import SmashElement, TensorElement, _add_into, format_element
from .scalars import CycNumber
from .yddata import GroupElement, Word, YDDatum

sys.setrecursionlimit(max(sys.getrecursionlimit(), 200_000))


class DegreeBudgetError(RuntimeError):
    """A computation needs words beyond the certified degree."""


class RuleBudgetError(RuntimeError):
    """Completion exceeded its rule-count cap; the partial system is attached."""

    def __init__(self, message: str, partial: "RewriteSystem"):
        super().__init__(message)
        self.partial = partial


class UnsupportedLeadError(ValueError):
    """The leading word occurs with several group parts (kG is not a field)."""


class UncertifiedSystemError(RuntimeError):
    pass


@dataclass(frozen=True)
class MonomialOrder:
    """Degree-lexicographic order; ``precedence`` lists letters from largest to smallest."""

    precedence: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.precedence)) != len(self.precedence):
            raise ValueError("precedence must be a permutation of the letters")
        rank = {l: chr(ord("z") - i) for i, l in enumerate(self.precedence)}
        object.__setattr__(self, "_table", str.maketrans(rank))

    @classmethod
    def default(cls, theta: int) -> "MonomialOrder":
        return cls(tuple(str(i) for i in range(1, theta + 1)))

    @classmethod
    def parse(cls, text: str, theta: int) -> "MonomialOrder":
        """'x1>x2' or '2>1' style precedence strings."""
        letters = tuple(p.strip().lstrip("x") for p in text.split(">"))
        if sorted(letters) != [str(i) for i in range(1, theta + 1)]:
            raise ValueError(f"order {text!r} must rank each of x1..x{theta} once")
        return cls(letters)

    def key(self, word: Word):
        return (len(word), word.translate(self._table))

    def describe(self) -> str:
        return ">".join(f"x{l}" for l in self.precedence)


@dataclass
class Certificate:
    degree_bound: int
    confluent_up_to: int = 0
    overlaps_resolved: int = 0
    pending_overlaps: int = 0
    homogeneous: bool = True
    top_degree: Optional[int] = None
    normal_word_counts: list[int] = field(default_factory=list)
    collapsed: bool = False
    overlaps_verified: int = 0

    @property
    def complete(self) -> bool:
        """All ambiguities among the final rules resolve: a genuine Groebner basis."""
        return self.pending_overlaps == 0

    @property
    def finite(self) -> bool:
        return self.top_degree is not None

    @property
    def exact(self) -> bool:
        """Normal-word count equals the quotient dimension.

        Either every overlap is resolved, or the system is homogeneous and no
        normal word survives at some degree <= D (then the truncated basis is
        the full reduced basis).
        """
        if self.collapsed:
            return True
        if not self.finite:
            return False
        return self.complete or (self.homogeneous and self.top_degree + 1 <= self.degree_bound)


@dataclass
class Dimension:
    value: int
    exact: bool

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"


class LeadAutomaton:
    """Aho-Corasick automaton of the leading words.

    Normal words are the paths from the root that avoid every match state, so
    counting them per degree is a dynamic programme over states, and the
    normal-word language is finite iff the live part has no cycle.
    """

    def __init__(self, leads: Iterable[Word], letters: str):
        self.letters = letters
        goto: list[dict] = [{}]
        dead = [False]
        for lead in leads:
            s = 0
            for c in lead:
                nxt = goto[s].get(c)
                if nxt is None:
                    goto.append({})
                    dead.append(False)
                    nxt = len(goto) - 1
                    goto[s][c] = nxt
                s = nxt
            dead[s] = True
        fail = [0] * len(goto)
        delta = [dict() for _ in goto]
        queue = []
        for c in letters:
            t = goto[0].get(c)
            delta[0][c] = t if t is not None else 0
            if t is not None:
                queue.append(t)
        head = 0
        while head < len(queue):
            s = queue[head]
            head += 1
            dead[s] = dead[s] or dead[fail[s]]
            for c in letters:
                t = goto[s].get(c)
                if t is None:
                    delta[s][c] = delta[fail[s]][c]
                else:
                    fail[t] = delta[fail[s]][c]
                    delta[s][c] = t
                    queue.append(t)
        self.delta = delta
        self.dead = dead

    def _live_edges(self, s: int) -> list[int]:
        return [t for t in self.delta[s].values() if not self.dead[t]]

    def counts(self, max_degree: int) -> list[int]:
        vec = {0: 1}
        out = [1]
        for _ in range(max_degree):
            nxt: dict = {}
            for s, n in vec.items():
                for t in self._live_edges(s):
                    nxt[t] = nxt.get(t, 0) + n
            vec = nxt
            if not vec:
                break
            out.append(sum(vec.values()))
        return out

    def longest_word(self) -> Optional[int]:
        """Length of the longest normal word, or None if there are infinitely many."""
        WHITE, GREY, BLACK = 0, 1, 2
        color = [WHITE] * len(self.delta)
        depth = [0] * len(self.delta)
        stack = [(0, iter(self._live_edges(0)))]
        color[0] = GREY
        while stack:
            s, it = stack[-1]
            t = next(it, None)
            if t is None:
                color[s] = BLACK
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    depth[p] = max(depth[p], depth[s] + 1)
                continue
            if color[t] == GREY:
                return None
            if color[t] == BLACK:
                depth[s] = max(depth[s], depth[t] + 1)
                continue
            color[t] = GREY
            stack.append((t, iter(self._live_edges(t))))
        return depth[0]


class RewriteSystem:
    """Oriented relations with a memoized normal-form map."""

    def __init__(
        self,
        datum: YDDatum,
        order: MonomialOrder,
        rules: Optional[dict] = None,
        degree_bound: int = 64,
    ):
        self.datum = datum
        self.order = order
        self.rules: dict[Word, dict] = {}
        self.degree_bound = degree_bound
        self.certificate = Certificate(degree_bound)
        self._lead_lengths: list[int] = []
        self._cache: list[dict] = []
        self._one = CycNumber.one(datum.order)
        self._e = datum.identity
        self._pending: list[tuple] = []
        self._unbounded = False
        for lead, tail in (rules or {}).items():
            self._install(lead, tail)

    # rule bookkeeping --------------------------------------------------------
    def _install(self, lead: Word, tail: dict) -> None:
        self.rules[lead] = tail
        self._lead_lengths = sorted({len(l) for l in self.rules})
        self._evict(len(lead))

    def _remove(self, lead: Word) -> None:
        del self.rules[lead]
        self._lead_lengths = sorted({len(l) for l in self.rules})
        self._evict(len(lead))

    def _evict(self, length: int) -> None:
        for L in range(length, len(self._cache)):
            self._cache[L] = {}

    @property
    def valid_degree(self) -> Optional[int]:
        if self._unbounded or self.certificate.complete or self.certificate.collapsed:
            return None
        return self.degree_bound

    def max_rule_degree(self) -> int:
        return max(self._lead_lengths, default=0)

    def is_normal_word(self, w: Word) -> bool:
        rules = self.rules
        for L in self._lead_lengths:
            if L > len(w):
                break
            for i in range(len(w) - L + 1):
                if w[i : i + L] in rules:
                    return False
        return True

    # reduction ---------------------------------------------------------------
    def word_nf(self, w: Word) -> dict:
        """Normal form of a single word as {(word, g): coeff}; leftmost reduction."""
        L = len(w)
        cache = self._cache
        while len(cache) <= L:
            cache.append({})
        hit = cache[L].get(w)
        if hit is not None:
            return hit
        lens = self._lead_lengths
        e = self._e
        if not lens or L < lens[0]:
            out = {(w, e): self._one}
        else:
            rest = self.word_nf(w[1:])
            if len(rest) == 1 and (w[1:], e) in rest:
                out = self._reduce_prefix(w)
            else:
                a = w[0]
                out = {}
                grp = self.datum.group
                for (w2, h), c in rest.items():
                    sub = self.word_nf(a + w2)
                    if h == e:
                        for k, c3 in sub.items():
                            _add_into(out, k, c3 * c)
                    else:
                        for (w3, h3), c3 in sub.items():
                            _add_into(out, (w3, grp.mul(h3, h)), c3 * c)
        cache[L][w] = out
        return out

    def _reduce_prefix(self, w: Word) -> dict:
        # w[1:] is normal, so only prefixes of w can be leading words
        rules = self.rules
        e = self._e
        for L in self._lead_lengths:
            if L > len(w):
                break
            tail = rules.get(w[:L])
            if tail is None:
                continue
            v = w[L:]
            out: dict = {}
            d = self.datum
            grp = d.group
            chi_v = d.word_weight(v)[1] if v else None
            for (t, h), c in tail.items():
                if h != e and chi_v is not None:
                    k = d.pairing(chi_v, h)
                    if k:
                        c = c.mul_zeta(k)
                sub = self.word_nf(t + v)
                if h == e:
                    for key, c3 in sub.items():
                        _add_into(out, key, c3 * c)
                else:
                    for (w3, h3), c3 in sub.items():
                        _add_into(out, (w3, grp.mul(h3, h)), c3 * c)
            return out
        return {(w, e): self._one}

    def reduce_terms(self, terms: dict, check_budget: bool = True) -> dict:
        limit = self.valid_degree if check_budget else None
        out: dict = {}
        grp = self.datum.group
        e = self._e
        if self.certificate.collapsed:
            return out
        for (w, g), c in terms.items():
            if limit is not None and len(w) > limit:
                raise DegreeBudgetError(
                    f"word of degree {len(w)} exceeds certified degree {limit}"
                )
            sub = self.word_nf(w)
            if g == e:
                for k, c3 in sub.items():
                    _add_into(out, k, c3 * c)
            else:
                for (w3, h3), c3 in sub.items():
                    _add_into(out, (w3, grp.mul(h3, g)), c3 * c)
        return out

    def normal_form(self, a: SmashElement) -> SmashElement:
        return SmashElement._wrap(self.datum, self.reduce_terms(a.terms))

    def ideal_membership(self, a: SmashElement) -> bool:
        return not self.reduce_terms(a.terms)

    def multiply(self, a: SmashElement, b: SmashElement) -> SmashElement:
        """Product in the quotient: normal form of a*b."""
        return self.normal_form(a * b)

    def power(self, a: SmashElement, k: int) -> SmashElement:
        out = SmashElement.one(self.datum)
        base = self.normal_form(a)
        for _ in range(k):
            out = self.normal_form(out * base)
        return out

    # normal words --------------------------------------------------------------
    def normal_words(self, max_degree: Optional[int] = None) -> list[list[Word]]:
        """Normal words grouped by degree, up to max_degree (default D)."""
        if self.certificate.collapsed:
            return []
        top = self.degree_bound if max_degree is None else max_degree
        letters = self.datum.letters()
        rules = self.rules
        lens = self._lead_lengths
        levels = [[""]]
        for d in range(1, top + 1):
            nxt = []
            for w in levels[-1]:
                for a in letters:
                    u = w + a
                    ok = True
                    for L in lens:
                        if L > d:
                            break
                        if u[-L:] in rules:
                            ok = False
                            break
                    if ok:
                        nxt.append(u)
            if not nxt:
                break
            if len(nxt) > 2_000_000:
                raise DegreeBudgetError(f"more than 2e6 normal words in degree {d}")
            levels.append(nxt)
        return levels

    def hilbert_series(self, max_degree: Optional[int] = None) -> list[int]:
        return [len(level) for level in self.normal_words(max_degree)]

    def _refresh_counts(self) -> None:
        cert = self.certificate
        if cert.collapsed:
            cert.normal_word_counts = []
            cert.top_degree = -1
            return
        D = self.degree_bound
        auto = LeadAutomaton(self.rules, self.datum.letters())
        top = auto.longest_word()
        if top is not None and (cert.complete or top <= D):
            cert.top_degree = top
            cert.normal_word_counts = auto.counts(top)
        else:
            cert.top_degree = None
            cert.normal_word_counts = auto.counts(D)

    def dimension(self, smash: bool = False) -> Dimension:
        """Count of normal words (times |G| when ``smash``); exact under the certificate."""
        cert = self.certificate
        if not cert.normal_word_counts and not cert.collapsed:
            self._refresh_counts()
        total = sum(cert.normal_word_counts)
        if smash:
            total *= self.datum.group.order
        return Dimension(total, cert.exact)

    # tensors -----------------------------------------------------------------
    def homogeneous(self) -> bool:
        return all(all(len(t) == len(l) for t, _ in tail) for l, tail in self.rules.items())

    def rule_elements(self) -> list[SmashElement]:
        """Each rule as the element lead - tail."""
        out = []
        for lead in sorted(self.rules, key=self.order.key):
            terms = {(lead, self._e): self._one}
            for k, c in self.rules[lead].items():
                _add_into(terms, k, -c)
            out.append(SmashElement._wrap(self.datum, terms))
        return out

    def describe(self) -> str:
        lines = []
        for el in self.rule_elements():
            lines.append(format_element(el, self.order))
        return "\n".join(lines)

    # serialization -------------------------------------------------------------
    def to_dict(self) -> dict:
        def enc(c: CycNumber) -> list[str]:
            return [str(x) for x in c.coeffs]

        return {
            "version": 1,
            "order": list(self.order.precedence),
            "degree_bound": self.degree_bound,
            "ambient": self.datum.order,
            "rules": {
                lead: [[t, list(h), enc(c)] for (t, h), c in sorted(tail.items())]
                for lead, tail in sorted(self.rules.items())
            },
            "pending": [list(p) for p in self._pending],
            "certificate": asdict(self.certificate),
        }

    @classmethod
    def from_dict(cls, datum: YDDatum, data: dict) -> "RewriteSystem":
        if data.get("version") != 1:
            raise ValueError("unsupported rewrite-system cache version")
        n = data["ambient"]
        if n != datum.order:
            raise ValueError("cached system was built over a different field")
        rules = {}
        for lead, tail in data["rules"].items():
            rules[lead] = {
                (t, tuple(h)): CycNumber(n, [Fraction(x) for x in c]) for t, h, c in tail
            }
        sys_ = cls(datum, MonomialOrder(tuple(data["order"])), rules, data["degree_bound"])
        sys_._pending = [tuple(p) for p in data["pending"]]
        sys_.certificate = Certificate(**data["certificate"])
        return sys_

    def content_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def tensor_normal_form(t: TensorElement, left: RewriteSystem, right: RewriteSystem) -> TensorElement:
    """Reduce each leg; zero iff t lies in I_left (x) T + T (x) I_right."""
    d = t.datum
    acc: dict = {}
    grp = d.group
    e = d.identity
    lcache: dict = {}
    rcache: dict = {}
    for (w1, g1, w2, g2), c in t.terms.items():
        a = lcache.get((w1, g1))
        if a is None:
            a = left.reduce_terms({(w1, g1): CycNumber.one(d.order)})
            lcache[(w1, g1)] = a
        if not a:
            continue
        b = rcache.get((w2, g2))
        if b is None:
            b = right.reduce_terms({(w2, g2): CycNumber.one(d.order)})
            rcache[(w2, g2)] = b
        if not b:
            continue
        for (v1, h1), ca in a.items():
            cc = ca * c
            for (v2, h2), cb in b.items():
                _add_into(acc, (v1, h1, v2, h2), cc * cb)
    return TensorElement._wrap(d, acc)


# completion --------------------------------------------------------------------

def _monic(system: RewriteSystem, terms: dict) -> tuple[Word, dict]:
    """Orient a reduced nonzero element as lead -> tail."""
    order = system.order
    d = system.datum
    grp = d.group
    lead = max((w for w, _ in terms), key=order.key)
    heads = [(g, c) for (w, g), c in terms.items() if w == lead]
    if len(heads) > 1:
        raise UnsupportedLeadError(
            f"leading word {lead} carries several group parts; cannot orient over kG"
        )
    g0, c0 = heads[0]
    inv_c = c0.inverse()
    ginv = grp.inv(g0)
    e = d.identity
    tail: dict = {}
    for (w, g), c in terms.items():
        if w == lead:
            continue
        # (terms) * g0^-1 / c0, with the lead moved to the left-hand side
        _add_into(tail, (w, grp.mul(g, ginv)), -(c * inv_c))
    return lead, tail


def _overlaps(a: Word, b: Word) -> list[int]:
    """k such that the last k letters of a are the first k letters of b (proper)."""
    top = min(len(a), len(b)) - 1 if a != b else len(a) - 1
    return [k for k in range(1, top + 1) if a[-k:] == b[:k]]


def _overlap_item(order: MonomialOrder, a: Word, b: Word, k: int) -> tuple:
    word = a + b[k:]
    return (len(word), order.key(word)[1], a, b, k)


def resolve_overlap(system: RewriteSystem, a: Word, b: Word, k: int) -> dict:
    """Difference of the two one-step reductions of a + b[k:], reduced."""
    d = system.datum
    grp = d.group
    e = d.identity
    u = a[: len(a) - k]
    v = b[k:]
    left: dict = {}
    chi_v = d.word_weight(v)[1]
    for (t, h), c in system.rules[a].items():
        if h != e:
            s = d.pairing(chi_v, h)
            if s:
                c = c.mul_zeta(s)
        _add_into(left, (t + v, h), c)
    for (t, h), c in system.rules[b].items():
        _add_into(left, (u + t, h), -c)
    return system.reduce_terms(left, check_budget=False)


def isotypic_components(datum: YDDatum, terms: dict) -> list[dict]:
    """Split terms by the character of their word.

    The smash-product ideal generated by r contains every g r g^-1; over an
    abelian group these span exactly the character components of r.
    """
    parts: dict = {}
    for (w, g), c in terms.items():
        chi = datum.word_weight(w)[1]
        parts.setdefault(chi, {})[(w, g)] = c
    return [parts[k] for k in sorted(parts)]


class SystemCache:
    """On-disk store of completed systems keyed by a content hash of the inputs."""

    directory: Optional[str] = None
    hits = 0
    misses = 0

    @classmethod
    def configure(cls, directory: Optional[str]) -> None:
        cls.directory = directory
        cls.hits = cls.misses = 0
        if directory:
            os.makedirs(directory, exist_ok=True)

    @classmethod
    def key(cls, datum, relations, order, degree_bound, base, flags) -> str:
        h = hashlib.sha256(relation_hash(datum, relations, order, degree_bound).encode())
        h.update((base.content_hash() if base is not None else "-").encode())
        h.update(repr(flags).encode())
        return h.hexdigest()

    @classmethod
    def load(cls, datum, key: str) -> Optional["RewriteSystem"]:
        if not cls.directory:
            return None
        path = os.path.join(cls.directory, key + ".json")
        if not os.path.exists(path):
            cls.misses += 1
            return None
        with open(path) as fh:
            data = json.load(fh)
        cls.hits += 1
        return RewriteSystem.from_dict(datum, data)

    @classmethod
    def store(cls, key: str, system: "RewriteSystem") -> None:
        if not cls.directory:
            return
        path = os.path.join(cls.directory, key + ".json")
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(system.to_dict(), fh, sort_keys=True)
        os.replace(tmp, path)


def complete(
    relations: Sequence[SmashElement],
    order: MonomialOrder,
    degree_bound: int = 64,
    base: Optional[RewriteSystem] = None,
    max_rules: int = 5000,
    datum: Optional[YDDatum] = None,
    unbounded: bool = False,
    verify_pending: bool = True,
) -> RewriteSystem:
    """Bounded overlap completion of ``base`` plus ``relations``, through SystemCache."""
    if datum is None:
        if base is not None:
            datum = base.datum
        elif relations:
            datum = relations[0].datum
        else:
            raise ValueError("need a datum for an empty relation list")
    key = None
    if SystemCache.directory:
        key = SystemCache.key(datum, relations, order, degree_bound, base, (max_rules, unbounded, verify_pending))
        hit = SystemCache.load(datum, key)
        if hit is not None:
            return hit
    system = _complete(relations, order, degree_bound, base, max_rules, datum, unbounded, verify_pending)
    if key is not None:
        SystemCache.store(key, system)
    return system


def _complete(
    relations: Sequence[SmashElement],
    order: MonomialOrder,
    degree_bound: int = 64,
    base: Optional[RewriteSystem] = None,
    max_rules: int = 5000,
    datum: Optional[YDDatum] = None,
    unbounded: bool = False,
    verify_pending: bool = True,
) -> RewriteSystem:
    """Bounded overlap completion of ``base`` plus ``relations``.

    Overlaps of degree <= degree_bound are resolved in (degree, word) order;
    higher ones are recorded as pending. With ``unbounded`` every overlap is
    processed (use only when the quotient is known to be finite). With
    ``verify_pending`` the overlaps above the bound are reduced once against
    the final rules; those that vanish are dropped, so a system whose
    ambiguities all resolve is certified complete.
    """
    if datum is None:
        if base is not None:
            datum = base.datum
        elif relations:
            datum = relations[0].datum
        else:
            raise ValueError("need a datum for an empty relation list")
    system = RewriteSystem(datum, order, dict(base.rules) if base else {}, degree_bound)
    system._unbounded = True  # reduce freely while completing
    heap: list = []
    seq = 0

    def push(item):
        nonlocal seq
        heapq.heappush(heap, item[:2] + (seq,) + item[2:])
        seq += 1

    pending_high: set = set()
    if base is not None:
        if base.order != order:
            raise ValueError("base system uses a different monomial order")
        for p in base._pending:
            if p[0] <= degree_bound or unbounded:
                push(p)
            else:
                pending_high.add(p)
        system.certificate.overlaps_resolved = base.certificate.overlaps_resolved

    for rel in relations:
        if rel.datum is not datum and rel.datum.order != datum.order:
            raise ValueError("relation over a different datum")
        for part in isotypic_components(datum, rel.terms):
            push((max(len(w) for w, _ in part), "", "R", part))

    def add_rule(terms: dict) -> None:
        lead, tail = _monic(system, terms)
        if lead == "":
            system.certificate.collapsed = True
            return
        for old in [l for l in system.rules if lead in l]:
            old_terms = {(old, datum.identity): system._one}
            for k2, c2 in system.rules[old].items():
                _add_into(old_terms, k2, -c2)
            system._remove(old)
            push((len(old), "", "R", old_terms))
        system._install(lead, tail)
        if len(system.rules) > max_rules:
            raise RuleBudgetError(f"more than {max_rules} rules", system)
        for other in list(system.rules):
            for a, b in ((lead, other), (other, lead)) if other != lead else ((lead, lead),):
                for k in _overlaps(a, b):
                    item = _overlap_item(order, a, b, k)
                    if item[0] <= degree_bound or unbounded:
                        push(item)
                    else:
                        pending_high.add(item)

    resolved = system.certificate.overlaps_resolved
    while heap and not system.certificate.collapsed:
        item = heapq.heappop(heap)
        if item[3] == "R":
            terms = system.reduce_terms(item[4], check_budget=False)
            if terms:
                add_rule(terms)
            continue
        _, _, _, a, b, k = item
        if a not in system.rules or b not in system.rules:
            continue
        diff = resolve_overlap(system, a, b, k)
        resolved += 1
        if diff:
            add_rule(diff)

    system.certificate.overlaps_resolved = resolved
    if system.certificate.collapsed:
        system.rules = {}
        system._lead_lengths = []
        system._cache = []
        system._pending = []
        system.certificate.pending_overlaps = 0
    else:
        live = sorted(p for p in pending_high if p[2] in system.rules and p[3] in system.rules)
        if verify_pending:
            # check, without adding rules, whether the overlaps above D already resolve
            before = len(live)
            live = [p for p in live if resolve_overlap(system, p[2], p[3], p[4])]
            system.certificate.overlaps_verified += before - len(live)
        system._pending = live
        system.certificate.pending_overlaps = len(live)
        _normalize_tails(system)
    system._unbounded = False
    system.certificate.confluent_up_to = degree_bound
    system.certificate.homogeneous = system.homogeneous()
    system._refresh_counts()
    return system


def _normalize_tails(system: RewriteSystem) -> None:
    for lead in sorted(system.rules, key=system.order.key):
        system.rules[lead] = system.reduce_terms(system.rules[lead], check_budget=False)


def close_pending(system: RewriteSystem, max_rules: int = 5000) -> RewriteSystem:
    """Resolve the overlaps left above the degree bound (finite quotients only)."""
    if system.certificate.complete:
        return system
    if not system.certificate.finite:
        raise UncertifiedSystemError("closing pending overlaps of an infinite quotient may not terminate")
    return complete([], system.order, system.degree_bound, base=system, max_rules=max_rules, unbounded=True)


def relation_hash(datum: YDDatum, relations: Iterable[SmashElement], order: MonomialOrder, degree_bound: int) -> str:
    payload = {
        "group": list(datum.group.invariant_factors),
        "g": [list(x) for x in datum.g],
        "chi": [list(x) for x in datum.chi],
        "ambient": datum.order,
        "order": list(order.precedence),
        "D": degree_bound,
        "relations": [
            sorted((w, list(g), [str(x) for x in c.coeffs]) for (w, g), c in r.terms.items())
            for r in relations
        ],
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
